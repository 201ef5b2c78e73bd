//! Both directions of the correspondence between finitely complete
//! categories and DFL comprehension categories, on explicit instances.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::compcat::{CompCat, CompCat2Cell, CompCatError, CompCatMorphism, Term};
use crate::displayed::{DMorphismDecl, DispCat, DispFunctor, DispPresentation};
use crate::fincat::{
    check_equivalence, check_functor, find_limit, same_cat, Cone, CompositionDecl, FinCat, FinFunctor, LimitShape,
    LimitWitness, MorId, NatTrans, ShapeKind, UniversalShape,
};
use crate::typeformers::{check_dfl, ext_id_type, is_adjequiv_1cell, sigma_type, strong_sigma_comparison, DFLReport};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BiequivError {
    #[error("category lacks a limit: {0}")]
    NotFinLim(String),
    #[error("functor does not preserve finite limits")]
    NotPreserving,
    #[error("comprehension category is not DFL: {0}")]
    DFLCheckFailed(String),
    #[error(transparent)]
    CompCat(#[from] CompCatError),
    #[error("construction failed: {0}")]
    Construction(String),
}

/// A category with a chosen limit for every finite diagram of the four basic
/// shapes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinLimCat {
    pub cat: Arc<FinCat>,
    pub witnesses: Vec<LimitWitness>,
    index: HashMap<LimitShape, usize>,
}

impl FinLimCat {
    /// Computes every witness; fails at the first missing limit.
    pub fn new(cat: Arc<FinCat>) -> Result<Self, BiequivError> {
        let mut witnesses = Vec::new();
        for kind in ShapeKind::ALL {
            for shape in kind.instances(&cat) {
                let w = find_limit(&cat, shape)
                    .expect("instances are well formed")
                    .ok_or_else(|| BiequivError::NotFinLim(shape.describe(&cat)))?;
                witnesses.push(w);
            }
        }
        Ok(FinLimCat::from_witnesses(cat, witnesses))
    }

    fn from_witnesses(cat: Arc<FinCat>, witnesses: Vec<LimitWitness>) -> Self {
        let index = witnesses.iter().enumerate().map(|(i, w)| (w.shape, i)).collect();
        FinLimCat { cat, witnesses, index }
    }

    pub fn witness(&self, shape: LimitShape) -> Option<&LimitWitness> {
        self.index.get(&shape).map(|&i| &self.witnesses[i])
    }

    pub fn terminal(&self) -> &LimitWitness {
        self.witness(LimitShape::Terminal).expect("terminal witness")
    }
}

/// `H` on objects: the self-indexing.
pub fn h_object(c: &FinLimCat) -> Result<CompCat, BiequivError> {
    Ok(CompCat::self_indexing(&c.cat)?)
}

/// `H` on 1-cells: `(F, Arr(F))` with identity comparison.
pub fn h_morphism(f: &FinFunctor, k1: &Arc<CompCat>, k2: &Arc<CompCat>) -> Result<CompCatMorphism, BiequivError> {
    let p = check_functor(f).preserves;
    if !(p.terminal && p.binary_product && p.equalizer && p.pullback) {
        return Err(BiequivError::NotPreserving);
    }
    let fbar = k1.arrows.functor(f, &k2.arrows);
    let tops: Vec<MorId> = k1.types.dobjects().map(|a| k2.base.id(f.obj(k1.ext(a)))).collect();
    CompCatMorphism::new(k1.clone(), k2.clone(), f.clone(), fbar, &tops)
        .map_err(|e| BiequivError::Construction(e.to_string()))
}

/// `H` on 2-cells: `(τ, Arr(τ))`.
pub fn h_cell(tau: &NatTrans, m1: &CompCatMorphism, m2: &CompCatMorphism) -> Result<CompCat2Cell, BiequivError> {
    let bar = m1.source.arrows.transformation(tau, &m1.target.arrows);
    CompCat2Cell::new(m1.clone(), m2.clone(), tau.clone(), bar.components().to_vec())
        .map_err(|e| BiequivError::Construction(e.to_string()))
}

fn require_dfl(k: &CompCat) -> Result<DFLReport, BiequivError> {
    let r = check_dfl(k, Default::default());
    if r.passed() {
        Ok(r)
    } else {
        Err(BiequivError::DFLCheckFailed(r.verdict.first_failure.clone().unwrap_or_default()))
    }
}

/// `U` on objects: the base, with limits computed in the fiber over the
/// terminal context and transported along `D[⋄] ≃ C/⋄ ≃ C`.
pub fn u_object(k: &CompCat) -> Result<FinLimCat, BiequivError> {
    require_dfl(k)?;
    let c = &k.base;
    let fib = k.types.fiber(k.terminal);
    let p = FinFunctor::new(
        fib.cat.clone(),
        c.clone(),
        fib.cat.objects().map(|o| k.ext(fib.dobj(o))).collect(),
        fib.cat.morphisms().map(|m| k.chi_top(fib.dmor(m))).collect(),
    )
    .map_err(|e| BiequivError::Construction(e.to_string()))?;
    let eq = check_equivalence(&p).map_err(|e| BiequivError::Construction(e.to_string()))?;
    let q = &eq.inverse;
    let mut witnesses = Vec::new();
    for kind in ShapeKind::ALL {
        for shape in kind.instances(c) {
            let moved = match shape {
                LimitShape::Terminal => LimitShape::Terminal,
                LimitShape::BinaryProduct(a, b) => LimitShape::BinaryProduct(q.obj(a), q.obj(b)),
                LimitShape::Equalizer(f, g) => LimitShape::Equalizer(q.mor(f), q.mor(g)),
                LimitShape::Pullback(f, g) => LimitShape::Pullback(q.mor(f), q.mor(g)),
            };
            let w = find_limit(&fib.cat, moved)
                .expect("functors preserve shapes")
                .ok_or_else(|| BiequivError::DFLCheckFailed(format!("fiber lacks {}", moved.describe(&fib.cat))))?;
            let vertices = shape.diagram(c).expect("instances are well formed").vertices;
            let legs = w.legs.iter().zip(&vertices).map(|(&l, &v)| c.compose(p.mor(l), eq.counit.at(v))).collect();
            let cone = Cone { apex: p.obj(w.apex), legs };
            let t = LimitWitness::from_cone(c, shape, &cone)
                .ok_or_else(|| BiequivError::Construction(format!("transported {} is not universal", shape.describe(c))))?;
            witnesses.push(t);
        }
    }
    Ok(FinLimCat::from_witnesses(c.clone(), witnesses))
}

/// `U` on 1-cells: the base functor, which must preserve finite limits.
pub fn u_morphism(m: &CompCatMorphism) -> Result<FinFunctor, BiequivError> {
    let p = check_functor(&m.functor).preserves;
    if p.terminal && p.binary_product && p.equalizer && p.pullback {
        Ok(m.functor.clone())
    } else {
        Err(BiequivError::NotPreserving)
    }
}

/// `U` on 2-cells.
pub fn u_cell(c: &CompCat2Cell) -> NatTrans {
    c.tau.clone()
}

/// The unit component at `C`: the identity functor.
pub fn xi_component(c: &FinLimCat) -> FinFunctor {
    FinFunctor::identity(c.cat.clone())
}

/// The counit component at `K`: `(id, χ)` into the self-indexing of the
/// base, sharing `K`'s arrow category.
pub fn zeta_component(k: &Arc<CompCat>) -> Result<CompCatMorphism, BiequivError> {
    require_dfl(k)?;
    let target = Arc::new(CompCat::self_indexing_on(k.arrows.clone())?);
    let tops: Vec<MorId> = k.types.dobjects().map(|a| k.base.id(k.ext(a))).collect();
    CompCatMorphism::new(k.clone(), target, FinFunctor::identity(k.base.clone()), k.comprehension.clone(), &tops)
        .map_err(|e| BiequivError::Construction(e.to_string()))
}

/// A type `A` over `Γ` with `Γ.A ≅ Δ` over `Γ`, for a context morphism
/// `s: Δ → Γ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EssentialPreimage {
    pub ty: crate::displayed::DObjId,
    /// `Γ.A → Δ`.
    pub to: MorId,
    /// `Δ → Γ.A`.
    pub from: MorId,
    /// The identity type `Id(l, r)` whose Σ is `A`.
    pub id_type: crate::displayed::DObjId,
}

/// Builds a type whose projection is isomorphic to `s` in the slice,
/// following democracy, identity types and strong Σ.
pub fn essential_preimage(k: &CompCat, dfl: &DFLReport, s: MorId) -> Result<EssentialPreimage, BiequivError> {
    let fail = |what: &str| BiequivError::Construction(format!("{what} at `{}`", k.base.morphism_name(s)));
    let (Ok(unit), Ok(sigma), Ok(dem)) = (&dfl.unit, &dfl.sigma, &dfl.dem) else {
        return Err(BiequivError::DFLCheckFailed(dfl.verdict.first_failure.clone().unwrap_or_default()));
    };
    let c = &k.base;
    let (delta, gamma) = (c.src(s), c.dst(s));
    let bang = |x| c.hom(x, k.terminal)[0];
    let (d_gamma, i_gamma) = (dem.types[gamma.0], dem.isos[gamma.0]);
    let (d_delta, i_delta) = (dem.types[delta.0], dem.isos[delta.0]);
    let i_delta_inv = c.inverse(i_delta).ok_or_else(|| fail("democracy iso"))?;
    let (hat_delta, lift_delta) = k.cleaving.lift(bang(gamma), d_delta);
    let x = k.ext(hat_delta);
    let (hat_gamma, lift_gamma) = k.cleaving.lift(bang(x), d_gamma);
    let q_delta = k.chi_top(lift_delta);
    let id_x = c.id(x);
    let l = k.pullback_mediator(lift_gamma, c.compose(k.proj(hat_delta), i_gamma), id_x);
    let r = k.pullback_mediator(lift_gamma, c.compose_all(&[q_delta, i_delta_inv, s, i_gamma]), id_x);
    let (tl, tr) = (k.term(hat_gamma, l)?, k.term(hat_gamma, r)?);
    let (e, _) = ext_id_type(k, unit, &tl, &tr).map_err(|e| BiequivError::Construction(e.to_string()))?;
    let a = sigma_type(k, sigma, hat_delta, e);
    let cmp = strong_sigma_comparison(k, sigma, hat_delta, e);
    let cmp_inv = c.inverse(cmp).ok_or_else(|| fail("strong Σ comparison"))?;
    let f = c.compose_all(&[k.proj(e), q_delta, i_delta_inv]);
    let h = k.pullback_mediator(lift_delta, i_delta, s);
    let (he, _) = k.cleaving.lift(h, e);
    let t: Vec<Term> = k.terms(he);
    let [t] = t.as_slice() else { return Err(fail("section of the substituted identity type")) };
    let g = k.pair_sub(h, e, t.section)?;
    let to = c.compose(cmp_inv, f);
    let from = c.compose(g, cmp);
    let ok = c.compose(to, from) == c.id(k.ext(a))
        && c.compose(from, to) == c.id(delta)
        && c.compose(to, s) == k.proj(a)
        && c.compose(from, k.proj(a)) == s;
    if !ok {
        return Err(fail("slice isomorphism"));
    }
    Ok(EssentialPreimage { ty: a, to, from, id_type: e })
}

/// One named sub-check of a roundtrip.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoundtripReport {
    /// `UH` for a category input, `HU` for a comprehension category input.
    pub direction: String,
    pub checks: Vec<Check>,
    pub pass: bool,
}

fn report(direction: &str, checks: Vec<(&str, bool)>) -> RoundtripReport {
    let checks: Vec<Check> = checks.into_iter().map(|(n, p)| Check { name: n.into(), pass: p }).collect();
    let pass = checks.iter().all(|c| c.pass);
    RoundtripReport { direction: direction.into(), checks, pass }
}

fn same_functor(a: &FinFunctor, b: &FinFunctor) -> bool {
    a.object_map() == b.object_map() && a.morphism_map() == b.morphism_map()
}

fn same_dfunctor(a: &DispFunctor, b: &DispFunctor) -> bool {
    a.source().dobjects().all(|d| a.dobj(d) == b.dobj(d)) && a.source().dmorphisms().all(|f| a.dmor(f) == b.dmor(f))
}

/// `U(H(C))` against `C`, plus the instance-level unit laws of `H`.
pub fn roundtrip_finlim(c: &FinLimCat) -> Result<RoundtripReport, BiequivError> {
    let k = Arc::new(h_object(c)?);
    let dfl = check_dfl(&k, Default::default()).passed();
    let back = u_object(&k);
    let (same_base, same_witnesses) = match &back {
        Ok(u) => (same_cat(&u.cat, &c.cat), u.witnesses == c.witnesses),
        Err(_) => (false, false),
    };
    let xi = xi_component(c);
    let p = check_functor(&xi).preserves;
    let xi_ok = same_functor(&xi, &FinFunctor::identity(c.cat.clone())) && p.terminal && p.binary_product && p.equalizer && p.pullback;
    let id = FinFunctor::identity(c.cat.clone());
    let hid = h_morphism(&id, &k, &k)?;
    let canonical = CompCatMorphism::identity(&k);
    let h_id = same_functor(&hid.functor, &canonical.functor)
        && same_dfunctor(&hid.dfunctor, &canonical.dfunctor)
        && hid.comparison.components() == canonical.comparison.components();
    let hh = h_morphism(&id.then(&id), &k, &k)?;
    let h_comp = same_dfunctor(&hh.dfunctor, &hid.then(&hid).dfunctor);
    let cell = h_cell(&NatTrans::identity(&id), &hid, &hid)?;
    let h_cell_id = cell.tau_bar.components() == CompCat2Cell::identity(&hid).tau_bar.components();
    Ok(report(
        "UH",
        vec![
            ("h_is_dfl", dfl),
            ("u_h_base", same_base),
            ("u_h_witnesses", same_witnesses),
            ("xi_identity", xi_ok),
            ("h_identity", h_id),
            ("h_composition", h_comp),
            ("h_identity_2cell", h_cell_id),
        ],
    ))
}

/// `ζ` at `K` is an adjoint equivalence and `U(ζ)` is the identity.
pub fn roundtrip_compcat(k: &Arc<CompCat>) -> Result<RoundtripReport, BiequivError> {
    let zeta = zeta_component(k)?;
    let adj = is_adjequiv_1cell(&zeta);
    let u = u_morphism(&zeta).map(|f| same_functor(&f, &FinFunctor::identity(k.base.clone()))).unwrap_or(false);
    let hu = check_dfl(&zeta.target, Default::default()).passed();
    let u_base = u_object(k).is_ok();
    Ok(report("HU", vec![("zeta_adjoint_equivalence", adj), ("u_zeta_identity", u), ("h_u_is_dfl", hu), ("u_is_finlim", u_base)]))
}

/// A copy of the self-indexing of `c` in which every type and displayed
/// morphism is renamed with `prefix`, so that the comprehension is a
/// non-identity functor.
pub fn relabeled_self_indexing(c: &Arc<FinCat>, prefix: &str) -> Result<CompCat, BiequivError> {
    let arrows = crate::displayed::arrow_displayed(c);
    let p = arrows.disp.to_presentation();
    let is_dobj = |n: &str| arrows.disp.dobject_named(n).is_some();
    let rename = |n: &str| match n.strip_prefix("id_") {
        Some(rest) if is_dobj(rest) => format!("id_{prefix}{rest}"),
        _ => format!("{prefix}{n}"),
    };
    let q = DispPresentation {
        dobjects: p.dobjects.iter().map(|(x, ds)| (x.clone(), ds.iter().map(|d| format!("{prefix}{d}")).collect())).collect(),
        dmorphisms: p
            .dmorphisms
            .iter()
            .map(|m| DMorphismDecl { over: m.over.clone(), src: format!("{prefix}{}", m.src), dst: format!("{prefix}{}", m.dst), name: rename(&m.name) })
            .collect(),
        dcomposition: p
            .dcomposition
            .iter()
            .map(|d| CompositionDecl { first: rename(&d.first), then: rename(&d.then), equals: rename(&d.equals) })
            .collect(),
    };
    let types = Arc::new(DispCat::from_presentation(c.clone(), &q).map_err(|e| BiequivError::Construction(e.to_string()))?);
    let objs: Vec<MorId> = types
        .dobjects()
        .map(|d| arrows.arrow(arrows.disp.dobject_named(&types.dobject_name(d)[prefix.len()..]).expect("renamed")))
        .collect();
    let tops: Vec<MorId> = types
        .dmorphisms()
        .map(|m| {
            let n = types.dmorphism_name(m);
            let orig = match n.strip_prefix("id_") {
                Some(rest) if rest.starts_with(prefix) => format!("id_{}", &rest[prefix.len()..]),
                _ => n[prefix.len()..].to_string(),
            };
            arrows.top(arrows.disp.dmorphism_named(&orig).expect("renamed"))
        })
        .collect();
    Ok(CompCat::from_tables(types, &objs, &tops)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn finlim(p: crate::fincat::Presentation) -> FinLimCat {
        FinLimCat::new(fixtures::build(p)).unwrap()
    }

    #[test]
    fn v_shape_is_not_finlim() {
        assert!(matches!(FinLimCat::new(fixtures::build(fixtures::v_shape())), Err(BiequivError::NotFinLim(_))));
    }

    #[test]
    fn div6_roundtrips() {
        let c = finlim(fixtures::div6());
        let r = roundtrip_finlim(&c).unwrap();
        assert!(r.pass, "{r:?}");
        let k = Arc::new(h_object(&c).unwrap());
        let r = roundtrip_compcat(&k).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn essential_preimage_in_div6() {
        let c = finlim(fixtures::div6());
        let k = h_object(&c).unwrap();
        let dfl = check_dfl(&k, Default::default());
        for s in k.base.morphisms() {
            let e = essential_preimage(&k, &dfl, s).unwrap();
            assert_eq!(k.ext(e.ty), k.base.src(s));
        }
        let s = k.base.morphism("le_2_6").unwrap();
        let e = essential_preimage(&k, &dfl, s).unwrap();
        assert_eq!(k.types.dobject_name(e.ty), "le_2_6");
    }

    #[test]
    fn relabeled_two_has_nonidentity_zeta() {
        let c = fixtures::build(fixtures::two());
        let k = Arc::new(relabeled_self_indexing(&c, "T").unwrap());
        assert!(check_dfl(&k, Default::default()).passed());
        let z = zeta_component(&k).unwrap();
        assert!(is_adjequiv_1cell(&z));
        assert_ne!(k.types.dobject_name(crate::displayed::DObjId(0)), z.target.types.dobject_name(z.dfunctor.dobj(crate::displayed::DObjId(0))));
    }
}
