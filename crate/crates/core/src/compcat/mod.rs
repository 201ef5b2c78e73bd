//! Comprehension categories and the interpretation calculus: context
//! extension, substitution, variables and pairing.

mod morphism;

pub use morphism::{CompCat2Cell, CompCatMorphism, MorphismError};

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::displayed::{
    arrow_displayed, find_cleaving, ArrowCat, Cleaving, DMorId, DObjId, DispCat, DispFunctor, DispPresentation,
};
use crate::fincat::{cones, find_limit, mediators, Cone, Direction, FinCat, LimitShape, MorId, ObjId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompCatError {
    #[error("base category has no terminal object")]
    NoTerminal,
    #[error("comprehension does not lie over the identity of the base")]
    NotOverIdentity,
    #[error("comprehension sends the Cartesian morphism `{0}` to a non-Cartesian square")]
    NotCartesian(String),
    #[error("types have no cleaving: `{morphism}` has no Cartesian lift at `{dobject}`")]
    NoCleaving { morphism: String, dobject: String },
    #[error("the image of the Cartesian lift `{0}` is not a pullback square")]
    NotPullback(String),
    #[error("unknown type `{0}`")]
    UnknownType(String),
    #[error("endpoints do not match: {0}")]
    Endpoints(String),
    #[error("`{0}` is not a section")]
    NotASection(String),
    #[error("invalid bundle: {0}")]
    Bundle(String),
}

/// A comprehension category over an explicit base.
#[derive(Debug)]
pub struct CompCat {
    pub base: Arc<FinCat>,
    pub terminal: ObjId,
    pub types: Arc<DispCat>,
    pub cleaving: Arc<Cleaving>,
    pub arrows: Arc<ArrowCat>,
    pub comprehension: DispFunctor,
    full: bool,
}

/// A term of type `ty` in context `ctx`: a section of `π_ty`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub ctx: ObjId,
    pub ty: DObjId,
    pub section: MorId,
}

/// Validates the data of a comprehension category and caches fullness.
pub fn assemble_compcat(
    types: Arc<DispCat>,
    cleaving: Arc<Cleaving>,
    arrows: Arc<ArrowCat>,
    comprehension: DispFunctor,
) -> Result<CompCat, CompCatError> {
    let base = types.base().clone();
    let terminal = find_limit(&base, LimitShape::Terminal)
        .expect("terminal shape is always well formed")
        .ok_or(CompCatError::NoTerminal)?
        .apex;
    let over = &comprehension.over;
    let identity_over = over.object_map().iter().enumerate().all(|(i, x)| x.0 == i)
        && over.morphism_map().iter().enumerate().all(|(i, f)| f.0 == i)
        && Arc::ptr_eq(comprehension.target(), &arrows.disp)
        && Arc::ptr_eq(comprehension.source(), &types);
    if !identity_over {
        return Err(CompCatError::NotOverIdentity);
    }
    if let Some(f) = comprehension.cartesian_failure() {
        return Err(CompCatError::NotCartesian(types.dmorphism_name(f).into()));
    }
    let k = CompCat { base, terminal, types, cleaving, arrows, comprehension, full: false };
    for f in k.base.morphisms() {
        for &a in k.types.over(k.base.dst(f)) {
            let (_, lift) = k.cleaving.lift(f, a);
            if !k.is_pullback_square(k.comprehension.dmor(lift)) {
                return Err(CompCatError::NotPullback(k.types.dmorphism_name(lift).into()));
            }
        }
    }
    let full = k.compute_full();
    Ok(CompCat { full, ..k })
}

impl CompCat {
    /// The self-indexing of a category: types are arrows, comprehension is
    /// the identity, and both share one table.
    pub fn self_indexing(base: &Arc<FinCat>) -> Result<CompCat, CompCatError> {
        CompCat::self_indexing_on(Arc::new(arrow_displayed(base)))
    }

    /// The self-indexing over an already materialized arrow category.
    pub fn self_indexing_on(arrows: Arc<ArrowCat>) -> Result<CompCat, CompCatError> {
        let cleaving = find_cleaving(&arrows.disp)
            .map_err(|m| CompCatError::NoCleaving { morphism: m.morphism, dobject: m.dobject })?;
        assemble_compcat(arrows.disp.clone(), Arc::new(cleaving), arrows.clone(), DispFunctor::identity(&arrows.disp))
    }

    /// Builds a comprehension category from explicit types and the arrows and
    /// top edges they are sent to; the cleaving is recomputed.
    pub fn from_tables(
        types: Arc<DispCat>,
        on_dobjects: &[MorId],
        on_dmorphism_tops: &[MorId],
    ) -> Result<CompCat, CompCatError> {
        let base = types.base().clone();
        let arrows = Arc::new(arrow_displayed(&base));
        let cleaving = find_cleaving(&types)
            .map_err(|m| CompCatError::NoCleaving { morphism: m.morphism, dobject: m.dobject })?;
        let dobjs: Vec<DObjId> = on_dobjects.iter().map(|&g| arrows.dobject_of(g)).collect();
        let dmors = types
            .dmorphisms()
            .map(|k| {
                let m = types.dmorphism(k);
                arrows.square(m.over, dobjs[m.src.0], dobjs[m.dst.0], on_dmorphism_tops[k.0]).ok_or_else(|| {
                    CompCatError::Bundle(format!("image of `{}` is not a commuting square", m.name))
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let chi = DispFunctor::new(
            crate::fincat::FinFunctor::identity(base.clone()),
            types.clone(),
            arrows.disp.clone(),
            dobjs,
            dmors,
        )
        .map_err(|e| CompCatError::Bundle(e.to_string()))?;
        assemble_compcat(types, Arc::new(cleaving), arrows, chi)
    }

    pub fn is_full(&self) -> bool {
        self.full
    }

    /// Every displayed hom-set maps bijectively onto the corresponding
    /// hom-set of squares.
    fn compute_full(&self) -> bool {
        let (t, a) = (&self.types, &self.arrows.disp);
        self.base.morphisms().all(|f| {
            let (x, y) = (self.base.src(f), self.base.dst(f));
            t.over(x).iter().all(|&p| {
                t.over(y).iter().all(|&q| {
                    let src = t.dhom(f, p, q);
                    let tgt = a.dhom(f, self.comprehension.dobj(p), self.comprehension.dobj(q));
                    let mut imgs: Vec<DMorId> = src.iter().map(|&k| self.comprehension.dmor(k)).collect();
                    imgs.sort();
                    imgs.dedup();
                    imgs.len() == src.len() && src.len() == tgt.len()
                })
            })
        })
    }

    /// `(Γ.A, π_A)`.
    pub fn ctx_extend(&self, a: DObjId) -> (ObjId, MorId) {
        let p = self.proj(a);
        (self.base.src(p), p)
    }

    /// `π_A`.
    pub fn proj(&self, a: DObjId) -> MorId {
        self.arrows.arrow(self.comprehension.dobj(a))
    }

    /// `Γ.A`.
    pub fn ext(&self, a: DObjId) -> ObjId {
        self.base.src(self.proj(a))
    }

    /// The top edge of the square `χ(f̄)`.
    pub fn chi_top(&self, f: DMorId) -> MorId {
        self.arrows.top(self.comprehension.dmor(f))
    }

    pub fn type_named(&self, name: &str) -> Result<DObjId, CompCatError> {
        self.types.dobject_named(name).ok_or_else(|| CompCatError::UnknownType(name.into()))
    }

    /// `s^*A` with its chosen Cartesian lift.
    pub fn subst_type(&self, s: MorId, a: DObjId) -> Result<(DObjId, DMorId), CompCatError> {
        if self.types.over_of(a) != self.base.dst(s) {
            return Err(CompCatError::Endpoints(format!(
                "`{}` is not over the codomain of `{}`",
                self.types.dobject_name(a),
                self.base.morphism_name(s)
            )));
        }
        Ok(self.cleaving.lift(s, a))
    }

    /// Every section of `π_A`.
    pub fn terms(&self, a: DObjId) -> Vec<Term> {
        let ctx = self.types.over_of(a);
        let (ext, p) = self.ctx_extend(a);
        self.base
            .hom(ctx, ext)
            .iter()
            .filter(|&&t| self.base.compose(t, p) == self.base.id(ctx))
            .map(|&t| Term { ctx, ty: a, section: t })
            .collect()
    }

    pub fn is_section(&self, a: DObjId, t: MorId) -> bool {
        let (ext, p) = self.ctx_extend(a);
        let ctx = self.types.over_of(a);
        self.base.src(t) == ctx && self.base.dst(t) == ext && self.base.compose(t, p) == self.base.id(ctx)
    }

    pub fn term(&self, a: DObjId, t: MorId) -> Result<Term, CompCatError> {
        if self.is_section(a, t) {
            Ok(Term { ctx: self.types.over_of(a), ty: a, section: t })
        } else {
            Err(CompCatError::NotASection(self.base.morphism_name(t).into()))
        }
    }

    /// The square `χ(s̄)` for a lift `s̄: s^*A → A` as a cone over the
    /// cospan `π_A, s`.
    fn lift_cone(&self, lift: DMorId) -> (LimitShape, Cone) {
        let m = self.types.dmorphism(lift);
        let top = self.chi_top(lift);
        let (pa, psa) = (self.proj(m.dst), self.proj(m.src));
        let cone = Cone { apex: self.base.src(top), legs: vec![top, psa, self.base.compose(top, pa)] };
        (LimitShape::Pullback(pa, m.over), cone)
    }

    /// Is the image of a displayed morphism of `Arr` a pullback square?
    pub(crate) fn is_pullback_square(&self, sq: DMorId) -> bool {
        let m = self.arrows.disp.dmorphism(sq);
        let (p_dst, p_src, top) = (self.arrows.arrow(m.dst), self.arrows.arrow(m.src), self.arrows.top(sq));
        let c = &*self.base;
        let shape = LimitShape::Pullback(p_dst, m.over);
        let d = crate::fincat::UniversalShape::diagram(&shape, c).expect("cospan");
        let cone = Cone { apex: c.src(top), legs: vec![top, p_src, c.compose(top, p_dst)] };
        c.objects().all(|w| {
            cones(c, &d, Direction::Limit, w).iter().all(|other| mediators(c, Direction::Limit, &cone, other).len() == 1)
        })
    }

    /// The unique `u: W → Δ.s^*A` with `u ; q = a` and `u ; π = b`, where
    /// `q` is the top of `χ(s̄)`. Panics unless `(a, b)` is a cone.
    pub fn pullback_mediator(&self, lift: DMorId, a: MorId, b: MorId) -> MorId {
        let (_, cone) = self.lift_cone(lift);
        let pa = self.proj(self.types.dmorphism(lift).dst);
        let other = Cone { apex: self.base.src(a), legs: vec![a, b, self.base.compose(a, pa)] };
        match mediators(&self.base, Direction::Limit, &cone, &other).as_slice() {
            [u] => *u,
            _ => panic!("image of a Cartesian lift is a pullback"),
        }
    }

    /// `var: Γ.A → Γ.A.π_A^*A`, the diagonal into the pullback of `π_A`
    /// along itself.
    pub fn var_term(&self, a: DObjId) -> Term {
        let (ext, p) = self.ctx_extend(a);
        let (wa, lift) = self.cleaving.lift(p, a);
        let id = self.base.id(ext);
        let u = self.pullback_mediator(lift, id, id);
        Term { ctx: ext, ty: wa, section: u }
    }

    /// `s^*t`, the mediator of the cone `(s ; t, id)`.
    pub fn subst_term(&self, s: MorId, t: &Term) -> Result<Term, CompCatError> {
        if self.base.dst(s) != t.ctx {
            return Err(CompCatError::Endpoints(format!(
                "`{}` does not land in the context of the term",
                self.base.morphism_name(s)
            )));
        }
        let (sa, lift) = self.cleaving.lift(s, t.ty);
        let delta = self.base.src(s);
        let u = self.pullback_mediator(lift, self.base.compose(s, t.section), self.base.id(delta));
        Ok(Term { ctx: delta, ty: sa, section: u })
    }

    /// `⟨s, t⟩ = t ; q: Δ → Γ.A` for `t` a term of type `s^*A`.
    pub fn pair_sub(&self, s: MorId, a: DObjId, t: MorId) -> Result<MorId, CompCatError> {
        let (sa, lift) = self.subst_type(s, a)?;
        if !self.is_section(sa, t) {
            return Err(CompCatError::NotASection(self.base.morphism_name(t).into()));
        }
        Ok(self.base.compose(t, self.chi_top(lift)))
    }

    /// The vertical morphism `1 → A` corresponding to a term, given a
    /// fiberwise terminal `one` over the same context with invertible
    /// projection (uses fullness).
    pub fn term_to_vertical(&self, one: DObjId, t: &Term) -> Option<DMorId> {
        let p1 = self.proj(one);
        let inv = self.base.inverse(p1)?;
        let top = self.base.compose(inv, t.section);
        let sq = self.arrows.triangle(self.comprehension.dobj(one), self.comprehension.dobj(t.ty), top)?;
        self.types
            .dhom(self.base.id(t.ctx), one, t.ty)
            .iter()
            .copied()
            .find(|&k| self.comprehension.dmor(k) == sq)
    }

    /// Serializable form of this comprehension category.
    pub fn to_bundle(&self) -> CompCatBundle {
        CompCatBundle {
            base: self.base.to_presentation(),
            types: self.types.to_presentation(),
            comprehension: ComprehensionTables {
                objects: self
                    .types
                    .dobjects()
                    .map(|a| (self.types.dobject_name(a).to_string(), self.base.morphism_name(self.proj(a)).to_string()))
                    .collect(),
                morphisms: self
                    .types
                    .dmorphisms()
                    .map(|k| (self.types.dmorphism_name(k).to_string(), self.base.morphism_name(self.chi_top(k)).to_string()))
                    .collect(),
            },
        }
    }

    /// Reads a bundle back.
    pub fn from_bundle(b: &CompCatBundle) -> Result<CompCat, CompCatError> {
        let base = Arc::new(crate::fincat::validate_category(&b.base).map_err(|e| CompCatError::Bundle(e.to_string()))?);
        let types =
            Arc::new(DispCat::from_presentation(base.clone(), &b.types).map_err(|e| CompCatError::Bundle(e.to_string()))?);
        let look = |table: &std::collections::BTreeMap<String, String>, key: &str| -> Result<MorId, CompCatError> {
            let name = table.get(key).ok_or_else(|| CompCatError::Bundle(format!("no comprehension entry for `{key}`")))?;
            base.morphism(name).ok_or_else(|| CompCatError::Bundle(format!("unknown base morphism `{name}`")))
        };
        let objs = types
            .dobjects()
            .map(|a| look(&b.comprehension.objects, types.dobject_name(a)))
            .collect::<Result<Vec<_>, _>>()?;
        for (a, &g) in types.dobjects().zip(&objs) {
            if base.dst(g) != types.over_of(a) {
                return Err(CompCatError::NotOverIdentity);
            }
        }
        let tops = types
            .dmorphisms()
            .map(|k| {
                if types.is_didentity(k) && !b.comprehension.morphisms.contains_key(types.dmorphism_name(k)) {
                    Ok(base.id(base.src(objs[types.dmorphism(k).src.0])))
                } else {
                    look(&b.comprehension.morphisms, types.dmorphism_name(k))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        CompCat::from_tables(types, &objs, &tops)
    }
}

/// Comprehension tables of a bundle: the arrow of each type and the top
/// edge of the square of each displayed morphism.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComprehensionTables {
    pub objects: std::collections::BTreeMap<String, String>,
    #[serde(default)]
    pub morphisms: std::collections::BTreeMap<String, String>,
}

/// On-disk form of a comprehension category.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompCatBundle {
    pub base: crate::fincat::Presentation,
    pub types: DispPresentation,
    pub comprehension: ComprehensionTables,
}

/// Name-indexed lookup helper used by front ends.
pub fn base_morphism(k: &CompCat, name: &str) -> Result<MorId, CompCatError> {
    k.base.morphism(name).ok_or_else(|| CompCatError::Endpoints(format!("unknown morphism `{name}`")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn h(p: crate::fincat::Presentation) -> CompCat {
        CompCat::self_indexing(&fixtures::build(p)).unwrap()
    }

    #[test]
    fn self_indexing_is_full() {
        assert!(h(fixtures::div6()).is_full());
        assert!(h(fixtures::one()).is_full());
    }

    #[test]
    fn extension_and_substitution_in_div6() {
        let k = h(fixtures::div6());
        let a = k.type_named("le_2_6").unwrap();
        let (ext, p) = k.ctx_extend(a);
        assert_eq!(k.base.object_name(ext), "2");
        assert_eq!(k.base.morphism_name(p), "le_2_6");
        let s = base_morphism(&k, "le_2_6").unwrap();
        let (sa, _) = k.subst_type(s, k.type_named("le_3_6").unwrap()).unwrap();
        assert_eq!(k.types.dobject_name(sa), "le_1_2");
        assert!(k.terms(a).is_empty());
        assert_eq!(k.terms(k.type_named("id_6").unwrap()).len(), 1);
    }

    #[test]
    fn var_subst_and_pairing_in_div6() {
        let k = h(fixtures::div6());
        let a = k.type_named("le_2_6").unwrap();
        let v = k.var_term(a);
        assert_eq!(k.base.morphism_name(v.section), "id_2");
        let id2 = k.terms(k.type_named("id_2").unwrap())[0];
        let t = k.subst_term(base_morphism(&k, "le_1_2").unwrap(), &id2).unwrap();
        assert_eq!(k.types.dobject_name(t.ty), "id_1");
        assert_eq!(k.base.morphism_name(t.section), "id_1");
        let s = base_morphism(&k, "le_1_6").unwrap();
        let (sa, _) = k.subst_type(s, a).unwrap();
        let t = k.terms(sa)[0];
        let pair = k.pair_sub(s, a, t.section).unwrap();
        assert_eq!(k.base.morphism_name(pair), "le_1_2");
        assert_eq!(k.base.compose(pair, k.proj(a)), s);
        assert!(matches!(k.pair_sub(s, a, s), Err(CompCatError::NotASection(_))));
    }

    #[test]
    fn non_cartesian_comprehension_is_rejected() {
        let base = fixtures::build(crate::fincat::Presentation::poset(&["0", "1", "2"], &[("0", "1"), ("1", "2")]));
        let mut p = DispPresentation::default();
        for (x, n) in [("0", "C"), ("1", "B"), ("2", "A")] {
            p.dobjects.insert(x.into(), vec![n.into()]);
        }
        for (over, src, dst, name) in [("le_1_2", "B", "A", "b"), ("le_0_1", "C", "B", "c"), ("le_0_2", "C", "A", "cb")] {
            p.dmorphisms.push(crate::displayed::DMorphismDecl {
                over: over.into(),
                src: src.into(),
                dst: dst.into(),
                name: name.into(),
            });
        }
        p.dcomposition.push(crate::fincat::CompositionDecl { first: "c".into(), then: "b".into(), equals: "cb".into() });
        let types = Arc::new(DispCat::from_presentation(base.clone(), &p).unwrap());
        let m = |n: &str| base.morphism(n).unwrap();
        let objs = [m("id_0"), m("le_0_1"), m("id_2")];
        let tops: Vec<MorId> = types
            .dmorphisms()
            .map(|k| match types.dmorphism_name(k) {
                "id_C" | "c" => m("id_0"),
                "id_B" => m("id_0"),
                "id_A" => m("id_2"),
                _ => m("le_0_2"),
            })
            .collect();
        assert!(matches!(CompCat::from_tables(types, &objs, &tops), Err(CompCatError::NotCartesian(_))));
    }

    #[test]
    fn bundle_roundtrip() {
        let k = h(fixtures::div6());
        let back = CompCat::from_bundle(&k.to_bundle()).unwrap();
        assert_eq!(back.to_bundle(), k.to_bundle());
    }

    #[test]
    fn identity_morphism_and_two_cell() {
        let k = Arc::new(h(fixtures::div6()));
        let m = CompCatMorphism::identity(&k);
        let mm = m.then(&m);
        assert_eq!(mm.functor.object_map(), m.functor.object_map());
        let c = CompCat2Cell::identity(&m);
        assert_eq!(c.then(&c).tau.components(), c.tau.components());
    }
}
