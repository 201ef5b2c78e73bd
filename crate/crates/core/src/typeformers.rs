//! Decidable checks for the type formers of a comprehension category: unit
//! types, fiberwise products and equalizers, strong Σ, democracy, Π, and
//! extensional identity types derived from equalizers.

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::compcat::{CompCat, CompCatMorphism, Term};
use crate::displayed::{beck_chevalley, check_fiberwise_limits, BCSquare, DMorId, DObjId, FiberwiseReport, MateSide};
use crate::fincat::{
    check_equivalence, find_adjoint, find_limit, AdjointError, Adjunction, LimitShape, MorId, NatTrans, ObjId,
    SearchBound, ShapeKind, Side,
};

#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "error", rename_all = "snake_case")]
pub enum TypeFormerError {
    #[error("fiber over `{ctx}` has no terminal object")]
    NoFiberwiseTerminal { ctx: String },
    #[error("projection of the unit type over `{ctx}` is not invertible")]
    ProjectionNotIso { ctx: String },
    #[error("comprehension is not full")]
    NotFull,
    #[error("weakening along `{ty}` has no left adjoint ({reason})")]
    NoLeftAdjoint { ctx: String, ty: String, reason: String },
    #[error("weakening along `{ty}` has no right adjoint ({reason})")]
    NoRightAdjoint { ctx: String, ty: String, reason: String },
    #[error("Beck–Chevalley fails for the square of `{morphism}` and `{ty}`")]
    BCFails { morphism: String, ty: String },
    #[error("Σ is not strong at `{a}`, `{b}`")]
    NotStrong { a: String, b: String },
    #[error("no type over the terminal context represents `{ctx}`")]
    NotDemocratic { ctx: String },
    #[error("adjoint search exceeded its bound at `{ty}`")]
    Inconclusive { ty: String },
    #[error("missing structure: {0}")]
    MissingStructure(String),
}

impl TypeFormerError {
    pub fn is_inconclusive(&self) -> bool {
        matches!(self, TypeFormerError::Inconclusive { .. })
    }
}

/// The unit type `1_Γ` over every context, with the inverse of its
/// projection.
#[derive(Clone, Debug)]
pub struct UnitStructure {
    pub units: Vec<DObjId>,
    pub inverses: Vec<MorId>,
    pub preservation: FiberwiseReport,
}

impl UnitStructure {
    pub fn at(&self, ctx: ObjId) -> DObjId {
        self.units[ctx.0]
    }
}

/// `Σ_A ⊣ π_A^*` for every type, the Beck–Chevalley verdicts and the
/// strong-Σ comparisons.
#[derive(Clone, Debug)]
pub struct SigmaStructure {
    pub adjunctions: Vec<Adjunction>,
    pub bc: Vec<BCEntry>,
    pub strong: Vec<StrongEntry>,
}

/// `π_A^* ⊣ Π_A` for every type and the Beck–Chevalley verdicts.
#[derive(Clone, Debug)]
pub struct PiStructure {
    pub adjunctions: Vec<Adjunction>,
    pub bc: Vec<BCEntry>,
}

/// The square built from substituting `ty` along `morphism`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BCEntry {
    pub morphism: MorId,
    pub ty: DObjId,
    pub holds: bool,
}

/// The comparison `Γ.A.B → Γ.(Σ_A B)` and its inverse.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrongEntry {
    pub a: DObjId,
    pub b: DObjId,
    pub comparison: MorId,
    pub inverse: MorId,
}

/// For every context `Γ` a type `δ_Γ` over the terminal context and an
/// isomorphism `Γ ≅ ⋄.δ_Γ`.
#[derive(Clone, Debug)]
pub struct DemocracyStructure {
    pub types: Vec<DObjId>,
    pub isos: Vec<MorId>,
}

fn sub(k: &CompCat, s: MorId) -> &crate::fincat::FinFunctor {
    k.cleaving.substitution(s)
}

/// Fiberwise terminal objects whose projections are invertible.
pub fn check_unit_types(k: &CompCat) -> Result<UnitStructure, TypeFormerError> {
    let mut units = Vec::new();
    let mut inverses = Vec::new();
    for x in k.base.objects() {
        let ctx = k.base.object_name(x).to_string();
        let fib = k.types.fiber(x);
        let w = find_limit(&fib.cat, LimitShape::Terminal)
            .expect("terminal shape")
            .ok_or_else(|| TypeFormerError::NoFiberwiseTerminal { ctx: ctx.clone() })?;
        let one = fib.dobj(w.apex);
        let inv = k.base.inverse(k.proj(one)).ok_or(TypeFormerError::ProjectionNotIso { ctx })?;
        units.push(one);
        inverses.push(inv);
    }
    let preservation = check_fiberwise_limits(&k.cleaving, ShapeKind::Terminal);
    if let Some(p) = preservation.preservation.iter().find(|p| !p.preserved) {
        return Err(TypeFormerError::MissingStructure(format!("substitution along `{}` does not preserve 1", p.morphism)));
    }
    Ok(UnitStructure { units, inverses, preservation })
}

/// Fiberwise binary products or equalizers, preserved by substitution.
pub fn check_prod_eq_types(k: &CompCat, shape: ShapeKind) -> FiberwiseReport {
    check_fiberwise_limits(&k.cleaving, shape)
}

fn adjoint_error(k: &CompCat, a: DObjId, side: Side, e: AdjointError) -> TypeFormerError {
    let ctx = k.base.object_name(k.types.over_of(a)).to_string();
    let ty = k.types.dobject_name(a).to_string();
    match e {
        AdjointError::SearchBoundExceeded { .. } => TypeFormerError::Inconclusive { ty },
        AdjointError::NotFound { object } => match side {
            Side::Left => TypeFormerError::NoLeftAdjoint { ctx, ty, reason: format!("no universal arrow at `{object}`") },
            Side::Right => TypeFormerError::NoRightAdjoint { ctx, ty, reason: format!("no universal arrow at `{object}`") },
        },
    }
}

/// The Beck–Chevalley square of `s: Δ → Γ` and `A` over `Γ`: the fibers
/// over `Γ`, `Δ`, `Γ.A` and `Δ.s^*A`, with weakening vertically and
/// substitution horizontally.
fn bc_square(k: &CompCat, s: MorId, a: DObjId, adjs: &[Adjunction], side: MateSide) -> BCSquare {
    let (sa, lift) = k.cleaving.lift(s, a);
    let q = k.chi_top(lift);
    let (pa, psa) = (k.proj(a), k.proj(sa));
    let tau = k.cleaving.composite_comparison(q, pa).then(
        &k.cleaving.composite_comparison(psa, s).inverse().expect("comparisons of a cleaving are invertible"),
    );
    BCSquare::new(
        sub(k, s).clone(),
        sub(k, pa).clone(),
        sub(k, psa).clone(),
        sub(k, q).clone(),
        tau,
        side,
        adjs[a.0].clone(),
        adjs[sa.0].clone(),
    )
    .expect("substitution squares are well formed")
}

fn bc_entries(k: &CompCat, adjs: &[Adjunction], side: MateSide) -> Result<Vec<BCEntry>, TypeFormerError> {
    let mut out = Vec::new();
    for s in k.base.morphisms() {
        for &a in k.types.over(k.base.dst(s)) {
            let holds = beck_chevalley(&bc_square(k, s, a, adjs, side)).0;
            if !holds {
                return Err(TypeFormerError::BCFails {
                    morphism: k.base.morphism_name(s).into(),
                    ty: k.types.dobject_name(a).into(),
                });
            }
            out.push(BCEntry { morphism: s, ty: a, holds });
        }
    }
    Ok(out)
}

/// `Σ_A B` for `B` over `Γ.A`.
pub fn sigma_type(k: &CompCat, sigma: &SigmaStructure, a: DObjId, b: DObjId) -> DObjId {
    let (src, tgt) = (k.types.fiber(k.ext(a)), k.types.fiber(k.types.over_of(a)));
    tgt.dobj(sigma.adjunctions[a.0].left.obj(src.obj(b)))
}

/// `Γ.A.B → Γ.A.π_A^*(Σ_A B) → Γ.(Σ_A B)`.
pub fn strong_sigma_comparison(k: &CompCat, sigma: &SigmaStructure, a: DObjId, b: DObjId) -> MorId {
    let ext = k.types.fiber(k.ext(a));
    let adj = &sigma.adjunctions[a.0];
    let eta = ext.dmor(adj.unit.at(ext.obj(b)));
    let (_, lift) = k.cleaving.lift(k.proj(a), sigma_type(k, sigma, a, b));
    k.base.compose(k.chi_top(eta), k.chi_top(lift))
}

/// Strong Σ-types with the Beck–Chevalley condition.
pub fn check_sigma_types(k: &CompCat, bound: SearchBound) -> Result<SigmaStructure, TypeFormerError> {
    if !k.is_full() {
        return Err(TypeFormerError::NotFull);
    }
    let adjunctions = k
        .types
        .dobjects()
        .map(|a| find_adjoint(sub(k, k.proj(a)), Side::Left, bound).map_err(|e| adjoint_error(k, a, Side::Left, e)))
        .collect::<Result<Vec<_>, _>>()?;
    let bc = bc_entries(k, &adjunctions, MateSide::Left)?;
    let mut sigma = SigmaStructure { adjunctions, bc, strong: Vec::new() };
    for a in k.types.dobjects() {
        for &b in k.types.over(k.ext(a)) {
            let comparison = strong_sigma_comparison(k, &sigma, a, b);
            let inverse = k.base.inverse(comparison).ok_or_else(|| TypeFormerError::NotStrong {
                a: k.types.dobject_name(a).into(),
                b: k.types.dobject_name(b).into(),
            })?;
            sigma.strong.push(StrongEntry { a, b, comparison, inverse });
        }
    }
    Ok(sigma)
}

/// `Π_A` for every type, with the Beck–Chevalley condition.
pub fn check_pi_types(k: &CompCat, bound: SearchBound) -> Result<PiStructure, TypeFormerError> {
    let adjunctions = k
        .types
        .dobjects()
        .map(|a| find_adjoint(sub(k, k.proj(a)), Side::Right, bound).map_err(|e| adjoint_error(k, a, Side::Right, e)))
        .collect::<Result<Vec<_>, _>>()?;
    let bc = bc_entries(k, &adjunctions, MateSide::Right)?;
    Ok(PiStructure { adjunctions, bc })
}

/// `Π_A B` for `B` over `Γ.A`.
pub fn pi_type(k: &CompCat, pi: &PiStructure, a: DObjId, b: DObjId) -> DObjId {
    let (src, tgt) = (k.types.fiber(k.ext(a)), k.types.fiber(k.types.over_of(a)));
    tgt.dobj(pi.adjunctions[a.0].right.obj(src.obj(b)))
}

/// Every context is isomorphic to the extension of the terminal context by
/// some type; the earliest such type is chosen.
pub fn check_democracy(k: &CompCat) -> Result<DemocracyStructure, TypeFormerError> {
    let mut types = Vec::new();
    let mut isos = Vec::new();
    for x in k.base.objects() {
        let (d, iso) = k
            .types
            .over(k.terminal)
            .iter()
            .find_map(|&d| k.base.find_iso(x, k.ext(d)).map(|i| (d, i)))
            .ok_or_else(|| TypeFormerError::NotDemocratic { ctx: k.base.object_name(x).into() })?;
        types.push(d);
        isos.push(iso);
    }
    Ok(DemocracyStructure { types, isos })
}

/// The extensional identity type of two terms: the equalizer of the
/// corresponding vertical morphisms out of `1_Γ`, with its inclusion.
pub fn ext_id_type(k: &CompCat, unit: &UnitStructure, t1: &Term, t2: &Term) -> Result<(DObjId, DMorId), TypeFormerError> {
    if t1.ctx != t2.ctx || t1.ty != t2.ty {
        return Err(TypeFormerError::MissingStructure("terms of different types".into()));
    }
    let one = unit.at(t1.ctx);
    let v = |t: &Term| {
        k.term_to_vertical(one, t)
            .ok_or_else(|| TypeFormerError::MissingStructure("term has no vertical counterpart".into()))
    };
    let (v1, v2) = (v(t1)?, v(t2)?);
    let fib = k.types.fiber(t1.ctx);
    let w = find_limit(&fib.cat, LimitShape::Equalizer(fib.mor(v1), fib.mor(v2)))
        .expect("parallel pair")
        .ok_or_else(|| TypeFormerError::MissingStructure("fiber lacks the equalizer".into()))?;
    Ok((fib.dobj(w.apex), fib.dmor(w.legs[0])))
}

/// Outcome of one layer of the DFL check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub pass: bool,
    pub first_failure: Option<String>,
}

/// All five layers together with fullness.
#[derive(Clone, Debug)]
pub struct DFLReport {
    pub full: bool,
    pub unit: Result<UnitStructure, TypeFormerError>,
    pub prod: FiberwiseReport,
    pub eq: FiberwiseReport,
    pub sigma: Result<SigmaStructure, TypeFormerError>,
    pub dem: Result<DemocracyStructure, TypeFormerError>,
    pub verdict: Verdict,
}

impl DFLReport {
    pub fn passed(&self) -> bool {
        self.verdict.pass
    }

    pub fn inconclusive(&self) -> bool {
        matches!(&self.sigma, Err(e) if e.is_inconclusive())
    }

    /// Per-layer verdicts and witnesses, by name.
    pub fn to_json(&self, k: &CompCat) -> Value {
        let ty = |d: DObjId| k.types.dobject_name(d).to_string();
        let mor = |f: MorId| k.base.morphism_name(f).to_string();
        let unit = match &self.unit {
            Ok(u) => json!({
                "pass": true,
                "units": k.base.objects().map(|x| json!({
                    "context": k.base.object_name(x), "type": ty(u.at(x)), "projection_inverse": mor(u.inverses[x.0]),
                })).collect::<Vec<_>>(),
            }),
            Err(e) => json!({ "pass": false, "failure": e }),
        };
        let sigma = match &self.sigma {
            Ok(s) => json!({
                "pass": true,
                "beck_chevalley_squares": s.bc.len(),
                "sums": k.types.dobjects().map(|a| json!({
                    "type": ty(a),
                    "sums": k.types.over(k.ext(a)).iter().map(|&b| json!([ty(b), ty(sigma_type(k, s, a, b))])).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
                "strong": s.strong.iter().map(|e| json!({
                    "a": ty(e.a), "b": ty(e.b), "comparison": mor(e.comparison), "inverse": mor(e.inverse),
                })).collect::<Vec<_>>(),
            }),
            Err(e) => json!({ "pass": false, "failure": e }),
        };
        let dem = match &self.dem {
            Ok(d) => json!({
                "pass": true,
                "representatives": k.base.objects().map(|x| json!({
                    "context": k.base.object_name(x), "type": ty(d.types[x.0]), "iso": mor(d.isos[x.0]),
                })).collect::<Vec<_>>(),
            }),
            Err(e) => json!({ "pass": false, "failure": e }),
        };
        json!({
            "full": self.full,
            "unit": unit,
            "prod": self.prod,
            "eq": self.eq,
            "sigma": sigma,
            "democracy": dem,
            "verdict": self.verdict,
        })
    }
}

/// Runs every DFL check.
pub fn check_dfl(k: &CompCat, bound: SearchBound) -> DFLReport {
    let full = k.is_full();
    let unit = check_unit_types(k);
    let prod = check_prod_eq_types(k, ShapeKind::BinaryProduct);
    let eq = check_prod_eq_types(k, ShapeKind::Equalizer);
    let sigma = check_sigma_types(k, bound);
    let dem = check_democracy(k);
    let fiberwise = |r: &FiberwiseReport| {
        r.fibers
            .iter()
            .find_map(|f| f.failure.as_ref().map(|w| format!("{} over `{}`: {w}", r.shape, f.object)))
            .or_else(|| {
                r.preservation
                    .iter()
                    .find_map(|p| p.failure.as_ref().map(|w| format!("{} not preserved by `{}`: {w}", r.shape, p.morphism)))
            })
    };
    let first_failure = (!full)
        .then(|| "comprehension is not full".to_string())
        .or_else(|| unit.as_ref().err().map(|e| format!("unit: {e}")))
        .or_else(|| fiberwise(&prod))
        .or_else(|| fiberwise(&eq))
        .or_else(|| sigma.as_ref().err().map(|e| format!("sigma: {e}")))
        .or_else(|| dem.as_ref().err().map(|e| format!("democracy: {e}")));
    let verdict = Verdict { pass: first_failure.is_none(), first_failure };
    DFLReport { full, unit, prod, eq, sigma, dem, verdict }
}

/// A morphism of DFL comprehension categories is an adjoint equivalence
/// when its base functor is an equivalence and it is an equivalence on
/// every fiber.
pub fn is_adjequiv_1cell(m: &CompCatMorphism) -> bool {
    check_equivalence(&m.functor).is_ok()
        && m.source.base.objects().all(|x| check_equivalence(&m.dfunctor.fiber_functor(x)).is_ok())
}

/// For a morphism between democratic comprehension categories, the vertical
/// isomorphisms `d_Γ: F̄(δ_Γ) ≅ !^*(δ_{FΓ})` over `F⋄` relating the two
/// choices of representatives.
pub fn democracy_comparison(
    m: &CompCatMorphism,
    dem1: &DemocracyStructure,
    dem2: &DemocracyStructure,
) -> Result<Vec<DMorId>, TypeFormerError> {
    let (k1, k2) = (&*m.source, &*m.target);
    let c2 = &k2.base;
    let ft = m.functor.obj(k1.terminal);
    let bang = *c2.hom(ft, k2.terminal).first().ok_or_else(|| TypeFormerError::MissingStructure("F⋄ is not terminal".into()))?;
    k1.base
        .objects()
        .map(|x| {
            let fail = || TypeFormerError::MissingStructure(format!("no comparison at `{}`", k1.base.object_name(x)));
            let d1 = dem1.types[x.0];
            let fx = m.functor.obj(x);
            let (sd, lift) = k2.cleaving.lift(bang, dem2.types[fx.0]);
            let q_inv = c2.inverse(k2.chi_top(lift)).ok_or_else(fail)?;
            let across = c2.compose(m.functor.mor(dem1.isos[x.0]), m.comparison_top(d1));
            let top = c2.compose_all(&[c2.inverse(across).ok_or_else(fail)?, dem2.isos[fx.0], q_inv]);
            let fd1 = m.dfunctor.dobj(d1);
            let tri = k2.arrows.triangle(k2.comprehension.dobj(fd1), k2.comprehension.dobj(sd), top).ok_or_else(fail)?;
            let d = k2
                .types
                .dhom(c2.id(ft), fd1, sd)
                .iter()
                .copied()
                .find(|&v| k2.comprehension.dmor(v) == tri)
                .ok_or_else(fail)?;
            k2.types.vertical_inverse(d).ok_or_else(fail)?;
            Ok(d)
        })
        .collect()
}

/// The mate `q^* ; Σ_{s^*A} ⇒ Σ_A ; s^*` of the Σ square at `(s, A)`.
pub fn sigma_mate(k: &CompCat, sigma: &SigmaStructure, s: MorId, a: DObjId) -> NatTrans {
    bc_square(k, s, a, &sigma.adjunctions, MateSide::Left).mate()
}
