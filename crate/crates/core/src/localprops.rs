//! Local properties of finitely complete categories: properties of
//! categories paired with properties of functors, closed under slicing.
//!
//! Every checker is exhaustive on the (finite) input; only searches that
//! are capped by a [`SearchBound`] can come back inconclusive.

use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use crate::biequiv::{h_object, FinLimCat};
use crate::compcat::CompCat;
use crate::fincat::{
    check_equivalence, find_adjoint, find_colimit, find_limit, pullback_functor, slice_category, slice_functor,
    AdjointError, ColimitShape, ColimitWitness, Cone, FinCat, FinFunctor, LimitShape, LimitWitness, MorId, ObjId,
    SearchBound, Side, Slice, Witness,
};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Verified { witness: String },
    Counterexample { witness: String },
    InconclusiveAtBound { bound: usize },
}

impl Verdict {
    fn ok(w: impl Into<String>) -> Self {
        Verdict::Verified { witness: w.into() }
    }

    fn cx(w: impl Into<String>) -> Self {
        Verdict::Counterexample { witness: w.into() }
    }

    pub fn is_verified(&self) -> bool {
        matches!(self, Verdict::Verified { .. })
    }

    pub fn is_counterexample(&self) -> bool {
        matches!(self, Verdict::Counterexample { .. })
    }

    pub fn witness(&self) -> Option<&str> {
        match self {
            Verdict::Verified { witness } | Verdict::Counterexample { witness } => Some(witness),
            Verdict::InconclusiveAtBound { .. } => None,
        }
    }

    /// Conjunction: the first counterexample wins, then the first
    /// inconclusive verdict; otherwise the witnesses are joined.
    pub fn all(verdicts: impl IntoIterator<Item = Verdict>) -> Verdict {
        let vs: Vec<Verdict> = verdicts.into_iter().collect();
        if let Some(v) = vs.iter().find(|v| v.is_counterexample()) {
            return v.clone();
        }
        if let Some(v) = vs.iter().find(|v| matches!(v, Verdict::InconclusiveAtBound { .. })) {
            return v.clone();
        }
        Verdict::ok(vs.iter().filter_map(|v| v.witness()).collect::<Vec<_>>().join("; "))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Verified { .. } => "verified",
            Verdict::Counterexample { .. } => "counterexample",
            Verdict::InconclusiveAtBound { .. } => "inconclusive",
        }
    }
}

fn from_result(r: Result<String, String>) -> Verdict {
    match r {
        Ok(w) => Verdict::ok(w),
        Err(w) => Verdict::cx(w),
    }
}

// ---------------------------------------------------------------------------
// Small universal-property helpers.

fn limit(c: &FinCat, shape: LimitShape) -> Option<LimitWitness> {
    find_limit(c, shape).ok().flatten()
}

fn colimit(c: &FinCat, shape: ColimitShape) -> Option<ColimitWitness> {
    find_colimit(c, shape).ok().flatten()
}

fn is_initial(c: &FinCat, x: ObjId) -> bool {
    Witness::from_cone(c, ColimitShape::Initial, &Cone { apex: x, legs: vec![] }).is_some()
}

fn is_terminal(c: &FinCat, x: ObjId) -> bool {
    Witness::from_cone(c, LimitShape::Terminal, &Cone { apex: x, legs: vec![] }).is_some()
}

fn to_terminal(c: &FinCat, x: ObjId, t: ObjId) -> MorId {
    c.hom(x, t)[0]
}

fn name(c: &FinCat, x: ObjId) -> &str {
    c.object_name(x)
}

fn mname(c: &FinCat, f: MorId) -> &str {
    c.morphism_name(f)
}

/// `(k1, k2)`, the chosen kernel pair of `f`.
fn kernel_pair(c: &FinCat, f: MorId) -> Option<(MorId, MorId)> {
    limit(c, LimitShape::Pullback(f, f)).map(|w| (w.legs[0], w.legs[1]))
}

/// A regular epi is the coequalizer of its kernel pair (given kernel pairs).
fn is_regular_epi(c: &FinCat, e: MorId) -> bool {
    let Some((k1, k2)) = kernel_pair(c, e) else { return false };
    let cone = Cone { apex: c.dst(e), legs: vec![c.compose(k1, e), e] };
    Witness::from_cone(c, ColimitShape::Coequalizer(k1, k2), &cone).is_some()
}

fn regular_epis(c: &FinCat) -> Vec<MorId> {
    c.morphisms().filter(|&e| is_regular_epi(c, e)).collect()
}

/// Monos into `x`, one per subobject.
fn subobjects(c: &FinCat, x: ObjId) -> Vec<MorId> {
    let mut reps: Vec<MorId> = Vec::new();
    for m in c.morphisms().filter(|&m| c.dst(m) == x && c.is_mono(m)) {
        let same = |r: &MorId| {
            c.hom(c.src(m), c.src(*r)).iter().any(|&u| c.is_iso(u) && c.compose(u, *r) == m)
        };
        if !reps.iter().any(same) {
            reps.push(m);
        }
    }
    reps
}

// ---------------------------------------------------------------------------
// Category-level checks. Each returns the witness or the failing axiom.

fn strict_initial_cat(c: &FinCat) -> Result<String, String> {
    let w = colimit(c, ColimitShape::Initial).ok_or("no initial object")?;
    let z = w.apex;
    if let Some(f) = c.morphisms().find(|&f| c.dst(f) == z && !c.is_iso(f)) {
        return Err(format!("initial object `{}` is not strict: `{}` is not invertible", name(c, z), mname(c, f)));
    }
    Ok(format!("initial object `{}`, every map into it invertible", name(c, z)))
}

fn coproducts_exist(c: &FinCat) -> Result<HashMap<(ObjId, ObjId), ColimitWitness>, String> {
    let mut out = HashMap::new();
    for a in c.objects() {
        for b in c.objects() {
            let w = colimit(c, ColimitShape::BinaryCoproduct(a, b))
                .ok_or_else(|| format!("coproducts exist: no coproduct of `{}` and `{}`", name(c, a), name(c, b)))?;
            out.insert((a, b), w);
        }
    }
    Ok(out)
}

fn coproducts_stable(c: &FinCat, cops: &HashMap<(ObjId, ObjId), ColimitWitness>) -> Result<(), String> {
    for a in c.objects() {
        for b in c.objects() {
            let w = &cops[&(a, b)];
            let (i, j) = (w.legs[0], w.legs[1]);
            for f in c.morphisms().filter(|&f| c.dst(f) == w.apex) {
                let (Some(pa), Some(pb)) = (limit(c, LimitShape::Pullback(i, f)), limit(c, LimitShape::Pullback(j, f)))
                else {
                    return Err(format!("stable: missing pullback along `{}`", mname(c, f)));
                };
                let cone = Cone { apex: c.src(f), legs: vec![pa.legs[1], pb.legs[1]] };
                if Witness::from_cone(c, ColimitShape::BinaryCoproduct(pa.apex, pb.apex), &cone).is_none() {
                    return Err(format!(
                        "stable: the coproduct `{}` + `{}` pulled back along `{}` is not a coproduct",
                        name(c, a),
                        name(c, b),
                        mname(c, f)
                    ));
                }
            }
        }
    }
    Ok(())
}

fn coproducts_disjoint(c: &FinCat, cops: &HashMap<(ObjId, ObjId), ColimitWitness>) -> Result<(), String> {
    for a in c.objects() {
        for b in c.objects() {
            let w = &cops[&(a, b)];
            let (i, j) = (w.legs[0], w.legs[1]);
            for inj in [i, j] {
                if !c.is_mono(inj) {
                    return Err(format!("disjoint: injection `{}` is not mono", mname(c, inj)));
                }
            }
            let p = limit(c, LimitShape::Pullback(i, j)).ok_or("disjoint: missing pullback of injections")?;
            if !is_initial(c, p.apex) {
                return Err(format!(
                    "disjoint: the injections of `{}` + `{}` meet in `{}`, which is not initial",
                    name(c, a),
                    name(c, b),
                    name(c, p.apex)
                ));
            }
        }
    }
    Ok(())
}

fn stable_coproducts_cat(c: &FinCat) -> Result<String, String> {
    let cops = coproducts_exist(c)?;
    coproducts_stable(c, &cops)?;
    Ok("binary coproducts exist and are stable under pullback".into())
}

/// Sub-axioms in order: initial strict, coproducts exist, stable, disjoint.
fn extensive_cat(c: &FinCat) -> Result<String, String> {
    let init = strict_initial_cat(c).map_err(|e| format!("initial strict: {e}"))?;
    let cops = coproducts_exist(c)?;
    coproducts_stable(c, &cops)?;
    coproducts_disjoint(c, &cops)?;
    Ok(format!("{init}; coproducts stable and disjoint"))
}

fn regular_cat(c: &FinCat) -> Result<String, String> {
    for f in c.morphisms() {
        let (k1, k2) = kernel_pair(c, f).ok_or_else(|| format!("missing kernel pair of `{}`", mname(c, f)))?;
        if colimit(c, ColimitShape::Coequalizer(k1, k2)).is_none() {
            return Err(format!("the kernel pair of `{}` has no coequalizer", mname(c, f)));
        }
    }
    let epis = regular_epis(c);
    for &e in &epis {
        for g in c.morphisms().filter(|&g| c.dst(g) == c.dst(e)) {
            let p = limit(c, LimitShape::Pullback(e, g)).ok_or("missing pullback")?;
            if !is_regular_epi(c, p.legs[1]) {
                return Err(format!(
                    "regular epi `{}` pulled back along `{}` is not regular epi",
                    mname(c, e),
                    mname(c, g)
                ));
            }
        }
    }
    Ok(format!("{} regular epis, all pullback-stable", epis.len()))
}

struct Relation {
    r1: MorId,
    r2: MorId,
}

fn is_equivalence_relation(c: &FinCat, rel: &Relation) -> bool {
    let (r1, r2) = (rel.r1, rel.r2);
    let (r, a) = (c.src(r1), c.dst(r1));
    let jointly_monic = c.objects().all(|w| {
        let hs = c.hom(w, r);
        hs.iter().all(|&u| {
            hs.iter().all(|&v| u == v || c.compose(u, r1) != c.compose(v, r1) || c.compose(u, r2) != c.compose(v, r2))
        })
    });
    if !jointly_monic {
        return false;
    }
    let id = c.id(a);
    let reflexive = c.hom(a, r).iter().any(|&d| c.compose(d, r1) == id && c.compose(d, r2) == id);
    let symmetric = c.hom(r, r).iter().any(|&s| c.compose(s, r1) == r2 && c.compose(s, r2) == r1);
    if !reflexive || !symmetric {
        return false;
    }
    let Some(p) = limit(c, LimitShape::Pullback(r2, r1)) else { return false };
    let (p1, p2) = (p.legs[0], p.legs[1]);
    c.hom(p.apex, r)
        .iter()
        .any(|&t| c.compose(t, r1) == c.compose(p1, r1) && c.compose(t, r2) == c.compose(p2, r2))
}

fn exact_cat(c: &FinCat) -> Result<String, String> {
    let reg = regular_cat(c)?;
    let mut count = 0;
    for r in c.objects() {
        for a in c.objects() {
            let hs = c.hom(r, a);
            for &r1 in hs {
                for &r2 in hs {
                    let rel = Relation { r1, r2 };
                    if !is_equivalence_relation(c, &rel) {
                        continue;
                    }
                    count += 1;
                    let q = colimit(c, ColimitShape::Coequalizer(r1, r2)).ok_or_else(|| {
                        format!("equivalence relation (`{}`, `{}`) has no quotient", mname(c, r1), mname(c, r2))
                    })?;
                    let q = q.legs[1];
                    let cone = Cone { apex: r, legs: vec![r1, r2, c.compose(r1, q)] };
                    if Witness::from_cone(c, LimitShape::Pullback(q, q), &cone).is_none() {
                        return Err(format!(
                            "equivalence relation (`{}`, `{}`) is not effective",
                            mname(c, r1),
                            mname(c, r2)
                        ));
                    }
                }
            }
        }
    }
    Ok(format!("{reg}; {count} equivalence relations, all effective"))
}

/// Is `t: T → Ω` (with `T` terminal) a subobject classifier?
fn is_classifier(c: &FinCat, t: MorId) -> Result<(), String> {
    let (top, omega) = (c.src(t), c.dst(t));
    if !is_terminal(c, top) {
        return Err(format!("domain of `{}` is not terminal", mname(c, t)));
    }
    for x in c.objects() {
        let subs = subobjects(c, x);
        if subs.len() != c.hom(x, omega).len() {
            return Err(format!(
                "Sub(`{}`) has {} elements but hom(`{}`, `{}`) has {}",
                name(c, x),
                subs.len(),
                name(c, x),
                name(c, omega),
                c.hom(x, omega).len()
            ));
        }
        for &m in &subs {
            let s = c.src(m);
            let bang = to_terminal(c, s, top);
            let classifying = c
                .hom(x, omega)
                .iter()
                .filter(|&&chi| {
                    let cone = Cone { apex: s, legs: vec![m, bang, c.compose(m, chi)] };
                    Witness::from_cone(c, LimitShape::Pullback(chi, t), &cone).is_some()
                })
                .count();
            if classifying != 1 {
                return Err(format!("`{}` has {classifying} classifying maps", mname(c, m)));
            }
        }
    }
    Ok(())
}

fn find_classifier(c: &FinCat) -> Result<MorId, String> {
    let top = limit(c, LimitShape::Terminal).ok_or("no terminal object")?.apex;
    let n = subobjects(c, top).len();
    let candidates: Vec<ObjId> = c.objects().filter(|&o| c.hom(top, o).len() == n).collect();
    if candidates.is_empty() {
        let most = c.objects().map(|o| c.hom(top, o).len()).max().unwrap_or(0);
        return Err(format!(
            "Sub(⊤) = Sub(`{}`) has {n} elements but every object has at most {most} global elements",
            name(c, top)
        ));
    }
    let mut last = String::new();
    for omega in candidates {
        for &t in c.hom(top, omega) {
            match is_classifier(c, t) {
                Ok(()) => return Ok(t),
                Err(e) => last = format!("candidate `{}`: {e}", mname(c, t)),
            }
        }
    }
    Err(format!("no subobject classifier; last {last}"))
}

fn subobject_classifier_cat(c: &FinCat) -> Result<String, String> {
    let t = find_classifier(c)?;
    Ok(format!("Ω = `{}` with true = `{}`", name(c, c.dst(t)), mname(c, t)))
}

/// Why a candidate `(N, z, s)` fails, if it does.
fn nno_failure(c: &FinCat, z: MorId, s: MorId, steps: &mut usize, bound: SearchBound) -> Option<Result<String, ()>> {
    let n = c.dst(z);
    let top = c.src(z);
    let Some(zs) = limit(c, LimitShape::Pullback(z, s)) else {
        return Some(Ok("zero and successor have no pullback".into()));
    };
    if !is_initial(c, zs.apex) {
        return Some(Ok(format!("zero `{}` and successor `{}` are not disjoint", mname(c, z), mname(c, s))));
    }
    for a in c.objects() {
        let Some(prod) = limit(c, LimitShape::BinaryProduct(a, n)) else {
            return Some(Ok(format!("no product `{}` × `{}`", name(c, a), name(c, n))));
        };
        let (p1, p2) = (prod.legs[0], prod.legs[1]);
        let start = prod.mediator(c, &Cone { apex: a, legs: vec![c.id(a), c.compose(to_terminal(c, a, top), z)] })?;
        let step = prod.mediator(c, &Cone { apex: prod.apex, legs: vec![p1, c.compose(p2, s)] })?;
        for y in c.objects() {
            for &f in c.hom(a, y) {
                for &g in c.hom(y, y) {
                    *steps += 1;
                    if *steps > bound.max_steps {
                        return Some(Err(()));
                    }
                    let sols = c
                        .hom(prod.apex, y)
                        .iter()
                        .filter(|&&h| c.compose(start, h) == f && c.compose(step, h) == c.compose(h, g))
                        .count();
                    if sols != 1 {
                        return Some(Ok(format!(
                            "recursion from `{}` with step `{}` has {sols} solutions",
                            mname(c, f),
                            mname(c, g)
                        )));
                    }
                }
            }
        }
    }
    None
}

enum NnoSearch {
    Found(MorId, MorId),
    Missing(String),
    Bound,
}

fn find_nno(c: &FinCat, bound: SearchBound) -> NnoSearch {
    if colimit(c, ColimitShape::Initial).is_none() {
        return NnoSearch::Missing("no initial object, so zero and successor cannot be disjoint".into());
    }
    let Some(top) = limit(c, LimitShape::Terminal).map(|w| w.apex) else {
        return NnoSearch::Missing("no terminal object".into());
    };
    let mut steps = 0;
    let mut first = None;
    for n in c.objects() {
        for &z in c.hom(top, n) {
            for &s in c.hom(n, n) {
                match nno_failure(c, z, s, &mut steps, bound) {
                    None => return NnoSearch::Found(z, s),
                    Some(Err(())) => return NnoSearch::Bound,
                    Some(Ok(why)) => {
                        first.get_or_insert(why);
                    }
                }
            }
        }
    }
    NnoSearch::Missing(format!("no parameterized NNO; first candidate: {}", first.unwrap_or_default()))
}

fn nno_cat(c: &FinCat, bound: SearchBound) -> Verdict {
    match find_nno(c, bound) {
        NnoSearch::Found(z, s) => {
            Verdict::ok(format!("ℕ = `{}` with zero `{}` and successor `{}`", name(c, c.dst(z)), mname(c, z), mname(c, s)))
        }
        NnoSearch::Missing(w) => Verdict::cx(w),
        NnoSearch::Bound => Verdict::InconclusiveAtBound { bound: bound.max_morphisms },
    }
}

// ---------------------------------------------------------------------------
// Functor-level checks: transport the source witness and re-verify it.

fn preserves_initial(f: &FinFunctor) -> Result<String, String> {
    let (c, d) = (f.source(), f.target());
    match colimit(c, ColimitShape::Initial) {
        None => Ok("source has no initial object".into()),
        Some(w) if is_initial(d, f.obj(w.apex)) => Ok("preserves the initial object".into()),
        Some(w) => Err(format!("image of initial `{}` is not initial", name(c, w.apex))),
    }
}

fn preserves_coproducts(f: &FinFunctor) -> Result<String, String> {
    let (c, d) = (f.source(), f.target());
    for a in c.objects() {
        for b in c.objects() {
            let Some(w) = colimit(c, ColimitShape::BinaryCoproduct(a, b)) else { continue };
            let cone = Cone { apex: f.obj(w.apex), legs: w.legs.iter().map(|&l| f.mor(l)).collect() };
            if Witness::from_cone(d, ColimitShape::BinaryCoproduct(f.obj(a), f.obj(b)), &cone).is_none() {
                return Err(format!("image of the coproduct `{}` + `{}` is not a coproduct", name(c, a), name(c, b)));
            }
        }
    }
    Ok("preserves binary coproducts".into())
}

fn preserves_regular_epis(f: &FinFunctor) -> Result<String, String> {
    let (c, d) = (f.source(), f.target());
    for e in regular_epis(c) {
        if !is_regular_epi(d, f.mor(e)) {
            return Err(format!("image of regular epi `{}` is not regular epi", mname(c, e)));
        }
    }
    Ok("preserves regular epis".into())
}

fn preserves_classifier(f: &FinFunctor) -> Result<String, String> {
    let (c, d) = (f.source(), f.target());
    let Ok(t) = find_classifier(c) else { return Ok("source has no subobject classifier".into()) };
    is_classifier(d, f.mor(t)).map_err(|e| format!("image of `{}` is not a classifier: {e}", mname(c, t)))?;
    Ok("preserves the subobject classifier".into())
}

fn preserves_nno(f: &FinFunctor, bound: SearchBound) -> Verdict {
    let (c, d) = (f.source(), f.target());
    let (z, s) = match find_nno(c, bound) {
        NnoSearch::Found(z, s) => (z, s),
        NnoSearch::Missing(_) => return Verdict::ok("source has no NNO"),
        NnoSearch::Bound => return Verdict::InconclusiveAtBound { bound: bound.max_morphisms },
    };
    let mut steps = 0;
    match nno_failure(d, f.mor(z), f.mor(s), &mut steps, bound) {
        None => Verdict::ok("preserves the NNO"),
        Some(Ok(why)) => Verdict::cx(format!("image of the NNO is not an NNO: {why}")),
        Some(Err(())) => Verdict::InconclusiveAtBound { bound: bound.max_morphisms },
    }
}

// ---------------------------------------------------------------------------

/// A property of finitely complete categories together with the matching
/// property of finite-limit-preserving functors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LocalProperty {
    StrictInitial,
    StableCoproducts,
    Extensive,
    Regular,
    Exact,
    SubobjectClassifier,
    NnoParam,
    Conj(String, Vec<LocalProperty>),
}

/// Pointwise conjunction, named after its parts.
pub fn conj(parts: Vec<LocalProperty>) -> LocalProperty {
    let name = format!("conj({})", parts.iter().map(|p| p.name()).collect::<Vec<_>>().join(", "));
    LocalProperty::Conj(name, parts)
}

pub fn pretopos() -> LocalProperty {
    LocalProperty::Conj("pretopos".into(), vec![LocalProperty::Extensive, LocalProperty::Exact])
}

pub fn arithmetic_pretopos() -> LocalProperty {
    LocalProperty::Conj("arithmetic_pretopos".into(), vec![pretopos(), LocalProperty::NnoParam])
}

/// Pretopos with a subobject classifier.
pub fn elementary_topos_local() -> LocalProperty {
    LocalProperty::Conj("elementary_topos".into(), vec![pretopos(), LocalProperty::SubobjectClassifier])
}

pub fn elementary_topos_nno_local() -> LocalProperty {
    LocalProperty::Conj("elementary_topos_nno".into(), vec![elementary_topos_local(), LocalProperty::NnoParam])
}

/// The seven basic properties followed by the standard conjunctions.
pub fn registry() -> Vec<LocalProperty> {
    use LocalProperty::*;
    vec![
        StrictInitial,
        StableCoproducts,
        Extensive,
        Regular,
        Exact,
        SubobjectClassifier,
        NnoParam,
        pretopos(),
        arithmetic_pretopos(),
        elementary_topos_local(),
        elementary_topos_nno_local(),
    ]
}

pub fn lookup(name: &str) -> Option<LocalProperty> {
    registry().into_iter().find(|p| p.name() == name)
}

impl LocalProperty {
    pub fn name(&self) -> &str {
        use LocalProperty::*;
        match self {
            StrictInitial => "strict_initial",
            StableCoproducts => "stable_coproducts",
            Extensive => "extensive",
            Regular => "regular",
            Exact => "exact",
            SubobjectClassifier => "subobject_classifier",
            NnoParam => "nno_param",
            Conj(n, _) => n,
        }
    }

    /// Position in [`registry`].
    pub fn registry_id(&self) -> Option<usize> {
        registry().iter().position(|p| p == self)
    }

    /// The property of categories. Assumes `c` has finite limits.
    pub fn cat_check(&self, c: &FinCat, bound: SearchBound) -> Verdict {
        use LocalProperty::*;
        match self {
            StrictInitial => from_result(strict_initial_cat(c)),
            StableCoproducts => from_result(stable_coproducts_cat(c)),
            Extensive => from_result(extensive_cat(c)),
            Regular => from_result(regular_cat(c)),
            Exact => from_result(exact_cat(c)),
            SubobjectClassifier => from_result(subobject_classifier_cat(c)),
            NnoParam => nno_cat(c, bound),
            Conj(_, ps) => Verdict::all(ps.iter().map(|p| p.cat_check(c, bound))),
        }
    }

    /// The property of functors between categories satisfying the property.
    pub fn functor_check(&self, f: &FinFunctor, bound: SearchBound) -> Verdict {
        use LocalProperty::*;
        match self {
            StrictInitial => from_result(preserves_initial(f)),
            StableCoproducts => from_result(preserves_coproducts(f)),
            Extensive => Verdict::all([from_result(preserves_initial(f)), from_result(preserves_coproducts(f))]),
            Regular | Exact => from_result(preserves_regular_epis(f)),
            SubobjectClassifier => from_result(preserves_classifier(f)),
            NnoParam => preserves_nno(f, bound),
            Conj(_, ps) => Verdict::all(ps.iter().map(|p| p.functor_check(f, bound))),
        }
    }
}

pub fn check_local_property(c: &FinLimCat, p: &LocalProperty, bound: SearchBound) -> Verdict {
    p.cat_check(&c.cat, bound)
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct AxiomCheck {
    pub axiom: String,
    pub instances: usize,
    pub failure: Option<String>,
    pub inconclusive: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ClosureReport {
    pub property: String,
    pub axioms: Vec<AxiomCheck>,
    pub pass: bool,
}

struct Tally {
    axiom: &'static str,
    instances: usize,
    failure: Option<String>,
    inconclusive: bool,
}

impl Tally {
    fn new(axiom: &'static str) -> Self {
        Tally { axiom, instances: 0, failure: None, inconclusive: false }
    }

    fn record(&mut self, what: impl FnOnce() -> String, v: &Verdict) {
        self.instances += 1;
        match v {
            Verdict::Verified { .. } => {}
            Verdict::Counterexample { witness } => {
                self.failure.get_or_insert_with(|| format!("{}: {witness}", what()));
            }
            Verdict::InconclusiveAtBound { .. } => self.inconclusive = true,
        }
    }

    fn done(self) -> AxiomCheck {
        AxiomCheck {
            axiom: self.axiom.into(),
            instances: self.instances,
            failure: self.failure,
            inconclusive: self.inconclusive,
        }
    }
}

fn slices(c: &Arc<FinCat>) -> Vec<Slice> {
    c.objects().map(|x| slice_category(c, x).expect("object of c")).collect()
}

/// The five closure axioms, instantiated on `c`: identity and composition
/// closure of the functor property, slice closure of the category property,
/// pullback functors, and slices of tested functors.
pub fn check_property_closure(p: &LocalProperty, c: &FinLimCat, bound: SearchBound) -> ClosureReport {
    let cat = &c.cat;
    let sl = slices(cat);
    let mut identity = Tally::new("identity");
    let mut composition = Tally::new("composition");
    let mut slicing = Tally::new("slice");
    let mut pullback = Tally::new("pullback_functor");
    let mut sliced = Tally::new("sliced_functor");

    identity.record(|| "id".into(), &p.functor_check(&FinFunctor::identity(cat.clone()), bound));
    for s in &sl {
        let v = p.cat_check(&s.cat, bound);
        slicing.record(|| format!("slice over `{}`", name(cat, s.base)), &v);
        identity.record(
            || format!("id on slice over `{}`", name(cat, s.base)),
            &p.functor_check(&FinFunctor::identity(s.cat.clone()), bound),
        );
    }

    let mut pbs: HashMap<MorId, FinFunctor> = HashMap::new();
    for f in cat.morphisms() {
        let Some(pb) = pullback_functor(cat, f, &sl[cat.dst(f).0], &sl[cat.src(f).0]) else {
            pullback.record(|| format!("`{}`*", mname(cat, f)), &Verdict::cx("missing pullbacks"));
            continue;
        };
        pullback.record(|| format!("`{}`*", mname(cat, f)), &p.functor_check(&pb, bound));
        pbs.insert(f, pb);
    }

    for f in cat.morphisms() {
        for g in cat.morphisms().filter(|&g| cat.src(g) == cat.dst(f)) {
            let (Some(fs), Some(gs)) = (pbs.get(&f), pbs.get(&g)) else { continue };
            composition.record(
                || format!("`{}`* then `{}`*", mname(cat, g), mname(cat, f)),
                &p.functor_check(&gs.then(fs), bound),
            );
        }
    }

    let mut tested: Vec<(String, FinFunctor)> = vec![("id".into(), FinFunctor::identity(cat.clone()))];
    tested.extend(cat.morphisms().filter_map(|f| pbs.get(&f).map(|pb| (format!("`{}`*", mname(cat, f)), pb.clone()))));
    for (label, func) in &tested {
        for u in func.source().objects() {
            let (Ok(su), Ok(sv)) = (slice_category(func.source(), u), slice_category(func.target(), func.obj(u))) else {
                continue;
            };
            let Some(fu) = slice_functor(func, &su, &sv) else {
                sliced.record(|| format!("{label} sliced at #{}", u.0), &Verdict::cx("slice functor is undefined"));
                continue;
            };
            sliced.record(|| format!("{label} sliced at `{}`", func.source().object_name(u)), &p.functor_check(&fu, bound));
        }
    }

    let axioms: Vec<AxiomCheck> = [identity, composition, slicing, pullback, sliced].into_iter().map(Tally::done).collect();
    let pass = axioms.iter().all(|a| a.failure.is_none() && !a.inconclusive);
    ClosureReport { property: p.name().into(), axioms, pass }
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, Serialize)]
pub struct FiberwiseReport {
    pub property: String,
    pub fibers: Vec<(String, Verdict)>,
    pub substitutions: Vec<(String, Verdict)>,
    pub verdict: Verdict,
}

/// The category property on every fiber and the functor property on every
/// substitution functor.
pub fn compcat_satisfies(k: &CompCat, p: &LocalProperty, bound: SearchBound) -> FiberwiseReport {
    let base = &k.base;
    let fibers: Vec<(String, Verdict)> = base
        .objects()
        .map(|x| (base.object_name(x).to_string(), p.cat_check(&k.types.fiber(x).cat, bound)))
        .collect();
    let substitutions: Vec<(String, Verdict)> = base
        .morphisms()
        .map(|s| (format!("{}*", base.morphism_name(s)), p.functor_check(k.cleaving.substitution(s), bound)))
        .collect();
    let verdict = Verdict::all(fibers.iter().chain(&substitutions).map(|(w, v)| match v {
        Verdict::Counterexample { witness } => Verdict::cx(format!("at {w}: {witness}")),
        other => other.clone(),
    }));
    let verdict = if verdict.is_verified() { Verdict::ok("every fiber and substitution functor") } else { verdict };
    FiberwiseReport { property: p.name().into(), fibers, substitutions, verdict }
}

#[derive(Clone, Debug, Serialize)]
pub struct BiequivPropertyReport {
    pub property: String,
    /// `H(C)` satisfies the property fiberwise.
    pub fiberwise: Verdict,
    /// The property on the fiber over the terminal context.
    pub fiber_at_terminal: Verdict,
    /// The comparison from that fiber to the base is an equivalence.
    pub equivalence: bool,
    /// The property re-verified on the base after transport.
    pub base: Verdict,
    pub pass: bool,
}

/// Both directions of extending the biequivalence to a local property.
pub fn extend_biequiv_check(c: &FinLimCat, p: &LocalProperty, bound: SearchBound) -> BiequivPropertyReport {
    let k = h_object(c).expect("finitely complete categories have a self-indexing");
    let fiberwise = compcat_satisfies(&k, p, bound).verdict;
    let fib = k.types.fiber(k.terminal);
    let fiber_at_terminal = p.cat_check(&fib.cat, bound);
    let to_base = FinFunctor::new(
        fib.cat.clone(),
        k.base.clone(),
        fib.cat.objects().map(|o| k.ext(fib.dobj(o))).collect(),
        fib.cat.morphisms().map(|m| k.chi_top(fib.dmor(m))).collect(),
    )
    .expect("comprehension restricts to a functor on the terminal fiber");
    let equivalence = check_equivalence(&to_base).is_ok();
    let base = p.cat_check(&k.base, bound);
    let transported = !fiber_at_terminal.is_verified() || (equivalence && base.is_verified());
    let pass = fiberwise.is_verified() && transported;
    BiequivPropertyReport { property: p.name().into(), fiberwise, fiber_at_terminal, equivalence, base, pass }
}

// ---------------------------------------------------------------------------

/// Each pullback functor has a right adjoint.
pub fn lccc_check(c: &Arc<FinCat>, bound: SearchBound) -> Verdict {
    let sl = slices(c);
    for f in c.morphisms() {
        let Some(pb) = pullback_functor(c, f, &sl[c.dst(f).0], &sl[c.src(f).0]) else {
            return Verdict::cx(format!("missing pullbacks along `{}`", mname(c, f)));
        };
        match find_adjoint(&pb, Side::Right, bound) {
            Ok(_) => {}
            Err(AdjointError::NotFound { object }) => {
                return Verdict::cx(format!(
                    "pullback along `{}` has no right adjoint (no universal arrow at `{object}`)",
                    mname(c, f)
                ))
            }
            Err(AdjointError::SearchBoundExceeded { .. }) => {
                return Verdict::InconclusiveAtBound { bound: bound.max_morphisms }
            }
        }
    }
    Verdict::ok("every pullback functor has a right adjoint")
}

/// Rows of the classification table, weakest first.
pub const CLASSES: [(&str, &str); 7] = [
    ("finlim", "1, ×, =ext, Σ"),
    ("lccc", "1, ×, =ext, Σ, Π"),
    ("pretopos", "O, 1, ×, =ext, Σ, +, Quot"),
    ("arithmetic_pretopos", "O, 1, ×, =ext, Σ, +, Quot, ℕ"),
    ("pi_pretopos", "O, 1, ×, =ext, Σ, Π, +, Quot"),
    ("elementary_topos", "O, 1, ×, =ext, Σ, Π, +, Quot, Ω"),
    ("elementary_topos_nno", "O, 1, ×, =ext, Σ, Π, +, Quot, Ω, ℕ"),
];

pub fn signature(class: &str) -> Option<&'static str> {
    CLASSES.iter().find(|(c, _)| *c == class).map(|(_, s)| *s)
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassReport {
    pub finlim: Verdict,
    pub lccc: Verdict,
    pub pretopos: Verdict,
    pub arithmetic_pretopos: Verdict,
    pub pi_pretopos: Verdict,
    pub elementary_topos: Verdict,
    pub elementary_topos_nno: Verdict,
    /// The ingredients beyond the pretopos axioms.
    pub subobject_classifier: Verdict,
    pub nno: Verdict,
    /// The most specific class achieved, if any.
    pub class: Option<String>,
    pub signature: Option<String>,
}

impl ClassReport {
    pub fn flags(&self) -> [(&'static str, &Verdict); 7] {
        [
            ("finlim", &self.finlim),
            ("lccc", &self.lccc),
            ("pretopos", &self.pretopos),
            ("arithmetic_pretopos", &self.arithmetic_pretopos),
            ("pi_pretopos", &self.pi_pretopos),
            ("elementary_topos", &self.elementary_topos),
            ("elementary_topos_nno", &self.elementary_topos_nno),
        ]
    }

    pub fn flag(&self, class: &str) -> Option<&Verdict> {
        self.flags().into_iter().find(|(c, _)| *c == class).map(|(_, v)| v)
    }

    /// The implications between classes hold among the verified flags.
    pub fn is_monotone(&self) -> bool {
        let v = |x: &Verdict| x.is_verified();
        let implies = |a: bool, b: bool| !a || b;
        implies(v(&self.elementary_topos), v(&self.pretopos) && v(&self.lccc))
            && implies(v(&self.elementary_topos_nno), v(&self.elementary_topos) && v(&self.arithmetic_pretopos))
            && implies(v(&self.pi_pretopos), v(&self.pretopos) && v(&self.lccc))
            && implies(v(&self.arithmetic_pretopos), v(&self.pretopos))
            && implies(v(&self.lccc), v(&self.finlim))
            && implies(v(&self.pretopos), v(&self.finlim))
    }
}

fn not_finlim(reason: String) -> ClassReport {
    let cx = Verdict::cx(reason);
    ClassReport {
        finlim: cx.clone(),
        lccc: cx.clone(),
        pretopos: cx.clone(),
        arithmetic_pretopos: cx.clone(),
        pi_pretopos: cx.clone(),
        elementary_topos: cx.clone(),
        elementary_topos_nno: cx.clone(),
        subobject_classifier: cx.clone(),
        nno: cx,
        class: None,
        signature: None,
    }
}

pub fn classify(c: &FinLimCat, bound: SearchBound) -> ClassReport {
    let cat = &c.cat;
    let finlim = Verdict::ok("terminal object, binary products, equalizers and pullbacks");
    let lccc = lccc_check(cat, bound);
    let pretopos = pretopos().cat_check(cat, bound);
    let omega = LocalProperty::SubobjectClassifier.cat_check(cat, bound);
    let nno = LocalProperty::NnoParam.cat_check(cat, bound);
    let arithmetic_pretopos = Verdict::all([pretopos.clone(), nno.clone()]);
    let pi_pretopos = Verdict::all([pretopos.clone(), lccc.clone()]);
    // Ω first, so a failing topos flag names the missing classifier.
    let elementary_topos = Verdict::all([omega.clone(), pretopos.clone(), lccc.clone()]);
    let elementary_topos_nno = Verdict::all([elementary_topos.clone(), nno.clone()]);
    let mut report = ClassReport {
        finlim,
        lccc,
        pretopos,
        arithmetic_pretopos,
        pi_pretopos,
        elementary_topos,
        elementary_topos_nno,
        subobject_classifier: omega,
        nno,
        class: None,
        signature: None,
    };
    let best = ["elementary_topos_nno", "elementary_topos", "pi_pretopos", "arithmetic_pretopos", "pretopos", "lccc", "finlim"]
        .into_iter()
        .find(|cl| report.flag(cl).is_some_and(Verdict::is_verified));
    report.class = best.map(str::to_string);
    report.signature = best.and_then(signature).map(str::to_string);
    debug_assert!(report.is_monotone());
    report
}

/// [`classify`] for an arbitrary category; one without finite limits gets
/// a counterexample on every flag.
pub fn classify_cat(c: &Arc<FinCat>, bound: SearchBound) -> ClassReport {
    match FinLimCat::new(c.clone()) {
        Ok(fl) => classify(&fl, bound),
        Err(e) => not_finlim(e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, build};

    fn fl(p: crate::fincat::Presentation) -> FinLimCat {
        FinLimCat::new(build(p)).unwrap()
    }

    #[test]
    fn strict_initial_in_div6() {
        let v = check_local_property(&fl(fixtures::div6()), &LocalProperty::StrictInitial, SearchBound::default());
        assert!(v.witness().unwrap().contains("`1`"), "{v:?}");
        assert!(v.is_verified());
    }

    #[test]
    fn no_classifier_in_div6() {
        let v = check_local_property(&fl(fixtures::div6()), &LocalProperty::SubobjectClassifier, SearchBound::default());
        assert!(v.is_counterexample());
        assert!(v.witness().unwrap().contains("Sub(⊤) = Sub(`6`) has 4 elements"), "{v:?}");
    }

    #[test]
    fn one_is_everything() {
        let r = classify(&fl(fixtures::one()), SearchBound::default());
        for (n, v) in r.flags() {
            assert!(v.is_verified(), "{n}: {v:?}");
        }
        assert_eq!(r.signature.as_deref(), Some("O, 1, ×, =ext, Σ, Π, +, Quot, Ω, ℕ"));
    }

    #[test]
    fn div6_and_two_are_lccc_not_topos() {
        for p in [fixtures::two(), fixtures::div6()] {
            let r = classify(&fl(p), SearchBound::default());
            assert!(r.lccc.is_verified());
            assert!(r.pretopos.witness().unwrap().starts_with("disjoint"), "{:?}", r.pretopos);
            assert!(r.elementary_topos.witness().unwrap().starts_with("Sub(⊤)"), "{:?}", r.elementary_topos);
            assert_eq!(r.signature.as_deref(), Some("1, ×, =ext, Σ, Π"));
            assert!(r.is_monotone());
        }
    }

    #[test]
    fn m3_is_not_lccc() {
        let r = classify(&fl(fixtures::m3()), SearchBound::default());
        assert!(r.lccc.is_counterexample());
        assert_eq!(r.class.as_deref(), Some("finlim"));
        let v = LocalProperty::StableCoproducts.cat_check(&build(fixtures::m3()), SearchBound::default());
        assert!(v.is_counterexample());
    }

    #[test]
    fn closure_in_div6() {
        let c = fl(fixtures::div6());
        for p in [LocalProperty::StrictInitial, LocalProperty::StableCoproducts, LocalProperty::Exact] {
            let r = check_property_closure(&p, &c, SearchBound::default());
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn fiberwise_and_transport() {
        let c = fl(fixtures::div6());
        let r = extend_biequiv_check(&c, &LocalProperty::StrictInitial, SearchBound::default());
        assert!(r.pass && r.equivalence, "{r:?}");
        let k = h_object(&c).unwrap();
        let v = compcat_satisfies(&k, &LocalProperty::SubobjectClassifier, SearchBound::default()).verdict;
        assert!(v.is_counterexample());
    }

    #[test]
    fn registry_lookup() {
        assert_eq!(registry().len(), 11);
        assert_eq!(lookup("nno_param"), Some(LocalProperty::NnoParam));
        assert_eq!(conj(vec![LocalProperty::StrictInitial, LocalProperty::Exact]).name(), "conj(strict_initial, exact)");
    }
}
