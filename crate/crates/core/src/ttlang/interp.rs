use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use serde_json::{json, Value};

use super::syntax::{free_in_type, parse, subst_type, CtxRef, Decl, Telescope, TermExpr, TypeExpr};
use super::{TTError, TypeErrorKind as Kind};
use crate::compcat::{CompCat, Term};
use crate::displayed::{DMorId, DObjId};
use crate::fincat::{find_limit, Cone, LimitShape, LimitWitness, MorId, ObjId, SearchBound};
use crate::typeformers::{
    check_dfl, check_pi_types, ext_id_type, pi_type, sigma_type, strong_sigma_comparison, PiStructure, SigmaStructure,
    UnitStructure,
};

/// A DFL comprehension category with its chosen structure, plus atomic
/// types over the terminal context available by name.
pub struct Model {
    pub k: Arc<CompCat>,
    pub unit: UnitStructure,
    pub sigma: SigmaStructure,
    pub pi: Option<PiStructure>,
    pub atoms: BTreeMap<String, DObjId>,
}

impl Model {
    /// Runs the DFL check; `Pi` is available iff the Π check passes too.
    pub fn new(k: Arc<CompCat>, bound: SearchBound) -> Result<Self, TTError> {
        let r = check_dfl(&k, bound);
        if !r.passed() {
            return Err(TTError::Model(r.verdict.first_failure.unwrap_or_else(|| "not DFL".into())));
        }
        let unit = r.unit.map_err(|e| TTError::Model(e.to_string()))?;
        let sigma = r.sigma.map_err(|e| TTError::Model(e.to_string()))?;
        let pi = check_pi_types(&k, bound).ok();
        let atoms = k.types.over(k.terminal).iter().map(|&a| (k.types.dobject_name(a).to_string(), a)).collect();
        Ok(Model { k, unit, sigma, pi, atoms })
    }

    /// The strong-Σ comparison `Γ.A.B → Γ.Σ_A B` and its inverse.
    fn sigma_comparison(&self, a: DObjId, b: DObjId) -> (MorId, MorId) {
        if let Some(e) = self.sigma.strong.iter().find(|e| e.a == a && e.b == b) {
            return (e.comparison, e.inverse);
        }
        let c = strong_sigma_comparison(&self.k, &self.sigma, a, b);
        (c, self.k.base.inverse(c).expect("strong Σ"))
    }
}

#[derive(Clone, Debug)]
pub enum Denotation {
    Context(ObjId),
    Type { ctx: ObjId, ty: DObjId },
    Term(Term),
    Check { lhs: Term, rhs: Term, equal: bool },
}

#[derive(Clone, Debug)]
pub struct Entry {
    pub label: String,
    pub line: usize,
    pub denotation: Denotation,
}

/// A vertical comparison `X → s^*Y` witnessing that interpreting a type
/// directly agrees with substituting its interpretation.
#[derive(Clone, Debug)]
pub struct SubstComparison {
    pub what: String,
    pub along: MorId,
    pub vertical: Option<DMorId>,
    pub candidates: usize,
    pub invertible: bool,
}

#[derive(Clone, Debug)]
pub struct EqInstance {
    pub ctx: ObjId,
    pub ty: DObjId,
    pub lhs: Term,
    pub rhs: Term,
}

#[derive(Clone, Debug)]
pub struct SigmaInstance {
    pub ctx: ObjId,
    pub a: DObjId,
    pub b: DObjId,
    pub sigma: DObjId,
}

#[derive(Clone, Debug, Default)]
pub struct Interpretation {
    pub entries: Vec<Entry>,
    pub comparisons: Vec<SubstComparison>,
    pub eq_types: Vec<EqInstance>,
    pub sigma_types: Vec<SigmaInstance>,
}

impl Interpretation {
    /// Results of the `check` judgments, in order.
    pub fn checks(&self) -> Vec<bool> {
        self.entries
            .iter()
            .filter_map(|e| match e.denotation {
                Denotation::Check { equal, .. } => Some(equal),
                _ => None,
            })
            .collect()
    }

    pub fn comparisons_invertible(&self) -> bool {
        self.comparisons.iter().all(|c| c.invertible)
    }

    /// An inhabited identity type forces its two sides to be equal.
    pub fn eq_reflection(&self, m: &Model) -> Vec<bool> {
        self.eq_types
            .iter()
            .map(|e| m.k.terms(e.ty).is_empty() || e.lhs.section == e.rhs.section)
            .collect()
    }

    /// Every section of every Σ-type met is the pair of its projections.
    pub fn sigma_eta(&self, m: &Model) -> Vec<bool> {
        let k = &m.k;
        self.sigma_types
            .iter()
            .map(|s| {
                let (comp, inv) = m.sigma_comparison(s.a, s.b);
                k.terms(s.sigma).iter().all(|t| {
                    let u = k.base.compose(t.section, inv);
                    let a = k.base.compose(u, k.proj(s.b));
                    let (_, lift) = k.cleaving.lift(a, s.b);
                    let snd = k.pullback_mediator(lift, u, k.base.id(s.ctx));
                    k.base.compose_all(&[snd, k.chi_top(lift), comp]) == t.section
                })
            })
            .collect()
    }

    pub fn to_json(&self, m: &Model) -> Value {
        let k = &m.k;
        let term = |t: &Term| {
            json!({"ctx": k.base.object_name(t.ctx), "type": k.types.dobject_name(t.ty), "section": k.base.morphism_name(t.section)})
        };
        let entries: Vec<Value> = self
            .entries
            .iter()
            .map(|e| {
                let d = match &e.denotation {
                    Denotation::Context(x) => json!({"context": k.base.object_name(*x)}),
                    Denotation::Type { ctx, ty } => {
                        json!({"context": k.base.object_name(*ctx), "type": k.types.dobject_name(*ty)})
                    }
                    Denotation::Term(t) => json!({"term": term(t)}),
                    Denotation::Check { lhs, rhs, equal } => json!({"lhs": term(lhs), "rhs": term(rhs), "equal": equal}),
                };
                json!({"decl": e.label, "line": e.line, "denotation": d})
            })
            .collect();
        json!({
            "entries": entries,
            "substitution_comparisons": self.comparisons.len(),
            "comparisons_invertible": self.comparisons_invertible(),
            "eq_reflection": self.eq_reflection(m).iter().all(|&b| b),
            "sigma_eta": self.sigma_eta(m).iter().all(|&b| b),
        })
    }
}

/// A context: its telescope, the chain `⋄ = Γ_0, …, Γ_n` of extensions and
/// the type added at each step.
#[derive(Clone, Debug)]
struct Cx {
    vars: Telescope,
    chain: Vec<ObjId>,
    tys: Vec<DObjId>,
}

impl Cx {
    fn obj(&self) -> ObjId {
        *self.chain.last().expect("non-empty chain")
    }

    fn prefix(&self, n: usize) -> Cx {
        Cx { vars: self.vars[..n].to_vec(), chain: self.chain[..=n].to_vec(), tys: self.tys[..n].to_vec() }
    }
}

/// Introduction forms only check against their own former; atomic types
/// are left to the model.
fn intro_fits(e: &TermExpr, head: &TypeExpr) -> bool {
    match (e, head) {
        (_, TypeExpr::Named(..)) => true,
        (TermExpr::Tt, h) => matches!(h, TypeExpr::Unit),
        (TermExpr::Pair(..), h) => matches!(h, TypeExpr::Prod(..) | TypeExpr::Sigma(..)),
        (TermExpr::Refl(_), h) => matches!(h, TypeExpr::Eq(..)),
        (TermExpr::Lam(_), h) => matches!(h, TypeExpr::Pi(..)),
        _ => true,
    }
}

fn mismatch(detail: impl Into<String>) -> TTError {
    TTError::ty(Kind::TypeMismatch, detail)
}

struct Interp<'m> {
    m: &'m Model,
    ctxs: HashMap<String, Cx>,
    aliases: HashMap<String, TypeExpr>,
    terms: HashMap<String, (Cx, TypeExpr, Term)>,
    out: Interpretation,
}

impl<'m> Interp<'m> {
    fn k(&self) -> &'m CompCat {
        &self.m.k
    }

    fn empty(&self) -> Cx {
        Cx { vars: vec![], chain: vec![self.k().terminal], tys: vec![] }
    }

    fn extend(&mut self, cx: &Cx, x: &str, t: &TypeExpr) -> Result<Cx, TTError> {
        let a = self.ty(cx, t)?;
        let mut next = cx.clone();
        next.vars.push((x.to_string(), t.clone()));
        next.chain.push(self.k().ext(a));
        next.tys.push(a);
        Ok(next)
    }

    fn ctx_of(&mut self, r: &CtxRef) -> Result<Cx, TTError> {
        match r {
            CtxRef::Named(n, p) => {
                self.ctxs.get(n).cloned().ok_or_else(|| TTError::Unbound { name: n.clone(), line: p.line, col: p.col })
            }
            CtxRef::Inline(vars) => self.build(vars),
        }
    }

    fn build(&mut self, vars: &Telescope) -> Result<Cx, TTError> {
        let mut cx = self.empty();
        for (x, t) in vars {
            cx = self.extend(&cx, x, t)?;
        }
        Ok(cx)
    }

    /// Unfolds type aliases at the head.
    fn head(&self, t: &TypeExpr) -> TypeExpr {
        let mut t = t.clone();
        while let TypeExpr::Named(n, _) = &t {
            match self.aliases.get(n) {
                Some(def) => t = def.clone(),
                None => break,
            }
        }
        t
    }

    fn deep(&self, t: &TypeExpr) -> TypeExpr {
        match self.head(t) {
            TypeExpr::Prod(a, b) => TypeExpr::Prod(Box::new(self.deep(&a)), Box::new(self.deep(&b))),
            TypeExpr::Sigma(x, a, b) => TypeExpr::Sigma(x, Box::new(self.deep(&a)), Box::new(self.deep(&b))),
            TypeExpr::Pi(x, a, b) => TypeExpr::Pi(x, Box::new(self.deep(&a)), Box::new(self.deep(&b))),
            other => other,
        }
    }

    // -- types -------------------------------------------------------------

    fn ty(&mut self, cx: &Cx, t: &TypeExpr) -> Result<DObjId, TTError> {
        let k = self.k();
        let g = cx.obj();
        match self.head(t) {
            TypeExpr::Unit => Ok(self.m.unit.at(g)),
            TypeExpr::Prod(a, b) => {
                let (a, b) = (self.ty(cx, &a)?, self.ty(cx, &b)?);
                let w = self.product(g, a, b)?;
                Ok(k.types.fiber(g).dobj(w.apex))
            }
            TypeExpr::Eq(t, u) => {
                let (ta, tt) = self.synth(cx, &t)?;
                let uu = self.check(cx, &u, &ta)?;
                let (e, _) = ext_id_type(k, &self.m.unit, &tt, &uu).map_err(|e| mismatch(e.to_string()))?;
                self.out.eq_types.push(EqInstance { ctx: g, ty: e, lhs: tt, rhs: uu });
                Ok(e)
            }
            TypeExpr::Sigma(x, a, b) => {
                let (ad, bd) = self.dependent(cx, &x, &a, &b)?;
                let s = sigma_type(k, &self.m.sigma, ad, bd);
                self.out.sigma_types.push(SigmaInstance { ctx: g, a: ad, b: bd, sigma: s });
                Ok(s)
            }
            TypeExpr::Pi(x, a, b) => {
                let pi = self.m.pi.as_ref().ok_or_else(|| TTError::ty(Kind::FormerUnavailable, "the model has no Π-types"))?;
                let (ad, bd) = self.dependent(cx, &x, &a, &b)?;
                Ok(pi_type(k, pi, ad, bd))
            }
            TypeExpr::Named(n, _) => {
                let a0 = *self.m.atoms.get(&n).ok_or_else(|| mismatch(format!("unknown type `{n}`")))?;
                if g == k.terminal {
                    return Ok(a0);
                }
                let bang = k.base.hom(g, k.terminal)[0];
                Ok(k.cleaving.lift(bang, a0).0)
            }
        }
    }

    fn dependent(&mut self, cx: &Cx, x: &str, a: &TypeExpr, b: &TypeExpr) -> Result<(DObjId, DObjId), TTError> {
        let cx2 = self.extend(cx, x, a)?;
        Ok((*cx2.tys.last().expect("just extended"), self.ty(&cx2, b)?))
    }

    fn product(&self, g: ObjId, a: DObjId, b: DObjId) -> Result<LimitWitness, TTError> {
        let fib = self.k().types.fiber(g);
        find_limit(&fib.cat, LimitShape::BinaryProduct(fib.obj(a), fib.obj(b)))
            .ok()
            .flatten()
            .ok_or_else(|| TTError::ty(Kind::FormerUnavailable, "fiber lacks a binary product"))
    }

    // -- terms as vertical maps out of 1 -----------------------------------

    fn to_vertical(&self, t: &Term) -> Result<DMorId, TTError> {
        self.k()
            .term_to_vertical(self.m.unit.at(t.ctx), t)
            .ok_or_else(|| TTError::ty(Kind::NotASection, "term has no vertical counterpart"))
    }

    fn from_vertical(&self, g: ObjId, v: DMorId) -> Term {
        let k = self.k();
        let section = k.base.compose(self.m.unit.inverses[g.0], k.chi_top(v));
        Term { ctx: g, ty: k.types.dmorphism(v).dst, section }
    }

    /// The Cartesian morphism `X → Y` over `s`, through an invertible
    /// vertical comparison `X → s^*Y`.
    fn comparison(&mut self, x: DObjId, s: MorId, y: DObjId, what: String) -> Result<DMorId, TTError> {
        let k = self.k();
        let (sy, lift) = k.subst_type(s, y).map_err(|e| mismatch(e.to_string()))?;
        let cands = k.types.dhom(k.base.id(k.base.src(s)), x, sy);
        let v = cands.iter().copied().find(|&v| k.types.vertical_inverse(v).is_some());
        self.out.comparisons.push(SubstComparison {
            what: what.clone(),
            along: s,
            vertical: v,
            candidates: cands.len(),
            invertible: v.is_some(),
        });
        let v = v.ok_or_else(|| mismatch(format!("no invertible substitution comparison for {what}")))?;
        Ok(k.types.dcompose(v, lift))
    }

    /// `Γ_n → Γ_m`, the composite of the projections.
    fn weakening(&self, cx: &Cx, m: usize) -> MorId {
        let k = self.k();
        let mut w = k.base.id(cx.obj());
        for j in (m..cx.tys.len()).rev() {
            w = k.base.compose(w, k.proj(cx.tys[j]));
        }
        w
    }

    /// Moves `t` (over the codomain of `s`) to a term of `X` along `s`.
    fn reindex(&mut self, x: DObjId, s: MorId, t: &Term, what: String) -> Result<Term, TTError> {
        let k = self.k();
        if k.base.is_identity(s) && x == t.ty {
            return Ok(*t);
        }
        let c = self.comparison(x, s, t.ty, what)?;
        let delta = k.base.src(s);
        let section = k.pullback_mediator(c, k.base.compose(s, t.section), k.base.id(delta));
        Ok(Term { ctx: delta, ty: x, section })
    }

    fn synth(&mut self, cx: &Cx, e: &TermExpr) -> Result<(TypeExpr, Term), TTError> {
        let k = self.k();
        let g = cx.obj();
        match e {
            TermExpr::Var(n, p) => {
                if let Some(i) = cx.vars.iter().rposition(|(x, _)| x == n) {
                    let te = cx.vars[i].1.clone();
                    let x = self.ty(cx, &te)?;
                    let p = self.weakening(cx, i + 1);
                    let w = k.base.compose(p, k.proj(cx.tys[i]));
                    let c = self.comparison(x, w, cx.tys[i], format!("variable `{n}`"))?;
                    let section = k.pullback_mediator(c, p, k.base.id(g));
                    return Ok((te, Term { ctx: g, ty: x, section }));
                }
                let (cx0, te, t) = self
                    .terms
                    .get(n)
                    .cloned()
                    .ok_or_else(|| TTError::Unbound { name: n.clone(), line: p.line, col: p.col })?;
                let m = cx0.vars.len();
                if m > cx.vars.len() || cx.vars[..m] != cx0.vars[..] {
                    return Err(mismatch(format!("`{n}` is not available in this context")));
                }
                let x = self.ty(cx, &te)?;
                let w = self.weakening(cx, m);
                let t = self.reindex(x, w, &t, format!("term `{n}`"))?;
                Ok((te, t))
            }
            TermExpr::Tt => {
                let one = self.m.unit.at(g);
                Ok((TypeExpr::Unit, Term { ctx: g, ty: one, section: self.m.unit.inverses[g.0] }))
            }
            TermExpr::Pair(a, b) => {
                let (ta, a) = self.synth(cx, a)?;
                let (tb, b) = self.synth(cx, b)?;
                let t = self.pair_prod(g, &a, &b)?;
                Ok((TypeExpr::Prod(Box::new(ta), Box::new(tb)), t))
            }
            TermExpr::Fst(inner) | TermExpr::Snd(inner) => {
                let first = matches!(e, TermExpr::Fst(_));
                let (te, t) = self.synth(cx, inner)?;
                match self.head(&te) {
                    TypeExpr::Prod(ta, tb) => {
                        let (ad, bd) = (self.ty(cx, &ta)?, self.ty(cx, &tb)?);
                        let w = self.product(g, ad, bd)?;
                        let fib = k.types.fiber(g);
                        if w.apex != fib.obj(t.ty) {
                            return Err(mismatch("projection from a non-product"));
                        }
                        let v = fib.mor(self.to_vertical(&t)?);
                        let leg = w.legs[if first { 0 } else { 1 }];
                        let out = self.from_vertical(g, fib.dmor(fib.cat.compose(v, leg)));
                        Ok((if first { *ta } else { *tb }, out))
                    }
                    TypeExpr::Sigma(x, ta, tb) => {
                        let (ad, bd) = self.dependent(cx, &x, &ta, &tb)?;
                        let (_, inv) = self.m.sigma_comparison(ad, bd);
                        let u = k.base.compose(t.section, inv);
                        let a = k.base.compose(u, k.proj(bd));
                        if first {
                            return Ok((*ta, Term { ctx: g, ty: ad, section: a }));
                        }
                        let te = subst_type(&tb, &x, &TermExpr::Fst(inner.clone()));
                        let xd = self.ty(cx, &te)?;
                        let c = self.comparison(xd, a, bd, format!("second projection of `{inner}`"))?;
                        let section = k.pullback_mediator(c, u, k.base.id(g));
                        Ok((te, Term { ctx: g, ty: xd, section }))
                    }
                    other => Err(mismatch(format!("`{inner}` has type `{other}`, not a pair type"))),
                }
            }
            TermExpr::Refl(inner) => {
                let te = TypeExpr::Eq(inner.clone(), inner.clone());
                let (_, t) = self.synth(cx, inner)?;
                let t = self.refl(g, &t)?;
                Ok((te, t))
            }
            TermExpr::Lam(_) => Err(mismatch("cannot infer the type of `lam`; annotate it with a Pi type")),
            TermExpr::App(f, u) => {
                let (tf, ft) = self.synth(cx, f)?;
                let TypeExpr::Pi(x, ta, tb) = self.head(&tf) else {
                    return Err(mismatch(format!("`{f}` has type `{tf}`, not a Pi type")));
                };
                let ut = self.check(cx, u, &ta)?;
                let te = subst_type(&tb, &x, u);
                let xd = self.ty(cx, &te)?;
                let (ad, bd) = self.dependent(cx, &x, &ta, &tb)?;
                let body = self.unlam(g, &ft, ad, bd)?;
                let c = self.comparison(xd, ut.section, bd, format!("application of `{f}`"))?;
                let section = k.pullback_mediator(c, k.base.compose(ut.section, body.section), k.base.id(g));
                Ok((te, Term { ctx: g, ty: xd, section }))
            }
        }
    }

    fn check(&mut self, cx: &Cx, e: &TermExpr, expected: &TypeExpr) -> Result<Term, TTError> {
        let k = self.k();
        let g = cx.obj();
        match (e, self.head(expected)) {
            (TermExpr::Pair(a, b), TypeExpr::Prod(ta, tb)) => {
                let a = self.check(cx, a, &ta)?;
                let b = self.check(cx, b, &tb)?;
                self.pair_prod(g, &a, &b)
            }
            (TermExpr::Pair(a, b), TypeExpr::Sigma(x, ta, tb)) => {
                let at = self.check(cx, a, &ta)?;
                let bt = self.check(cx, b, &subst_type(&tb, &x, a))?;
                let (ad, bd) = self.dependent(cx, &x, &ta, &tb)?;
                let c = self.comparison(bt.ty, at.section, bd, format!("pair with first component `{a}`"))?;
                let (comp, _) = self.m.sigma_comparison(ad, bd);
                let section = k.base.compose_all(&[bt.section, k.chi_top(c), comp]);
                Ok(Term { ctx: g, ty: sigma_type(k, &self.m.sigma, ad, bd), section })
            }
            (TermExpr::Lam(body), TypeExpr::Pi(x, ta, tb)) => {
                if self.m.pi.is_none() {
                    return Err(TTError::ty(Kind::FormerUnavailable, "the model has no Π-types"));
                }
                let cx2 = self.extend(cx, &x, &ta)?;
                let bt = self.check(&cx2, body, &tb)?;
                let ad = *cx2.tys.last().expect("just extended");
                self.lam(g, ad, &bt)
            }
            (intro, head) if !intro_fits(intro, &head) => {
                Err(mismatch(format!("`{e}` cannot have type `{expected}`")))
            }
            _ => {
                let (te, t) = self.synth(cx, e)?;
                let want = self.ty(cx, expected)?;
                if t.ty != want {
                    return Err(mismatch(format!("`{e}` has type `{te}`, expected `{expected}`")));
                }
                Ok(t)
            }
        }
    }

    fn pair_prod(&self, g: ObjId, a: &Term, b: &Term) -> Result<Term, TTError> {
        let fib = self.k().types.fiber(g);
        let w = self.product(g, a.ty, b.ty)?;
        let cone = Cone {
            apex: fib.obj(self.m.unit.at(g)),
            legs: vec![fib.mor(self.to_vertical(a)?), fib.mor(self.to_vertical(b)?)],
        };
        let m = w.mediator(&fib.cat, &cone).ok_or_else(|| mismatch("no pairing"))?;
        Ok(self.from_vertical(g, fib.dmor(m)))
    }

    fn refl(&self, g: ObjId, t: &Term) -> Result<Term, TTError> {
        let k = self.k();
        let (e, incl) = ext_id_type(k, &self.m.unit, t, t).map_err(|e| mismatch(e.to_string()))?;
        let fib = k.types.fiber(g);
        let v = fib.mor(self.to_vertical(t)?);
        let one = fib.obj(self.m.unit.at(g));
        let m = fib
            .cat
            .hom(one, fib.obj(e))
            .iter()
            .copied()
            .find(|&m| fib.cat.compose(m, fib.mor(incl)) == v)
            .ok_or_else(|| mismatch("reflexivity does not factor through the identity type"))?;
        Ok(self.from_vertical(g, fib.dmor(m)))
    }

    /// Transpose of a term of `B` over `Γ.A` across `π_A^* ⊣ Π_A`.
    fn lam(&self, g: ObjId, a: DObjId, body: &Term) -> Result<Term, TTError> {
        let k = self.k();
        let pi = self.m.pi.as_ref().expect("checked by caller");
        let adj = &pi.adjunctions[a.0];
        let (fg, fa) = (k.types.fiber(g), k.types.fiber(k.ext(a)));
        let one_g = fg.obj(self.m.unit.at(g));
        let one_a = fa.obj(self.m.unit.at(k.ext(a)));
        let j = fa.cat.hom(adj.left.obj(one_g), one_a)[0];
        let gm = fa.cat.compose(j, fa.mor(self.to_vertical(body)?));
        let tr = fg.cat.compose(adj.unit.at(one_g), adj.right.mor(gm));
        Ok(self.from_vertical(g, fg.dmor(tr)))
    }

    /// The inverse transpose: a term of `Π_A B` back to a term of `B` over `Γ.A`.
    fn unlam(&self, g: ObjId, f: &Term, a: DObjId, b: DObjId) -> Result<Term, TTError> {
        let k = self.k();
        let pi = self.m.pi.as_ref().ok_or_else(|| TTError::ty(Kind::FormerUnavailable, "the model has no Π-types"))?;
        let adj = &pi.adjunctions[a.0];
        let (fg, fa) = (k.types.fiber(g), k.types.fiber(k.ext(a)));
        let one_g = fg.obj(self.m.unit.at(g));
        let one_a = fa.obj(self.m.unit.at(k.ext(a)));
        let phi = fg.mor(self.to_vertical(f)?);
        let gm = fa.cat.compose(adj.left.mor(phi), adj.counit.at(fa.obj(b)));
        let l1 = adj.left.obj(one_g);
        let jinv = fa
            .cat
            .hom(one_a, l1)
            .iter()
            .copied()
            .find(|&m| fa.cat.is_iso(m))
            .ok_or_else(|| mismatch("weakening does not preserve the unit type"))?;
        Ok(self.from_vertical(k.ext(a), fa.dmor(fa.cat.compose(jinv, gm))))
    }

    // -- declarations ------------------------------------------------------

    fn decl(&mut self, d: &Decl) -> Result<Denotation, TTError> {
        let k = self.k();
        match d {
            Decl::Ctx { name, vars, .. } => {
                let cx = self.build(vars)?;
                let x = cx.obj();
                self.ctxs.insert(name.clone(), cx);
                Ok(Denotation::Context(x))
            }
            Decl::Type { name, ctx, ty, .. } => {
                let cx = self.ctx_of(ctx)?;
                let a = self.ty(&cx, ty)?;
                // Weakening: interpreting in a longer context agrees with
                // substituting along the projections.
                let mut free = HashSet::new();
                free_in_type(&self.deep(ty), &mut free);
                for m in 0..cx.vars.len() {
                    let names: HashSet<&String> = cx.vars[..m].iter().map(|(x, _)| x).collect();
                    if free.iter().all(|x| names.contains(x)) {
                        let short = cx.prefix(m);
                        let y = self.ty(&short, ty)?;
                        self.comparison(a, self.weakening(&cx, m), y, format!("`{name}` weakened from {m} variables"))?;
                    }
                }
                self.aliases.insert(name.clone(), ty.clone());
                Ok(Denotation::Type { ctx: cx.obj(), ty: a })
            }
            Decl::Term { name, ty, ctx, body, .. } => {
                let cx = self.ctx_of(ctx)?;
                let t = self.check(&cx, body, ty)?;
                if !k.is_section(t.ty, t.section) {
                    return Err(TTError::ty(Kind::NotASection, format!("`{name}` does not denote a section")));
                }
                self.terms.insert(name.clone(), (cx, ty.clone(), t));
                Ok(Denotation::Term(t))
            }
            Decl::Check { lhs, rhs, ty, ctx, .. } => {
                let cx = self.ctx_of(ctx)?;
                let l = self.check(&cx, lhs, ty)?;
                let r = self.check(&cx, rhs, ty)?;
                Ok(Denotation::Check { lhs: l, rhs: r, equal: l.section == r.section })
            }
        }
    }
}

/// Interprets declarations in order; the first failure aborts with the
/// offending declaration as its location.
pub fn interpret(decls: &[Decl], model: &Model) -> Result<Interpretation, TTError> {
    let mut it = Interp {
        m: model,
        ctxs: HashMap::new(),
        aliases: HashMap::new(),
        terms: HashMap::new(),
        out: Interpretation::default(),
    };
    for d in decls {
        let label = d.label();
        let line = d.pos().line;
        let denotation = it.decl(d).map_err(|e| match e {
            TTError::Type { kind, detail, .. } => TTError::Type { kind, location: format!("{label} (line {line})"), detail },
            other => other,
        })?;
        it.out.entries.push(Entry { label, line, denotation });
    }
    Ok(it.out)
}

pub fn interpret_source(src: &str, model: &Model) -> Result<Interpretation, TTError> {
    interpret(&parse(src)?, model)
}

/// Decides `check` judgment `judgment` after the declarations `decls`.
pub fn check_equal(model: &Model, decls: &[Decl], judgment: &Decl) -> Result<bool, TTError> {
    if !matches!(judgment, Decl::Check { .. }) {
        return Err(mismatch("not an equality judgment"));
    }
    let mut all = decls.to_vec();
    all.push(judgment.clone());
    let interp = interpret(&all, model)?;
    Ok(*interp.checks().last().expect("judgment was interpreted"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::biequiv::{h_object, FinLimCat};
    use crate::fixtures::{self, build};

    fn model(p: crate::fincat::Presentation) -> Model {
        let c = FinLimCat::new(build(p)).unwrap();
        Model::new(Arc::new(h_object(&c).unwrap()), SearchBound::default()).unwrap()
    }

    #[test]
    fn unit_term_is_the_unique_section() {
        let m = model(fixtures::div6());
        let i = interpret_source("term t : Unit in (x : Unit) := tt", &m).unwrap();
        let Denotation::Term(t) = i.entries[0].denotation else { panic!() };
        assert_eq!(m.k.terms(t.ty), vec![t]);
    }

    #[test]
    fn eq_of_equal_terms_is_unit() {
        let m = model(fixtures::div6());
        let i = interpret_source("type A in () := Eq tt tt\ntype U in () := Unit", &m).unwrap();
        let (Denotation::Type { ty: a, .. }, Denotation::Type { ty: u, .. }) = (&i.entries[0].denotation, &i.entries[1].denotation)
        else {
            panic!()
        };
        assert!(m.k.types.find_vertical_iso(*a, *u).is_some());
    }

    #[test]
    fn lambda_and_beta() {
        let m = model(fixtures::div6());
        let src = "\
            term f : Pi (x : Unit) Unit in () := lam tt\n\
            check app f tt == tt : Unit in ()\n\
            check fst (pair tt (refl tt)) == tt : Unit in ()\n";
        let i = interpret_source(src, &m).unwrap();
        assert_eq!(i.checks(), vec![true, true]);
        assert!(i.comparisons_invertible());
    }

    #[test]
    fn sigma_pairs_and_projections() {
        let m = model(fixtures::two());
        let src = "\
            ctx G := (x : Unit, y : Prod(Unit, Unit))\n\
            type S in G := Sigma (z : Unit) (Eq x z)\n\
            term p : S in G := pair x (refl x)\n\
            check fst p == x : Unit in G\n\
            term q : Eq (fst p) x in G := snd p\n";
        let i = interpret_source(src, &m).unwrap();
        assert_eq!(i.checks(), vec![true]);
        assert!(i.sigma_eta(&m).iter().all(|&b| b));
        assert!(i.eq_reflection(&m).iter().all(|&b| b));
        assert!(i.comparisons_invertible());
        assert!(!i.comparisons.is_empty());
    }

    #[test]
    fn errors_name_the_declaration() {
        let m = model(fixtures::div6());
        match interpret_source("ctx G := ()\nterm t : Unit in G := pair tt tt", &m) {
            Err(TTError::Type { kind: Kind::TypeMismatch, location, .. }) => assert_eq!(location, "term t (line 2)"),
            other => panic!("{other:?}"),
        }
    }
}
