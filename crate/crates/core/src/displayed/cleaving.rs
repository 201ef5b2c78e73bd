//! Cartesian morphisms, cleavings and the substitution functors they induce.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use serde::Serialize;

use super::{DMorId, DObjId, DispCat};
use crate::fincat::{FinFunctor, MorId, NatTrans};

/// Why a displayed morphism is not Cartesian: for the base morphism `g` and
/// the displayed morphism `h` over `g ; f`, there are `count` factorizations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CartesianFailure {
    pub g: String,
    pub h: String,
    pub factorizations: usize,
}

/// Exhaustive Cartesianness check.
pub fn is_cartesian(d: &DispCat, fbar: DMorId) -> Result<(), CartesianFailure> {
    let c = d.base();
    let m = d.dmorphism(fbar);
    let (f, x) = (m.over, c.src(m.over));
    for w in c.objects() {
        for &g in c.hom(w, x) {
            let gf = c.compose(g, f);
            for &e in d.over(w) {
                for &h in d.dhom(gf, e, m.dst) {
                    let count = d.dhom(g, e, m.src).iter().filter(|&&k| d.dcompose(k, fbar) == h).count();
                    if count != 1 {
                        return Err(CartesianFailure {
                            g: c.morphism_name(g).into(),
                            h: d.dmorphism_name(h).into(),
                            factorizations: count,
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// The unique `k` over `g` with `k ; fbar = h`, for Cartesian `fbar`.
pub fn factor_through(d: &DispCat, fbar: DMorId, g: MorId, h: DMorId) -> Option<DMorId> {
    let src = d.dmorphism(h).src;
    let mut it = d.dhom(g, src, d.dmorphism(fbar).src).iter().filter(|&&k| d.dcompose(k, fbar) == h);
    let k = *it.next()?;
    it.next().is_none().then_some(k)
}

/// A base morphism and a displayed object over its codomain with no
/// Cartesian lift.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MissingLift {
    pub morphism: String,
    pub dobject: String,
}

/// A chosen Cartesian lift for every `(f, ȳ)`.
#[derive(Debug)]
pub struct Cleaving {
    disp: Arc<DispCat>,
    lifts: HashMap<(MorId, DObjId), (DObjId, DMorId)>,
    subst: Vec<OnceLock<FinFunctor>>,
}

impl Clone for Cleaving {
    fn clone(&self) -> Self {
        Cleaving::from_lifts(self.disp.clone(), self.lifts.clone())
    }
}

/// Chooses, for every base morphism and displayed object over its codomain,
/// the earliest Cartesian lift (earliest domain, then earliest morphism).
pub fn find_cleaving(d: &Arc<DispCat>) -> Result<Cleaving, MissingLift> {
    let c = d.base();
    let mut lifts = HashMap::new();
    for f in c.morphisms() {
        let x = c.src(f);
        for &ybar in d.over(c.dst(f)) {
            let found = d
                .over(x)
                .iter()
                .flat_map(|&xbar| d.dhom(f, xbar, ybar).iter().map(move |&fbar| (xbar, fbar)))
                .find(|&(_, fbar)| is_cartesian(d, fbar).is_ok());
            match found {
                Some(l) => {
                    lifts.insert((f, ybar), l);
                }
                None => {
                    return Err(MissingLift {
                        morphism: c.morphism_name(f).into(),
                        dobject: d.dobject_name(ybar).into(),
                    })
                }
            }
        }
    }
    Ok(Cleaving::from_lifts(d.clone(), lifts))
}

impl Cleaving {
    fn from_lifts(disp: Arc<DispCat>, lifts: HashMap<(MorId, DObjId), (DObjId, DMorId)>) -> Self {
        let subst = (0..disp.base().num_morphisms()).map(|_| OnceLock::new()).collect();
        Cleaving { disp, lifts, subst }
    }

    /// Wraps externally chosen lifts after checking each is Cartesian.
    pub fn from_chosen(
        disp: Arc<DispCat>,
        lifts: HashMap<(MorId, DObjId), (DObjId, DMorId)>,
    ) -> Result<Self, MissingLift> {
        let c = disp.base().clone();
        for f in c.morphisms() {
            for &ybar in disp.over(c.dst(f)) {
                let ok = lifts.get(&(f, ybar)).is_some_and(|&(xbar, fbar)| {
                    let m = disp.dmorphism(fbar);
                    m.over == f && m.src == xbar && m.dst == ybar && is_cartesian(&disp, fbar).is_ok()
                });
                if !ok {
                    return Err(MissingLift { morphism: c.morphism_name(f).into(), dobject: disp.dobject_name(ybar).into() });
                }
            }
        }
        Ok(Cleaving::from_lifts(disp, lifts))
    }

    pub fn disp(&self) -> &Arc<DispCat> {
        &self.disp
    }

    /// The chosen lift of `f` at `ybar`: its domain and the Cartesian morphism.
    pub fn lift(&self, f: MorId, ybar: DObjId) -> (DObjId, DMorId) {
        self.lifts[&(f, ybar)]
    }

    /// Every stored lift passes the Cartesian check.
    pub fn verify(&self) -> bool {
        self.lifts.values().all(|&(_, fbar)| is_cartesian(&self.disp, fbar).is_ok())
    }

    /// `f^*: D[y] → D[x]` for `f: x → y` (cached).
    pub fn substitution(&self, f: MorId) -> &FinFunctor {
        self.subst[f.0].get_or_init(|| self.build_substitution(f))
    }

    fn build_substitution(&self, f: MorId) -> FinFunctor {
        let d = &*self.disp;
        let c = d.base();
        let (x, y) = (c.src(f), c.dst(f));
        let (fy, fx) = (d.fiber(y), d.fiber(x));
        let on_objects = fy.cat.objects().map(|o| fx.obj(self.lift(f, fy.dobj(o)).0)).collect();
        let on_morphisms = fy
            .cat
            .morphisms()
            .map(|m| {
                let v = fy.dmor(m);
                let mv = d.dmorphism(v);
                let (_, l1) = self.lift(f, mv.src);
                let (_, l2) = self.lift(f, mv.dst);
                let target = d.dcompose(l1, v);
                fx.mor(factor_through(d, l2, c.id(x), target).expect("Cartesian lift factors uniquely"))
            })
            .collect();
        FinFunctor::new(fy.cat.clone(), fx.cat.clone(), on_objects, on_morphisms).expect("substitution is a functor")
    }

    /// The comparison `id^* ⇒ Id` on `D[x]`, whose components are the chosen
    /// lifts of the identity.
    pub fn identity_comparison(&self, x: crate::fincat::ObjId) -> NatTrans {
        let d = &*self.disp;
        let c = d.base();
        let fx = d.fiber(x);
        let comps = fx.cat.objects().map(|o| fx.mor(self.lift(c.id(x), fx.dobj(o)).1)).collect();
        NatTrans::new(self.substitution(c.id(x)).clone(), FinFunctor::identity(fx.cat.clone()), comps)
            .expect("identity comparison is natural")
    }

    /// The comparison `g^* ; f^* ⇒ (f ; g)^*` for `f: x → y`, `g: y → z`.
    pub fn composite_comparison(&self, f: MorId, g: MorId) -> NatTrans {
        let d = &*self.disp;
        let c = d.base();
        let fg = c.compose(f, g);
        let x = c.src(f);
        let (fz, fx) = (d.fiber(c.dst(g)), d.fiber(x));
        let iterated = self.substitution(g).then(self.substitution(f));
        let comps = fz
            .cat
            .objects()
            .map(|o| {
                let zbar = fz.dobj(o);
                let (ybar, lg) = self.lift(g, zbar);
                let (_, lf) = self.lift(f, ybar);
                let (_, lfg) = self.lift(fg, zbar);
                fx.mor(factor_through(d, lfg, c.id(x), d.dcompose(lf, lg)).expect("Cartesian lift factors uniquely"))
            })
            .collect();
        NatTrans::new(iterated, self.substitution(fg).clone(), comps).expect("composite comparison is natural")
    }
}

#[cfg(test)]
mod tests {
    use super::super::arrow_displayed;
    use super::*;
    use crate::fincat::FinCat;

    fn div6() -> Arc<FinCat> {
        Arc::new(FinCat::poset(&["1", "2", "3", "6"], &[("1", "2"), ("1", "3"), ("2", "6"), ("3", "6")]).unwrap())
    }

    #[test]
    fn pullback_squares_are_cartesian() {
        let c = div6();
        let a = arrow_displayed(&c);
        let f = c.morphism("le_2_6").unwrap();
        let g3 = a.dobject_of(c.morphism("le_3_6").unwrap());
        let g1 = a.dobject_of(c.morphism("le_1_2").unwrap());
        let g2 = a.dobject_of(c.morphism("id_2").unwrap());
        // over le_2_6, from (1→2) to (3→6): apex 1 = gcd(2,3), Cartesian
        let sq = a.disp.dhom(f, g1, g3)[0];
        assert!(is_cartesian(&a.disp, sq).is_ok());
        // from (1→2) to (6→6): apex 1 is strictly below the meet 2
        let g6 = a.dobject_of(c.morphism("id_6").unwrap());
        let bad = a.disp.dhom(f, g1, g6)[0];
        assert!(is_cartesian(&a.disp, bad).is_err());
        let good = a.disp.dhom(f, g2, g6)[0];
        assert!(is_cartesian(&a.disp, good).is_ok());
    }

    #[test]
    fn v_shape_has_no_cleaving() {
        let c = Arc::new(FinCat::poset(&["a", "b", "c"], &[("a", "c"), ("b", "c")]).unwrap());
        let a = arrow_displayed(&c);
        let err = find_cleaving(&a.disp).unwrap_err();
        assert_eq!(err.morphism, "le_a_c");
        assert_eq!(err.dobject, "le_b_c");
    }

    #[test]
    fn substitution_is_meet_and_pseudofunctorial() {
        let c = div6();
        let a = arrow_displayed(&c);
        let cl = find_cleaving(&a.disp).unwrap();
        assert!(cl.verify());
        let f = c.morphism("le_2_6").unwrap();
        let s = cl.substitution(f);
        let f6 = a.disp.fiber(c.object("6").unwrap());
        let f2 = a.disp.fiber(c.object("2").unwrap());
        let img = s.obj(f6.obj(a.dobject_of(c.morphism("le_3_6").unwrap())));
        assert_eq!(a.arrow(f2.dobj(img)), c.morphism("le_1_2").unwrap());
        for x in c.objects() {
            assert!(cl.identity_comparison(x).is_iso());
        }
        let cmp = cl.composite_comparison(c.morphism("le_1_2").unwrap(), f);
        assert!(cmp.is_iso());
    }
}
