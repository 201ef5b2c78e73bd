use thiserror::Error;

use super::{same_cat, FinCat, FinFunctor, MorId, NatTrans, ObjId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// Caps for searches whose cost grows with the size of the input.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBound {
    pub max_objects: usize,
    pub max_morphisms: usize,
    pub max_steps: usize,
}

impl Default for SearchBound {
    fn default() -> Self {
        SearchBound::from_budget(40)
    }
}

impl SearchBound {
    /// Derives all limits from a single morphism budget `n`.
    pub fn from_budget(n: usize) -> Self {
        SearchBound { max_objects: (n / 5).max(1), max_morphisms: n, max_steps: n.saturating_mul(50_000) }
    }

    pub fn admits(&self, c: &FinCat) -> bool {
        c.num_objects() <= self.max_objects && c.num_morphisms() <= self.max_morphisms
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AdjunctionError {
    #[error("functors do not form a round trip")]
    Endpoints,
    #[error("unit or counit has the wrong functors")]
    Transformations,
    #[error("triangle identity fails at `{0}`")]
    Triangle(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AdjointError {
    #[error("no adjoint: no universal arrow at `{object}`")]
    NotFound { object: String },
    #[error("search bound exceeded ({objects} objects, {morphisms} morphisms; limits {bound:?})")]
    SearchBoundExceeded { objects: usize, morphisms: usize, bound: SearchBound },
}

/// `left ⊣ right` with `left: C → D`, `unit: id ⇒ left;right` and
/// `counit: right;left ⇒ id`.
#[derive(Clone, Debug)]
pub struct Adjunction {
    pub left: FinFunctor,
    pub right: FinFunctor,
    pub unit: NatTrans,
    pub counit: NatTrans,
}

impl Adjunction {
    pub fn new(left: FinFunctor, right: FinFunctor, unit: NatTrans, counit: NatTrans) -> Result<Self, AdjunctionError> {
        let (c, d) = (left.source().clone(), left.target().clone());
        if !same_cat(right.source(), &d) || !same_cat(right.target(), &c) {
            return Err(AdjunctionError::Endpoints);
        }
        let lr = left.then(&right);
        let rl = right.then(&left);
        let same = |a: &FinFunctor, b: &FinFunctor| {
            a.object_map() == b.object_map()
                && a.morphism_map() == b.morphism_map()
                && same_cat(a.source(), b.source())
                && same_cat(a.target(), b.target())
        };
        if !same(unit.source(), &FinFunctor::identity(c.clone()))
            || !same(unit.target(), &lr)
            || !same(counit.source(), &rl)
            || !same(counit.target(), &FinFunctor::identity(d.clone()))
        {
            return Err(AdjunctionError::Transformations);
        }
        for x in c.objects() {
            let lx = left.obj(x);
            if d.compose(left.mor(unit.at(x)), counit.at(lx)) != d.id(lx) {
                return Err(AdjunctionError::Triangle(c.object_name(x).into()));
            }
        }
        for y in d.objects() {
            let ry = right.obj(y);
            if c.compose(unit.at(ry), right.mor(counit.at(y))) != c.id(ry) {
                return Err(AdjunctionError::Triangle(d.object_name(y).into()));
            }
        }
        Ok(Adjunction { left, right, unit, counit })
    }

    /// The identity adjunction on a category.
    pub fn identity(f: &FinFunctor) -> Self {
        let id = NatTrans::identity(f);
        Adjunction { left: f.clone(), right: f.clone(), unit: id.clone(), counit: id }
    }

    /// `|hom(Lx, y)| = |hom(x, Ry)|` for all `x, y`.
    pub fn hom_cardinalities_match(&self) -> bool {
        let (c, d) = (self.left.source(), self.left.target());
        c.objects().all(|x| {
            d.objects().all(|y| d.hom(self.left.obj(x), y).len() == c.hom(x, self.right.obj(y)).len())
        })
    }
}

/// Finds an adjoint of `f` on the requested side: `Side::Right` looks for
/// `R` with `f ⊣ R`, `Side::Left` for `L` with `L ⊣ f`.
///
/// Thin categories go through the Galois-connection condition with no size
/// cap. Otherwise universal arrows are searched pointwise, subject to `bound`.
pub fn find_adjoint(f: &FinFunctor, side: Side, bound: SearchBound) -> Result<Adjunction, AdjointError> {
    let (c, d) = (f.source(), f.target());
    let thin = c.is_thin() && d.is_thin();
    if !thin {
        for k in [c, d] {
            if !bound.admits(k) {
                return Err(AdjointError::SearchBoundExceeded {
                    objects: k.num_objects(),
                    morphisms: k.num_morphisms(),
                    bound,
                });
            }
        }
    }
    let mut steps = 0usize;
    let mut tick = |n: usize| -> Result<(), AdjointError> {
        steps += n;
        if !thin && steps > bound.max_steps {
            return Err(AdjointError::SearchBoundExceeded {
                objects: c.num_objects().max(d.num_objects()),
                morphisms: c.num_morphisms().max(d.num_morphisms()),
                bound,
            });
        }
        Ok(())
    };
    match side {
        Side::Right => right_adjoint(f, thin, &mut tick),
        Side::Left => left_adjoint(f, thin, &mut tick),
    }
}

fn unique<I: IntoIterator<Item = MorId>>(it: I) -> Option<MorId> {
    let mut it = it.into_iter();
    let first = it.next()?;
    it.next().is_none().then_some(first)
}

/// Terminal objects of the comma categories `F ↓ y`.
fn right_adjoint(
    f: &FinFunctor,
    thin: bool,
    tick: &mut dyn FnMut(usize) -> Result<(), AdjointError>,
) -> Result<Adjunction, AdjointError> {
    let (c, d) = (f.source().clone(), f.target().clone());
    let mut ry = Vec::new();
    let mut eps = Vec::new();
    for y in d.objects() {
        let found = if thin {
            // greatest x with F x ≤ y
            let below: Vec<ObjId> = c.objects().filter(|&x| d.leq(f.obj(x), y)).collect();
            tick(below.len() * below.len())?;
            below
                .iter()
                .copied()
                .find(|&x| below.iter().all(|&x2| c.leq(x2, x)))
                .map(|x| (x, d.hom(f.obj(x), y)[0]))
        } else {
            let arrows: Vec<(ObjId, MorId)> =
                c.objects().flat_map(|x| d.hom(f.obj(x), y).iter().map(move |&e| (x, e))).collect();
            let mut found = None;
            for &(x, e) in &arrows {
                tick(arrows.len())?;
                let universal = arrows.iter().all(|&(x2, e2)| {
                    c.hom(x2, x).iter().filter(|&&u| d.compose(f.mor(u), e) == e2).count() == 1
                });
                if universal {
                    found = Some((x, e));
                    break;
                }
            }
            found
        };
        let (x, e) = found.ok_or_else(|| AdjointError::NotFound { object: d.object_name(y).into() })?;
        ry.push(x);
        eps.push(e);
    }
    let mut rm = Vec::new();
    for v in d.morphisms() {
        let (y, y2) = (d.src(v), d.dst(v));
        let target = d.compose(eps[y.0], v);
        let u = unique(c.hom(ry[y.0], ry[y2.0]).iter().copied().filter(|&u| d.compose(f.mor(u), eps[y2.0]) == target))
            .expect("universal arrow yields a unique factorization");
        rm.push(u);
    }
    let r = FinFunctor::new(d.clone(), c.clone(), ry, rm).expect("right adjoint is functorial");
    let unit_comps: Vec<MorId> = c
        .objects()
        .map(|x| {
            let fx = f.obj(x);
            unique(c.hom(x, r.obj(fx)).iter().copied().filter(|&u| d.compose(f.mor(u), eps[fx.0]) == d.id(fx)))
                .expect("unit component exists")
        })
        .collect();
    let unit = NatTrans::new(FinFunctor::identity(c.clone()), f.then(&r), unit_comps).expect("unit is natural");
    let counit = NatTrans::new(r.then(f), FinFunctor::identity(d.clone()), eps).expect("counit is natural");
    Ok(Adjunction::new(f.clone(), r, unit, counit).expect("universal arrows give an adjunction"))
}

/// Initial objects of the comma categories `y ↓ F`.
fn left_adjoint(
    f: &FinFunctor,
    thin: bool,
    tick: &mut dyn FnMut(usize) -> Result<(), AdjointError>,
) -> Result<Adjunction, AdjointError> {
    let (c, d) = (f.source().clone(), f.target().clone());
    let mut ly = Vec::new();
    let mut eta = Vec::new();
    for y in d.objects() {
        let found = if thin {
            // least x with y ≤ F x
            let above: Vec<ObjId> = c.objects().filter(|&x| d.leq(y, f.obj(x))).collect();
            tick(above.len() * above.len())?;
            above
                .iter()
                .copied()
                .find(|&x| above.iter().all(|&x2| c.leq(x, x2)))
                .map(|x| (x, d.hom(y, f.obj(x))[0]))
        } else {
            let arrows: Vec<(ObjId, MorId)> =
                c.objects().flat_map(|x| d.hom(y, f.obj(x)).iter().map(move |&e| (x, e))).collect();
            let mut found = None;
            for &(x, e) in &arrows {
                tick(arrows.len())?;
                let universal = arrows.iter().all(|&(x2, e2)| {
                    c.hom(x, x2).iter().filter(|&&u| d.compose(e, f.mor(u)) == e2).count() == 1
                });
                if universal {
                    found = Some((x, e));
                    break;
                }
            }
            found
        };
        let (x, e) = found.ok_or_else(|| AdjointError::NotFound { object: d.object_name(y).into() })?;
        ly.push(x);
        eta.push(e);
    }
    let mut lm = Vec::new();
    for v in d.morphisms() {
        let (y, y2) = (d.src(v), d.dst(v));
        let target = d.compose(v, eta[y2.0]);
        let u = unique(c.hom(ly[y.0], ly[y2.0]).iter().copied().filter(|&u| d.compose(eta[y.0], f.mor(u)) == target))
            .expect("universal arrow yields a unique factorization");
        lm.push(u);
    }
    let l = FinFunctor::new(d.clone(), c.clone(), ly, lm).expect("left adjoint is functorial");
    let counit_comps: Vec<MorId> = c
        .objects()
        .map(|x| {
            let fx = f.obj(x);
            unique(c.hom(l.obj(fx), x).iter().copied().filter(|&u| d.compose(eta[fx.0], f.mor(u)) == d.id(fx)))
                .expect("counit component exists")
        })
        .collect();
    let unit = NatTrans::new(FinFunctor::identity(d.clone()), l.then(f), eta).expect("unit is natural");
    let counit = NatTrans::new(f.then(&l), FinFunctor::identity(c.clone()), counit_comps).expect("counit is natural");
    Ok(Adjunction::new(l, f.clone(), unit, counit).expect("universal arrows give an adjunction"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::sync::Arc;

    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    fn div6() -> Arc<FinCat> {
        Arc::new(FinCat::poset(&["1", "2", "3", "6"], &[("1", "2"), ("1", "3"), ("2", "6"), ("3", "6")]).unwrap())
    }

    #[test]
    fn meet_with_two_has_implication_as_right_adjoint() {
        let c = div6();
        let val = |x: ObjId| c.object_name(x).parse::<u32>().unwrap();
        let obj = |n: u32| c.object(&n.to_string()).unwrap();
        let meet2 = FinFunctor::from_object_map(c.clone(), c.clone(), c.objects().map(|x| obj(gcd(val(x), 2))).collect()).unwrap();
        let adj = find_adjoint(&meet2, Side::Right, SearchBound::default()).unwrap();
        for y in [1u32, 2, 3, 6] {
            // oracle: largest z dividing 6 with gcd(z, 2) | y
            let imp = [1u32, 2, 3, 6].into_iter().filter(|&z| y % gcd(z, 2) == 0).max().unwrap();
            assert_eq!(val(adj.right.obj(obj(y))), imp);
        }
        assert!(adj.hom_cardinalities_match());
    }

    #[test]
    fn left_adjoint_to_bang_is_initial() {
        let c = div6();
        let one = Arc::new(FinCat::poset(&["*"], &[]).unwrap());
        let bang = FinFunctor::constant(c.clone(), one, ObjId(0));
        let adj = find_adjoint(&bang, Side::Left, SearchBound::default()).unwrap();
        assert_eq!(c.object_name(adj.left.obj(ObjId(0))), "1");
    }

    #[test]
    fn identity_is_self_adjoint() {
        let c = div6();
        let id = FinFunctor::identity(c);
        let adj = find_adjoint(&id, Side::Left, SearchBound::default()).unwrap();
        assert_eq!(adj.left, id);
    }

    #[test]
    fn bound_exceeded_is_not_not_found() {
        // an idempotent monoid: not thin, so the general path and its cap apply
        let c = Arc::new(
            super::super::validate_category(
                &super::super::Presentation::new(["a"]).morphism("e", "a", "a").compose("e", "e", "e"),
            )
            .unwrap(),
        );
        let id = FinFunctor::identity(c);
        let r = find_adjoint(&id, Side::Right, SearchBound { max_objects: 1, max_morphisms: 1, max_steps: 10 });
        assert!(matches!(r, Err(AdjointError::SearchBoundExceeded { .. })));
        let ok = find_adjoint(&id, Side::Right, SearchBound::default());
        assert!(ok.is_ok());
    }
}
