//! The arrow (codomain) displayed category.

use std::collections::HashMap;
use std::sync::Arc;

use super::{DMorId, DMorphism, DObjId, DObject, DispCat, DispFunctor, DispNatTrans};
use crate::fincat::{FinCat, FinFunctor, MorId, NatTrans, ObjId, Slice};

/// `Arr(C)` together with the data identifying its displayed objects with
/// arrows of `C` and its displayed morphisms with commuting squares.
#[derive(Clone, Debug)]
pub struct ArrowCat {
    pub disp: Arc<DispCat>,
    arrows: Vec<MorId>,
    tops: Vec<MorId>,
    by_arrow: HashMap<MorId, DObjId>,
    squares: HashMap<(MorId, DObjId, DObjId, MorId), DMorId>,
}

/// Displayed objects over `y` are morphisms into `y`; displayed morphisms
/// over `f` are commuting squares `h ; g2 = g1 ; f`.
pub fn arrow_displayed(c: &Arc<FinCat>) -> ArrowCat {
    let mut dobjects = Vec::new();
    let mut arrows = Vec::new();
    for y in c.objects() {
        for g in c.morphisms().filter(|&g| c.dst(g) == y) {
            dobjects.push(DObject { name: c.morphism_name(g).to_string(), over: y });
            arrows.push(g);
        }
    }
    let by_arrow: HashMap<MorId, DObjId> = arrows.iter().enumerate().map(|(i, &g)| (g, DObjId(i))).collect();
    let mut dmorphisms = Vec::new();
    let mut tops = Vec::new();
    let mut squares = HashMap::new();
    let mut didentity = vec![DMorId(0); arrows.len()];
    for f in c.morphisms() {
        let (y1, y2) = (c.src(f), c.dst(f));
        for (i, &g1) in arrows.iter().enumerate().filter(|(_, &g)| c.dst(g) == y1) {
            let gf = c.compose(g1, f);
            for (j, &g2) in arrows.iter().enumerate().filter(|(_, &g)| c.dst(g) == y2) {
                for &h in c.hom(c.src(g1), c.src(g2)) {
                    if c.compose(h, g2) != gf {
                        continue;
                    }
                    let id = DMorId(dmorphisms.len());
                    let is_id = i == j && c.is_identity(f) && c.is_identity(h);
                    let name = if is_id {
                        didentity[i] = id;
                        format!("id_{}", c.morphism_name(g1))
                    } else {
                        format!("{}/{}:{}->{}", c.morphism_name(h), c.morphism_name(f), c.morphism_name(g1), c.morphism_name(g2))
                    };
                    dmorphisms.push(DMorphism { name, over: f, src: DObjId(i), dst: DObjId(j) });
                    tops.push(h);
                    squares.insert((f, DObjId(i), DObjId(j), h), id);
                }
            }
        }
    }
    let disp = DispCat::from_parts(c.clone(), dobjects, dmorphisms.clone(), didentity, |u, v| {
        let (mu, mv) = (&dmorphisms[u.0], &dmorphisms[v.0]);
        squares
            .get(&(c.compose(mu.over, mv.over), mu.src, mv.dst, c.compose(tops[u.0], tops[v.0])))
            .copied()
    })
    .expect("arrow construction yields a displayed category");
    ArrowCat { disp: Arc::new(disp), arrows, tops, by_arrow, squares }
}

impl ArrowCat {
    pub fn base(&self) -> &Arc<FinCat> {
        self.disp.base()
    }

    /// The arrow a displayed object stands for.
    pub fn arrow(&self, d: DObjId) -> MorId {
        self.arrows[d.0]
    }

    /// The top edge of a square.
    pub fn top(&self, f: DMorId) -> MorId {
        self.tops[f.0]
    }

    pub fn dobject_of(&self, g: MorId) -> DObjId {
        self.by_arrow[&g]
    }

    /// The square over `f` from `a` to `b` with top edge `h`, if it commutes.
    pub fn square(&self, f: MorId, a: DObjId, b: DObjId, h: MorId) -> Option<DMorId> {
        self.squares.get(&(f, a, b, h)).copied()
    }

    /// The vertical triangle `h: a → b` over `id`, if it commutes.
    pub fn triangle(&self, a: DObjId, b: DObjId, h: MorId) -> Option<DMorId> {
        let c = self.base();
        self.square(c.id(self.disp.over_of(a)), a, b, h)
    }

    /// The comparison `Arr(C)[x] → C/x`: an arrow into `x` is a slice
    /// object and a vertical square is a triangle.
    pub fn fiber_to_slice(&self, x: ObjId, slice: &Slice) -> FinFunctor {
        let fib = self.disp.fiber(x);
        let on_objects = fib
            .cat
            .objects()
            .map(|o| slice.object_of(self.arrow(fib.dobj(o))).expect("arrow into the base object"))
            .collect::<Vec<_>>();
        let on_morphisms = fib
            .cat
            .morphisms()
            .map(|m| {
                let (s, t) = (fib.cat.src(m), fib.cat.dst(m));
                slice.morphism_of(on_objects[s.0], on_objects[t.0], self.top(fib.dmor(m))).expect("vertical squares are triangles")
            })
            .collect();
        FinFunctor::new(fib.cat.clone(), slice.cat.clone(), on_objects, on_morphisms).expect("fiber comparison is a functor")
    }

    /// `Arr(F)`: arrows and squares are mapped by `F`.
    pub fn functor(&self, f: &FinFunctor, target: &ArrowCat) -> DispFunctor {
        let on_dobjects = self.disp.dobjects().map(|a| target.dobject_of(f.mor(self.arrow(a)))).collect::<Vec<_>>();
        let on_dmorphisms = self
            .disp
            .dmorphisms()
            .map(|k| {
                let m = self.disp.dmorphism(k);
                target
                    .square(f.mor(m.over), on_dobjects[m.src.0], on_dobjects[m.dst.0], f.mor(self.top(k)))
                    .expect("functors send commuting squares to commuting squares")
            })
            .collect();
        DispFunctor::new(f.clone(), self.disp.clone(), target.disp.clone(), on_dobjects, on_dmorphisms)
            .expect("arrow functor is a displayed functor")
    }

    /// `Arr(τ)`: at an arrow `g: a → y` the square from `F g` to `G g` with
    /// top `τ_a` over `τ_y`.
    pub fn transformation(&self, tau: &NatTrans, target: &ArrowCat) -> DispNatTrans {
        let (fa, ga) = (self.functor(tau.source(), target), self.functor(tau.target(), target));
        let c = self.base();
        let comps = self
            .disp
            .dobjects()
            .map(|a| {
                let g = self.arrow(a);
                target
                    .square(tau.at(c.dst(g)), fa.dobj(a), ga.dobj(a), tau.at(c.src(g)))
                    .expect("naturality square commutes")
            })
            .collect();
        DispNatTrans::new(tau.clone(), fa, ga, comps).expect("arrow transformation is natural")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arrow_of_two() {
        let c = Arc::new(FinCat::poset(&["0", "1"], &[("0", "1")]).unwrap());
        let a = arrow_displayed(&c);
        assert_eq!(a.disp.over(c.object("0").unwrap()).len(), 1);
        assert_eq!(a.disp.over(c.object("1").unwrap()).len(), 2);
    }

    #[test]
    fn arrow_of_div6_over_top() {
        let c = Arc::new(FinCat::poset(&["1", "2", "3", "6"], &[("1", "2"), ("1", "3"), ("2", "6"), ("3", "6")]).unwrap());
        let a = arrow_displayed(&c);
        assert_eq!(a.disp.over(c.object("6").unwrap()).len(), 4);
        let (total, proj) = a.disp.total_category();
        assert_eq!(total.num_objects(), 9);
        for m in total.morphisms() {
            assert_eq!(proj.mor(m), a.disp.dmorphism(DMorId(m.0)).over);
        }
    }
}
