//! Beck–Chevalley squares and their mates.
//!
//! A square is four functors
//!
//! ```text
//!        F1
//!   C1 ------> C2
//!   |          |
//!  G1          G2
//!   v          v
//!   C3 ------> C4
//!        F2
//! ```
//!
//! with a natural isomorphism `τ: G1;F2 ⇒ F1;G2`. Given left adjoints
//! `L1 ⊣ G1`, `L2 ⊣ G2` the mate is `F2;L2 ⇒ L1;F1`; given right adjoints
//! `G1 ⊣ R1`, `G2 ⊣ R2` it is `R1;F1 ⇒ F2;R2`.

use thiserror::Error;

use crate::fincat::{same_cat, Adjunction, FinFunctor, NatTrans};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MateSide {
    /// The adjunctions are `L1 ⊣ G1` and `L2 ⊣ G2`.
    Left,
    /// The adjunctions are `G1 ⊣ R1` and `G2 ⊣ R2`.
    Right,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BCSquareError {
    #[error("functors do not form a square")]
    Shape,
    #[error("filling transformation has the wrong boundary")]
    Filler,
    #[error("filling transformation is not invertible")]
    NotIso,
    #[error("adjunction does not contain the vertical functor")]
    Adjunction,
}

#[derive(Clone, Debug)]
pub struct BCSquare {
    pub f1: FinFunctor,
    pub g1: FinFunctor,
    pub g2: FinFunctor,
    pub f2: FinFunctor,
    pub tau: NatTrans,
    pub side: MateSide,
    pub adj1: Adjunction,
    pub adj2: Adjunction,
}

fn same(a: &FinFunctor, b: &FinFunctor) -> bool {
    a.object_map() == b.object_map()
        && a.morphism_map() == b.morphism_map()
        && same_cat(a.source(), b.source())
        && same_cat(a.target(), b.target())
}

impl BCSquare {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        f1: FinFunctor,
        g1: FinFunctor,
        g2: FinFunctor,
        f2: FinFunctor,
        tau: NatTrans,
        side: MateSide,
        adj1: Adjunction,
        adj2: Adjunction,
    ) -> Result<Self, BCSquareError> {
        if !same_cat(f1.source(), g1.source())
            || !same_cat(f1.target(), g2.source())
            || !same_cat(g1.target(), f2.source())
            || !same_cat(g2.target(), f2.target())
        {
            return Err(BCSquareError::Shape);
        }
        if !same(tau.source(), &g1.then(&f2)) || !same(tau.target(), &f1.then(&g2)) {
            return Err(BCSquareError::Filler);
        }
        if !tau.is_iso() {
            return Err(BCSquareError::NotIso);
        }
        let (v1, v2) = match side {
            MateSide::Left => (&adj1.right, &adj2.right),
            MateSide::Right => (&adj1.left, &adj2.left),
        };
        if !same(v1, &g1) || !same(v2, &g2) {
            return Err(BCSquareError::Adjunction);
        }
        Ok(BCSquare { f1, g1, g2, f2, tau, side, adj1, adj2 })
    }

    /// The mate transformation of the square.
    pub fn mate(&self) -> NatTrans {
        match self.side {
            MateSide::Left => self.left_mate(),
            MateSide::Right => self.right_mate(),
        }
    }

    /// `F2;L2 ⇒ L1;F1`, at `c`:
    /// `L2 F2 η1_c ; L2 τ_{L1 c} ; ε2_{F1 L1 c}`.
    fn left_mate(&self) -> NatTrans {
        let (l1, l2) = (&self.adj1.left, &self.adj2.left);
        let c2 = self.f1.target();
        let c3 = self.g1.target();
        let comps = c3
            .objects()
            .map(|c| {
                let l1c = l1.obj(c);
                c2.compose_all(&[
                    l2.mor(self.f2.mor(self.adj1.unit.at(c))),
                    l2.mor(self.tau.at(l1c)),
                    self.adj2.counit.at(self.f1.obj(l1c)),
                ])
            })
            .collect();
        NatTrans::new(self.f2.then(l2), l1.then(&self.f1), comps).expect("mate is natural")
    }

    /// `R1;F1 ⇒ F2;R2`, at `c`:
    /// `η2_{F1 R1 c} ; R2 τ⁻¹_{R1 c} ; R2 F2 ε1_c`.
    fn right_mate(&self) -> NatTrans {
        let (r1, r2) = (&self.adj1.right, &self.adj2.right);
        let c2 = self.f1.target();
        let c3 = self.g1.target();
        let tau_inv = self.tau.inverse().expect("filler is invertible");
        let comps = c3
            .objects()
            .map(|c| {
                let r1c = r1.obj(c);
                c2.compose_all(&[
                    self.adj2.unit.at(self.f1.obj(r1c)),
                    r2.mor(tau_inv.at(r1c)),
                    r2.mor(self.f2.mor(self.adj1.counit.at(c))),
                ])
            })
            .collect();
        NatTrans::new(r1.then(&self.f1), self.f2.then(r2), comps).expect("mate is natural")
    }
}

/// Whether the mate is invertible, together with the mate.
pub fn beck_chevalley(square: &BCSquare) -> (bool, NatTrans) {
    let mate = square.mate();
    (mate.is_iso(), mate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{find_adjoint, FinCat, SearchBound, Side};
    use std::sync::Arc;

    #[test]
    fn identity_square_is_beck_chevalley() {
        let c = Arc::new(FinCat::poset(&["1", "2", "3", "6"], &[("1", "2"), ("1", "3"), ("2", "6"), ("3", "6")]).unwrap());
        let id = FinFunctor::identity(c);
        let adj = Adjunction::identity(&id);
        let sq = BCSquare::new(id.clone(), id.clone(), id.clone(), id.clone(), NatTrans::identity(&id), MateSide::Left, adj.clone(), adj.clone())
            .unwrap();
        let (ok, mate) = beck_chevalley(&sq);
        assert!(ok);
        assert_eq!(mate.components(), NatTrans::identity(&id).components());
        let sq = BCSquare::new(id.clone(), id.clone(), id.clone(), id.clone(), NatTrans::identity(&id), MateSide::Right, adj.clone(), adj)
            .unwrap();
        assert!(beck_chevalley(&sq).0);
    }

    #[test]
    fn wrong_adjunction_is_rejected() {
        let c = Arc::new(FinCat::poset(&["0", "1"], &[("0", "1")]).unwrap());
        let one = Arc::new(FinCat::poset(&["*"], &[]).unwrap());
        let bang = FinFunctor::constant(c.clone(), one, crate::fincat::ObjId(0));
        let adj = find_adjoint(&bang, Side::Left, SearchBound::default()).unwrap();
        let id = FinFunctor::identity(c);
        let r = BCSquare::new(id.clone(), id.clone(), id.clone(), id.clone(), NatTrans::identity(&id), MateSide::Left, adj.clone(), adj);
        assert_eq!(r.unwrap_err(), BCSquareError::Adjunction);
    }
}
