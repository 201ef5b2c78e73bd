//! Pseudo morphisms of comprehension categories and their 2-cells.

use std::sync::Arc;

use thiserror::Error;

use super::CompCat;
use crate::displayed::{DMorId, DObjId, DispFunctor, DispNatTrans};
use crate::fincat::{find_limit, FinFunctor, LimitShape, MorId, NatTrans};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MorphismError {
    #[error("base functor does not preserve the terminal object")]
    Terminal,
    #[error("displayed functor sends the Cartesian morphism `{0}` to a non-Cartesian one")]
    NotCartesian(String),
    #[error("comprehension comparison is malformed: {0}")]
    Comparison(String),
    #[error("comprehension comparison is not invertible at `{0}`")]
    NotPseudo(String),
    #[error("2-cell data is malformed: {0}")]
    Cell(String),
    #[error("the pasted composites disagree at `{0}`")]
    Pasting(String),
}

/// `(F, F̄, F_χ)`: a base functor, a Cartesian displayed functor over it, and
/// an invertible comparison `χ ; Arr(F) ⇒ F̄ ; χ'` whose component at `A`
/// has top edge `F(Γ.A) → FΓ.F̄A`.
#[derive(Clone, Debug)]
pub struct CompCatMorphism {
    pub source: Arc<CompCat>,
    pub target: Arc<CompCat>,
    pub functor: FinFunctor,
    pub dfunctor: DispFunctor,
    pub comparison: DispNatTrans,
}

impl CompCatMorphism {
    /// Validates the data; `tops[A]` is the top edge of the comparison at `A`.
    pub fn new(
        source: Arc<CompCat>,
        target: Arc<CompCat>,
        functor: FinFunctor,
        dfunctor: DispFunctor,
        tops: &[MorId],
    ) -> Result<Self, MorphismError> {
        let img = functor.obj(source.terminal);
        let is_terminal = find_limit(&target.base, LimitShape::Terminal)
            .ok()
            .flatten()
            .is_some_and(|w| target.base.find_iso(img, w.apex).is_some());
        if !is_terminal {
            return Err(MorphismError::Terminal);
        }
        if let Some(f) = dfunctor.cartesian_failure() {
            return Err(MorphismError::NotCartesian(source.types.dmorphism_name(f).into()));
        }
        let along = source.comprehension.then(&source.arrows.functor(&functor, &target.arrows));
        let around = dfunctor.then(&target.comprehension);
        let comps = source
            .types
            .dobjects()
            .map(|a| {
                target.arrows.triangle(along.dobj(a), around.dobj(a), tops[a.0]).ok_or_else(|| {
                    MorphismError::Comparison(format!("no triangle at `{}`", source.types.dobject_name(a)))
                })
            })
            .collect::<Result<Vec<DMorId>, _>>()?;
        let comparison = DispNatTrans::new(NatTrans::identity(&functor), along, around, comps)
            .map_err(|e| MorphismError::Comparison(e.to_string()))?;
        for a in source.types.dobjects() {
            if !target.base.is_iso(tops[a.0]) {
                return Err(MorphismError::NotPseudo(source.types.dobject_name(a).into()));
            }
        }
        Ok(CompCatMorphism { source, target, functor, dfunctor, comparison })
    }

    /// The identity morphism.
    pub fn identity(k: &Arc<CompCat>) -> Self {
        let functor = FinFunctor::identity(k.base.clone());
        let tops: Vec<MorId> = k.types.dobjects().map(|a| k.base.id(k.ext(a))).collect();
        CompCatMorphism::new(k.clone(), k.clone(), functor, DispFunctor::identity(&k.types), &tops)
            .expect("identity is a morphism")
    }

    /// Top edge of the comparison at `A`.
    pub fn comparison_top(&self, a: DObjId) -> MorId {
        self.target.arrows.top(self.comparison.at(a))
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &CompCatMorphism) -> CompCatMorphism {
        let functor = self.functor.then(&next.functor);
        let dfunctor = self.dfunctor.then(&next.dfunctor);
        let tops: Vec<MorId> = self
            .source
            .types
            .dobjects()
            .map(|a| {
                next.target
                    .base
                    .compose(next.functor.mor(self.comparison_top(a)), next.comparison_top(self.dfunctor.dobj(a)))
            })
            .collect();
        CompCatMorphism::new(self.source.clone(), next.target.clone(), functor, dfunctor, &tops)
            .expect("composite of morphisms is a morphism")
    }
}

/// `(τ, τ̄)` between two morphisms with the same endpoints.
#[derive(Clone, Debug)]
pub struct CompCat2Cell {
    pub source: CompCatMorphism,
    pub target: CompCatMorphism,
    pub tau: NatTrans,
    pub tau_bar: DispNatTrans,
}

impl CompCat2Cell {
    /// Validates the pasting condition
    /// `τ_{Γ.A} ; Gχ_A = Fχ_A ; χ'(τ̄_A)` on top edges.
    pub fn new(
        source: CompCatMorphism,
        target: CompCatMorphism,
        tau: NatTrans,
        tau_bar_components: Vec<DMorId>,
    ) -> Result<Self, MorphismError> {
        let tau_bar = DispNatTrans::new(tau.clone(), source.dfunctor.clone(), target.dfunctor.clone(), tau_bar_components)
            .map_err(|e| MorphismError::Cell(e.to_string()))?;
        let k = &source.source;
        let l = &source.target;
        for a in k.types.dobjects() {
            let lhs = l.base.compose(tau.at(k.ext(a)), target.comparison_top(a));
            let rhs = l.base.compose(source.comparison_top(a), l.chi_top(tau_bar.at(a)));
            if lhs != rhs {
                return Err(MorphismError::Pasting(k.types.dobject_name(a).into()));
            }
        }
        Ok(CompCat2Cell { source, target, tau, tau_bar })
    }

    pub fn identity(m: &CompCatMorphism) -> Self {
        CompCat2Cell::new(m.clone(), m.clone(), NatTrans::identity(&m.functor), DispNatTrans::identity(&m.dfunctor).components().to_vec())
            .expect("identity 2-cell")
    }

    /// Vertical composite.
    pub fn then(&self, next: &CompCat2Cell) -> CompCat2Cell {
        let l = &self.source.target;
        let comps = self
            .tau_bar
            .components()
            .iter()
            .zip(next.tau_bar.components())
            .map(|(&x, &y)| l.types.dcompose(x, y))
            .collect();
        CompCat2Cell::new(self.source.clone(), next.target.clone(), self.tau.then(&next.tau), comps)
            .expect("vertical composite of 2-cells")
    }
}
