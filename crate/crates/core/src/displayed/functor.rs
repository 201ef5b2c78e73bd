use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use super::cleaving::is_cartesian;
use super::{DMorId, DObjId, DispCat};
use crate::fincat::{same_cat, FinFunctor, NatTrans};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DispFunctorError {
    #[error("base functor does not match the displayed categories' bases")]
    Base,
    #[error("map sizes do not match")]
    Size,
    #[error("`{0}` is not sent over its image")]
    Over(String),
    #[error("displayed identity of `{0}` is not preserved")]
    Identity(String),
    #[error("displayed composite of `{0}` then `{1}` is not preserved")]
    Composition(String, String),
    #[error("component at `{0}` lies over the wrong morphism")]
    Component(String),
    #[error("displayed naturality fails at `{0}`")]
    Naturality(String),
}

/// A displayed functor over a base functor.
#[derive(Clone, Debug)]
pub struct DispFunctor {
    pub over: FinFunctor,
    source: Arc<DispCat>,
    target: Arc<DispCat>,
    on_dobjects: Vec<DObjId>,
    on_dmorphisms: Vec<DMorId>,
}

impl DispFunctor {
    pub fn new(
        over: FinFunctor,
        source: Arc<DispCat>,
        target: Arc<DispCat>,
        on_dobjects: Vec<DObjId>,
        on_dmorphisms: Vec<DMorId>,
    ) -> Result<Self, DispFunctorError> {
        if !same_cat(over.source(), source.base()) || !same_cat(over.target(), target.base()) {
            return Err(DispFunctorError::Base);
        }
        if on_dobjects.len() != source.num_dobjects() || on_dmorphisms.len() != source.num_dmorphisms() {
            return Err(DispFunctorError::Size);
        }
        for a in source.dobjects() {
            if target.over_of(on_dobjects[a.0]) != over.obj(source.over_of(a)) {
                return Err(DispFunctorError::Over(source.dobject_name(a).into()));
            }
        }
        for f in source.dmorphisms() {
            let (m, img) = (source.dmorphism(f), target.dmorphism(on_dmorphisms[f.0]));
            if img.over != over.mor(m.over) || img.src != on_dobjects[m.src.0] || img.dst != on_dobjects[m.dst.0] {
                return Err(DispFunctorError::Over(source.dmorphism_name(f).into()));
            }
        }
        for a in source.dobjects() {
            if on_dmorphisms[source.did(a).0] != target.did(on_dobjects[a.0]) {
                return Err(DispFunctorError::Identity(source.dobject_name(a).into()));
            }
        }
        for f in source.dmorphisms() {
            let b = source.dmorphism(f).dst;
            for &g in source.dmorphisms_from(b) {
                let lhs = on_dmorphisms[source.dcompose(f, g).0];
                if target.dcompose(on_dmorphisms[f.0], on_dmorphisms[g.0]) != lhs {
                    return Err(DispFunctorError::Composition(
                        source.dmorphism_name(f).into(),
                        source.dmorphism_name(g).into(),
                    ));
                }
            }
        }
        Ok(DispFunctor { over, source, target, on_dobjects, on_dmorphisms })
    }

    pub fn identity(d: &Arc<DispCat>) -> Self {
        DispFunctor {
            over: FinFunctor::identity(d.base().clone()),
            source: d.clone(),
            target: d.clone(),
            on_dobjects: d.dobjects().collect(),
            on_dmorphisms: d.dmorphisms().collect(),
        }
    }

    pub fn source(&self) -> &Arc<DispCat> {
        &self.source
    }

    pub fn target(&self) -> &Arc<DispCat> {
        &self.target
    }

    pub fn dobj(&self, a: DObjId) -> DObjId {
        self.on_dobjects[a.0]
    }

    pub fn dmor(&self, f: DMorId) -> DMorId {
        self.on_dmorphisms[f.0]
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &DispFunctor) -> DispFunctor {
        DispFunctor {
            over: self.over.then(&next.over),
            source: self.source.clone(),
            target: next.target.clone(),
            on_dobjects: self.on_dobjects.iter().map(|&a| next.dobj(a)).collect(),
            on_dmorphisms: self.on_dmorphisms.iter().map(|&f| next.dmor(f)).collect(),
        }
    }

    /// Every Cartesian morphism of the source maps to a Cartesian one.
    /// On failure, returns the offending source morphism.
    pub fn cartesian_failure(&self) -> Option<DMorId> {
        self.source
            .dmorphisms()
            .find(|&f| is_cartesian(&self.source, f).is_ok() && is_cartesian(&self.target, self.dmor(f)).is_err())
    }

    /// For each base object `x`, the induced functor `D[x] → E[F x]`.
    pub fn fiber_functor(&self, x: crate::fincat::ObjId) -> FinFunctor {
        let (fs, ft) = (self.source.fiber(x), self.target.fiber(self.over.obj(x)));
        FinFunctor::new(
            fs.cat.clone(),
            ft.cat.clone(),
            fs.cat.objects().map(|o| ft.obj(self.dobj(fs.dobj(o)))).collect(),
            fs.cat.morphisms().map(|m| ft.mor(self.dmor(fs.dmor(m)))).collect(),
        )
        .expect("fiber functor is a functor")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DispFunctorReport {
    pub functorial_over: bool,
    pub cartesian: bool,
    pub witness: Option<String>,
}

/// Functoriality is guaranteed by construction; Cartesianness is checked
/// exhaustively.
pub fn check_displayed_functor(f: &DispFunctor) -> DispFunctorReport {
    let failure = f.cartesian_failure();
    DispFunctorReport {
        functorial_over: true,
        cartesian: failure.is_none(),
        witness: failure.map(|m| f.source.dmorphism_name(m).to_string()),
    }
}

/// A displayed natural transformation over a base one.
#[derive(Clone, Debug)]
pub struct DispNatTrans {
    pub over: NatTrans,
    pub source: DispFunctor,
    pub target: DispFunctor,
    components: Vec<DMorId>,
}

impl DispNatTrans {
    pub fn new(
        over: NatTrans,
        source: DispFunctor,
        target: DispFunctor,
        components: Vec<DMorId>,
    ) -> Result<Self, DispFunctorError> {
        let d = source.source.clone();
        let e = source.target.clone();
        if components.len() != d.num_dobjects() {
            return Err(DispFunctorError::Size);
        }
        for a in d.dobjects() {
            let m = e.dmorphism(components[a.0]);
            if m.over != over.at(d.over_of(a)) || m.src != source.dobj(a) || m.dst != target.dobj(a) {
                return Err(DispFunctorError::Component(d.dobject_name(a).into()));
            }
        }
        for f in d.dmorphisms() {
            let m = d.dmorphism(f);
            if e.dcompose(source.dmor(f), components[m.dst.0]) != e.dcompose(components[m.src.0], target.dmor(f)) {
                return Err(DispFunctorError::Naturality(d.dmorphism_name(f).into()));
            }
        }
        Ok(DispNatTrans { over, source, target, components })
    }

    pub fn identity(f: &DispFunctor) -> Self {
        DispNatTrans {
            over: NatTrans::identity(&f.over),
            source: f.clone(),
            target: f.clone(),
            components: f.source.dobjects().map(|a| f.target.did(f.dobj(a))).collect(),
        }
    }

    pub fn at(&self, a: DObjId) -> DMorId {
        self.components[a.0]
    }

    pub fn components(&self) -> &[DMorId] {
        &self.components
    }

    /// Every component invertible in the total category.
    pub fn is_iso(&self) -> bool {
        let e = &self.source.target;
        self.components.iter().all(|&k| {
            let m = e.dmorphism(k);
            let c = e.base();
            c.inverse(m.over).is_some_and(|inv| {
                e.dhom(inv, m.dst, m.src).iter().any(|&l| e.dcompose(k, l) == e.did(m.src) && e.dcompose(l, k) == e.did(m.dst))
            })
        })
    }
}
