use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use super::limits::{find_limit, is_cone, Cone, Direction, LimitShape, ShapeKind, UniversalShape};
use super::{same_cat, FinCat, MorId, ObjId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FunctorError {
    #[error("object map has {got} entries, expected {expected}")]
    ObjectMapSize { expected: usize, got: usize },
    #[error("morphism map has {got} entries, expected {expected}")]
    MorphismMapSize { expected: usize, got: usize },
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("no image given for `{0}`")]
    Missing(String),
    #[error("image of `{0}` has the wrong endpoints")]
    Endpoints(String),
    #[error("identity of `{0}` is not preserved")]
    Identity(String),
    #[error("composite of `{0}` then `{1}` is not preserved")]
    Composition(String, String),
    #[error("no morphism `{0}` in the thin target")]
    NotMonotone(String),
}

/// A functor between explicit finite categories.
#[derive(Clone, Debug)]
pub struct FinFunctor {
    source: Arc<FinCat>,
    target: Arc<FinCat>,
    on_objects: Vec<ObjId>,
    on_morphisms: Vec<MorId>,
}

impl PartialEq for FinFunctor {
    fn eq(&self, other: &Self) -> bool {
        self.on_objects == other.on_objects
            && self.on_morphisms == other.on_morphisms
            && same_cat(&self.source, &other.source)
            && same_cat(&self.target, &other.target)
    }
}

impl FinFunctor {
    /// Builds a functor, checking endpoints, identities and composition.
    pub fn new(
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        on_objects: Vec<ObjId>,
        on_morphisms: Vec<MorId>,
    ) -> Result<Self, FunctorError> {
        if on_objects.len() != source.num_objects() {
            return Err(FunctorError::ObjectMapSize { expected: source.num_objects(), got: on_objects.len() });
        }
        if on_morphisms.len() != source.num_morphisms() {
            return Err(FunctorError::MorphismMapSize {
                expected: source.num_morphisms(),
                got: on_morphisms.len(),
            });
        }
        let f = FinFunctor { source, target, on_objects, on_morphisms };
        f.check()?;
        Ok(f)
    }

    fn check(&self) -> Result<(), FunctorError> {
        let (c, d) = (&*self.source, &*self.target);
        if self.on_objects.iter().any(|x| x.0 >= d.num_objects())
            || self.on_morphisms.iter().any(|f| f.0 >= d.num_morphisms())
        {
            return Err(FunctorError::UnknownName("image outside target".into()));
        }
        for f in c.morphisms() {
            let g = self.on_morphisms[f.0];
            if d.src(g) != self.on_objects[c.src(f).0] || d.dst(g) != self.on_objects[c.dst(f).0] {
                return Err(FunctorError::Endpoints(c.morphism_name(f).into()));
            }
        }
        for x in c.objects() {
            if self.on_morphisms[c.id(x).0] != d.id(self.on_objects[x.0]) {
                return Err(FunctorError::Identity(c.object_name(x).into()));
            }
        }
        for f in c.morphisms() {
            for &g in c.objects().flat_map(|z| c.hom(c.dst(f), z)) {
                let lhs = self.on_morphisms[c.compose(f, g).0];
                let rhs = d.compose(self.on_morphisms[f.0], self.on_morphisms[g.0]);
                if lhs != rhs {
                    return Err(FunctorError::Composition(c.morphism_name(f).into(), c.morphism_name(g).into()));
                }
            }
        }
        Ok(())
    }

    /// Builds a functor from name maps. Identities, and morphisms whose image
    /// is forced by a singleton hom-set, may be left out.
    pub fn from_names(
        source: Arc<FinCat>,
        target: Arc<FinCat>,
        objects: &HashMap<String, String>,
        morphisms: &HashMap<String, String>,
    ) -> Result<Self, FunctorError> {
        let mut on_objects = Vec::new();
        for x in source.objects() {
            let n = source.object_name(x);
            let img = objects.get(n).ok_or_else(|| FunctorError::Missing(n.into()))?;
            on_objects.push(target.object(img).ok_or_else(|| FunctorError::UnknownName(img.clone()))?);
        }
        let mut on_morphisms = Vec::new();
        for f in source.morphisms() {
            let n = source.morphism_name(f);
            let img = match morphisms.get(n) {
                Some(img) => target.morphism(img).ok_or_else(|| FunctorError::UnknownName(img.clone()))?,
                None if source.is_identity(f) => target.id(on_objects[source.src(f).0]),
                // Forced when the target hom-set is a singleton.
                None => match target.hom(on_objects[source.src(f).0], on_objects[source.dst(f).0]) {
                    [g] => *g,
                    _ => return Err(FunctorError::Missing(n.into())),
                },
            };
            on_morphisms.push(img);
        }
        FinFunctor::new(source, target, on_objects, on_morphisms)
    }

    /// Extends an object map to a functor when the target is thin.
    pub fn from_object_map(source: Arc<FinCat>, target: Arc<FinCat>, on_objects: Vec<ObjId>) -> Result<Self, FunctorError> {
        let mut on_morphisms = Vec::new();
        for f in source.morphisms() {
            let (a, b) = (on_objects[source.src(f).0], on_objects[source.dst(f).0]);
            match target.hom(a, b) {
                [g] => on_morphisms.push(*g),
                _ => return Err(FunctorError::NotMonotone(source.morphism_name(f).into())),
            }
        }
        FinFunctor::new(source, target, on_objects, on_morphisms)
    }

    pub fn identity(c: Arc<FinCat>) -> Self {
        FinFunctor {
            on_objects: c.objects().collect(),
            on_morphisms: c.morphisms().collect(),
            source: c.clone(),
            target: c,
        }
    }

    /// Constant functor at an object of the target.
    pub fn constant(source: Arc<FinCat>, target: Arc<FinCat>, y: ObjId) -> Self {
        FinFunctor {
            on_objects: vec![y; source.num_objects()],
            on_morphisms: vec![target.id(y); source.num_morphisms()],
            source,
            target,
        }
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &FinFunctor) -> FinFunctor {
        assert!(same_cat(&self.target, &next.source), "functors are not composable");
        FinFunctor {
            source: self.source.clone(),
            target: next.target.clone(),
            on_objects: self.on_objects.iter().map(|&x| next.on_objects[x.0]).collect(),
            on_morphisms: self.on_morphisms.iter().map(|&f| next.on_morphisms[f.0]).collect(),
        }
    }

    pub fn source(&self) -> &Arc<FinCat> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FinCat> {
        &self.target
    }

    pub fn obj(&self, x: ObjId) -> ObjId {
        self.on_objects[x.0]
    }

    pub fn mor(&self, f: MorId) -> MorId {
        self.on_morphisms[f.0]
    }

    pub fn object_map(&self) -> &[ObjId] {
        &self.on_objects
    }

    pub fn morphism_map(&self) -> &[MorId] {
        &self.on_morphisms
    }

    /// Name-level object map.
    pub fn object_names(&self) -> Vec<(String, String)> {
        self.source
            .objects()
            .map(|x| (self.source.object_name(x).to_string(), self.target.object_name(self.obj(x)).to_string()))
            .collect()
    }

    /// Name-level morphism map.
    pub fn morphism_names(&self) -> Vec<(String, String)> {
        self.source
            .morphisms()
            .map(|f| (self.source.morphism_name(f).to_string(), self.target.morphism_name(self.mor(f)).to_string()))
            .collect()
    }

    pub fn is_faithful(&self) -> bool {
        self.faithfulness_failure().is_none()
    }

    /// Two distinct parallel morphisms with the same image.
    pub fn faithfulness_failure(&self) -> Option<(MorId, MorId)> {
        let c = &*self.source;
        for x in c.objects() {
            for y in c.objects() {
                let h = c.hom(x, y);
                for (i, &f) in h.iter().enumerate() {
                    for &g in &h[i + 1..] {
                        if self.mor(f) == self.mor(g) {
                            return Some((f, g));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_full(&self) -> bool {
        self.fullness_failure().is_none()
    }

    /// Objects `x, y` and a target morphism `Fx → Fy` with no preimage.
    pub fn fullness_failure(&self) -> Option<(ObjId, ObjId, MorId)> {
        let (c, d) = (&*self.source, &*self.target);
        for x in c.objects() {
            for y in c.objects() {
                for &v in d.hom(self.obj(x), self.obj(y)) {
                    if !c.hom(x, y).iter().any(|&u| self.mor(u) == v) {
                        return Some((x, y, v));
                    }
                }
            }
        }
        None
    }

    /// For each target object, the earliest source object and the earliest
    /// isomorphism `F x → y`.
    pub fn essential_preimages(&self) -> Result<Vec<(ObjId, MorId)>, ObjId> {
        let (c, d) = (&*self.source, &*self.target);
        d.objects()
            .map(|y| {
                c.objects()
                    .find_map(|x| d.find_iso(self.obj(x), y).map(|e| (x, e)))
                    .ok_or(y)
            })
            .collect()
    }

    pub fn is_essentially_surjective(&self) -> bool {
        self.essential_preimages().is_ok()
    }

    /// Transports the limit of `shape` (if any) and re-verifies it in the target.
    pub fn preserves(&self, shape: LimitShape) -> bool {
        let (c, d) = (&*self.source, &*self.target);
        let Ok(Some(w)) = find_limit(c, shape) else { return true };
        let image = match shape {
            LimitShape::Terminal => LimitShape::Terminal,
            LimitShape::BinaryProduct(a, b) => LimitShape::BinaryProduct(self.obj(a), self.obj(b)),
            LimitShape::Equalizer(f, g) => LimitShape::Equalizer(self.mor(f), self.mor(g)),
            LimitShape::Pullback(f, g) => LimitShape::Pullback(self.mor(f), self.mor(g)),
        };
        let Ok(diagram) = image.diagram(d) else { return false };
        let cone = Cone { apex: self.obj(w.apex), legs: w.legs.iter().map(|&l| self.mor(l)).collect() };
        if !is_cone(d, &diagram, Direction::Limit, &cone) {
            return false;
        }
        d.objects().all(|v| {
            super::limits::cones(d, &diagram, Direction::Limit, v)
                .iter()
                .all(|other| super::limits::mediators(d, Direction::Limit, &cone, other).len() == 1)
        })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct PreservationFlags {
    pub terminal: bool,
    pub binary_product: bool,
    pub equalizer: bool,
    pub pullback: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FunctorReport {
    pub functorial: bool,
    pub faithful: bool,
    pub full: bool,
    pub essentially_surjective: bool,
    pub preserves: PreservationFlags,
}

/// Structural report on a functor; limit preservation is checked for every
/// limit that exists in the source.
pub fn check_functor(f: &FinFunctor) -> FunctorReport {
    let flag = |k: ShapeKind| k.instances(f.source()).into_iter().all(|s| f.preserves(s));
    FunctorReport {
        functorial: f.check().is_ok(),
        faithful: f.is_faithful(),
        full: f.is_full(),
        essentially_surjective: f.is_essentially_surjective(),
        preserves: PreservationFlags {
            terminal: flag(ShapeKind::Terminal),
            binary_product: flag(ShapeKind::BinaryProduct),
            equalizer: flag(ShapeKind::Equalizer),
            pullback: flag(ShapeKind::Pullback),
        },
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NatTransError {
    #[error("functors do not share source and target")]
    Endpoints,
    #[error("component at `{0}` has the wrong type")]
    Component(String),
    #[error("naturality fails at `{0}`")]
    Naturality(String),
}

/// A natural transformation `F ⇒ G`.
#[derive(Clone, Debug, PartialEq)]
pub struct NatTrans {
    source: FinFunctor,
    target: FinFunctor,
    components: Vec<MorId>,
}

impl NatTrans {
    pub fn new(source: FinFunctor, target: FinFunctor, components: Vec<MorId>) -> Result<Self, NatTransError> {
        if !same_cat(&source.source, &target.source) || !same_cat(&source.target, &target.target) {
            return Err(NatTransError::Endpoints);
        }
        let (c, d) = (&*source.source, &*source.target);
        if components.len() != c.num_objects() {
            return Err(NatTransError::Endpoints);
        }
        for x in c.objects() {
            let a = components[x.0];
            if a.0 >= d.num_morphisms() || d.src(a) != source.obj(x) || d.dst(a) != target.obj(x) {
                return Err(NatTransError::Component(c.object_name(x).into()));
            }
        }
        for f in c.morphisms() {
            let (x, y) = (c.src(f), c.dst(f));
            if d.compose(source.mor(f), components[y.0]) != d.compose(components[x.0], target.mor(f)) {
                return Err(NatTransError::Naturality(c.morphism_name(f).into()));
            }
        }
        Ok(NatTrans { source, target, components })
    }

    pub fn identity(f: &FinFunctor) -> Self {
        let d = f.target();
        NatTrans {
            source: f.clone(),
            target: f.clone(),
            components: f.source().objects().map(|x| d.id(f.obj(x))).collect(),
        }
    }

    pub fn source(&self) -> &FinFunctor {
        &self.source
    }

    pub fn target(&self) -> &FinFunctor {
        &self.target
    }

    pub fn at(&self, x: ObjId) -> MorId {
        self.components[x.0]
    }

    pub fn components(&self) -> &[MorId] {
        &self.components
    }

    pub fn is_iso(&self) -> bool {
        let d = self.source.target();
        self.components.iter().all(|&a| d.is_iso(a))
    }

    /// Componentwise inverse, if every component is invertible.
    pub fn inverse(&self) -> Option<NatTrans> {
        let d = self.source.target();
        let comps = self.components.iter().map(|&a| d.inverse(a)).collect::<Option<Vec<_>>>()?;
        Some(NatTrans { source: self.target.clone(), target: self.source.clone(), components: comps })
    }

    /// Vertical composite `self` then `next`.
    pub fn then(&self, next: &NatTrans) -> NatTrans {
        let d = self.source.target();
        NatTrans {
            source: self.source.clone(),
            target: next.target.clone(),
            components: self.components.iter().zip(&next.components).map(|(&a, &b)| d.compose(a, b)).collect(),
        }
    }

    /// Whiskering `H ; α` for `H` into the source of `α`.
    pub fn precompose(&self, h: &FinFunctor) -> NatTrans {
        NatTrans {
            source: h.then(&self.source),
            target: h.then(&self.target),
            components: h.source().objects().map(|x| self.at(h.obj(x))).collect(),
        }
    }

    /// Whiskering `α ; K` for `K` out of the target of `α`.
    pub fn postcompose(&self, k: &FinFunctor) -> NatTrans {
        NatTrans {
            source: self.source.then(k),
            target: self.target.then(k),
            components: self.components.iter().map(|&a| k.mor(a)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn div6() -> Arc<FinCat> {
        Arc::new(FinCat::poset(&["1", "2", "3", "6"], &[("1", "2"), ("1", "3"), ("2", "6"), ("3", "6")]).unwrap())
    }

    #[test]
    fn identity_report_is_all_true() {
        let c = div6();
        let r = check_functor(&FinFunctor::identity(c));
        assert!(r.functorial && r.faithful && r.full && r.essentially_surjective);
        assert!(r.preserves.terminal && r.preserves.pullback);
    }

    #[test]
    fn constant_to_one_is_faithful_but_not_full() {
        // hom(2,3) is empty while hom(*,*) is not, so fullness fails;
        // posets have at most one arrow per hom-set, so faithfulness holds.
        let c = div6();
        let one = Arc::new(FinCat::poset(&["*"], &[]).unwrap());
        let f = FinFunctor::constant(c, one, ObjId(0));
        let r = check_functor(&f);
        assert!(r.functorial && r.faithful && !r.full && r.essentially_surjective);
    }

    #[test]
    fn inclusion_not_eso() {
        let c = div6();
        let sub = Arc::new(FinCat::poset(&["1", "6"], &[("1", "6")]).unwrap());
        let f = FinFunctor::from_object_map(sub, c.clone(), vec![c.object("1").unwrap(), c.object("6").unwrap()]).unwrap();
        let r = check_functor(&f);
        assert!(r.faithful && r.full && !r.essentially_surjective);
        assert_eq!(f.essential_preimages().unwrap_err(), c.object("2").unwrap());
    }

    #[test]
    fn malformed_functor_rejected() {
        let c = div6();
        let rev: Vec<ObjId> = c.objects().rev().collect();
        assert!(FinFunctor::from_object_map(c.clone(), c, rev).is_err());
    }
}
