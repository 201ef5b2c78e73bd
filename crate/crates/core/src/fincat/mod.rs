//! Explicit finite categories and exhaustive universal-property search.
//!
//! A [`FinCat`] is a fully tabulated category: every object, every morphism
//! and the composite of every composable pair are stored. Composition is
//! written in diagrammatic order throughout the crate: `compose(f, g)` is
//! "`f` followed by `g`".

mod adjoint;
mod equivalence;
mod functor;
mod iso;
mod limits;
mod slice;

pub use adjoint::{find_adjoint, AdjointError, Adjunction, AdjunctionError, SearchBound, Side};
pub use equivalence::{check_equivalence, is_gaunt, EquivalenceWitness, NotEquivalence};
pub use functor::{
    check_functor, FinFunctor, FunctorError, FunctorReport, NatTrans, NatTransError,
    PreservationFlags,
};
pub use iso::find_isomorphism;
pub use limits::{
    cones, find_colimit, find_limit, is_cone, mediators, ColimitShape, ColimitWitness, Cone, Diagram, Direction,
    LimitShape, LimitWitness, ShapeKind, ShapeMismatch, UniversalShape, Witness,
};
pub use slice::{pullback_functor, slice_category, slice_functor, Slice};

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index of an object inside its [`FinCat`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjId(pub usize);

/// Index of a morphism inside its [`FinCat`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MorId(pub usize);

impl ObjId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl MorId {
    pub fn index(self) -> usize {
        self.0
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Morphism {
    pub name: String,
    pub src: ObjId,
    pub dst: ObjId,
}

const NO_COMPOSITE: u32 = u32::MAX;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CategoryError {
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("morphism `{morphism}` refers to unknown object `{endpoint}`")]
    DanglingEndpoint { morphism: String, endpoint: String },
    #[error("unknown morphism `{0}` in composition table")]
    UnknownMorphism(String),
    #[error("`{first}` then `{then}` is not a composable pair")]
    NotComposable { first: String, then: String },
    #[error("composite of `{first}` then `{then}` is `{equals}`, which has the wrong endpoints")]
    WrongEndpoints { first: String, then: String, equals: String },
    #[error("composite of `{first}` then `{then}` given twice with different results")]
    ConflictingComposite { first: String, then: String },
    #[error("missing composite for `{first}` then `{then}`")]
    MissingComposite { first: String, then: String },
    #[error("unit law fails: `{identity}` composed with `{morphism}` is `{got}`")]
    UnitLawViolation { identity: String, morphism: String, got: String },
    #[error("associativity fails on (`{f}`, `{g}`, `{h}`)")]
    NonAssociative { f: String, g: String, h: String },
    #[error("identity of `{0}` is not an endomorphism of it")]
    BadIdentity(String),
}

/// A named morphism declaration in a raw presentation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorphismDecl {
    pub name: String,
    pub src: String,
    pub dst: String,
}

/// One entry of a composition table: `first` followed by `then` equals `equals`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositionDecl {
    pub first: String,
    pub then: String,
    pub equals: String,
}

/// Raw category description, as read from a category file or built in memory.
///
/// Identities are implicit and named `id_<object>`; composites involving an
/// identity may be omitted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub objects: Vec<String>,
    #[serde(default)]
    pub morphisms: Vec<MorphismDecl>,
    #[serde(default)]
    pub composition: Vec<CompositionDecl>,
}

impl Presentation {
    pub fn new<S: Into<String>>(objects: impl IntoIterator<Item = S>) -> Self {
        Presentation {
            objects: objects.into_iter().map(Into::into).collect(),
            ..Default::default()
        }
    }

    pub fn morphism(mut self, name: &str, src: &str, dst: &str) -> Self {
        self.morphisms.push(MorphismDecl {
            name: name.to_string(),
            src: src.to_string(),
            dst: dst.to_string(),
        });
        self
    }

    pub fn compose(mut self, first: &str, then: &str, equals: &str) -> Self {
        self.composition.push(CompositionDecl {
            first: first.to_string(),
            then: then.to_string(),
            equals: equals.to_string(),
        });
        self
    }

    /// Presentation of the preorder generated by `leq` on `elements`.
    ///
    /// The reflexive-transitive closure is taken; non-identity morphisms are
    /// named `le_<a>_<b>`.
    pub fn poset<S: AsRef<str>>(elements: &[S], leq: &[(S, S)]) -> Self {
        let names: Vec<String> = elements.iter().map(|e| e.as_ref().to_string()).collect();
        let n = names.len();
        let index: HashMap<&str, usize> =
            names.iter().enumerate().map(|(i, e)| (e.as_str(), i)).collect();
        let mut rel = vec![false; n * n];
        for i in 0..n {
            rel[i * n + i] = true;
        }
        for (a, b) in leq {
            if let (Some(&i), Some(&j)) = (index.get(a.as_ref()), index.get(b.as_ref())) {
                rel[i * n + j] = true;
            }
        }
        for k in 0..n {
            for i in 0..n {
                if rel[i * n + k] {
                    for j in 0..n {
                        if rel[k * n + j] {
                            rel[i * n + j] = true;
                        }
                    }
                }
            }
        }
        let arrow = |i: usize, j: usize| {
            if i == j {
                format!("id_{}", names[i])
            } else {
                format!("le_{}_{}", names[i], names[j])
            }
        };
        let mut p = Presentation::new(names.iter().cloned());
        for i in 0..n {
            for j in 0..n {
                if i != j && rel[i * n + j] {
                    p = p.morphism(&arrow(i, j), &names[i], &names[j]);
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i == j || !rel[i * n + j] {
                    continue;
                }
                for k in 0..n {
                    if k != j && rel[j * n + k] {
                        p = p.compose(&arrow(i, j), &arrow(j, k), &arrow(i, k));
                    }
                }
            }
        }
        p
    }
}

/// An explicit finite category whose laws have been checked exhaustively.
#[derive(Clone)]
pub struct FinCat {
    objects: Vec<String>,
    object_index: HashMap<String, ObjId>,
    morphisms: Vec<Morphism>,
    morphism_index: HashMap<String, MorId>,
    identities: Vec<MorId>,
    compose: Vec<u32>,
    hom: Vec<Vec<MorId>>,
}

impl PartialEq for FinCat {
    fn eq(&self, other: &Self) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && self.identities == other.identities
            && self.compose == other.compose
    }
}

impl Eq for FinCat {}

impl fmt::Debug for FinCat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FinCat")
            .field("objects", &self.objects)
            .field("morphisms", &self.morphisms.len())
            .finish()
    }
}

/// Same category, by pointer or by value.
pub fn same_cat(a: &std::sync::Arc<FinCat>, b: &std::sync::Arc<FinCat>) -> bool {
    std::sync::Arc::ptr_eq(a, b) || **a == **b
}

/// Validates a presentation and returns the category it describes.
pub fn validate_category(p: &Presentation) -> Result<FinCat, CategoryError> {
    let mut object_index = HashMap::new();
    for (i, o) in p.objects.iter().enumerate() {
        if object_index.insert(o.clone(), ObjId(i)).is_some() {
            return Err(CategoryError::DuplicateName(o.clone()));
        }
    }

    let mut morphisms: Vec<Morphism> = p
        .objects
        .iter()
        .enumerate()
        .map(|(i, o)| Morphism { name: format!("id_{o}"), src: ObjId(i), dst: ObjId(i) })
        .collect();
    let identities: Vec<MorId> = (0..p.objects.len()).map(MorId).collect();
    let mut morphism_index: HashMap<String, MorId> =
        morphisms.iter().enumerate().map(|(i, m)| (m.name.clone(), MorId(i))).collect();

    for d in &p.morphisms {
        let lookup = |name: &str| {
            object_index.get(name).copied().ok_or_else(|| CategoryError::DanglingEndpoint {
                morphism: d.name.clone(),
                endpoint: name.to_string(),
            })
        };
        let src = lookup(&d.src)?;
        let dst = lookup(&d.dst)?;
        if let Some(&existing) = morphism_index.get(&d.name) {
            // an explicit declaration of an implicit identity is tolerated
            let m = &morphisms[existing.0];
            if existing.0 < identities.len() && m.src == src && m.dst == dst {
                continue;
            }
            return Err(CategoryError::DuplicateName(d.name.clone()));
        }
        morphism_index.insert(d.name.clone(), MorId(morphisms.len()));
        morphisms.push(Morphism { name: d.name.clone(), src, dst });
    }

    let m = morphisms.len();
    let mut table = vec![NO_COMPOSITE; m * m];
    let find = |name: &str| {
        morphism_index
            .get(name)
            .copied()
            .ok_or_else(|| CategoryError::UnknownMorphism(name.to_string()))
    };
    for c in &p.composition {
        let f = find(&c.first)?;
        let g = find(&c.then)?;
        let h = find(&c.equals)?;
        let (mf, mg, mh) = (&morphisms[f.0], &morphisms[g.0], &morphisms[h.0]);
        if mf.dst != mg.src {
            return Err(CategoryError::NotComposable { first: c.first.clone(), then: c.then.clone() });
        }
        if mh.src != mf.src || mh.dst != mg.dst {
            return Err(CategoryError::WrongEndpoints {
                first: c.first.clone(),
                then: c.then.clone(),
                equals: c.equals.clone(),
            });
        }
        let slot = &mut table[f.0 * m + g.0];
        if *slot != NO_COMPOSITE && *slot != h.0 as u32 {
            return Err(CategoryError::ConflictingComposite {
                first: c.first.clone(),
                then: c.then.clone(),
            });
        }
        *slot = h.0 as u32;
    }
    // implicit identity composites
    for (f, mf) in morphisms.iter().enumerate() {
        let left = identities[mf.src.0].0;
        let right = identities[mf.dst.0].0;
        if table[left * m + f] == NO_COMPOSITE {
            table[left * m + f] = f as u32;
        }
        if table[f * m + right] == NO_COMPOSITE {
            table[f * m + right] = f as u32;
        }
    }
    FinCat::assemble(p.objects.clone(), object_index, morphisms, morphism_index, identities, table)
}

impl FinCat {
    /// Builds a category from already-indexed parts and a composition
    /// function defined on composable pairs; all laws are re-checked.
    pub fn from_parts(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<MorId>,
        mut compose: impl FnMut(MorId, MorId) -> Option<MorId>,
    ) -> Result<FinCat, CategoryError> {
        let mut object_index = HashMap::new();
        for (i, o) in objects.iter().enumerate() {
            if object_index.insert(o.clone(), ObjId(i)).is_some() {
                return Err(CategoryError::DuplicateName(o.clone()));
            }
        }
        let mut morphism_index = HashMap::new();
        for (i, mo) in morphisms.iter().enumerate() {
            if morphism_index.insert(mo.name.clone(), MorId(i)).is_some() {
                return Err(CategoryError::DuplicateName(mo.name.clone()));
            }
        }
        let m = morphisms.len();
        let mut by_src: Vec<Vec<usize>> = vec![Vec::new(); objects.len()];
        for (i, mo) in morphisms.iter().enumerate() {
            by_src[mo.src.0].push(i);
        }
        let mut table = vec![NO_COMPOSITE; m * m];
        for f in 0..m {
            for &g in &by_src[morphisms[f].dst.0] {
                if let Some(h) = compose(MorId(f), MorId(g)) {
                    if morphisms[h.0].src != morphisms[f].src || morphisms[h.0].dst != morphisms[g].dst
                    {
                        return Err(CategoryError::WrongEndpoints {
                            first: morphisms[f].name.clone(),
                            then: morphisms[g].name.clone(),
                            equals: morphisms[h.0].name.clone(),
                        });
                    }
                    table[f * m + g] = h.0 as u32;
                }
            }
        }
        FinCat::assemble(objects, object_index, morphisms, morphism_index, identities, table)
    }

    fn assemble(
        objects: Vec<String>,
        object_index: HashMap<String, ObjId>,
        morphisms: Vec<Morphism>,
        morphism_index: HashMap<String, MorId>,
        identities: Vec<MorId>,
        table: Vec<u32>,
    ) -> Result<FinCat, CategoryError> {
        let n = objects.len();
        let m = morphisms.len();
        for (x, &i) in identities.iter().enumerate() {
            let mi = &morphisms[i.0];
            if mi.src.0 != x || mi.dst.0 != x {
                return Err(CategoryError::BadIdentity(objects[x].clone()));
            }
        }
        let mut hom = vec![Vec::new(); n * n];
        let mut by_src: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, mo) in morphisms.iter().enumerate() {
            hom[mo.src.0 * n + mo.dst.0].push(MorId(i));
            by_src[mo.src.0].push(i);
        }
        // totality
        for f in 0..m {
            for &g in &by_src[morphisms[f].dst.0] {
                if table[f * m + g] == NO_COMPOSITE {
                    return Err(CategoryError::MissingComposite {
                        first: morphisms[f].name.clone(),
                        then: morphisms[g].name.clone(),
                    });
                }
            }
        }
        // unit laws
        for (f, mf) in morphisms.iter().enumerate() {
            let left = identities[mf.src.0].0;
            let right = identities[mf.dst.0].0;
            for (id, got) in [(left, table[left * m + f]), (right, table[f * m + right])] {
                if got as usize != f {
                    return Err(CategoryError::UnitLawViolation {
                        identity: morphisms[id].name.clone(),
                        morphism: mf.name.clone(),
                        got: morphisms[got as usize].name.clone(),
                    });
                }
            }
        }
        // associativity
        for f in 0..m {
            for &g in &by_src[morphisms[f].dst.0] {
                let fg = table[f * m + g] as usize;
                for &h in &by_src[morphisms[g].dst.0] {
                    let gh = table[g * m + h] as usize;
                    if table[fg * m + h] != table[f * m + gh] {
                        return Err(CategoryError::NonAssociative {
                            f: morphisms[f].name.clone(),
                            g: morphisms[g].name.clone(),
                            h: morphisms[h].name.clone(),
                        });
                    }
                }
            }
        }
        Ok(FinCat { objects, object_index, morphisms, morphism_index, identities, compose: table, hom })
    }

    /// The poset (thin category) generated by `leq`, see [`Presentation::poset`].
    pub fn poset<S: AsRef<str>>(elements: &[S], leq: &[(S, S)]) -> Result<FinCat, CategoryError> {
        validate_category(&Presentation::poset(elements, leq))
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn objects(&self) -> impl DoubleEndedIterator<Item = ObjId> + ExactSizeIterator + 'static {
        (0..self.objects.len()).map(ObjId)
    }

    pub fn morphisms(&self) -> impl DoubleEndedIterator<Item = MorId> + ExactSizeIterator + 'static {
        (0..self.morphisms.len()).map(MorId)
    }

    pub fn object_name(&self, x: ObjId) -> &str {
        &self.objects[x.0]
    }

    pub fn morphism_name(&self, f: MorId) -> &str {
        &self.morphisms[f.0].name
    }

    pub fn object(&self, name: &str) -> Option<ObjId> {
        self.object_index.get(name).copied()
    }

    pub fn morphism(&self, name: &str) -> Option<MorId> {
        self.morphism_index.get(name).copied()
    }

    pub fn morphism_data(&self, f: MorId) -> &Morphism {
        &self.morphisms[f.0]
    }

    pub fn src(&self, f: MorId) -> ObjId {
        self.morphisms[f.0].src
    }

    pub fn dst(&self, f: MorId) -> ObjId {
        self.morphisms[f.0].dst
    }

    pub fn id(&self, x: ObjId) -> MorId {
        self.identities[x.0]
    }

    pub fn is_identity(&self, f: MorId) -> bool {
        self.identities[self.src(f).0] == f
    }

    /// Morphisms `x → y`, in declaration order.
    pub fn hom(&self, x: ObjId, y: ObjId) -> &[MorId] {
        &self.hom[x.0 * self.objects.len() + y.0]
    }

    /// `f` followed by `g`, if they are composable.
    pub fn try_compose(&self, f: MorId, g: MorId) -> Option<MorId> {
        let c = self.compose[f.0 * self.morphisms.len() + g.0];
        (c != NO_COMPOSITE).then_some(MorId(c as usize))
    }

    /// `f` followed by `g`.
    ///
    /// Panics if the pair is not composable.
    pub fn compose(&self, f: MorId, g: MorId) -> MorId {
        self.try_compose(f, g).unwrap_or_else(|| {
            panic!("`{}` then `{}` is not composable", self.morphism_name(f), self.morphism_name(g))
        })
    }

    /// Composite of a non-empty path, in diagrammatic order.
    pub fn compose_all(&self, path: &[MorId]) -> MorId {
        let (first, rest) = path.split_first().expect("empty path");
        rest.iter().fold(*first, |acc, &g| self.compose(acc, g))
    }

    /// A two-sided inverse of `f`, if one exists.
    pub fn inverse(&self, f: MorId) -> Option<MorId> {
        let (x, y) = (self.src(f), self.dst(f));
        self.hom(y, x)
            .iter()
            .copied()
            .find(|&g| self.compose(f, g) == self.id(x) && self.compose(g, f) == self.id(y))
    }

    pub fn is_iso(&self, f: MorId) -> bool {
        self.inverse(f).is_some()
    }

    /// First isomorphism `x → y` in declaration order.
    pub fn find_iso(&self, x: ObjId, y: ObjId) -> Option<MorId> {
        self.hom(x, y).iter().copied().find(|&f| self.is_iso(f))
    }

    pub fn is_mono(&self, f: MorId) -> bool {
        let x = self.src(f);
        self.objects().all(|w| {
            let h = self.hom(w, x);
            h.iter().enumerate().all(|(i, &u)| {
                h[i + 1..].iter().all(|&v| self.compose(u, f) != self.compose(v, f))
            })
        })
    }

    /// At most one morphism between any two objects.
    pub fn is_thin(&self) -> bool {
        self.hom.iter().all(|h| h.len() <= 1)
    }

    /// Thin and antisymmetric.
    pub fn is_poset(&self) -> bool {
        self.is_thin()
            && self.objects().all(|x| {
                self.objects().all(|y| x == y || self.hom(x, y).is_empty() || self.hom(y, x).is_empty())
            })
    }

    /// `x ≤ y` in a thin category.
    pub fn leq(&self, x: ObjId, y: ObjId) -> bool {
        !self.hom(x, y).is_empty()
    }

    /// Back to a presentation; identities remain implicit only when they are
    /// named `id_<object>`.
    pub fn to_presentation(&self) -> Presentation {
        let mut p = Presentation::new(self.objects.iter().cloned());
        for f in self.morphisms() {
            let m = &self.morphisms[f.0];
            if self.is_identity(f) && m.name == format!("id_{}", self.objects[m.src.0]) {
                continue;
            }
            p = p.morphism(&m.name, &self.objects[m.src.0], &self.objects[m.dst.0]);
        }
        for f in self.morphisms() {
            for g in self.morphisms() {
                if self.is_identity(f) || self.is_identity(g) {
                    continue;
                }
                if let Some(h) = self.try_compose(f, g) {
                    p = p.compose(self.morphism_name(f), self.morphism_name(g), self.morphism_name(h));
                }
            }
        }
        p
    }

    /// The opposite category; names are kept.
    pub fn opposite(&self) -> FinCat {
        let morphisms = self
            .morphisms
            .iter()
            .map(|m| Morphism { name: m.name.clone(), src: m.dst, dst: m.src })
            .collect();
        FinCat::from_parts(self.objects.clone(), morphisms, self.identities.clone(), |f, g| {
            self.try_compose(g, f)
        })
        .expect("opposite of a valid category is valid")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn div6() -> FinCat {
        FinCat::poset(
            &["1", "2", "3", "6"],
            &[("1", "2"), ("1", "3"), ("2", "6"), ("3", "6")],
        )
        .unwrap()
    }

    #[test]
    fn one_has_single_identity() {
        let one = validate_category(&Presentation::new(["*"])).unwrap();
        assert_eq!(one.num_objects(), 1);
        assert_eq!(one.num_morphisms(), 1);
        assert_eq!(one.morphism_name(MorId(0)), "id_*");
    }

    #[test]
    fn div6_counts_divisibility_pairs() {
        let c = div6();
        assert_eq!(c.num_objects(), 4);
        assert_eq!(c.num_morphisms(), 9);
        assert!(c.is_poset());
        let le = c.morphism("le_1_6").unwrap();
        assert_eq!(c.compose(c.morphism("le_1_2").unwrap(), c.morphism("le_2_6").unwrap()), le);
    }

    #[test]
    fn missing_composite_is_rejected() {
        let p = Presentation::new(["a", "b", "c"]).morphism("f", "a", "b").morphism("g", "b", "c").morphism("h", "a", "c");
        assert_eq!(
            validate_category(&p).unwrap_err(),
            CategoryError::MissingComposite { first: "f".into(), then: "g".into() }
        );
    }

    #[test]
    fn dangling_and_duplicates() {
        let p = Presentation::new(["a"]).morphism("f", "a", "b");
        assert!(matches!(validate_category(&p), Err(CategoryError::DanglingEndpoint { .. })));
        let p = Presentation::new(["a", "a"]);
        assert_eq!(validate_category(&p).unwrap_err(), CategoryError::DuplicateName("a".into()));
        let p = Presentation::new(["a"]).morphism("f", "a", "a").morphism("f", "a", "a");
        assert_eq!(validate_category(&p).unwrap_err(), CategoryError::DuplicateName("f".into()));
    }

    #[test]
    fn unit_law_violation_is_reported() {
        let p = Presentation::new(["a", "b"])
            .morphism("f", "a", "b")
            .morphism("g", "a", "b")
            .compose("id_a", "f", "g");
        assert!(matches!(validate_category(&p), Err(CategoryError::UnitLawViolation { .. })));
    }

    #[test]
    fn non_associative_table_is_reported() {
        let p = Presentation::new(["a"])
            .morphism("x", "a", "a")
            .morphism("y", "a", "a")
            .compose("x", "x", "x")
            .compose("x", "y", "x")
            .compose("y", "x", "y")
            .compose("y", "y", "x");
        assert!(matches!(validate_category(&p), Err(CategoryError::NonAssociative { .. })));
    }

    #[test]
    fn walking_iso_inverse() {
        let p = Presentation::new(["a", "b"])
            .morphism("i", "a", "b")
            .morphism("j", "b", "a")
            .compose("i", "j", "id_a")
            .compose("j", "i", "id_b");
        let c = validate_category(&p).unwrap();
        let i = c.morphism("i").unwrap();
        assert_eq!(c.inverse(i), c.morphism("j"));
        assert!(c.is_thin());
        assert!(!c.is_poset());
    }

    #[test]
    fn opposite_reverses_and_presentation_roundtrips() {
        let c = div6();
        let op = c.opposite();
        let f = op.morphism("le_2_6").unwrap();
        assert_eq!(op.object_name(op.src(f)), "6");
        let back = validate_category(&c.to_presentation()).unwrap();
        assert_eq!(back, c);
    }
}
