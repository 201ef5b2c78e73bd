//! Displayed categories over a finite base: fibers, total categories,
//! Cartesian morphisms, cleavings and substitution.

mod arrow;
mod beck_chevalley;
mod cleaving;
mod fiberwise;
mod functor;

pub use arrow::{arrow_displayed, ArrowCat};
pub use beck_chevalley::{beck_chevalley, BCSquare, BCSquareError, MateSide};
pub use cleaving::{find_cleaving, is_cartesian, CartesianFailure, Cleaving, MissingLift};
pub use fiberwise::{check_fiberwise_limits, FiberwiseReport};
pub use functor::{
    check_displayed_functor, DispFunctor, DispFunctorError, DispFunctorReport, DispNatTrans,
};

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fincat::{validate_category, CategoryError, FinCat, FinFunctor, MorId, Morphism, ObjId, Presentation};

/// Index of a displayed object.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DObjId(pub usize);

/// Index of a displayed morphism.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DMorId(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DObject {
    pub name: String,
    pub over: ObjId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DMorphism {
    pub name: String,
    pub over: MorId,
    pub src: DObjId,
    pub dst: DObjId,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DispError {
    #[error("base category: {0}")]
    Base(#[from] CategoryError),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("unknown name `{0}`")]
    UnknownName(String),
    #[error("displayed morphism `{0}` has endpoints over the wrong base objects")]
    Endpoints(String),
    #[error("displayed identity of `{0}` is malformed")]
    Identity(String),
    #[error("missing displayed composite for `{0}` then `{1}`")]
    MissingComposite(String, String),
    #[error("displayed composite of `{0}` then `{1}` lies over the wrong morphism or objects")]
    BadComposite(String, String),
    #[error("displayed composite of `{0}` then `{1}` given twice with different results")]
    ConflictingComposite(String, String),
    #[error("displayed unit law fails at `{0}`")]
    UnitLaw(String),
    #[error("displayed associativity fails on (`{0}`, `{1}`, `{2}`)")]
    NonAssociative(String, String, String),
    #[error("unknown base object `{0}`")]
    UnknownObject(String),
}

/// A fiber `D[x]` together with its embedding into the displayed data.
#[derive(Clone, Debug)]
pub struct Fiber {
    pub cat: Arc<FinCat>,
    pub base: ObjId,
    dobjs: Vec<DObjId>,
    dmors: Vec<DMorId>,
    obj_of: HashMap<DObjId, ObjId>,
    mor_of: HashMap<DMorId, MorId>,
}

impl Fiber {
    pub fn dobj(&self, o: ObjId) -> DObjId {
        self.dobjs[o.0]
    }

    pub fn dmor(&self, m: MorId) -> DMorId {
        self.dmors[m.0]
    }

    pub fn obj(&self, d: DObjId) -> ObjId {
        self.obj_of[&d]
    }

    pub fn mor(&self, d: DMorId) -> MorId {
        self.mor_of[&d]
    }
}

/// A displayed category over an explicit finite base.
pub struct DispCat {
    base: Arc<FinCat>,
    dobjects: Vec<DObject>,
    dobject_index: HashMap<String, DObjId>,
    dmorphisms: Vec<DMorphism>,
    dmorphism_index: HashMap<String, DMorId>,
    didentity: Vec<DMorId>,
    over_object: Vec<Vec<DObjId>>,
    dhom: HashMap<(MorId, DObjId, DObjId), Vec<DMorId>>,
    dcompose: HashMap<(DMorId, DMorId), DMorId>,
    out_of: Vec<Vec<DMorId>>,
    fibers: Vec<OnceLock<Fiber>>,
}

impl std::fmt::Debug for DispCat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DispCat")
            .field("base", &self.base)
            .field("dobjects", &self.dobjects.len())
            .field("dmorphisms", &self.dmorphisms.len())
            .finish()
    }
}

impl PartialEq for DispCat {
    fn eq(&self, other: &Self) -> bool {
        crate::fincat::same_cat(&self.base, &other.base)
            && self.dobjects == other.dobjects
            && self.dmorphisms == other.dmorphisms
            && self.didentity == other.didentity
            && self.dcompose == other.dcompose
    }
}

/// Declaration of a displayed morphism in a displayed-category file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DMorphismDecl {
    pub over: String,
    pub src: String,
    pub dst: String,
    pub name: String,
}

/// Raw displayed-category description. Displayed identities are implicit
/// and named `id_<dobject>`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DispPresentation {
    pub dobjects: std::collections::BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub dmorphisms: Vec<DMorphismDecl>,
    #[serde(default)]
    pub dcomposition: Vec<crate::fincat::CompositionDecl>,
}

impl DispCat {
    /// Builds and validates a displayed category from indexed parts.
    /// `compose` is consulted on every composable pair.
    pub fn from_parts(
        base: Arc<FinCat>,
        dobjects: Vec<DObject>,
        dmorphisms: Vec<DMorphism>,
        didentity: Vec<DMorId>,
        mut compose: impl FnMut(DMorId, DMorId) -> Option<DMorId>,
    ) -> Result<DispCat, DispError> {
        let mut dobject_index = HashMap::new();
        let mut over_object = vec![Vec::new(); base.num_objects()];
        for (i, d) in dobjects.iter().enumerate() {
            if dobject_index.insert(d.name.clone(), DObjId(i)).is_some() {
                return Err(DispError::DuplicateName(d.name.clone()));
            }
            over_object[d.over.0].push(DObjId(i));
        }
        let mut dmorphism_index = HashMap::new();
        let mut dhom: HashMap<(MorId, DObjId, DObjId), Vec<DMorId>> = HashMap::new();
        let mut out_of: Vec<Vec<DMorId>> = vec![Vec::new(); dobjects.len()];
        for (i, m) in dmorphisms.iter().enumerate() {
            if dmorphism_index.insert(m.name.clone(), DMorId(i)).is_some() {
                return Err(DispError::DuplicateName(m.name.clone()));
            }
            if dobjects[m.src.0].over != base.src(m.over) || dobjects[m.dst.0].over != base.dst(m.over) {
                return Err(DispError::Endpoints(m.name.clone()));
            }
            dhom.entry((m.over, m.src, m.dst)).or_default().push(DMorId(i));
            out_of[m.src.0].push(DMorId(i));
        }
        for (i, &e) in didentity.iter().enumerate() {
            let m = &dmorphisms[e.0];
            if m.src.0 != i || m.dst.0 != i || m.over != base.id(dobjects[i].over) {
                return Err(DispError::Identity(dobjects[i].name.clone()));
            }
        }
        let name = |f: DMorId| dmorphisms[f.0].name.clone();
        let mut dcompose = HashMap::new();
        for (f, mf) in dmorphisms.iter().enumerate() {
            for &g in &out_of[mf.dst.0] {
                let mg = &dmorphisms[g.0];
                let h = compose(DMorId(f), g).ok_or_else(|| DispError::MissingComposite(mf.name.clone(), name(g)))?;
                let mh = &dmorphisms[h.0];
                if mh.over != base.compose(mf.over, mg.over) || mh.src != mf.src || mh.dst != mg.dst {
                    return Err(DispError::BadComposite(mf.name.clone(), name(g)));
                }
                dcompose.insert((DMorId(f), g), h);
            }
        }
        for (f, mf) in dmorphisms.iter().enumerate() {
            let f = DMorId(f);
            if dcompose[&(didentity[mf.src.0], f)] != f || dcompose[&(f, didentity[mf.dst.0])] != f {
                return Err(DispError::UnitLaw(mf.name.clone()));
            }
        }
        for (f, mf) in dmorphisms.iter().enumerate() {
            let f = DMorId(f);
            for &g in &out_of[mf.dst.0] {
                let fg = dcompose[&(f, g)];
                for &h in &out_of[dmorphisms[g.0].dst.0] {
                    if dcompose[&(fg, h)] != dcompose[&(f, dcompose[&(g, h)])] {
                        return Err(DispError::NonAssociative(mf.name.clone(), name(g), name(h)));
                    }
                }
            }
        }
        let fibers = (0..base.num_objects()).map(|_| OnceLock::new()).collect();
        Ok(DispCat {
            base,
            dobjects,
            dobject_index,
            dmorphisms,
            dmorphism_index,
            didentity,
            over_object,
            dhom,
            dcompose,
            out_of,
            fibers,
        })
    }

    /// Validates a displayed presentation over `base`.
    pub fn from_presentation(base: Arc<FinCat>, p: &DispPresentation) -> Result<DispCat, DispError> {
        let mut dobjects = Vec::new();
        for x in base.objects() {
            if let Some(names) = p.dobjects.get(base.object_name(x)) {
                for n in names {
                    dobjects.push(DObject { name: n.clone(), over: x });
                }
            }
        }
        for k in p.dobjects.keys() {
            if base.object(k).is_none() {
                return Err(DispError::UnknownObject(k.clone()));
            }
        }
        let dindex: HashMap<&str, DObjId> =
            dobjects.iter().enumerate().map(|(i, d)| (d.name.as_str(), DObjId(i))).collect();
        let mut dmorphisms: Vec<DMorphism> = dobjects
            .iter()
            .enumerate()
            .map(|(i, d)| DMorphism {
                name: format!("id_{}", d.name),
                over: base.id(d.over),
                src: DObjId(i),
                dst: DObjId(i),
            })
            .collect();
        let didentity: Vec<DMorId> = (0..dobjects.len()).map(DMorId).collect();
        for m in &p.dmorphisms {
            let over = base.morphism(&m.over).ok_or_else(|| DispError::UnknownName(m.over.clone()))?;
            let src = *dindex.get(m.src.as_str()).ok_or_else(|| DispError::UnknownName(m.src.clone()))?;
            let dst = *dindex.get(m.dst.as_str()).ok_or_else(|| DispError::UnknownName(m.dst.clone()))?;
            dmorphisms.push(DMorphism { name: m.name.clone(), over, src, dst });
        }
        let mindex: HashMap<&str, DMorId> =
            dmorphisms.iter().enumerate().map(|(i, d)| (d.name.as_str(), DMorId(i))).collect();
        if mindex.len() != dmorphisms.len() {
            let mut seen = std::collections::HashSet::new();
            let dup = dmorphisms.iter().find(|m| !seen.insert(&m.name)).unwrap();
            return Err(DispError::DuplicateName(dup.name.clone()));
        }
        let mut table: HashMap<(DMorId, DMorId), DMorId> = HashMap::new();
        for c in &p.dcomposition {
            let look = |n: &str| mindex.get(n).copied().ok_or_else(|| DispError::UnknownName(n.to_string()));
            let (f, g, h) = (look(&c.first)?, look(&c.then)?, look(&c.equals)?);
            if let Some(prev) = table.insert((f, g), h) {
                if prev != h {
                    return Err(DispError::ConflictingComposite(c.first.clone(), c.then.clone()));
                }
            }
        }
        let n_ids = didentity.len();
        DispCat::from_parts(base, dobjects, dmorphisms.clone(), didentity, |f, g| {
            table.get(&(f, g)).copied().or_else(|| {
                if g.0 < n_ids && dmorphisms[f.0].dst == DObjId(g.0) {
                    Some(f)
                } else if f.0 < n_ids && dmorphisms[g.0].src == DObjId(f.0) {
                    Some(g)
                } else {
                    None
                }
            })
        })
    }

    /// Back to a presentation (implicit identities are omitted).
    pub fn to_presentation(&self) -> DispPresentation {
        let mut p = DispPresentation::default();
        for x in self.base.objects() {
            let names: Vec<String> = self.over(x).iter().map(|&d| self.dobjects[d.0].name.clone()).collect();
            if !names.is_empty() {
                p.dobjects.insert(self.base.object_name(x).to_string(), names);
            }
        }
        let implicit = |f: DMorId| {
            let m = &self.dmorphisms[f.0];
            self.didentity[m.src.0] == f && m.name == format!("id_{}", self.dobjects[m.src.0].name)
        };
        for (i, m) in self.dmorphisms.iter().enumerate() {
            if implicit(DMorId(i)) {
                continue;
            }
            p.dmorphisms.push(DMorphismDecl {
                over: self.base.morphism_name(m.over).into(),
                src: self.dobjects[m.src.0].name.clone(),
                dst: self.dobjects[m.dst.0].name.clone(),
                name: m.name.clone(),
            });
        }
        let mut pairs: Vec<_> = self.dcompose.iter().collect();
        pairs.sort();
        for (&(f, g), &h) in pairs {
            if self.is_didentity(f) || self.is_didentity(g) {
                continue;
            }
            p.dcomposition.push(crate::fincat::CompositionDecl {
                first: self.dmorphisms[f.0].name.clone(),
                then: self.dmorphisms[g.0].name.clone(),
                equals: self.dmorphisms[h.0].name.clone(),
            });
        }
        p
    }

    pub fn base(&self) -> &Arc<FinCat> {
        &self.base
    }

    pub fn num_dobjects(&self) -> usize {
        self.dobjects.len()
    }

    pub fn num_dmorphisms(&self) -> usize {
        self.dmorphisms.len()
    }

    pub fn dobjects(&self) -> impl DoubleEndedIterator<Item = DObjId> + ExactSizeIterator + 'static {
        (0..self.dobjects.len()).map(DObjId)
    }

    pub fn dmorphisms(&self) -> impl DoubleEndedIterator<Item = DMorId> + ExactSizeIterator + 'static {
        (0..self.dmorphisms.len()).map(DMorId)
    }

    pub fn dobject(&self, d: DObjId) -> &DObject {
        &self.dobjects[d.0]
    }

    pub fn dmorphism(&self, f: DMorId) -> &DMorphism {
        &self.dmorphisms[f.0]
    }

    pub fn dobject_named(&self, name: &str) -> Option<DObjId> {
        self.dobject_index.get(name).copied()
    }

    pub fn dmorphism_named(&self, name: &str) -> Option<DMorId> {
        self.dmorphism_index.get(name).copied()
    }

    pub fn dobject_name(&self, d: DObjId) -> &str {
        &self.dobjects[d.0].name
    }

    pub fn dmorphism_name(&self, f: DMorId) -> &str {
        &self.dmorphisms[f.0].name
    }

    /// Base object a displayed object lies over.
    pub fn over_of(&self, d: DObjId) -> ObjId {
        self.dobjects[d.0].over
    }

    /// Displayed objects over `x`, in declaration order.
    pub fn over(&self, x: ObjId) -> &[DObjId] {
        &self.over_object[x.0]
    }

    /// Displayed morphisms over `f` from `a` to `b`.
    pub fn dhom(&self, f: MorId, a: DObjId, b: DObjId) -> &[DMorId] {
        self.dhom.get(&(f, a, b)).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Displayed morphisms with domain `a`.
    pub fn dmorphisms_from(&self, a: DObjId) -> &[DMorId] {
        &self.out_of[a.0]
    }

    pub fn did(&self, d: DObjId) -> DMorId {
        self.didentity[d.0]
    }

    pub fn is_didentity(&self, f: DMorId) -> bool {
        self.didentity[self.dmorphisms[f.0].src.0] == f
    }

    pub fn dcompose(&self, f: DMorId, g: DMorId) -> DMorId {
        self.dcompose[&(f, g)]
    }

    pub fn try_dcompose(&self, f: DMorId, g: DMorId) -> Option<DMorId> {
        self.dcompose.get(&(f, g)).copied()
    }

    /// Is `f` a vertical isomorphism (over an identity, with a vertical inverse)?
    pub fn vertical_inverse(&self, f: DMorId) -> Option<DMorId> {
        let m = &self.dmorphisms[f.0];
        if !self.base.is_identity(m.over) {
            return None;
        }
        self.dhom(m.over, m.dst, m.src)
            .iter()
            .copied()
            .find(|&g| self.dcompose(f, g) == self.did(m.src) && self.dcompose(g, f) == self.did(m.dst))
    }

    /// First vertical isomorphism `a → b`, if any.
    pub fn find_vertical_iso(&self, a: DObjId, b: DObjId) -> Option<DMorId> {
        let x = self.over_of(a);
        if self.over_of(b) != x {
            return None;
        }
        self.dhom(self.base.id(x), a, b).iter().copied().find(|&f| self.vertical_inverse(f).is_some())
    }

    /// The fiber over `x` (computed once, then cached).
    pub fn fiber(&self, x: ObjId) -> &Fiber {
        self.fibers[x.0].get_or_init(|| self.build_fiber(x))
    }

    pub fn fiber_category(&self, x: ObjId) -> Result<Arc<FinCat>, DispError> {
        if x.0 >= self.base.num_objects() {
            return Err(DispError::UnknownObject(format!("#{}", x.0)));
        }
        Ok(self.fiber(x).cat.clone())
    }

    fn build_fiber(&self, x: ObjId) -> Fiber {
        let idx = self.base.id(x);
        let dobjs: Vec<DObjId> = self.over(x).to_vec();
        let obj_of: HashMap<DObjId, ObjId> = dobjs.iter().enumerate().map(|(i, &d)| (d, ObjId(i))).collect();
        let dmors: Vec<DMorId> = self.dmorphisms().filter(|&f| self.dmorphisms[f.0].over == idx).collect();
        let mor_of: HashMap<DMorId, MorId> = dmors.iter().enumerate().map(|(i, &f)| (f, MorId(i))).collect();
        let morphisms = dmors
            .iter()
            .map(|&f| {
                let m = &self.dmorphisms[f.0];
                Morphism { name: m.name.clone(), src: obj_of[&m.src], dst: obj_of[&m.dst] }
            })
            .collect();
        let identities = dobjs.iter().map(|&d| mor_of[&self.did(d)]).collect();
        let cat = FinCat::from_parts(
            dobjs.iter().map(|&d| self.dobjects[d.0].name.clone()).collect(),
            morphisms,
            identities,
            |u, v| mor_of.get(&self.dcompose(dmors[u.0], dmors[v.0])).copied(),
        )
        .expect("fibers of a valid displayed category are categories");
        Fiber { cat: Arc::new(cat), base: x, dobjs, dmors, obj_of, mor_of }
    }

    /// The total category with its projection to the base.
    pub fn total_category(&self) -> (Arc<FinCat>, FinFunctor) {
        let objects = self.dobjects.iter().map(|d| d.name.clone()).collect();
        let morphisms = self
            .dmorphisms
            .iter()
            .map(|m| Morphism { name: m.name.clone(), src: ObjId(m.src.0), dst: ObjId(m.dst.0) })
            .collect();
        let identities = self.didentity.iter().map(|f| MorId(f.0)).collect();
        let total = Arc::new(
            FinCat::from_parts(objects, morphisms, identities, |u, v| {
                self.try_dcompose(DMorId(u.0), DMorId(v.0)).map(|h| MorId(h.0))
            })
            .expect("total category of a valid displayed category is a category"),
        );
        let proj = FinFunctor::new(
            total.clone(),
            self.base.clone(),
            self.dobjects.iter().map(|d| d.over).collect(),
            self.dmorphisms.iter().map(|m| m.over).collect(),
        )
        .expect("projection is a functor");
        (total, proj)
    }
}

/// Reads a base presentation and a displayed presentation together.
pub fn disp_from_presentations(base: &Presentation, disp: &DispPresentation) -> Result<DispCat, DispError> {
    let base = Arc::new(validate_category(base)?);
    DispCat::from_presentation(base, disp)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_presentation_over_two() {
        let base = Presentation::poset(&["0", "1"], &[("0", "1")]);
        let mut p = DispPresentation::default();
        p.dobjects.insert("0".into(), vec!["a".into()]);
        p.dobjects.insert("1".into(), vec!["b".into(), "c".into()]);
        p.dmorphisms.push(DMorphismDecl { over: "le_0_1".into(), src: "a".into(), dst: "b".into(), name: "ab".into() });
        p.dmorphisms.push(DMorphismDecl { over: "id_1".into(), src: "b".into(), dst: "c".into(), name: "bc".into() });
        p.dmorphisms.push(DMorphismDecl { over: "le_0_1".into(), src: "a".into(), dst: "c".into(), name: "ac".into() });
        p.dcomposition.push(crate::fincat::CompositionDecl { first: "ab".into(), then: "bc".into(), equals: "ac".into() });
        let d = disp_from_presentations(&base, &p).unwrap();
        assert_eq!(d.num_dobjects(), 3);
        let f1 = d.fiber(d.base().object("1").unwrap());
        assert_eq!(f1.cat.num_objects(), 2);
        assert_eq!(f1.cat.num_morphisms(), 3);
        let (total, proj) = d.total_category();
        assert_eq!(total.num_morphisms(), 6);
        assert_eq!(proj.obj(ObjId(0)), d.base().object("0").unwrap());
        let back = DispCat::from_presentation(d.base().clone(), &d.to_presentation()).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn missing_displayed_composite() {
        let base = Presentation::poset(&["0", "1"], &[("0", "1")]);
        let mut p = DispPresentation::default();
        p.dobjects.insert("0".into(), vec!["a".into()]);
        p.dobjects.insert("1".into(), vec!["b".into(), "c".into()]);
        p.dmorphisms.push(DMorphismDecl { over: "le_0_1".into(), src: "a".into(), dst: "b".into(), name: "ab".into() });
        p.dmorphisms.push(DMorphismDecl { over: "id_1".into(), src: "b".into(), dst: "c".into(), name: "bc".into() });
        assert!(matches!(disp_from_presentations(&base, &p), Err(DispError::MissingComposite(..))));
    }
}
