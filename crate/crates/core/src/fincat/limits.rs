//! Limits and colimits of finite diagrams by exhaustive cone search.

use thiserror::Error;

use super::{FinCat, MorId, ObjId};

/// Whether cones point into the diagram (limits) or out of it (colimits).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Limit,
    Colimit,
}

/// A finite diagram: vertices are objects, edges `(i, j, f)` say `f: D(i) → D(j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagram {
    pub vertices: Vec<ObjId>,
    pub edges: Vec<(usize, usize, MorId)>,
}

/// A cone (or cocone) with one leg per diagram vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cone {
    pub apex: ObjId,
    pub legs: Vec<MorId>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LimitShape {
    Terminal,
    BinaryProduct(ObjId, ObjId),
    /// Parallel pair `f, g: a → b`.
    Equalizer(MorId, MorId),
    /// Cospan `f: a → c ← b: g`.
    Pullback(MorId, MorId),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ColimitShape {
    Initial,
    BinaryCoproduct(ObjId, ObjId),
    Coequalizer(MorId, MorId),
}

/// Shape tags, without the diagram data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ShapeKind {
    Terminal,
    BinaryProduct,
    Equalizer,
    Pullback,
}

impl ShapeKind {
    pub const ALL: [ShapeKind; 4] =
        [ShapeKind::Terminal, ShapeKind::BinaryProduct, ShapeKind::Equalizer, ShapeKind::Pullback];

    pub fn name(self) -> &'static str {
        match self {
            ShapeKind::Terminal => "terminal",
            ShapeKind::BinaryProduct => "binary_product",
            ShapeKind::Equalizer => "equalizer",
            ShapeKind::Pullback => "pullback",
        }
    }

    /// Every diagram of this kind in `c`, in a fixed order.
    pub fn instances(self, c: &FinCat) -> Vec<LimitShape> {
        match self {
            ShapeKind::Terminal => vec![LimitShape::Terminal],
            ShapeKind::BinaryProduct => c
                .objects()
                .flat_map(|a| c.objects().map(move |b| LimitShape::BinaryProduct(a, b)))
                .collect(),
            ShapeKind::Equalizer => c
                .morphisms()
                .flat_map(|f| {
                    c.hom(c.src(f), c.dst(f)).iter().map(move |&g| LimitShape::Equalizer(f, g))
                })
                .collect(),
            ShapeKind::Pullback => c
                .morphisms()
                .flat_map(|f| {
                    c.morphisms()
                        .filter(move |&g| c.dst(g) == c.dst(f))
                        .map(move |g| LimitShape::Pullback(f, g))
                })
                .collect(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("diagram does not match its shape: {0}")]
pub struct ShapeMismatch(pub String);

/// Common interface of limit and colimit shape tags.
pub trait UniversalShape: Copy + std::fmt::Debug {
    const DIRECTION: Direction;
    fn diagram(&self, c: &FinCat) -> Result<Diagram, ShapeMismatch>;
    fn tag(&self) -> &'static str;
}

fn check_obj(c: &FinCat, x: ObjId) -> Result<(), ShapeMismatch> {
    if x.0 < c.num_objects() {
        Ok(())
    } else {
        Err(ShapeMismatch(format!("object #{} not in category", x.0)))
    }
}

fn check_mor(c: &FinCat, f: MorId) -> Result<(), ShapeMismatch> {
    if f.0 < c.num_morphisms() {
        Ok(())
    } else {
        Err(ShapeMismatch(format!("morphism #{} not in category", f.0)))
    }
}

fn parallel(c: &FinCat, f: MorId, g: MorId) -> Result<Diagram, ShapeMismatch> {
    check_mor(c, f)?;
    check_mor(c, g)?;
    if c.src(f) != c.src(g) || c.dst(f) != c.dst(g) {
        return Err(ShapeMismatch(format!(
            "`{}` and `{}` are not parallel",
            c.morphism_name(f),
            c.morphism_name(g)
        )));
    }
    Ok(Diagram { vertices: vec![c.src(f), c.dst(f)], edges: vec![(0, 1, f), (0, 1, g)] })
}

impl UniversalShape for LimitShape {
    const DIRECTION: Direction = Direction::Limit;

    fn diagram(&self, c: &FinCat) -> Result<Diagram, ShapeMismatch> {
        match *self {
            LimitShape::Terminal => Ok(Diagram { vertices: vec![], edges: vec![] }),
            LimitShape::BinaryProduct(a, b) => {
                check_obj(c, a)?;
                check_obj(c, b)?;
                Ok(Diagram { vertices: vec![a, b], edges: vec![] })
            }
            LimitShape::Equalizer(f, g) => parallel(c, f, g),
            LimitShape::Pullback(f, g) => {
                check_mor(c, f)?;
                check_mor(c, g)?;
                if c.dst(f) != c.dst(g) {
                    return Err(ShapeMismatch(format!(
                        "`{}` and `{}` do not share a codomain",
                        c.morphism_name(f),
                        c.morphism_name(g)
                    )));
                }
                Ok(Diagram {
                    vertices: vec![c.src(f), c.src(g), c.dst(f)],
                    edges: vec![(0, 2, f), (1, 2, g)],
                })
            }
        }
    }

    fn tag(&self) -> &'static str {
        self.kind().name()
    }
}

impl LimitShape {
    /// Human-readable form using names from `c`.
    pub fn describe(&self, c: &FinCat) -> String {
        match *self {
            LimitShape::Terminal => "terminal".into(),
            LimitShape::BinaryProduct(a, b) => format!("binary_product({}, {})", c.object_name(a), c.object_name(b)),
            LimitShape::Equalizer(f, g) => format!("equalizer({}, {})", c.morphism_name(f), c.morphism_name(g)),
            LimitShape::Pullback(f, g) => format!("pullback({}, {})", c.morphism_name(f), c.morphism_name(g)),
        }
    }

    pub fn kind(&self) -> ShapeKind {
        match self {
            LimitShape::Terminal => ShapeKind::Terminal,
            LimitShape::BinaryProduct(..) => ShapeKind::BinaryProduct,
            LimitShape::Equalizer(..) => ShapeKind::Equalizer,
            LimitShape::Pullback(..) => ShapeKind::Pullback,
        }
    }
}

impl UniversalShape for ColimitShape {
    const DIRECTION: Direction = Direction::Colimit;

    fn diagram(&self, c: &FinCat) -> Result<Diagram, ShapeMismatch> {
        match *self {
            ColimitShape::Initial => Ok(Diagram { vertices: vec![], edges: vec![] }),
            ColimitShape::BinaryCoproduct(a, b) => {
                check_obj(c, a)?;
                check_obj(c, b)?;
                Ok(Diagram { vertices: vec![a, b], edges: vec![] })
            }
            ColimitShape::Coequalizer(f, g) => parallel(c, f, g),
        }
    }

    fn tag(&self) -> &'static str {
        match self {
            ColimitShape::Initial => "initial",
            ColimitShape::BinaryCoproduct(..) => "binary_coproduct",
            ColimitShape::Coequalizer(..) => "coequalizer",
        }
    }
}

/// A universal (co)cone together with the mediator for every competing one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness<S> {
    pub shape: S,
    pub apex: ObjId,
    pub legs: Vec<MorId>,
    pub mediators: Vec<(Cone, MorId)>,
}

pub type LimitWitness = Witness<LimitShape>;
pub type ColimitWitness = Witness<ColimitShape>;

impl<S: UniversalShape> Witness<S> {
    pub fn cone(&self) -> Cone {
        Cone { apex: self.apex, legs: self.legs.clone() }
    }

    /// Builds the witness for a given cone if it is universal.
    pub fn from_cone(c: &FinCat, shape: S, cone: &Cone) -> Option<Self> {
        let d = shape.diagram(c).ok()?;
        if !is_cone(c, &d, S::DIRECTION, cone) {
            return None;
        }
        let mut table = Vec::new();
        for w in c.objects() {
            for other in cones(c, &d, S::DIRECTION, w) {
                match mediators(c, S::DIRECTION, cone, &other).as_slice() {
                    [u] => table.push((other, *u)),
                    _ => return None,
                }
            }
        }
        Some(Witness { shape, apex: cone.apex, legs: cone.legs.clone(), mediators: table })
    }

    /// Re-checks the universal property from scratch.
    pub fn verify(&self, c: &FinCat) -> bool {
        let Ok(d) = self.shape.diagram(c) else { return false };
        let cone = self.cone();
        if !is_cone(c, &d, S::DIRECTION, &cone) {
            return false;
        }
        let mut stored = self.mediators.iter();
        for w in c.objects() {
            for other in cones(c, &d, S::DIRECTION, w) {
                let found = mediators(c, S::DIRECTION, &cone, &other);
                match (found.as_slice(), stored.next()) {
                    ([u], Some((k, v))) if *k == other && v == u => {}
                    _ => return false,
                }
            }
        }
        stored.next().is_none()
    }

    /// The unique mediator from a competing cone, if it is one.
    pub fn mediator(&self, c: &FinCat, other: &Cone) -> Option<MorId> {
        match mediators(c, S::DIRECTION, &self.cone(), other).as_slice() {
            [u] => Some(*u),
            _ => None,
        }
    }
}

pub(crate) fn leg_ok(c: &FinCat, d: &Diagram, dir: Direction, cone: &Cone, v: usize, leg: MorId) -> bool {
    match dir {
        Direction::Limit => c.src(leg) == cone.apex && c.dst(leg) == d.vertices[v],
        Direction::Colimit => c.src(leg) == d.vertices[v] && c.dst(leg) == cone.apex,
    }
}

/// Does the cone commute with every edge of the diagram?
pub fn is_cone(c: &FinCat, d: &Diagram, dir: Direction, cone: &Cone) -> bool {
    cone.legs.len() == d.vertices.len()
        && cone.legs.iter().enumerate().all(|(v, &l)| leg_ok(c, d, dir, cone, v, l))
        && d.edges.iter().all(|&(i, j, e)| edge_ok(c, dir, &cone.legs, i, j, e))
}

fn edge_ok(c: &FinCat, dir: Direction, legs: &[MorId], i: usize, j: usize, e: MorId) -> bool {
    match dir {
        Direction::Limit => c.compose(legs[i], e) == legs[j],
        Direction::Colimit => c.compose(e, legs[j]) == legs[i],
    }
}

/// All cones over `d` with apex `w`, in lexicographic leg order.
pub fn cones(c: &FinCat, d: &Diagram, dir: Direction, w: ObjId) -> Vec<Cone> {
    let n = d.vertices.len();
    let choices: Vec<&[MorId]> = d
        .vertices
        .iter()
        .map(|&v| match dir {
            Direction::Limit => c.hom(w, v),
            Direction::Colimit => c.hom(v, w),
        })
        .collect();
    let mut out = Vec::new();
    let mut legs = Vec::with_capacity(n);
    fn go(
        c: &FinCat,
        d: &Diagram,
        dir: Direction,
        w: ObjId,
        choices: &[&[MorId]],
        legs: &mut Vec<MorId>,
        out: &mut Vec<Cone>,
    ) {
        let k = legs.len();
        if k == choices.len() {
            out.push(Cone { apex: w, legs: legs.clone() });
            return;
        }
        for &l in choices[k] {
            legs.push(l);
            let ok = d
                .edges
                .iter()
                .filter(|&&(i, j, _)| i.max(j) == k)
                .all(|&(i, j, e)| edge_ok(c, dir, legs, i, j, e));
            if ok {
                go(c, d, dir, w, choices, legs, out);
            }
            legs.pop();
        }
    }
    go(c, d, dir, w, &choices, &mut legs, &mut out);
    out
}

/// Every morphism factoring `other` through `universal`.
pub fn mediators(c: &FinCat, dir: Direction, universal: &Cone, other: &Cone) -> Vec<MorId> {
    let candidates = match dir {
        Direction::Limit => c.hom(other.apex, universal.apex),
        Direction::Colimit => c.hom(universal.apex, other.apex),
    };
    candidates
        .iter()
        .copied()
        .filter(|&u| {
            universal.legs.iter().zip(&other.legs).all(|(&l, &o)| match dir {
                Direction::Limit => c.compose(u, l) == o,
                Direction::Colimit => c.compose(l, u) == o,
            })
        })
        .collect()
}

fn search<S: UniversalShape>(c: &FinCat, shape: S) -> Result<Option<Witness<S>>, ShapeMismatch> {
    let d = shape.diagram(c)?;
    let all: Vec<Cone> = c.objects().flat_map(|w| cones(c, &d, S::DIRECTION, w)).collect();
    for cand in &all {
        let mut table = Vec::with_capacity(all.len());
        let universal = all.iter().all(|other| match mediators(c, S::DIRECTION, cand, other).as_slice() {
            [u] => {
                table.push((other.clone(), *u));
                true
            }
            _ => false,
        });
        if universal {
            return Ok(Some(Witness { shape, apex: cand.apex, legs: cand.legs.clone(), mediators: table }));
        }
    }
    Ok(None)
}

/// Searches for a limit of the given shape; the earliest apex (then the
/// earliest cone) wins.
pub fn find_limit(c: &FinCat, shape: LimitShape) -> Result<Option<LimitWitness>, ShapeMismatch> {
    search(c, shape)
}

/// Dual of [`find_limit`].
pub fn find_colimit(c: &FinCat, shape: ColimitShape) -> Result<Option<ColimitWitness>, ShapeMismatch> {
    search(c, shape)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn div6() -> FinCat {
        FinCat::poset(&["1", "2", "3", "6"], &[("1", "2"), ("1", "3"), ("2", "6"), ("3", "6")]).unwrap()
    }

    #[test]
    fn div6_limits_are_meets() {
        let c = div6();
        let o = |n| c.object(n).unwrap();
        let t = find_limit(&c, LimitShape::Terminal).unwrap().unwrap();
        assert_eq!(t.apex, o("6"));
        let p = find_limit(&c, LimitShape::BinaryProduct(o("2"), o("3"))).unwrap().unwrap();
        assert_eq!(p.apex, o("1"));
        assert!(p.verify(&c));
        let pb = find_limit(
            &c,
            LimitShape::Pullback(c.morphism("le_2_6").unwrap(), c.morphism("le_3_6").unwrap()),
        )
        .unwrap()
        .unwrap();
        assert_eq!(pb.apex, o("1"));
        assert!(pb.verify(&c));
    }

    #[test]
    fn div6_colimits_are_joins() {
        let c = div6();
        let o = |n| c.object(n).unwrap();
        assert_eq!(find_colimit(&c, ColimitShape::Initial).unwrap().unwrap().apex, o("1"));
        let s = find_colimit(&c, ColimitShape::BinaryCoproduct(o("2"), o("3"))).unwrap().unwrap();
        assert_eq!(s.apex, o("6"));
        assert!(s.verify(&c));
    }

    #[test]
    fn shape_mismatch() {
        let c = div6();
        let r = find_limit(
            &c,
            LimitShape::Pullback(c.morphism("le_1_2").unwrap(), c.morphism("le_1_3").unwrap()),
        );
        assert!(r.is_err());
    }

    #[test]
    fn discrete_two_has_no_terminal() {
        let c = FinCat::poset(&["a", "b"], &[]).unwrap();
        assert!(find_limit(&c, LimitShape::Terminal).unwrap().is_none());
    }
}
