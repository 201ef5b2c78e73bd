use std::collections::HashMap;
use std::sync::Arc;

use super::limits::{find_limit, Cone, LimitShape};
use super::{CategoryError, FinCat, FinFunctor, MorId, Morphism, ObjId};

/// The slice `C/x` with its domain projection back to `C`.
#[derive(Clone, Debug)]
pub struct Slice {
    pub cat: Arc<FinCat>,
    pub base: ObjId,
    pub projection: FinFunctor,
    arrows: Vec<MorId>,
    tops: Vec<MorId>,
    by_arrow: HashMap<MorId, ObjId>,
    by_triangle: HashMap<(ObjId, ObjId, MorId), MorId>,
}

/// Name of a triangle `h: g1 → g2` in a slice.
pub(crate) fn triangle_name(h: &str, g1: &str, g2: &str, is_id: bool) -> String {
    if is_id {
        format!("id_{g1}")
    } else {
        format!("{h}:{g1}->{g2}")
    }
}

/// Builds `C/x`: objects are morphisms into `x` (named after them) and
/// morphisms are commuting triangles.
pub fn slice_category(c: &Arc<FinCat>, x: ObjId) -> Result<Slice, CategoryError> {
    if x.0 >= c.num_objects() {
        return Err(CategoryError::DanglingEndpoint { morphism: "slice".into(), endpoint: format!("#{}", x.0) });
    }
    let arrows: Vec<MorId> = c.morphisms().filter(|&g| c.dst(g) == x).collect();
    let objects: Vec<String> = arrows.iter().map(|&g| c.morphism_name(g).to_string()).collect();
    let by_arrow: HashMap<MorId, ObjId> = arrows.iter().enumerate().map(|(i, &g)| (g, ObjId(i))).collect();
    let mut morphisms = Vec::new();
    let mut tops = Vec::new();
    let mut identities = vec![MorId(0); arrows.len()];
    let mut by_triangle = HashMap::new();
    for (i, &g1) in arrows.iter().enumerate() {
        for (j, &g2) in arrows.iter().enumerate() {
            for &h in c.hom(c.src(g1), c.src(g2)) {
                if c.compose(h, g2) != g1 {
                    continue;
                }
                let is_id = i == j && c.is_identity(h);
                let id = MorId(morphisms.len());
                if is_id {
                    identities[i] = id;
                }
                morphisms.push(Morphism {
                    name: triangle_name(c.morphism_name(h), &objects[i], &objects[j], is_id),
                    src: ObjId(i),
                    dst: ObjId(j),
                });
                tops.push(h);
                by_triangle.insert((ObjId(i), ObjId(j), h), id);
            }
        }
    }
    let cat = FinCat::from_parts(objects, morphisms.clone(), identities, |u, v| {
        let h = c.compose(tops[u.0], tops[v.0]);
        by_triangle.get(&(morphisms[u.0].src, morphisms[v.0].dst, h)).copied()
    })?;
    let cat = Arc::new(cat);
    let projection = FinFunctor::new(
        cat.clone(),
        c.clone(),
        arrows.iter().map(|&g| c.src(g)).collect(),
        tops.clone(),
    )
    .expect("domain projection is a functor");
    Ok(Slice { cat, base: x, projection, arrows, tops, by_arrow, by_triangle })
}

impl Slice {
    /// The morphism into the base object that a slice object stands for.
    pub fn arrow(&self, o: ObjId) -> MorId {
        self.arrows[o.0]
    }

    /// The top arrow of a slice morphism.
    pub fn top(&self, m: MorId) -> MorId {
        self.tops[m.0]
    }

    pub fn object_of(&self, g: MorId) -> Option<ObjId> {
        self.by_arrow.get(&g).copied()
    }

    pub fn morphism_of(&self, from: ObjId, to: ObjId, top: MorId) -> Option<MorId> {
        self.by_triangle.get(&(from, to, top)).copied()
    }

    pub fn underlying(&self) -> &Arc<FinCat> {
        self.projection.target()
    }
}

/// The pullback functor `f*: C/y → C/x` for `f: x → y`, using chosen
/// pullbacks; `None` if some pullback along `f` is missing.
pub fn pullback_functor(c: &Arc<FinCat>, f: MorId, over_y: &Slice, over_x: &Slice) -> Option<FinFunctor> {
    assert_eq!(over_y.base, c.dst(f));
    assert_eq!(over_x.base, c.src(f));
    let mut limits = Vec::new();
    let mut on_objects = Vec::new();
    for o in over_y.cat.objects() {
        let g = over_y.arrow(o);
        let w = find_limit(c, LimitShape::Pullback(g, f)).ok()??;
        on_objects.push(over_x.object_of(w.legs[1])?);
        limits.push(w);
    }
    let mut on_morphisms = Vec::new();
    for m in over_y.cat.morphisms() {
        let (a, b) = (over_y.cat.src(m), over_y.cat.dst(m));
        let (wa, wb) = (&limits[a.0], &limits[b.0]);
        let cone = Cone {
            apex: wa.apex,
            legs: vec![c.compose(wa.legs[0], over_y.top(m)), wa.legs[1], wa.legs[2]],
        };
        let u = wb.mediator(c, &cone)?;
        on_morphisms.push(over_x.morphism_of(on_objects[a.0], on_objects[b.0], u)?);
    }
    FinFunctor::new(over_y.cat.clone(), over_x.cat.clone(), on_objects, on_morphisms).ok()
}

/// `F/x: C/x → D/Fx`, applying `F` to arrows and triangles.
pub fn slice_functor(f: &FinFunctor, src: &Slice, tgt: &Slice) -> Option<FinFunctor> {
    let on_objects = src
        .cat
        .objects()
        .map(|o| tgt.object_of(f.mor(src.arrow(o))))
        .collect::<Option<Vec<_>>>()?;
    let on_morphisms = src
        .cat
        .morphisms()
        .map(|m| {
            tgt.morphism_of(on_objects[src.cat.src(m).0], on_objects[src.cat.dst(m).0], f.mor(src.top(m)))
        })
        .collect::<Option<Vec<_>>>()?;
    FinFunctor::new(src.cat.clone(), tgt.cat.clone(), on_objects, on_morphisms).ok()
}

#[cfg(test)]
mod tests {
    use super::super::find_isomorphism;
    use super::*;

    fn div6() -> Arc<FinCat> {
        Arc::new(FinCat::poset(&["1", "2", "3", "6"], &[("1", "2"), ("1", "3"), ("2", "6"), ("3", "6")]).unwrap())
    }

    #[test]
    fn slice_over_top_is_whole_poset() {
        let c = div6();
        let s = slice_category(&c, c.object("6").unwrap()).unwrap();
        assert!(find_isomorphism(&s.cat, &c).is_some());
        let s2 = slice_category(&c, c.object("2").unwrap()).unwrap();
        assert_eq!(s2.cat.num_objects(), 2);
        assert_eq!(s2.cat.num_morphisms(), 3);
    }

    #[test]
    fn pullback_along_le_2_6_is_meet_with_2() {
        let c = div6();
        let f = c.morphism("le_2_6").unwrap();
        let over6 = slice_category(&c, c.object("6").unwrap()).unwrap();
        let over2 = slice_category(&c, c.object("2").unwrap()).unwrap();
        let pb = pullback_functor(&c, f, &over6, &over2).unwrap();
        for (d, meet) in [("1", "1"), ("2", "2"), ("3", "1"), ("6", "2")] {
            let g = if d == "6" { c.morphism("id_6") } else { c.morphism(&format!("le_{d}_6")) }.unwrap();
            let img = pb.obj(over6.object_of(g).unwrap());
            assert_eq!(c.object_name(c.src(over2.arrow(img))), meet);
        }
    }
}
