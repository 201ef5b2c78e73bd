//! Isomorphism search between presentations (up to renaming).

use std::sync::Arc;

use super::{FinCat, FinFunctor, MorId, ObjId};

/// Finds an isomorphism of categories `c → d` by backtracking, first over
/// objects (matching hom-set sizes) and then over morphisms.
pub fn find_isomorphism(c: &Arc<FinCat>, d: &Arc<FinCat>) -> Option<FinFunctor> {
    if c.num_objects() != d.num_objects() || c.num_morphisms() != d.num_morphisms() {
        return None;
    }
    let mut objs: Vec<Option<ObjId>> = vec![None; c.num_objects()];
    let mut used = vec![false; d.num_objects()];
    let mut result = None;
    assign_objects(c, d, 0, &mut objs, &mut used, &mut result);
    result
}

fn assign_objects(
    c: &Arc<FinCat>,
    d: &Arc<FinCat>,
    k: usize,
    objs: &mut Vec<Option<ObjId>>,
    used: &mut Vec<bool>,
    result: &mut Option<FinFunctor>,
) {
    if result.is_some() {
        return;
    }
    if k == c.num_objects() {
        let on_objects: Vec<ObjId> = objs.iter().map(|o| o.unwrap()).collect();
        let mut mors: Vec<Option<MorId>> = vec![None; c.num_morphisms()];
        let mut mused = vec![false; d.num_morphisms()];
        for x in c.objects() {
            mors[c.id(x).0] = Some(d.id(on_objects[x.0]));
            mused[d.id(on_objects[x.0]).0] = true;
        }
        let order: Vec<MorId> = c.morphisms().filter(|&f| !c.is_identity(f)).collect();
        if assign_morphisms(c, d, &on_objects, &order, 0, &mut mors, &mut mused) {
            let on_morphisms = mors.into_iter().map(|m| m.unwrap()).collect();
            *result = FinFunctor::new(c.clone(), d.clone(), on_objects, on_morphisms).ok();
        }
        return;
    }
    let x = ObjId(k);
    for y in d.objects() {
        if used[y.0] {
            continue;
        }
        let ok = (0..k).chain(std::iter::once(k)).all(|j| {
            let (xj, yj) = (ObjId(j), if j == k { y } else { objs[j].unwrap() });
            c.hom(x, xj).len() == d.hom(y, yj).len() && c.hom(xj, x).len() == d.hom(yj, y).len()
        });
        if !ok {
            continue;
        }
        objs[k] = Some(y);
        used[y.0] = true;
        assign_objects(c, d, k + 1, objs, used, result);
        used[y.0] = false;
        objs[k] = None;
        if result.is_some() {
            return;
        }
    }
}

fn assign_morphisms(
    c: &FinCat,
    d: &FinCat,
    on_objects: &[ObjId],
    order: &[MorId],
    k: usize,
    mors: &mut Vec<Option<MorId>>,
    used: &mut Vec<bool>,
) -> bool {
    if k == order.len() {
        return true;
    }
    let f = order[k];
    let (a, b) = (on_objects[c.src(f).0], on_objects[c.dst(f).0]);
    for &g in d.hom(a, b) {
        if used[g.0] {
            continue;
        }
        mors[f.0] = Some(g);
        if consistent(c, d, f, mors) {
            used[g.0] = true;
            if assign_morphisms(c, d, on_objects, order, k + 1, mors, used) {
                return true;
            }
            used[g.0] = false;
        }
        mors[f.0] = None;
    }
    false
}

/// Checks every fully assigned composite triangle that involves `f`.
fn consistent(c: &FinCat, d: &FinCat, f: MorId, mors: &[Option<MorId>]) -> bool {
    let check = |u: MorId, v: MorId| -> bool {
        let w = c.compose(u, v);
        match (mors[u.0], mors[v.0], mors[w.0]) {
            (Some(a), Some(b), Some(h)) => d.compose(a, b) == h,
            _ => true,
        }
    };
    for z in c.objects() {
        for &g in c.hom(c.dst(f), z) {
            if !check(f, g) {
                return false;
            }
        }
        for &g in c.hom(z, c.src(f)) {
            if !check(g, f) {
                return false;
            }
        }
    }
    // f as a composite of two assigned morphisms
    let (x, y) = (c.src(f), c.dst(f));
    for m in c.objects() {
        for &u in c.hom(x, m) {
            for &v in c.hom(m, y) {
                if c.compose(u, v) == f && !check(u, v) {
                    return false;
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabeled_poset_is_isomorphic() {
        let a = Arc::new(FinCat::poset(&["1", "2", "3", "6"], &[("1", "2"), ("1", "3"), ("2", "6"), ("3", "6")]).unwrap());
        let b = Arc::new(FinCat::poset(&["t", "l", "r", "b"], &[("b", "l"), ("b", "r"), ("l", "t"), ("r", "t")]).unwrap());
        let f = find_isomorphism(&a, &b).unwrap();
        assert_eq!(b.object_name(f.obj(a.object("1").unwrap())), "b");
        let chain = Arc::new(FinCat::poset(&["a", "b", "c", "d"], &[("a", "b"), ("b", "c"), ("c", "d")]).unwrap());
        assert!(find_isomorphism(&a, &chain).is_none());
    }
}
