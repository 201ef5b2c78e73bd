//! Galois connections as adjunctions between finite posets, and
//! equivalences with explicit quasi-inverses.

use std::sync::Arc;

use catlang::fincat::{check_equivalence, check_functor, find_adjoint, FinCat, FinFunctor, SearchBound, Side};
use catlang::fixtures;

fn main() {
    // The diagonal 2 → 2 × 2 has both adjoints: join on the left, meet on the right.
    let two = fixtures::build(fixtures::two());
    let square = Arc::new(FinCat::poset(&["00", "01", "10", "11"], &[("00", "01"), ("00", "10"), ("01", "11"), ("10", "11")]).unwrap());
    let diag = FinFunctor::from_object_map(two, square.clone(), vec![square.object("00").unwrap(), square.object("11").unwrap()]).unwrap();
    for side in [Side::Left, Side::Right] {
        let adj = find_adjoint(&diag, side, SearchBound::default()).unwrap();
        let g = if side == Side::Left { &adj.left } else { &adj.right };
        println!("{side:?} adjoint of the diagonal: {:?}", g.object_names());
    }

    // The constant functor to the point is faithful but not full.
    let div6 = fixtures::build(fixtures::div6());
    let one = fixtures::build(fixtures::one());
    let k = FinFunctor::constant(div6.clone(), one, catlang::fincat::ObjId(0));
    let r = check_functor(&k);
    println!("Div6 → 1: faithful {}, full {}", r.faithful, r.full);
    if let Err(e) = check_equivalence(&k) {
        println!("Div6 → 1 is not an equivalence: {e}");
    }

    let id = FinFunctor::identity(div6);
    let w = check_equivalence(&id).unwrap();
    println!("identity has unit iso: {}", w.unit.is_iso());
}
