//! H and U on objects, the comparison ζ, and the roundtrip laws on a
//! relabeled comprehension category.

use std::sync::Arc;

use catlang::biequiv::{relabeled_self_indexing, roundtrip_compcat, roundtrip_finlim, u_object, zeta_component, FinLimCat};
use catlang::fixtures;
use catlang::typeformers::is_adjequiv_1cell;

fn main() {
    for (name, p) in [("two", fixtures::two()), ("div6", fixtures::div6()), ("cube", fixtures::cube())] {
        let c = FinLimCat::new(fixtures::build(p)).unwrap();
        let r = roundtrip_finlim(&c).unwrap();
        println!("{name}: UH roundtrip {}", if r.pass { "holds" } else { "fails" });
    }

    // Types renamed so that the comprehension is not literally the identity.
    let c = fixtures::build(fixtures::div6());
    let k = Arc::new(relabeled_self_indexing(&c, "T").unwrap());
    let u = u_object(&k).unwrap();
    println!("U(K) has {} objects and {} chosen limits", u.cat.num_objects(), u.witnesses.len());
    let zeta = zeta_component(&k).unwrap();
    println!("ζ_K is an adjoint equivalence: {}", is_adjequiv_1cell(&zeta));
    for c in roundtrip_compcat(&k).unwrap().checks {
        println!("  {}: {}", c.name, c.pass);
    }
}
