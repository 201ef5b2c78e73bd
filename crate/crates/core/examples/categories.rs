//! Validating presentations, searching limits and building slices.

use catlang::fincat::{find_colimit, find_limit, is_gaunt, slice_category, validate_category, ColimitShape, LimitShape};
use catlang::fixtures;

fn main() {
    let c = fixtures::build(fixtures::div6());
    let (two, three) = (c.object("2").unwrap(), c.object("3").unwrap());

    // In a divisor lattice products are gcds and coproducts are lcms.
    let meet = find_limit(&c, LimitShape::BinaryProduct(two, three)).unwrap().unwrap();
    let join = find_colimit(&c, ColimitShape::BinaryCoproduct(two, three)).unwrap().unwrap();
    println!("2 × 3 = {}, 2 + 3 = {}", c.object_name(meet.apex), c.object_name(join.apex));

    let s = slice_category(&c, c.object("6").unwrap()).unwrap();
    println!("Div6/6 has {} objects and {} morphisms", s.cat.num_objects(), s.cat.num_morphisms());

    let iso = fixtures::build(fixtures::walking_iso());
    if let Some((f, g)) = is_gaunt(&iso) {
        println!("walking iso is not gaunt: {} has inverse {}", iso.morphism_name(f), iso.morphism_name(g));
    }

    // A composition table that breaks associativity is rejected with the offending triple.
    let broken = catlang::fincat::Presentation::new(["x"])
        .morphism("e", "x", "x")
        .morphism("s", "x", "x")
        .compose("e", "e", "e")
        .compose("s", "s", "e")
        .compose("e", "s", "e")
        .compose("s", "e", "s");
    println!("{}", validate_category(&broken).unwrap_err());
}
