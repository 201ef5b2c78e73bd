//! A DFL comprehension category: the layered check, terms as sections and
//! essential preimages of context morphisms.

use std::sync::Arc;

use catlang::biequiv::essential_preimage;
use catlang::compcat::CompCat;
use catlang::fincat::SearchBound;
use catlang::fixtures;
use catlang::typeformers::check_dfl;

fn main() {
    let c = fixtures::build(fixtures::div6());
    let k = Arc::new(CompCat::self_indexing(&c).unwrap());
    let dfl = check_dfl(&k, SearchBound::default());
    println!("H(Div6) is DFL: {}", dfl.passed());
    println!("{}", serde_json::to_string_pretty(&dfl.to_json(&k)["verdict"]).unwrap());

    for a in k.types.over(k.terminal) {
        let terms = k.terms(*a);
        println!("type {} over ⊤ has {} term(s)", k.types.dobject_name(*a), terms.len());
    }

    for s in k.base.morphisms() {
        let e = essential_preimage(&k, &dfl, s).unwrap();
        println!(
            "{} ≅ π of {} via {}",
            k.base.morphism_name(s),
            k.types.dobject_name(e.ty),
            k.base.morphism_name(e.to)
        );
    }
}
