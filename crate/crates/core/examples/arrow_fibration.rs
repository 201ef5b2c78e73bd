//! The codomain fibration of a finite category: its cleaving, fibers and
//! the Beck–Chevalley condition for the self-indexing.

use catlang::compcat::CompCat;
use catlang::displayed::{arrow_displayed, find_cleaving};
use catlang::fincat::{check_equivalence, slice_category, SearchBound};
use catlang::fixtures;
use catlang::typeformers::check_sigma_types;

fn main() {
    let c = fixtures::build(fixtures::div60());
    let arrows = arrow_displayed(&c);
    let cleaving = find_cleaving(&arrows.disp).expect("pullbacks exist");
    println!("Arr(Div60): {} types, {} squares; cleaving verified: {}", arrows.disp.num_dobjects(), arrows.disp.num_dmorphisms(), cleaving.verify());

    for x in c.objects() {
        let s = slice_category(&c, x).unwrap();
        assert!(check_equivalence(&arrows.fiber_to_slice(x, &s)).is_ok());
    }
    println!("every fiber is equivalent to its slice");

    let k = CompCat::self_indexing(&c).unwrap();
    let sigma = check_sigma_types(&k, SearchBound::default()).unwrap();
    let holds = sigma.bc.iter().filter(|e| e.holds).count();
    println!("Beck–Chevalley for Σ: {holds} of {} squares", sigma.bc.len());

    // Without pullbacks there is no cleaving.
    let v = fixtures::build(fixtures::v_shape());
    let missing = find_cleaving(&arrow_displayed(&v).disp).unwrap_err();
    println!("V-shape: no Cartesian lift of {} at {}", missing.morphism, missing.dobject);
}
