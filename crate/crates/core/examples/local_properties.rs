//! Local properties: checking, closure under slicing and pullback, and
//! transport across the self-indexing.

use catlang::biequiv::FinLimCat;
use catlang::fincat::SearchBound;
use catlang::fixtures;
use catlang::localprops::{check_property_closure, extend_biequiv_check, registry};

fn main() {
    let bound = SearchBound::default();
    let c = FinLimCat::new(fixtures::build(fixtures::cube())).unwrap();
    for p in registry() {
        let v = p.cat_check(&c.cat, bound);
        print!("{:22} {:15}", p.name(), v.label());
        if v.is_verified() {
            let closure = check_property_closure(&p, &c, bound);
            let transport = extend_biequiv_check(&c, &p, bound);
            print!(" closure {}  fiberwise {}", closure.pass, transport.pass);
        } else if let Some(w) = v.witness() {
            print!(" {w}");
        }
        println!();
    }
}
