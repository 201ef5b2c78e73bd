//! Interpreting a small extensional type theory in H(Div6).

use std::sync::Arc;

use catlang::compcat::CompCat;
use catlang::fincat::SearchBound;
use catlang::fixtures;
use catlang::ttlang::{check_equal, interpret_source, parse, Model};

const PROGRAM: &str = "
ctx G := (x : Unit, y : Unit)
type P in G := Prod(Unit, Unit)
term p : P in G := pair x y
check fst p == x : Unit in G
term s : Sigma (z : Unit) (Eq z z) in () := pair tt (refl tt)
term f : Pi (z : Unit) (Prod(Unit, Unit)) in () := lam (pair z z)
check app f tt == pair tt tt : Prod(Unit, Unit) in ()
";

fn main() {
    let c = fixtures::build(fixtures::div6());
    let m = Model::new(Arc::new(CompCat::self_indexing(&c).unwrap()), SearchBound::default()).unwrap();
    let i = interpret_source(PROGRAM, &m).unwrap();
    println!("{}", serde_json::to_string_pretty(&i.to_json(&m)).unwrap());

    let decls = parse("term t : Unit in () := tt").unwrap();
    let judgment = parse("check t == tt : Unit in ()").unwrap().pop().unwrap();
    println!("t == tt: {}", check_equal(&m, &decls, &judgment).unwrap());

    match interpret_source("term t : Unit in () := pair tt tt", &m) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
}
