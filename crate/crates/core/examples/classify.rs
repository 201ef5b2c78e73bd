//! The classification table for every fixture.

use catlang::fincat::SearchBound;
use catlang::fixtures;
use catlang::localprops::classify_cat;

fn main() {
    for name in fixtures::NAMES {
        let c = fixtures::build(fixtures::named(name).unwrap());
        let r = classify_cat(&c, SearchBound::default());
        let flags: Vec<String> = r.flags().iter().map(|(n, v)| format!("{n}={}", v.label())).collect();
        println!("{name:12} {:22} {}", r.class.as_deref().unwrap_or("-"), r.signature.as_deref().unwrap_or("-"));
        println!("{:12} {}", "", flags.join(" "));
    }
}
