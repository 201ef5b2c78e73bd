use std::path::PathBuf;
use std::sync::Arc;

use catlang::biequiv::{h_object, FinLimCat};
use catlang::fincat::SearchBound;
use catlang::fixtures::{self, build};
use catlang::ttlang::{interpret_source, Model};

fn corpus() -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data/tt");
    let mut files: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    files
        .into_iter()
        .filter(|p| p.extension().is_some_and(|e| e == "tt"))
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read_to_string(&p).unwrap()))
        .collect()
}

fn model(p: catlang::fincat::Presentation) -> Model {
    let c = FinLimCat::new(build(p)).unwrap();
    Model::new(Arc::new(h_object(&c).unwrap()), SearchBound::default()).unwrap()
}

#[test]
fn every_file_interprets_and_every_check_holds() {
    let files = corpus();
    assert!(files.len() >= 20);
    for m in [model(fixtures::div6()), model(fixtures::two()), model(fixtures::one())] {
        for (name, src) in &files {
            let i = interpret_source(src, &m).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(i.checks().iter().all(|&b| b), "{name}: {:?}", i.checks());
            assert!(i.comparisons_invertible(), "{name}");
            assert!(i.eq_reflection(&m).iter().all(|&b| b), "{name}");
            assert!(i.sigma_eta(&m).iter().all(|&b| b), "{name}");
        }
    }
}

#[test]
fn pi_is_unavailable_without_pi_types() {
    // M3 is finitely complete and DFL but not locally cartesian closed.
    let m = model(fixtures::m3());
    assert!(m.pi.is_none());
    let err = interpret_source("term f : Pi (x : Unit) Unit in () := lam tt", &m).unwrap_err();
    assert!(err.to_string().contains("FormerUnavailable"), "{err}");
    interpret_source("term p : Prod(Unit, Unit) in () := pair tt tt", &m).unwrap();
}
