use std::path::{Path, PathBuf};
use std::process::Command;

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(rel)
}

fn catlang(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_catlang"))
        .args(args)
        .env_remove("CATLANG_BOUND")
        .output()
        .expect("binary runs");
    let mut text = String::from_utf8(out.stdout).unwrap();
    text.push_str(&String::from_utf8(out.stderr).unwrap());
    (out.status.code().expect("exit code"), text)
}

fn p(rel: &str) -> String {
    data(rel).display().to_string()
}

#[test]
fn validate_div6() {
    let (code, out) = catlang(&["cat", "validate", &p("categories/div6.json")]);
    assert_eq!(code, 0, "{out}");
    assert!(out.ends_with("result: pass\n"));
}

#[test]
fn classify_div6() {
    let (code, out) = catlang(&["classify", &p("categories/div6.json")]);
    assert_eq!(code, 0, "{out}");
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines.contains(&"✓ finlim"));
    assert!(lines.contains(&"✓ lccc"));
    assert!(lines.iter().any(|l| l.starts_with("✗ elementary_topos:")));
    assert!(lines.contains(&"signature: 1, ×, =ext, Σ, Π"));
}

#[test]
fn tt_check_unit() {
    let (code, out) = catlang(&["tt", "check", "--model", &p("categories/div6.json"), &p("tt/unit.tt")]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn counterexamples_exit_1() {
    for args in [
        vec!["cat", "validate", &*p("categories/broken-idempotent.json")].into_iter().map(String::from).collect::<Vec<_>>(),
        vec!["functor".into(), "equiv".into(), p("functors/two-into-div6.json")],
        vec!["disp".into(), "cleaving".into(), p("displayed/families-over-two.json")],
    ] {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, out) = catlang(&args);
        assert_eq!(code, 1, "{args:?}: {out}");
        assert!(out.ends_with("result: fail\n"));
    }
}

#[test]
fn invalid_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let garbled = dir.path().join("garbled.json");
    std::fs::write(&garbled, "{ not json").unwrap();
    let garbled = garbled.display().to_string();
    let cases: Vec<Vec<&str>> = vec![
        vec!["cat", "validate", "/no/such/file.json"],
        vec!["cat", "validate", &garbled],
        vec!["cat", "validate", "--frobnicate", "x.json"],
        vec!["no-such-command"],
    ];
    for args in cases {
        let (code, out) = catlang(&args);
        assert_eq!(code, 2, "{args:?}: {out}");
    }
    let v = p("categories/v-shape.json");
    assert_eq!(catlang(&["biequiv", "h", &v]).0, 2);
}

#[test]
fn exhausted_bound_exits_3() {
    let f = p("functors/finsets-to-one.json");
    let (code, out) = catlang(&["--bound", "1", "functor", "adjoint", "--side", "left", &f]);
    assert_eq!(code, 3, "{out}");
    assert!(out.ends_with("result: inconclusive\n"));
    // With the default bound the same search succeeds.
    let (code, out) = catlang(&["functor", "adjoint", "--side", "left", &f]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("left adjoint: * ↦ 0"));
}

#[test]
fn bound_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_catlang"))
        .args(["functor", "adjoint", &p("functors/finsets-to-one.json")])
        .env("CATLANG_BOUND", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn help_exits_0() {
    assert_eq!(catlang(&["--help"]).0, 0);
    assert_eq!(catlang(&["classify", "--help"]).0, 0);
}

#[test]
fn json_is_deterministic_and_matches_emitted_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let c = p("categories/div60.json");
    let (code, a) = catlang(&["--json", "classify", &c]);
    assert_eq!(code, 0);
    let (_, b) = catlang(&["--json", "--emit-report", &report.display().to_string(), "classify", &c]);
    assert_eq!(a, b);
    assert_eq!(std::fs::read_to_string(&report).unwrap(), a);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["command"], "classify");
    assert_eq!(v["status"], "pass");
    assert_eq!(v["exit_code"], 0);
}

#[test]
fn json_envelope_carries_exit_code() {
    let (code, out) = catlang(&["--json", "cat", "validate", &p("categories/broken-idempotent.json")]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["exit_code"], code);
    assert_eq!(v["status"], "fail");
}

#[test]
fn generated_bundle_reloads() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = dir.path().join("h-div6.json");
    let b = bundle.display().to_string();
    let (code, out) = catlang(&["biequiv", "h", &p("categories/div6.json"), "--output", &b]);
    assert_eq!(code, 0, "{out}");
    let (code, out) = catlang(&["compcat", "dfl", &b]);
    assert_eq!(code, 0, "{out}");
    let (code, out) = catlang(&["tt", "check", "--model", &b, &p("tt/unit.tt")]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn every_subcommand_runs_on_fixtures() {
    let div6 = p("categories/div6.json");
    let cases: Vec<(Vec<String>, i32)> = vec![
        (vec!["cat".into(), "limits".into(), div6.clone()], 0),
        (vec!["cat".into(), "slice".into(), div6.clone(), "--over".into(), "6".into()], 0),
        (vec!["cat".into(), "gaunt".into(), div6.clone()], 0),
        (vec!["functor".into(), "check".into(), p("functors/div6-to-one.json")], 0),
        (vec!["functor".into(), "adjoint".into(), p("functors/diagonal-two.json")], 0),
        (vec!["disp".into(), "arrow".into(), div6.clone()], 0),
        (vec!["disp".into(), "fiber".into(), p("displayed/families-over-two.json"), "--over".into(), "1".into()], 0),
        (vec!["compcat".into(), "assemble".into(), div6.clone()], 0),
        (vec!["compcat".into(), "eso".into(), div6.clone()], 0),
        (vec!["biequiv".into(), "zeta".into(), div6.clone()], 0),
        (vec!["biequiv".into(), "roundtrip".into(), div6.clone()], 0),
        (vec!["prop".into(), "check".into(), div6.clone(), "--property".into(), "regular".into()], 0),
        (vec!["prop".into(), "closure".into(), div6.clone(), "--property".into(), "regular".into()], 0),
        (vec!["prop".into(), "fiberwise".into(), div6.clone(), "--property".into(), "regular".into()], 0),
    ];
    for (args, want) in cases {
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let (code, out) = catlang(&args);
        assert_eq!(code, want, "{args:?}: {out}");
    }
}
