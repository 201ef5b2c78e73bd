//! The eleven acceptance criteria, one line of output each.

mod common;

use std::io::Write;
use std::sync::Arc;

use catlang::biequiv::{essential_preimage, h_object, relabeled_self_indexing, u_object, zeta_component, FinLimCat};
use catlang::compcat::CompCat;
use catlang::displayed::{arrow_displayed, find_cleaving, is_cartesian};
use catlang::fincat::{
    check_equivalence, find_colimit, find_limit, is_gaunt, same_cat, slice_category, validate_category, ColimitShape,
    FinCat, LimitShape, SearchBound,
};
use catlang::fixtures::{self, build};
use catlang::localprops::{check_property_closure, classify, registry};
use catlang::ttlang::{interpret_source, Model};
use catlang::typeformers::{check_dfl, check_pi_types, is_adjequiv_1cell};

use common::{law_corpus, naive_is_category, two_generator_tables, Order};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn h(c: &Arc<FinCat>) -> Arc<CompCat> {
    Arc::new(CompCat::self_indexing(c).expect("self-indexing"))
}

fn finlim_fixtures() -> Vec<(&'static str, FinLimCat)> {
    fixtures::NAMES
        .iter()
        .filter_map(|&n| FinLimCat::new(build(fixtures::named(n).unwrap())).ok().map(|c| (n, c)))
        .collect()
}

fn category_laws() -> Outcome {
    let mut cases = law_corpus();
    cases.extend(two_generator_tables().into_iter().enumerate().map(|(i, p)| (format!("table#{i}"), p)));
    let mut accepted = 0;
    for (name, p) in &cases {
        let expected = naive_is_category(p);
        let got = validate_category(p).is_ok();
        ensure(expected == got, || format!("{name}: oracle says {expected}, validate_category says {got}"))?;
        accepted += got as usize;
    }
    for must in ["one", "two", "div6", "div60", "v-shape", "walking-iso", "m3", "finsets"] {
        ensure(cases.iter().any(|(n, p)| n == must && naive_is_category(p)), || format!("fixture {must} rejected"))?;
    }
    Ok(format!("{} presentations, {accepted} categories, 0 disagreements", cases.len()))
}

fn limit_oracle() -> Outcome {
    let mut queries = 0;
    for (name, p) in fixtures::posets() {
        let c = build(p.clone());
        let ord = Order::of(&p);
        let n = |x| c.object_name(x).to_string();
        let mut agree = |what: String, got: Option<String>, want: Option<String>| {
            queries += 1;
            ensure(got == want, || format!("{name} {what}: search {got:?}, order {want:?}"))
        };
        agree("terminal".into(), find_limit(&c, LimitShape::Terminal).unwrap().map(|w| n(w.apex)), ord.top())?;
        agree("initial".into(), find_colimit(&c, ColimitShape::Initial).unwrap().map(|w| n(w.apex)), ord.bottom())?;
        for a in c.objects() {
            for b in c.objects() {
                let (an, bn) = (n(a), n(b));
                let prod = find_limit(&c, LimitShape::BinaryProduct(a, b)).unwrap().map(|w| n(w.apex));
                agree(format!("{an} × {bn}"), prod, ord.meet(&an, &bn))?;
                let coprod = find_colimit(&c, ColimitShape::BinaryCoproduct(a, b)).unwrap().map(|w| n(w.apex));
                agree(format!("{an} + {bn}"), coprod, ord.join(&an, &bn))?;
            }
        }
        for f in c.morphisms() {
            let eq = find_limit(&c, LimitShape::Equalizer(f, f)).unwrap().map(|w| n(w.apex));
            agree(format!("eq({})", c.morphism_name(f)), eq, Some(n(c.src(f))))?;
            let coeq = find_colimit(&c, ColimitShape::Coequalizer(f, f)).unwrap().map(|w| n(w.apex));
            agree(format!("coeq({})", c.morphism_name(f)), coeq, Some(n(c.dst(f))))?;
            for g in c.morphisms().filter(|&g| c.dst(g) == c.dst(f)) {
                let pb = find_limit(&c, LimitShape::Pullback(f, g)).unwrap().map(|w| n(w.apex));
                let want = ord.meet(&n(c.src(f)), &n(c.src(g)));
                agree(format!("pullback({}, {})", c.morphism_name(f), c.morphism_name(g)), pb, want)?;
            }
        }
    }
    Ok(format!("{queries} diagrams over {} posets agree", fixtures::posets().len()))
}

fn arrow_fibration() -> Outcome {
    let mut fibers = 0;
    let mut lifts = 0;
    for p in [fixtures::div6(), fixtures::div60()] {
        let c = build(p);
        let a = arrow_displayed(&c);
        let cl = find_cleaving(&a.disp).map_err(|m| format!("no lift of {} at {}", m.morphism, m.dobject))?;
        for f in c.morphisms() {
            for &y in a.disp.over(c.dst(f)) {
                let (_, l) = cl.lift(f, y);
                ensure(is_cartesian(&a.disp, l).is_ok(), || format!("lift {} is not Cartesian", a.disp.dmorphism_name(l)))?;
                lifts += 1;
            }
        }
        for x in c.objects() {
            let s = slice_category(&c, x).unwrap();
            let w = check_equivalence(&a.fiber_to_slice(x, &s)).map_err(|e| format!("fiber over {}: {e}", c.object_name(x)))?;
            ensure(w.unit.is_iso() && w.counit.is_iso(), || "equivalence components not invertible".into())?;
            fibers += 1;
        }
    }
    Ok(format!("{lifts} Cartesian lifts, {fibers} fibers equivalent to slices"))
}

fn dfl_suite() -> Outcome {
    let mut squares = 0;
    for (name, p) in [("div6", fixtures::div6()), ("div60", fixtures::div60())] {
        let c = build(p);
        let k = h(&c);
        let r = check_dfl(&k, SearchBound::default());
        ensure(r.passed(), || format!("H({name}): {:?}", r.verdict.first_failure))?;
        let sigma = r.sigma.as_ref().unwrap();
        for e in &sigma.strong {
            let b = &k.base;
            ensure(
                b.compose(e.comparison, e.inverse) == b.id(b.src(e.comparison))
                    && b.compose(e.inverse, e.comparison) == b.id(b.dst(e.comparison)),
                || format!("H({name}): strong Σ comparison {} does not invert", b.morphism_name(e.comparison)),
            )?;
        }
        // Every cospan s: Δ → Γ ← Γ.A of the base is a substitution square.
        for f in c.morphisms() {
            for g in c.morphisms().filter(|&g| c.dst(g) == c.dst(f)) {
                let a = k.arrows.dobject_of(g);
                let e = sigma.bc.iter().find(|e| e.morphism == f && e.ty == a);
                ensure(e.is_some_and(|e| e.holds), || {
                    format!("H({name}): Beck–Chevalley at ({}, {})", c.morphism_name(f), c.morphism_name(g))
                })?;
                squares += 1;
            }
        }
    }
    Ok(format!("H(Div6), H(Div60) are DFL; Beck–Chevalley on {squares} pullback squares"))
}

fn essential_surjectivity() -> Outcome {
    let mut count = Vec::new();
    for (name, p) in [("div6", fixtures::div6()), ("two", fixtures::two())] {
        let k = h(&build(p));
        let dfl = check_dfl(&k, SearchBound::default());
        let c = &k.base;
        for s in c.morphisms() {
            let e = essential_preimage(&k, &dfl, s).map_err(|e| format!("H({name}): {e}"))?;
            let pa = k.proj(e.ty);
            ensure(
                c.compose(e.to, e.from) == c.id(k.ext(e.ty))
                    && c.compose(e.from, e.to) == c.id(c.src(s))
                    && c.compose(e.to, s) == pa
                    && c.compose(e.from, pa) == s,
                || format!("H({name}): slice iso at {} does not compose to identities", c.morphism_name(s)),
            )?;
        }
        count.push(c.num_morphisms());
    }
    ensure(count == [9, 3], || format!("unexpected morphism counts {count:?}"))?;
    Ok("9 context morphisms of H(Div6) and 3 of H(Two) have essential preimages".into())
}

fn biequivalence() -> Outcome {
    let fl = finlim_fixtures();
    for (name, c) in &fl {
        let k = h_object(c).map_err(|e| format!("H({name}): {e}"))?;
        let u = u_object(&k).map_err(|e| format!("U(H({name})): {e}"))?;
        ensure(same_cat(&u.cat, &c.cat), || format!("U(H({name})) differs from {name}"))?;
        ensure(u.witnesses == c.witnesses, || format!("U(H({name})) chose different limits"))?;
    }
    let mut models: Vec<(String, Arc<CompCat>)> = ["div6", "two", "one"]
        .iter()
        .map(|&n| (format!("H({n})"), h(&build(fixtures::named(n).unwrap()))))
        .collect();
    let relabeled = relabeled_self_indexing(&build(fixtures::div6()), "T").map_err(|e| e.to_string())?;
    ensure(relabeled.types.dobject_name(catlang::displayed::DObjId(0)).starts_with('T'), || "relabeling is the identity".into())?;
    models.push(("relabeled H(Div6)".into(), Arc::new(relabeled)));
    for (name, k) in &models {
        let z = zeta_component(k).map_err(|e| format!("ζ at {name}: {e}"))?;
        ensure(is_adjequiv_1cell(&z), || format!("ζ at {name} is not an adjoint equivalence"))?;
    }
    Ok(format!("U∘H is the identity on {} finlim fixtures; ζ is an adjoint equivalence on {} models", fl.len(), models.len()))
}

fn lccc_pi() -> Outcome {
    let bound = SearchBound::default();
    let cases = [("two", true), ("div6", true), ("div60", true), ("cube", true), ("m3", false)];
    for (name, lccc) in cases {
        let c = FinLimCat::new(build(fixtures::named(name).unwrap())).unwrap();
        let r = classify(&c, bound);
        let cat_side = r.lccc.is_verified();
        ensure(cat_side == lccc && (lccc || r.lccc.is_counterexample()), || format!("{name}: lccc = {:?}", r.lccc))?;
        let pi = check_pi_types(&h(&c.cat), bound).is_ok();
        ensure(pi == cat_side, || format!("{name}: lccc {cat_side} but Π types {pi}"))?;
    }
    Ok("lccc ⇔ Π-types on Two, Div6, Div60, cube (both hold) and M3 (both fail)".into())
}

fn local_property_laws() -> Outcome {
    let bound = SearchBound::default();
    let mut pairs = 0;
    for (name, c) in finlim_fixtures() {
        for p in registry() {
            if !p.cat_check(&c.cat, bound).is_verified() {
                continue;
            }
            let r = check_property_closure(&p, &c, bound);
            ensure(r.axioms.len() == 5, || format!("{name}/{}: {} axioms", p.name(), r.axioms.len()))?;
            for a in &r.axioms {
                ensure(a.failure.is_none() && !a.inconclusive, || {
                    format!("{name}/{}: {} fails: {:?}", p.name(), a.axiom, a.failure)
                })?;
            }
            pairs += 1;
        }
    }
    Ok(format!("all five closure axioms hold on {pairs} verified (fixture, property) pairs"))
}

const TABLE: [(&str, &str); 7] = [
    ("finlim", "1, ×, =ext, Σ"),
    ("lccc", "1, ×, =ext, Σ, Π"),
    ("pretopos", "O, 1, ×, =ext, Σ, +, Quot"),
    ("arithmetic_pretopos", "O, 1, ×, =ext, Σ, +, Quot, ℕ"),
    ("pi_pretopos", "O, 1, ×, =ext, Σ, Π, +, Quot"),
    ("elementary_topos", "O, 1, ×, =ext, Σ, Π, +, Quot, Ω"),
    ("elementary_topos_nno", "O, 1, ×, =ext, Σ, Π, +, Quot, Ω, ℕ"),
];

fn classification() -> Outcome {
    let bound = SearchBound::default();
    let fl = |n: &str| FinLimCat::new(build(fixtures::named(n).unwrap())).unwrap();
    for (class, sig) in TABLE {
        ensure(catlang::localprops::signature(class) == Some(sig), || format!("signature of {class}"))?;
    }
    let one = classify(&fl("one"), bound);
    ensure(one.class.as_deref() == Some("elementary_topos_nno"), || format!("One classifies as {:?}", one.class))?;
    ensure(one.signature.as_deref() == Some(TABLE[6].1), || format!("One signature {:?}", one.signature))?;
    for (name, subobjects) in [("two", 2), ("div6", 4)] {
        let r = classify(&fl(name), bound);
        ensure(r.class.as_deref() == Some("lccc") && r.lccc.is_verified(), || format!("{name} classifies as {:?}", r.class))?;
        ensure(r.signature.as_deref() == Some(TABLE[1].1), || format!("{name} signature {:?}", r.signature))?;
        let w = match &r.elementary_topos {
            catlang::localprops::Verdict::Counterexample { witness } => witness.clone(),
            v => return Err(format!("{name}: topos verdict {v:?}")),
        };
        ensure(w.starts_with("Sub(⊤)") && w.contains(&format!("has {subobjects} elements")), || format!("{name}: {w}"))?;
    }
    Ok("One is a topos with ℕ; Two and Div6 are lccc, not toposes (Sub(⊤) witness); signatures match".into())
}

fn tt_corpus() -> Outcome {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/tt");
    let mut files: Vec<_> = std::fs::read_dir(&dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    ensure(files.len() >= 20, || format!("only {} corpus files", files.len()))?;
    let mut formers = std::collections::BTreeSet::new();
    for (name, p) in [("div6", fixtures::div6()), ("two", fixtures::two())] {
        let m = Model::new(h(&build(p)), SearchBound::default()).map_err(|e| e.to_string())?;
        for f in &files {
            let src = std::fs::read_to_string(f).unwrap();
            for former in ["Unit", "Prod", "Eq", "Sigma", "Pi"] {
                if src.contains(former) {
                    formers.insert(former);
                }
            }
            let shown = f.file_name().unwrap().to_string_lossy();
            let i = interpret_source(&src, &m).map_err(|e| format!("H({name}) {shown}: {e}"))?;
            ensure(i.checks().iter().all(|&b| b), || format!("H({name}) {shown}: a check is false"))?;
            ensure(i.eq_reflection(&m).iter().all(|&b| b), || format!("H({name}) {shown}: Eq-reflection"))?;
            ensure(i.comparisons_invertible(), || format!("H({name}) {shown}: substitution comparison not invertible"))?;
        }
    }
    ensure(formers.len() == 5, || format!("corpus covers only {formers:?}"))?;
    Ok(format!("{} files interpret in H(Div6) and H(Two); Eq-reflection and substitution comparisons hold", files.len()))
}

fn gauntness() -> Outcome {
    for (name, p) in fixtures::posets() {
        let c = build(p);
        ensure(is_gaunt(&c).is_none(), || format!("{name} has a non-identity iso"))?;
    }
    let c = build(fixtures::walking_iso());
    let (f, g) = is_gaunt(&c).ok_or("walking iso reported gaunt")?;
    ensure(
        !c.is_identity(f) && c.compose(f, g) == c.id(c.src(f)) && c.compose(g, f) == c.id(c.dst(f)),
        || "witness is not a non-identity iso".into(),
    )?;
    Ok(format!("posets are gaunt; walking iso has `{}` with inverse `{}`", c.morphism_name(f), c.morphism_name(g)))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("category laws", category_laws),
        ("limit oracle", limit_oracle),
        ("arrow fibration", arrow_fibration),
        ("DFL", dfl_suite),
        ("essential surjectivity", essential_surjectivity),
        ("biequivalence roundtrips", biequivalence),
        ("LCCC/Π", lccc_pi),
        ("local-property laws", local_property_laws),
        ("classification table", classification),
        ("TT soundness corpus", tt_corpus),
        ("gauntness", gauntness),
    ];
    // Written straight to stderr so the summary shows even when output is captured.
    let mut err = std::io::stderr().lock();
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        let r = run();
        let secs = start.elapsed().as_secs_f64();
        match &r {
            Ok(detail) => writeln!(err, "criterion {:>2} PASS  {name}: {detail} ({secs:.2}s)", i + 1).unwrap(),
            Err(e) => {
                writeln!(err, "criterion {:>2} FAIL  {name}: {e} ({secs:.2}s)", i + 1).unwrap();
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
