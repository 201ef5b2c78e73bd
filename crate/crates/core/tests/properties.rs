mod common;

use std::sync::Arc;

use proptest::prelude::*;

use catlang::biequiv::{essential_preimage, h_object, u_object, zeta_component, FinLimCat};
use catlang::compcat::CompCat;
use catlang::displayed::{arrow_displayed, find_cleaving, is_cartesian};
use catlang::fincat::{
    check_equivalence, check_functor, cones, find_adjoint, find_colimit, find_limit, mediators, same_cat,
    slice_category, validate_category, AdjointError, ColimitShape, Direction, FinCat, FinFunctor, LimitShape,
    ObjId, Presentation, SearchBound, Side, UniversalShape,
};
use catlang::localprops::{classify_cat, registry, LocalProperty};
use catlang::ttlang::{interpret_source, Model};
use catlang::typeformers::{check_dfl, is_adjequiv_1cell};

use common::{naive_is_category, Order};

/// A partial order on `p0 … p{n-1}` generated by edges `i < j`.
fn poset(max: usize) -> impl Strategy<Value = Presentation> {
    (1..=max).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        proptest::collection::vec(any::<bool>(), pairs.len()).prop_map(move |keep| {
            let names: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
            let leq: Vec<(String, String)> = pairs
                .iter()
                .zip(&keep)
                .filter(|(_, &k)| k)
                .map(|(&(i, j), _)| (names[i].clone(), names[j].clone()))
                .collect();
            Presentation::poset(&names, &leq)
        })
    })
}

/// Divisors of `n` under divisibility: a distributive lattice.
fn divisors(n: u32) -> Presentation {
    let ds: Vec<u32> = (1..=n).filter(|d| n % d == 0).collect();
    let names: Vec<String> = ds.iter().map(|d| d.to_string()).collect();
    let mut leq = Vec::new();
    for (i, a) in ds.iter().enumerate() {
        for (j, b) in ds.iter().enumerate() {
            if i != j && b % a == 0 {
                leq.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    Presentation::poset(&names, &leq)
}

fn lattice() -> impl Strategy<Value = Presentation> {
    (1u32..=36).prop_map(divisors)
}

fn cat(p: &Presentation) -> Arc<FinCat> {
    Arc::new(validate_category(p).expect("valid"))
}

/// A monotone map between two random posets, when the random object map
/// happens to be one.
fn monotone() -> impl Strategy<Value = Option<FinFunctor>> {
    (poset(4), poset(4)).prop_flat_map(|(p, q)| {
        let (n, m) = (p.objects.len(), q.objects.len());
        proptest::collection::vec(0..m, n).prop_map(move |img| {
            let (c, d) = (cat(&p), cat(&q));
            FinFunctor::from_object_map(c, d, img.into_iter().map(ObjId).collect()).ok()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn validator_agrees_with_naive_checker(p in poset(5), drop in any::<prop::sample::Index>()) {
        prop_assert!(naive_is_category(&p));
        prop_assert!(validate_category(&p).is_ok());
        if !p.composition.is_empty() {
            let mut q = p.clone();
            q.composition.remove(drop.index(q.composition.len()));
            prop_assert_eq!(naive_is_category(&q), validate_category(&q).is_ok());
        }
    }

    #[test]
    fn accepted_categories_satisfy_the_laws(p in poset(5)) {
        let c = cat(&p);
        for f in c.morphisms() {
            prop_assert_eq!(c.compose(c.id(c.src(f)), f), f);
            prop_assert_eq!(c.compose(f, c.id(c.dst(f))), f);
            for g in c.morphisms().filter(|&g| c.src(g) == c.dst(f)) {
                for h in c.morphisms().filter(|&h| c.src(h) == c.dst(g)) {
                    prop_assert_eq!(c.compose(c.compose(f, g), h), c.compose(f, c.compose(g, h)));
                }
            }
        }
    }

    #[test]
    fn poset_limits_are_order_theoretic(p in poset(5)) {
        let c = cat(&p);
        let ord = Order::of(&p);
        let n = |x: ObjId| c.object_name(x).to_string();
        prop_assert_eq!(find_limit(&c, LimitShape::Terminal).unwrap().map(|w| n(w.apex)), ord.top());
        prop_assert_eq!(find_colimit(&c, ColimitShape::Initial).unwrap().map(|w| n(w.apex)), ord.bottom());
        for a in c.objects() {
            for b in c.objects() {
                let prod = find_limit(&c, LimitShape::BinaryProduct(a, b)).unwrap().map(|w| n(w.apex));
                prop_assert_eq!(prod, ord.meet(&n(a), &n(b)));
                let sum = find_colimit(&c, ColimitShape::BinaryCoproduct(a, b)).unwrap().map(|w| n(w.apex));
                prop_assert_eq!(sum, ord.join(&n(a), &n(b)));
            }
        }
        for f in c.morphisms() {
            for g in c.morphisms().filter(|&g| c.dst(g) == c.dst(f)) {
                let pb = find_limit(&c, LimitShape::Pullback(f, g)).unwrap().map(|w| n(w.apex));
                prop_assert_eq!(pb, ord.meet(&n(c.src(f)), &n(c.src(g))));
            }
        }
    }

    #[test]
    fn every_cone_has_exactly_one_mediator(p in poset(5)) {
        let c = cat(&p);
        for a in c.objects() {
            for b in c.objects() {
                let shape = LimitShape::BinaryProduct(a, b);
                let Some(w) = find_limit(&c, shape).unwrap() else { continue };
                let d = shape.diagram(&c).unwrap();
                for x in c.objects() {
                    for cone in cones(&c, &d, Direction::Limit, x) {
                        prop_assert_eq!(mediators(&c, Direction::Limit, &w.cone(), &cone).len(), 1);
                    }
                }
            }
        }
    }

    #[test]
    fn adjoints_match_the_galois_oracle(f in monotone()) {
        let Some(f) = f else { return Ok(()) };
        let (p, q) = (f.source().clone(), f.target().clone());
        // f has a right adjoint iff every {x | f x ≤ y} has a greatest element.
        let oracle = q.objects().all(|y| {
            let below: Vec<ObjId> = p.objects().filter(|&x| q.leq(f.obj(x), y)).collect();
            below.iter().any(|&g| below.iter().all(|&x| p.leq(x, g)))
        });
        match find_adjoint(&f, Side::Right, SearchBound::default()) {
            Ok(adj) => {
                prop_assert!(oracle);
                prop_assert!(adj.hom_cardinalities_match());
                prop_assert!(catlang::fincat::Adjunction::new(adj.left.clone(), adj.right.clone(), adj.unit.clone(), adj.counit.clone()).is_ok());
            }
            Err(AdjointError::NotFound { .. }) => prop_assert!(!oracle),
            Err(e) => prop_assert!(false, "{}", e),
        }
    }

    #[test]
    fn equivalence_iff_full_faithful_eso(f in monotone()) {
        let Some(f) = f else { return Ok(()) };
        let r = check_functor(&f);
        prop_assert_eq!(check_equivalence(&f).is_ok(), r.full && r.faithful && r.essentially_surjective);
    }

    #[test]
    fn slice_over_terminal_is_the_category(p in poset(4)) {
        let mut q = p.clone();
        q.objects.push("top".into());
        let mut leq: Vec<(String, String)> = p.morphisms.iter().map(|m| (m.src.clone(), m.dst.clone())).collect();
        leq.extend(p.objects.iter().map(|x| (x.clone(), "top".to_string())));
        let c = cat(&Presentation::poset(&q.objects, &leq));
        let t = find_limit(&c, LimitShape::Terminal).unwrap().unwrap().apex;
        let s = slice_category(&c, t).unwrap();
        prop_assert!(check_equivalence(&s.projection).is_ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn arrow_fibration_invariants(p in lattice()) {
        let c = cat(&p);
        let a = arrow_displayed(&c);
        let cl = find_cleaving(&a.disp).unwrap();
        prop_assert!(cl.verify());
        for f in c.morphisms() {
            for &y in a.disp.over(c.dst(f)) {
                // Independently found Cartesian lifts are vertically isomorphic.
                let lifts: Vec<_> = c.objects().flat_map(|x| a.disp.over(x).to_vec())
                    .flat_map(|x| a.disp.dhom(f, x, y).to_vec())
                    .filter(|&l| is_cartesian(&a.disp, l).is_ok())
                    .collect();
                prop_assert!(!lifts.is_empty());
                for &l in &lifts {
                    let (x0, _) = cl.lift(f, y);
                    prop_assert!(a.disp.find_vertical_iso(a.disp.dmorphism(l).src, x0).is_some());
                }
            }
        }
        for x in c.objects() {
            let s = slice_category(&c, x).unwrap();
            prop_assert!(check_equivalence(&a.fiber_to_slice(x, &s)).is_ok());
        }
        let (total, proj) = a.disp.total_category();
        prop_assert_eq!(total.num_morphisms(), a.disp.num_dmorphisms());
        for m in a.disp.dmorphisms() {
            prop_assert_eq!(proj.mor(catlang::fincat::MorId(m.0)), a.disp.dmorphism(m).over);
        }
    }

    #[test]
    fn self_indexing_is_dfl(p in lattice()) {
        let c = cat(&p);
        let k = CompCat::self_indexing(&c).unwrap();
        let r = check_dfl(&k, SearchBound::default());
        prop_assert!(r.passed(), "{:?}", r.verdict);
        let unit = r.unit.as_ref().unwrap();
        for g in c.objects() {
            prop_assert_eq!(k.terms(unit.at(g)).len(), 1);
        }
        for e in &r.sigma.as_ref().unwrap().strong {
            prop_assert_eq!(c.compose(e.comparison, e.inverse), c.id(c.src(e.comparison)));
        }
        // ⟨s, t⟩ ; π_A = s for every section t of a substituted type.
        for s in c.morphisms() {
            for &ty in k.types.over(c.dst(s)) {
                let (sub, _) = k.cleaving.lift(s, ty);
                for t in k.terms(sub) {
                    let pair = k.pair_sub(s, ty, t.section).unwrap();
                    prop_assert_eq!(c.compose(pair, k.proj(ty)), s);
                }
            }
        }
    }

    #[test]
    fn biequivalence_roundtrips(p in lattice()) {
        let c = FinLimCat::new(cat(&p)).unwrap();
        let k = Arc::new(h_object(&c).unwrap());
        let u = u_object(&k).unwrap();
        prop_assert!(same_cat(&u.cat, &c.cat));
        prop_assert!(u.witnesses == c.witnesses);
        prop_assert!(is_adjequiv_1cell(&zeta_component(&k).unwrap()));
        let dfl = check_dfl(&k, SearchBound::default());
        let b = &k.base;
        for s in b.morphisms() {
            let e = essential_preimage(&k, &dfl, s).unwrap();
            prop_assert_eq!(b.compose(e.to, e.from), b.id(k.ext(e.ty)));
            prop_assert_eq!(b.compose(e.from, e.to), b.id(b.src(s)));
        }
    }

    #[test]
    fn corpus_is_sound_in_every_lattice_model(p in lattice()) {
        let k = Arc::new(CompCat::self_indexing(&cat(&p)).unwrap());
        let m = Model::new(k, SearchBound::default()).unwrap();
        let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data/tt");
        for f in std::fs::read_dir(dir).unwrap() {
            let src = std::fs::read_to_string(f.unwrap().path()).unwrap();
            let i = interpret_source(&src, &m).unwrap();
            prop_assert!(i.checks().iter().all(|&b| b));
            prop_assert!(i.comparisons_invertible());
            prop_assert!(i.eq_reflection(&m).iter().all(|&b| b));
            prop_assert!(i.sigma_eta(&m).iter().all(|&b| b));
        }
    }

    #[test]
    fn classification_is_monotone(p in poset(5)) {
        let r = classify_cat(&cat(&p), SearchBound::default());
        prop_assert!(r.is_monotone());
    }

    #[test]
    fn properties_are_invariant_under_renaming(p in poset(4)) {
        // Renaming objects gives an equivalent (indeed isomorphic) category.
        let rename = |s: &str| format!("r{s}");
        let mut q = p.clone();
        q.objects = p.objects.iter().map(|x| rename(x)).collect();
        let leq: Vec<(String, String)> = p.morphisms.iter().map(|m| (rename(&m.src), rename(&m.dst))).collect();
        let q = Presentation::poset(&q.objects, &leq);
        let (c, d) = (cat(&p), cat(&q));
        let bound = SearchBound::default();
        for prop in registry() {
            prop_assert_eq!(prop.cat_check(&c, bound).is_verified(), prop.cat_check(&d, bound).is_verified(), "{}", prop.name());
        }
    }

    #[test]
    fn nno_needs_a_degenerate_category(p in poset(5)) {
        let c = cat(&p);
        let non_iso = c.objects().any(|x| c.objects().any(|y| c.find_iso(x, y).is_none()));
        if non_iso {
            prop_assert!(!LocalProperty::NnoParam.cat_check(&c, SearchBound::default()).is_verified());
        }
    }
}

#[test]
fn nno_on_the_point() {
    let c = cat(&catlang::fixtures::one());
    assert!(LocalProperty::NnoParam.cat_check(&c, SearchBound::default()).is_verified());
}
