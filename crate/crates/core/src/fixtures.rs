//! The standard corpus of small categories used by the examples, the CLI
//! and the test suites.

use std::sync::Arc;

use crate::fincat::{FinCat, Presentation};

fn divisor_poset(n: u32) -> Presentation {
    let elems: Vec<String> = (1..=n).filter(|d| n % d == 0).map(|d| d.to_string()).collect();
    let mut leq = Vec::new();
    for a in 1..=n {
        for b in 1..=n {
            if n % a == 0 && n % b == 0 && a != b && b % a == 0 {
                leq.push((a.to_string(), b.to_string()));
            }
        }
    }
    Presentation::poset(&elems, &leq)
}

/// One object, one morphism.
pub fn one() -> Presentation {
    Presentation::poset(&["*"], &[])
}

/// `0 ≤ 1`.
pub fn two() -> Presentation {
    Presentation::poset(&["0", "1"], &[("0", "1")])
}

/// Divisors of 6 under divisibility.
pub fn div6() -> Presentation {
    divisor_poset(6)
}

/// Divisors of 60 under divisibility.
pub fn div60() -> Presentation {
    divisor_poset(60)
}

/// `a ≤ c ≥ b`, with no meet of `a` and `b`.
pub fn v_shape() -> Presentation {
    Presentation::poset(&["a", "b", "c"], &[("a", "c"), ("b", "c")])
}

/// Two objects and a pair of mutually inverse arrows.
pub fn walking_iso() -> Presentation {
    Presentation::new(["a", "b"])
        .morphism("f", "a", "b")
        .morphism("g", "b", "a")
        .compose("f", "g", "id_a")
        .compose("g", "f", "id_b")
}

/// The non-distributive diamond lattice.
pub fn m3() -> Presentation {
    Presentation::poset(
        &["bot", "x", "y", "z", "top"],
        &[("bot", "x"), ("bot", "y"), ("bot", "z"), ("x", "top"), ("y", "top"), ("z", "top")],
    )
}

/// Subsets of `{a, b, c}` under inclusion.
pub fn cube() -> Presentation {
    let names = ["0", "a", "b", "c", "ab", "ac", "bc", "abc"];
    let bits = [0u8, 1, 2, 4, 3, 5, 6, 7];
    let mut leq = Vec::new();
    for (i, &x) in bits.iter().enumerate() {
        for (j, &y) in bits.iter().enumerate() {
            if i != j && x & y == x {
                leq.push((names[i], names[j]));
            }
        }
    }
    Presentation::poset(&names, &leq)
}

/// The skeletal category of finite sets `{0, …, n-1}` for `n ≤ max`, with
/// every function. A function `n → m` is named `f<n><m>_<values>`.
pub fn finsets(max: usize) -> Presentation {
    let funcs = |n: usize, m: usize| -> Vec<Vec<usize>> {
        let mut out = vec![vec![]];
        for _ in 0..n {
            out = out.into_iter().flat_map(|v| (0..m).map(move |k| [v.clone(), vec![k]].concat())).collect();
        }
        out
    };
    let name = |n: usize, m: usize, v: &[usize]| -> String {
        if n == m && v.iter().enumerate().all(|(i, &k)| i == k) {
            format!("id_{n}")
        } else {
            format!("f{n}{m}_{}", v.iter().map(|k| k.to_string()).collect::<String>())
        }
    };
    let objs: Vec<String> = (0..=max).map(|n| n.to_string()).collect();
    let mut p = Presentation::new(objs.clone());
    let all: Vec<(usize, usize, Vec<usize>)> =
        (0..=max).flat_map(|n| (0..=max).flat_map(move |m| funcs(n, m).into_iter().map(move |v| (n, m, v)))).collect();
    for (n, m, v) in &all {
        let nm = name(*n, *m, v);
        if !nm.starts_with("id_") {
            p = p.morphism(&nm, &objs[*n], &objs[*m]);
        }
    }
    for (n, m, v) in &all {
        let f = name(*n, *m, v);
        if f.starts_with("id_") {
            continue;
        }
        for (m2, k, w) in &all {
            let g = name(*m2, *k, w);
            if m2 != m || g.starts_with("id_") {
                continue;
            }
            let comp: Vec<usize> = v.iter().map(|&i| w[i]).collect();
            p = p.compose(&f, &g, &name(*n, *k, &comp));
        }
    }
    p
}

/// Build a validated fixture.
pub fn build(p: Presentation) -> Arc<FinCat> {
    Arc::new(crate::fincat::validate_category(&p).expect("fixture is a category"))
}

/// Named fixtures available to the command line.
pub fn named(name: &str) -> Option<Presentation> {
    Some(match name {
        "one" => one(),
        "two" => two(),
        "div6" => div6(),
        "div60" => div60(),
        "v-shape" => v_shape(),
        "walking-iso" => walking_iso(),
        "m3" => m3(),
        "cube" => cube(),
        "finsets" => finsets(2),
        _ => return None,
    })
}

pub const NAMES: [&str; 9] = ["one", "two", "div6", "div60", "v-shape", "walking-iso", "m3", "cube", "finsets"];

/// Every poset fixture, by name.
pub fn posets() -> Vec<(&'static str, Presentation)> {
    vec![
        ("one", one()),
        ("two", two()),
        ("div6", div6()),
        ("div60", div60()),
        ("v-shape", v_shape()),
        ("m3", m3()),
        ("cube", cube()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(build(div6()).num_morphisms(), 9);
        assert_eq!(build(div60()).num_objects(), 12);
        assert_eq!(build(cube()).num_morphisms(), 27);
        let f = build(finsets(2));
        assert_eq!(f.num_morphisms(), 11);
        assert_eq!(build(finsets(4)).num_morphisms(), 499);
        assert!(!f.is_thin());
    }
}
