//! Oracles written independently of the library: they read raw
//! presentations and order relations and share no code with the search.

#![allow(dead_code)]

use std::collections::{HashMap, HashSet};

use catlang::fincat::Presentation;

/// Brute-force law check straight from a presentation: endpoints, a total
/// composition table (identities implicit as `id_<x>`), unit laws and
/// associativity on every composable triple.
pub fn naive_is_category(p: &Presentation) -> bool {
    let objects: HashSet<&str> = p.objects.iter().map(String::as_str).collect();
    if objects.len() != p.objects.len() {
        return false;
    }
    // Morphisms by index: identities first, then the declared ones.
    let mut names: Vec<String> = p.objects.iter().map(|x| format!("id_{x}")).collect();
    let mut ends: Vec<(&str, &str)> = p.objects.iter().map(|x| (x.as_str(), x.as_str())).collect();
    for m in &p.morphisms {
        if !objects.contains(m.src.as_str()) || !objects.contains(m.dst.as_str()) {
            return false;
        }
        names.push(m.name.clone());
        ends.push((m.src.as_str(), m.dst.as_str()));
    }
    let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    if index.len() != names.len() {
        return false;
    }
    let n = names.len();
    let ids = p.objects.len();
    let mut table: Vec<Option<usize>> = vec![None; n * n];
    for c in &p.composition {
        let (Some(&f), Some(&g), Some(&h)) = (index.get(c.first.as_str()), index.get(c.then.as_str()), index.get(c.equals.as_str()))
        else {
            return false;
        };
        if ends[f].1 != ends[g].0 || ends[h].0 != ends[f].0 || ends[h].1 != ends[g].1 {
            return false;
        }
        match table[f * n + g] {
            Some(old) if old != h => return false,
            _ => table[f * n + g] = Some(h),
        }
    }
    for f in 0..n {
        for g in 0..n {
            if ends[f].1 != ends[g].0 {
                continue;
            }
            let forced = if f < ids {
                Some(g)
            } else if g < ids {
                Some(f)
            } else {
                None
            };
            match (table[f * n + g], forced) {
                (Some(h), Some(must)) if h != must => return false,
                (None, Some(must)) => table[f * n + g] = Some(must),
                (None, None) => return false,
                _ => {}
            }
        }
    }
    for f in 0..n {
        for g in 0..n {
            let Some(fg) = table[f * n + g] else { continue };
            for h in 0..n {
                let Some(gh) = table[g * n + h] else { continue };
                if table[fg * n + h] != table[f * n + gh] {
                    return false;
                }
            }
        }
    }
    true
}

/// A finite order read off a poset presentation: `a ≤ b` iff `a = b` or a
/// morphism `a → b` is declared.
pub struct Order {
    pub elements: Vec<String>,
    le: HashSet<(String, String)>,
}

impl Order {
    pub fn of(p: &Presentation) -> Order {
        let mut le: HashSet<(String, String)> = p.objects.iter().map(|x| (x.clone(), x.clone())).collect();
        le.extend(p.morphisms.iter().map(|m| (m.src.clone(), m.dst.clone())));
        Order { elements: p.objects.clone(), le }
    }

    pub fn le(&self, a: &str, b: &str) -> bool {
        self.le.contains(&(a.to_string(), b.to_string()))
    }

    fn greatest<'a>(&'a self, set: Vec<&'a String>) -> Option<String> {
        set.iter().find(|g| set.iter().all(|x| self.le(x, g))).map(|g| g.to_string())
    }

    fn least<'a>(&'a self, set: Vec<&'a String>) -> Option<String> {
        set.iter().find(|l| set.iter().all(|x| self.le(l, x))).map(|l| l.to_string())
    }

    pub fn top(&self) -> Option<String> {
        self.greatest(self.elements.iter().collect())
    }

    pub fn bottom(&self) -> Option<String> {
        self.least(self.elements.iter().collect())
    }

    pub fn meet(&self, a: &str, b: &str) -> Option<String> {
        self.greatest(self.elements.iter().filter(|x| self.le(x, a) && self.le(x, b)).collect())
    }

    pub fn join(&self, a: &str, b: &str) -> Option<String> {
        self.least(self.elements.iter().filter(|x| self.le(a, x) && self.le(b, x)).collect())
    }
}

/// The corpus for the law suite: fixtures, the finite-sets fragment, and
/// deterministic mutants of each.
pub fn law_corpus() -> Vec<(String, Presentation)> {
    use catlang::fincat::{CompositionDecl, MorphismDecl};
    use catlang::fixtures;
    let mut base: Vec<(String, Presentation)> = vec![
        ("one".into(), fixtures::one()),
        ("two".into(), fixtures::two()),
        ("div6".into(), fixtures::div6()),
        ("div60".into(), fixtures::div60()),
        ("v-shape".into(), fixtures::v_shape()),
        ("walking-iso".into(), fixtures::walking_iso()),
        ("m3".into(), fixtures::m3()),
        ("finsets".into(), fixtures::finsets(4)),
    ];
    let mut out = Vec::new();
    for (name, p) in base.drain(..) {
        if let Some(last) = p.composition.len().checked_sub(1) {
            let mut q = p.clone();
            q.composition.remove(last);
            out.push((format!("{name}/drop-last-composite"), q));
            let mut q = p.clone();
            let c = q.composition[0].clone();
            q.composition.push(CompositionDecl { equals: c.first.clone(), ..c.clone() });
            out.push((format!("{name}/conflicting-composite"), q));
            let mut q = p.clone();
            let decl = &q.composition[0];
            let src = p.morphisms.iter().find(|m| m.name == decl.first).map(|m| m.src.clone());
            let dst = p.morphisms.iter().find(|m| m.name == decl.then).map(|m| m.dst.clone());
            let parallel = p
                .morphisms
                .iter()
                .find(|m| Some(&m.src) == src.as_ref() && Some(&m.dst) == dst.as_ref() && m.name != decl.equals);
            if let Some(m) = parallel {
                q.composition[0].equals = m.name.clone();
                out.push((format!("{name}/redirected-composite"), q));
            }
        }
        let mut q = p.clone();
        q.morphisms.push(MorphismDecl { name: "dangling".into(), src: p.objects[0].clone(), dst: "nowhere".into() });
        out.push((format!("{name}/dangling-endpoint"), q));
        if let Some(m) = p.morphisms.first() {
            let mut q = p.clone();
            q.morphisms.push(MorphismDecl { name: "extra".into(), src: m.src.clone(), dst: m.dst.clone() });
            out.push((format!("{name}/parallel-without-composites"), q));
        }
        out.push((name, p));
    }
    out
}

/// Every one-object presentation with two non-identity endomorphisms
/// `a, b` and a complete table: 81 magmas, some of them monoids.
pub fn two_generator_tables() -> Vec<Presentation> {
    let vals = ["id_x", "a", "b"];
    let pairs = [("a", "a"), ("a", "b"), ("b", "a"), ("b", "b")];
    let mut out = Vec::new();
    for code in 0..81usize {
        let mut p = Presentation::new(["x"]).morphism("a", "x", "x").morphism("b", "x", "x");
        let mut c = code;
        for (f, g) in pairs {
            p = p.compose(f, g, vals[c % 3]);
            c /= 3;
        }
        out.push(p);
    }
    out
}
