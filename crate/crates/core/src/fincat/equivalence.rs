use serde::Serialize;

use super::{Adjunction, FinCat, FinFunctor, MorId, NatTrans};

/// An adjoint equivalence `functor ⊣ inverse` with invertible unit and counit.
#[derive(Clone, Debug)]
pub struct EquivalenceWitness {
    pub functor: FinFunctor,
    pub inverse: FinFunctor,
    pub unit: NatTrans,
    pub counit: NatTrans,
}

impl EquivalenceWitness {
    pub fn as_adjunction(&self) -> Adjunction {
        Adjunction::new(self.functor.clone(), self.inverse.clone(), self.unit.clone(), self.counit.clone())
            .expect("equivalence witnesses satisfy the triangle laws")
    }
}

/// Why a functor fails to be an equivalence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum NotEquivalence {
    NotFaithful { first: String, second: String },
    NotFull { src: String, dst: String, missing: String },
    NotEssentiallySurjective { object: String },
}

impl std::fmt::Display for NotEquivalence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            NotEquivalence::NotFaithful { first, second } => write!(f, "not faithful: `{first}` and `{second}` are identified"),
            NotEquivalence::NotFull { src, dst, missing } => {
                write!(f, "not full: `{missing}` has no preimage in hom({src}, {dst})")
            }
            NotEquivalence::NotEssentiallySurjective { object } => {
                write!(f, "not essentially surjective: nothing is isomorphic to `{object}`")
            }
        }
    }
}

/// Decides whether `f` is an equivalence and, if so, builds a quasi-inverse
/// by choosing for each target object the earliest preimage up to iso.
pub fn check_equivalence(f: &FinFunctor) -> Result<EquivalenceWitness, NotEquivalence> {
    let (c, d) = (f.source().clone(), f.target().clone());
    if let Some((u, v)) = f.faithfulness_failure() {
        return Err(NotEquivalence::NotFaithful {
            first: c.morphism_name(u).into(),
            second: c.morphism_name(v).into(),
        });
    }
    if let Some((x, y, v)) = f.fullness_failure() {
        return Err(NotEquivalence::NotFull {
            src: c.object_name(x).into(),
            dst: c.object_name(y).into(),
            missing: d.morphism_name(v).into(),
        });
    }
    let pre = f
        .essential_preimages()
        .map_err(|y| NotEquivalence::NotEssentiallySurjective { object: d.object_name(y).into() })?;
    let inv = |e: MorId| d.inverse(e).expect("chosen morphism is an iso");
    let lift = |x, x2, v: MorId| -> MorId {
        *c.hom(x, x2).iter().find(|&&u| f.mor(u) == v).expect("full functor")
    };
    let g_mor: Vec<MorId> = d
        .morphisms()
        .map(|v| {
            let (y, y2) = (d.src(v), d.dst(v));
            let (x, e) = pre[y.0];
            let (x2, e2) = pre[y2.0];
            lift(x, x2, d.compose_all(&[e, v, inv(e2)]))
        })
        .collect();
    let g = FinFunctor::new(d.clone(), c.clone(), pre.iter().map(|p| p.0).collect(), g_mor)
        .expect("quasi-inverse is functorial");
    let counit = NatTrans::new(g.then(f), FinFunctor::identity(d.clone()), pre.iter().map(|p| p.1).collect())
        .expect("counit is natural");
    let unit_comps = c
        .objects()
        .map(|x| {
            let (x2, e) = pre[f.obj(x).0];
            lift(x, x2, inv(e))
        })
        .collect();
    let unit = NatTrans::new(FinFunctor::identity(c.clone()), f.then(&g), unit_comps).expect("unit is natural");
    debug_assert!(unit.is_iso() && counit.is_iso());
    Ok(EquivalenceWitness { functor: f.clone(), inverse: g, unit, counit })
}

/// `None` if every isomorphism is an identity, otherwise a non-identity iso
/// together with its inverse.
pub fn is_gaunt(c: &FinCat) -> Option<(MorId, MorId)> {
    c.morphisms().filter(|&f| !c.is_identity(f)).find_map(|f| c.inverse(f).map(|g| (f, g)))
}

#[cfg(test)]
mod tests {
    use super::super::{slice_category, validate_category, Presentation};
    use super::*;
    use std::sync::Arc;

    fn div6() -> Arc<FinCat> {
        Arc::new(FinCat::poset(&["1", "2", "3", "6"], &[("1", "2"), ("1", "3"), ("2", "6"), ("3", "6")]).unwrap())
    }

    #[test]
    fn projection_from_slice_over_top_is_equivalence() {
        let c = div6();
        let s = slice_category(&c, c.object("6").unwrap()).unwrap();
        let w = check_equivalence(&s.projection).unwrap();
        assert!(w.unit.is_iso() && w.counit.is_iso());
        w.as_adjunction();
    }

    #[test]
    fn inclusion_fails_at_two() {
        let c = div6();
        let sub = Arc::new(FinCat::poset(&["1", "6"], &[("1", "6")]).unwrap());
        let f = FinFunctor::from_object_map(sub, c.clone(), vec![c.object("1").unwrap(), c.object("6").unwrap()]).unwrap();
        assert_eq!(
            check_equivalence(&f).unwrap_err(),
            NotEquivalence::NotEssentiallySurjective { object: "2".into() }
        );
    }

    #[test]
    fn gauntness() {
        assert!(is_gaunt(&div6()).is_none());
        let iso = validate_category(
            &Presentation::new(["a", "b"])
                .morphism("i", "a", "b")
                .morphism("j", "b", "a")
                .compose("i", "j", "id_a")
                .compose("j", "i", "id_b"),
        )
        .unwrap();
        let (f, g) = is_gaunt(&iso).unwrap();
        assert_eq!((iso.morphism_name(f), iso.morphism_name(g)), ("i", "j"));
    }

    #[test]
    fn walking_iso_collapses_to_one() {
        let iso = Arc::new(
            validate_category(
                &Presentation::new(["a", "b"])
                    .morphism("i", "a", "b")
                    .morphism("j", "b", "a")
                    .compose("i", "j", "id_a")
                    .compose("j", "i", "id_b"),
            )
            .unwrap(),
        );
        let one = Arc::new(FinCat::poset(&["*"], &[]).unwrap());
        let f = FinFunctor::constant(iso, one, super::super::ObjId(0));
        assert!(check_equivalence(&f).is_ok());
    }
}
