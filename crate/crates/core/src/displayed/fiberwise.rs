use serde::Serialize;

use super::Cleaving;
use crate::fincat::{find_limit, ShapeKind};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberEntry {
    pub object: String,
    pub has_limits: bool,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreservationEntry {
    pub morphism: String,
    pub preserved: bool,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiberwiseReport {
    pub shape: String,
    pub fibers: Vec<FiberEntry>,
    pub preservation: Vec<PreservationEntry>,
    pub holds: bool,
}

/// Every fiber has all limits of the given shape and every substitution
/// functor preserves them.
pub fn check_fiberwise_limits(cl: &Cleaving, shape: ShapeKind) -> FiberwiseReport {
    let d = cl.disp();
    let c = d.base();
    let fibers: Vec<FiberEntry> = c
        .objects()
        .map(|x| {
            let fib = &d.fiber(x).cat;
            let failure = shape
                .instances(fib)
                .into_iter()
                .find(|&s| !matches!(find_limit(fib, s), Ok(Some(_))))
                .map(|s| s.describe(fib));
            FiberEntry { object: c.object_name(x).into(), has_limits: failure.is_none(), failure }
        })
        .collect();
    let preservation: Vec<PreservationEntry> = c
        .morphisms()
        .map(|f| {
            let s = cl.substitution(f);
            let failure = shape.instances(s.source()).into_iter().find(|&i| !s.preserves(i)).map(|i| i.describe(s.source()));
            PreservationEntry { morphism: c.morphism_name(f).into(), preserved: failure.is_none(), failure }
        })
        .collect();
    let holds = fibers.iter().all(|e| e.has_limits) && preservation.iter().all(|e| e.preserved);
    FiberwiseReport { shape: shape.name().into(), fibers, preservation, holds }
}

#[cfg(test)]
mod tests {
    use super::super::{arrow_displayed, find_cleaving};
    use super::*;
    use crate::fincat::FinCat;
    use std::sync::Arc;

    #[test]
    fn div6_arrow_fibers_have_meets() {
        let c = Arc::new(FinCat::poset(&["1", "2", "3", "6"], &[("1", "2"), ("1", "3"), ("2", "6"), ("3", "6")]).unwrap());
        let a = arrow_displayed(&c);
        let cl = find_cleaving(&a.disp).unwrap();
        for k in ShapeKind::ALL {
            assert!(check_fiberwise_limits(&cl, k).holds, "{k:?}");
        }
    }
}
