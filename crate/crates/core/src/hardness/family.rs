use std::sync::Arc;

use serde::Serialize;

use crate::error::{invalid_param, Error, Result};
use crate::instance::Instance;
use crate::simulate::exact_ratio_small;

use super::model::{error_set, error_set_members, error_sets, ErrorSet};
use super::policy::{exact_policy_value, RandomizedPolicy};
use super::sigma::{enumerate_sigma, PartialPermutation, SignedIndex, MAX_N};

/// `I_{n,E}`: candidate 1 has value and prediction `L`; every other candidate is
/// predicted at 1 and worth `L^i` when it is in `E`, 1 otherwise.
pub fn instance_family(n: usize, e: &[usize], l: f64) -> Result<Instance> {
    if !(l > 1.0 && l.is_finite()) {
        return Err(invalid_param(format!("L must be finite and > 1, got {l}")));
    }
    if !(2..=MAX_N).contains(&n) {
        return Err(invalid_param(format!("n = {n} outside 2..={MAX_N}")));
    }
    if let Some(&i) = e.iter().find(|&&i| i < 2 || i > n) {
        return Err(invalid_param(format!("erroneous index {i} outside 2..={n}")));
    }
    if !l.powi(n as i32).is_finite() {
        return Err(Error::Domain(format!("L^{n} overflows for L = {l}")));
    }
    let mut values = vec![1.0; n];
    let mut predictions = vec![1.0; n];
    values[0] = l;
    predictions[0] = l;
    for &i in e {
        values[i - 1] = l.powi(i as i32);
    }
    Instance::new(values, predictions, 1)
}

/// One policy of the restricted deterministic class on four candidates.
#[derive(Clone, Debug, Serialize)]
pub struct CeilingPolicy {
    /// Whether erroneous candidate 2, 3, 4 is hired when it arrives first.
    pub hire_first: [bool; 3],
    /// `(E, success probability)` for every non-empty `E`.
    pub scores: Vec<(Vec<usize>, f64)>,
    pub min_score: f64,
    /// Scores above 1/4 on every single-error instance.
    pub beats_quarter_on_singletons: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CeilingReport {
    pub l: f64,
    pub policies: Vec<CeilingPolicy>,
    /// No policy that beats 1/4 on every singleton exceeds `1/4 + 1e-12` on all `E`.
    pub holds: bool,
}

/// Deterministic policy of the restricted class: hire candidate 1 whenever every
/// arrival so far is accurate, decide each erroneous first arrival by
/// `hire_first`, and afterwards hire an erroneous arrival that beats every earlier
/// erroneous arrival.
pub fn ceiling_policy(hire_first: [bool; 3]) -> RandomizedPolicy {
    let sigma = Arc::new(enumerate_sigma(4).expect("n = 4 is in range"));
    RandomizedPolicy::from_fn(sigma, move |s: &PartialPermutation| {
        let last: SignedIndex = s.last();
        let prefix = &s.entries()[..s.len() - 1];
        if !last.erroneous {
            return last.index() == 1 && prefix.iter().all(|e| !e.erroneous);
        }
        if prefix.is_empty() {
            return hire_first[last.index() - 2];
        }
        prefix.iter().filter(|e| e.erroneous).all(|e| e.index() < last.index())
    })
}

/// Scores each of the eight policies of the restricted class on every non-empty
/// `I_{4,E}`, running them online on the realized instances with values in `L`.
pub fn deterministic_ceiling_check(l: f64) -> Result<CeilingReport> {
    let nonempty: Vec<ErrorSet> = error_sets(4).into_iter().filter(|&e| e != 0).collect();
    let instances =
        nonempty.iter().map(|&e| instance_family(4, &error_set_members(e), l)).collect::<Result<Vec<_>>>()?;
    let mut policies = Vec::with_capacity(8);
    for mask in 0..8u8 {
        let hire_first = [mask & 1 != 0, mask & 2 != 0, mask & 4 != 0];
        let policy = ceiling_policy(hire_first);
        let mut scores = Vec::with_capacity(nonempty.len());
        for (&e, inst) in nonempty.iter().zip(&instances) {
            let online = exact_ratio_small(inst, &policy)?.success;
            let direct = exact_policy_value(&policy, e);
            debug_assert!((online - direct).abs() < 1e-12);
            scores.push((error_set_members(e), online));
        }
        let min_score = scores.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
        let beats_quarter_on_singletons = (2..=4).all(|i| exact_policy_value(&policy, error_set(&[i])) > 0.25 + 1e-12);
        policies.push(CeilingPolicy { hire_first, scores, min_score, beats_quarter_on_singletons });
    }
    let holds = policies.iter().filter(|p| p.beats_quarter_on_singletons).all(|p| p.min_score <= 0.25 + 1e-12);
    Ok(CeilingReport { l, policies, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::epsilon_global;

    #[test]
    fn family_values() {
        let i = instance_family(3, &[], 10.0).unwrap();
        assert_eq!(i.values(), vec![10.0, 1.0, 1.0]);
        assert_eq!(i.predictions(), vec![10.0, 1.0, 1.0]);
        let i = instance_family(3, &[3], 10.0).unwrap();
        assert_eq!(i.values(), vec![10.0, 1.0, 1000.0]);
        assert!((epsilon_global(&i) - 0.999).abs() < 1e-15);
        assert!(instance_family(3, &[1], 10.0).is_err());
        assert!(instance_family(3, &[], 1.0).is_err());
        assert!(instance_family(7, &[], 1e300).is_err());
    }

    #[test]
    fn first_erroneous_policy_scores_quarter() {
        let p = ceiling_policy([true; 3]);
        assert!((exact_policy_value(&p, error_set(&[2, 3, 4])) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn skipping_first_erroneous() {
        let p = ceiling_policy([false; 3]);
        assert!(exact_policy_value(&p, error_set(&[2])) <= 6.0 / 24.0 + 1e-15);
    }

    #[test]
    fn report_holds() {
        let r = deterministic_ceiling_check(10.0).unwrap();
        assert_eq!(r.policies.len(), 8);
        assert!(r.holds);
        assert!(r.policies.iter().any(|p| p.beats_quarter_on_singletons));
    }
}
