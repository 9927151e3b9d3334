use std::sync::Arc;

use itertools::Itertools;
use rand::Rng;

use crate::algorithms::{OnlineAlgorithm, Timing};
use crate::error::{Error, Result};
use crate::instance::{Instance, Outcome};
use crate::schedule::Schedule;
use crate::seed::rng_for;

use super::model::{optimal_of, ErrorSet, HardnessLp, FEASIBILITY_TOL};
use super::sigma::{PartialPermutation, SigmaSet, SignedIndex};

/// Hires the last arrival of an observed prefix `σ` with probability `h(σ)`.
#[derive(Clone, Debug)]
pub struct RandomizedPolicy {
    sigma: Arc<SigmaSet>,
    h: Vec<f64>,
}

impl RandomizedPolicy {
    pub fn new(sigma: Arc<SigmaSet>, h: Vec<f64>) -> Result<Self> {
        if h.len() != sigma.len() {
            return Err(Error::InvalidParameter(format!("{} probabilities for {} prefixes", h.len(), sigma.len())));
        }
        if let Some(p) = h.iter().find(|p| !(0.0..=1.0).contains(*p)) {
            return Err(Error::InvalidParameter(format!("hire probability {p} outside [0, 1]")));
        }
        Ok(RandomizedPolicy { sigma, h })
    }

    /// Deterministic policy hiring exactly where `hire` says so.
    pub fn from_fn(sigma: Arc<SigmaSet>, hire: impl Fn(&PartialPermutation) -> bool) -> Self {
        let h = sigma.items().iter().map(|s| if hire(s) { 1.0 } else { 0.0 }).collect();
        RandomizedPolicy { sigma, h }
    }

    pub fn n(&self) -> usize {
        self.sigma.n()
    }

    pub fn sigma(&self) -> &SigmaSet {
        &self.sigma
    }

    pub fn hire_probability(&self, id: usize) -> f64 {
        self.h[id]
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.h
    }

    /// `(position, probability)` of hiring along one arrival sequence; the
    /// remaining mass hires nobody.
    pub fn hire_path(&self, arrivals: &[SignedIndex]) -> Vec<(usize, f64)> {
        let mut out = Vec::new();
        let mut survive = 1.0;
        let mut node = None;
        for (pos, &s) in arrivals.iter().enumerate() {
            let Some(id) = self.sigma.child(node, s) else { break };
            let h = self.h[id];
            if h > 0.0 {
                out.push((pos, survive * h));
                survive *= 1.0 - h;
                if survive == 0.0 {
                    break;
                }
            }
            node = Some(id);
        }
        out
    }

    /// Signed arrival sequence of `schedule` on `instance`: candidate `i >= 2`
    /// is erroneous when its prediction differs from its value.
    fn signed_order(&self, instance: &Instance, schedule: &Schedule) -> Vec<SignedIndex> {
        schedule
            .order()
            .iter()
            .map(|&i| SignedIndex { index: i as u8, erroneous: i >= 2 && instance.actual(i) != instance.predicted(i) })
            .collect()
    }
}

/// Reconstructs the policy behind an LP solution: `h(σ) = x(σ) / Pr(reach σ)`,
/// with `0/0 = 0`.
pub fn policy_from_lp(model: &HardnessLp, values: &[f64]) -> Result<RandomizedPolicy> {
    if values.len() != model.lp().num_variables() {
        return Err(Error::InfeasibleSolution(format!(
            "{} values for {} variables",
            values.len(),
            model.lp().num_variables()
        )));
    }
    let residual = model.residual(values);
    if residual > FEASIBILITY_TOL {
        return Err(Error::InfeasibleSolution(format!("residual {residual:e}")));
    }
    let sigma = model.sigma_arc();
    let h = (0..sigma.len())
        .map(|id| {
            let x = values[HardnessLp::var_of(id)];
            let reach = model.reach(id, values);
            if x <= 0.0 || reach <= 0.0 {
                0.0
            } else {
                (x / reach).clamp(0.0, 1.0)
            }
        })
        .collect();
    Ok(RandomizedPolicy { sigma, h })
}

/// Exact probability that `policy` hires the optimal candidate of `I_{n,E}`, over
/// all `n!` arrival orders.
pub fn exact_policy_value(policy: &RandomizedPolicy, e: ErrorSet) -> f64 {
    let n = policy.n();
    let target = optimal_of(e);
    let signed = |i: usize| SignedIndex { index: i as u8, erroneous: i >= 2 && e & (1 << i) != 0 };
    let mut total = 0.0;
    let mut orders = 0u64;
    for order in (1..=n).permutations(n) {
        let arrivals: Vec<SignedIndex> = order.into_iter().map(signed).collect();
        total += policy
            .hire_path(&arrivals)
            .into_iter()
            .filter(|&(pos, _)| arrivals[pos] == target)
            .map(|(_, p)| p)
            .sum::<f64>();
        orders += 1;
    }
    total / orders as f64
}

impl OnlineAlgorithm for RandomizedPolicy {
    /// Draws the policy's coin flips from a stream keyed by the schedule's times.
    fn run(&self, instance: &Instance, schedule: &Schedule) -> Outcome {
        let key: Vec<u64> = schedule.times().iter().map(|t| t.to_bits()).collect();
        let u: f64 = rng_for(0x5eed, &key).gen();
        let mut acc = 0.0;
        for (p, outcome) in self.outcome_distribution(instance, schedule) {
            acc += p;
            if u < acc {
                return outcome;
            }
        }
        Outcome::new(instance, Vec::new())
    }

    fn name(&self) -> String {
        "lp-policy".into()
    }

    fn outcome_distribution(&self, instance: &Instance, schedule: &Schedule) -> Vec<(f64, Outcome)> {
        let order = self.signed_order(instance, schedule);
        let mut out = Vec::new();
        let mut hired_mass = 0.0;
        for (pos, p) in self.hire_path(&order) {
            hired_mass += p;
            out.push((p, Outcome::new(instance, vec![order[pos].index()])));
        }
        let rest = 1.0 - hired_mass;
        if rest > 0.0 {
            out.push((rest, Outcome::new(instance, Vec::new())));
        }
        out
    }

    fn timing(&self, _instance: &Instance) -> Timing {
        Timing::OrderOnly
    }
}
