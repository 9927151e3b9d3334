use std::fmt;
use std::sync::Arc;

use super::{
    alpha, dynkin, kleinberg, kleinberg_breakpoints, learned_dynkin, learned_kleinberg,
    learned_kleinberg_switch_position, prophet_secretary_threshold, top_k_prediction, ClassicalParams, MultiParams,
    MultiSwitch, ProphetThreshold,
};
use crate::error::{invalid_param, Result};
use crate::instance::{ErrorRule, Instance, Outcome};
use crate::schedule::Schedule;

/// Anything that can be run online on an instance and an arrival schedule.
///
/// Implement this to plug an external rule (for example the AGKK algorithm, which
/// only needs a prediction of the maximum) into [`AlgorithmSpec::Custom`].
pub trait OnlineAlgorithm: Send + Sync {
    fn run(&self, instance: &Instance, schedule: &Schedule) -> Outcome;

    fn name(&self) -> String;

    /// Every outcome the rule can produce on this schedule, with its probability.
    /// Deterministic rules return their single outcome.
    fn outcome_distribution(&self, instance: &Instance, schedule: &Schedule) -> Vec<(f64, Outcome)> {
        vec![(1.0, self.run(instance, schedule))]
    }

    /// How decisions depend on arrival times; used by exact evaluation.
    fn timing(&self, _instance: &Instance) -> Timing {
        Timing::Unknown
    }

    /// For [`Timing::Switching`]: position in `order` of the switching arrival and
    /// the breakpoints that apply to the rescaled times of later arrivals.
    fn switch_point(&self, _instance: &Instance, _order: &[usize]) -> Option<(usize, Vec<f64>)> {
        None
    }
}

/// Dependence of a rule's decisions on arrival times.
#[derive(Clone, Debug, PartialEq)]
pub enum Timing {
    /// Only the arrival order matters.
    OrderOnly,
    /// The order and the interval between consecutive breakpoints each arrival falls in.
    Breakpoints(Vec<f64>),
    /// Order only up to a switching arrival at time `t_s` (see
    /// [`OnlineAlgorithm::switch_point`]); later arrivals matter through the interval
    /// containing `(t - t_s) / (1 - t_s)`.
    Switching,
    Unknown,
}

/// A named algorithm together with its parameters.
#[derive(Clone)]
pub enum AlgorithmSpec {
    Dynkin {
        tau: f64,
    },
    LearnedDynkin(ClassicalParams),
    /// Kleinberg's rule with the instance capacity on the whole horizon.
    Kleinberg,
    LearnedKleinberg(MultiParams),
    /// Learned Kleinberg with `theta = 5 ln k / sqrt(k)` for the instance's `k`.
    LearnedKleinbergGuaranteed {
        switch_rule: ErrorRule,
    },
    TopK,
    /// Threshold rule with half-width `spread * max prediction`.
    ProphetThreshold {
        spread: f64,
    },
    Custom(Arc<dyn OnlineAlgorithm>),
}

impl fmt::Debug for AlgorithmSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{}]", self.name(), self.params_label())
    }
}

impl AlgorithmSpec {
    pub fn name(&self) -> String {
        match self {
            AlgorithmSpec::Dynkin { .. } => "dynkin".into(),
            AlgorithmSpec::LearnedDynkin(_) => "learned-dynkin".into(),
            AlgorithmSpec::Kleinberg => "kleinberg".into(),
            AlgorithmSpec::LearnedKleinberg(_) | AlgorithmSpec::LearnedKleinbergGuaranteed { .. } => {
                "learned-kleinberg".into()
            }
            AlgorithmSpec::TopK => "top-k".into(),
            AlgorithmSpec::ProphetThreshold { .. } => "prophet-threshold".into(),
            AlgorithmSpec::Custom(a) => a.name(),
        }
    }

    /// Parameter summary, `;`-separated so it can sit in a CSV field.
    pub fn params_label(&self) -> String {
        match self {
            AlgorithmSpec::Dynkin { tau } => format!("tau={tau}"),
            AlgorithmSpec::LearnedDynkin(p) => {
                format!("tau={};theta={};rule={}", p.tau, p.theta, p.switch_rule.as_str())
            }
            AlgorithmSpec::Kleinberg | AlgorithmSpec::TopK | AlgorithmSpec::Custom(_) => String::new(),
            AlgorithmSpec::LearnedKleinberg(p) => format!("theta={};rule={}", p.theta, p.switch_rule.as_str()),
            AlgorithmSpec::LearnedKleinbergGuaranteed { switch_rule } => {
                format!("theta=5lnk/sqrtk;rule={}", switch_rule.as_str())
            }
            AlgorithmSpec::ProphetThreshold { spread } => format!("theta={spread}*pmax"),
        }
    }

    pub fn label(&self) -> String {
        let p = self.params_label();
        if p.is_empty() {
            self.name()
        } else {
            format!("{}[{p}]", self.name())
        }
    }

    /// Whether the rule is defined for capacity `k`.
    pub fn supports_capacity(&self, k: usize) -> bool {
        match self {
            AlgorithmSpec::Dynkin { .. } | AlgorithmSpec::LearnedDynkin(_) | AlgorithmSpec::ProphetThreshold { .. } => {
                k == 1
            }
            _ => true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            AlgorithmSpec::Dynkin { tau } if !(*tau > 0.0 && *tau < 1.0) => {
                Err(invalid_param(format!("tau = {tau} outside (0, 1)")))
            }
            AlgorithmSpec::LearnedDynkin(p) => p.validate(),
            AlgorithmSpec::LearnedKleinberg(p) => p.validate(),
            AlgorithmSpec::LearnedKleinbergGuaranteed { switch_rule } => {
                MultiParams { theta: 0.0, switch_rule: *switch_rule }.validate()
            }
            AlgorithmSpec::ProphetThreshold { spread } if !(*spread > 0.0) => {
                Err(invalid_param(format!("spread = {spread} must be positive")))
            }
            _ => Ok(()),
        }
    }

    /// Validates parameters and capacity against `instance`.
    pub fn check(&self, instance: &Instance) -> Result<()> {
        self.validate()?;
        if !self.supports_capacity(instance.capacity()) {
            return Err(invalid_param(format!("{} needs capacity 1, got {}", self.name(), instance.capacity())));
        }
        if let AlgorithmSpec::ProphetThreshold { .. } = self {
            if max_prediction(instance) <= 0.0 {
                return Err(invalid_param("the threshold rule needs a positive prediction"));
            }
        }
        Ok(())
    }

    /// Resolves instance-dependent parameters.
    pub fn multi_params(&self, instance: &Instance) -> Option<MultiParams> {
        match self {
            AlgorithmSpec::LearnedKleinberg(p) => Some(*p),
            AlgorithmSpec::LearnedKleinbergGuaranteed { switch_rule } => {
                Some(MultiParams { switch_rule: *switch_rule, ..MultiParams::guaranteed(instance.capacity()) })
            }
            _ => None,
        }
    }

    pub fn prophet_theta(&self, instance: &Instance) -> Option<f64> {
        match self {
            AlgorithmSpec::ProphetThreshold { spread } => Some(spread * max_prediction(instance)),
            _ => None,
        }
    }
}

fn max_prediction(instance: &Instance) -> f64 {
    instance.predicted(instance.top_predicted())
}

impl OnlineAlgorithm for AlgorithmSpec {
    fn run(&self, instance: &Instance, schedule: &Schedule) -> Outcome {
        match self {
            AlgorithmSpec::Dynkin { tau } => dynkin(instance, schedule, *tau),
            AlgorithmSpec::LearnedDynkin(p) => learned_dynkin(instance, schedule, p),
            AlgorithmSpec::Kleinberg => kleinberg(instance, schedule, instance.capacity(), (0.0, 1.0)),
            AlgorithmSpec::LearnedKleinberg(_) | AlgorithmSpec::LearnedKleinbergGuaranteed { .. } => {
                let p = self.multi_params(instance).expect("learned Kleinberg variant");
                learned_kleinberg(instance, schedule, &p)
            }
            AlgorithmSpec::TopK => top_k_prediction(instance, schedule),
            AlgorithmSpec::ProphetThreshold { .. } => {
                prophet_secretary_threshold(instance, schedule, self.prophet_theta(instance).expect("prophet variant"))
            }
            AlgorithmSpec::Custom(a) => a.run(instance, schedule),
        }
    }

    fn name(&self) -> String {
        AlgorithmSpec::name(self)
    }

    fn outcome_distribution(&self, instance: &Instance, schedule: &Schedule) -> Vec<(f64, Outcome)> {
        match self {
            AlgorithmSpec::Custom(a) => a.outcome_distribution(instance, schedule),
            _ => vec![(1.0, self.run(instance, schedule))],
        }
    }

    fn timing(&self, instance: &Instance) -> Timing {
        match self {
            AlgorithmSpec::Dynkin { tau } => Timing::Breakpoints(vec![*tau]),
            AlgorithmSpec::LearnedDynkin(p) => Timing::Breakpoints(vec![p.tau]),
            AlgorithmSpec::Kleinberg => Timing::Breakpoints(kleinberg_breakpoints(instance.capacity())),
            AlgorithmSpec::LearnedKleinberg(_) | AlgorithmSpec::LearnedKleinbergGuaranteed { .. } => Timing::Switching,
            AlgorithmSpec::TopK => Timing::OrderOnly,
            AlgorithmSpec::ProphetThreshold { .. } => {
                // A value v clears the threshold exactly when t > (0.53 - F(v)) / 0.38.
                let model = ProphetThreshold::new(instance, self.prophet_theta(instance).expect("prophet variant"));
                let mut cuts: Vec<f64> = instance
                    .candidates()
                    .iter()
                    .map(|c| (alpha(0.0) - model.max_cdf(c.actual)) / (alpha(0.0) - alpha(1.0)))
                    .filter(|&t| t > 0.0 && t < 1.0)
                    .collect();
                cuts.sort_by(f64::total_cmp);
                cuts.dedup();
                Timing::Breakpoints(cuts)
            }
            AlgorithmSpec::Custom(a) => a.timing(instance),
        }
    }

    fn switch_point(&self, instance: &Instance, order: &[usize]) -> Option<(usize, Vec<f64>)> {
        match self {
            AlgorithmSpec::LearnedKleinberg(_) | AlgorithmSpec::LearnedKleinbergGuaranteed { .. } => {
                let p = self.multi_params(instance).expect("learned Kleinberg variant");
                let switch = MultiSwitch::new(instance, p.theta, p.switch_rule);
                let pos = learned_kleinberg_switch_position(instance, order, &p)?;
                let taken = order[..pos].iter().filter(|&&i| switch.in_top(i)).count();
                Some((pos, kleinberg_breakpoints(instance.capacity() - taken - 1)))
            }
            AlgorithmSpec::Custom(a) => a.switch_point(instance, order),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels() {
        let s = AlgorithmSpec::LearnedDynkin(ClassicalParams::GUARANTEED);
        assert_eq!(s.label(), "learned-dynkin[tau=0.313;theta=0.646;rule=global]");
        assert_eq!(AlgorithmSpec::TopK.label(), "top-k");
    }

    #[test]
    fn capacity_support() {
        assert!(!AlgorithmSpec::Dynkin { tau: 0.3 }.supports_capacity(2));
        assert!(AlgorithmSpec::Kleinberg.supports_capacity(2));
        let i = Instance::new(vec![1.0, 2.0], vec![1.0, 2.0], 2).unwrap();
        assert!(AlgorithmSpec::Dynkin { tau: 0.3 }.check(&i).is_err());
        assert!(AlgorithmSpec::Dynkin { tau: 1.3 }.validate().is_err());
    }
}
