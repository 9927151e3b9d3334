//! Online hiring rules.
//!
//! Every rule is a deterministic function of `(instance, schedule, params)`; all
//! randomness lives in the schedule.

mod dynkin;
mod kleinberg;
mod learned;
mod prophet;
mod spec;

pub use dynkin::{dynkin, dynkin_hire};
pub use kleinberg::{kleinberg, kleinberg_breakpoints, kleinberg_hire};
pub use learned::{
    learned_dynkin, learned_dynkin_run, learned_kleinberg, learned_kleinberg_switch_position, top_k_prediction,
    ClassicalSwitch, MultiSwitch, SWITCH_SLACK,
};
pub use prophet::{alpha, prophet_secretary_threshold, ProphetThreshold};
pub use spec::{AlgorithmSpec, OnlineAlgorithm, Timing};

use serde::{Deserialize, Serialize};

use crate::error::{invalid_param, Result};
use crate::instance::ErrorRule;

/// Parameters of learned Dynkin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalParams {
    /// Observation cutoff.
    pub tau: f64,
    /// Switch threshold; `f64::INFINITY` never switches.
    pub theta: f64,
    pub switch_rule: ErrorRule,
}

impl ClassicalParams {
    /// Parameters with the proven `max{0.215, (1-eps)/(1+eps)}` guarantee.
    pub const GUARANTEED: ClassicalParams =
        ClassicalParams { tau: 0.313, theta: 0.646, switch_rule: ErrorRule::Global };

    pub fn new(tau: f64, theta: f64, switch_rule: ErrorRule) -> Result<Self> {
        let p = ClassicalParams { tau, theta, switch_rule };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tau > 0.0 && self.tau < 1.0) {
            return Err(invalid_param(format!("tau = {} outside (0, 1)", self.tau)));
        }
        if self.theta.is_nan() || self.theta < 0.0 {
            return Err(invalid_param(format!("theta = {} must be nonnegative", self.theta)));
        }
        if self.switch_rule == ErrorRule::RefinedMulti {
            return Err(invalid_param("learned Dynkin switches on the global or refined-classical rule"));
        }
        Ok(())
    }
}

/// Parameters of learned Kleinberg.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MultiParams {
    pub theta: f64,
    pub switch_rule: ErrorRule,
}

impl MultiParams {
    pub fn new(theta: f64, switch_rule: ErrorRule) -> Result<Self> {
        let p = MultiParams { theta, switch_rule };
        p.validate()?;
        Ok(p)
    }

    /// `theta = 5 ln k / sqrt(k)`, the choice behind the `1 - min{21 ln k / sqrt(k), 5 eps}` guarantee.
    pub fn guaranteed(k: usize) -> Self {
        let kf = k as f64;
        MultiParams { theta: 5.0 * kf.ln() / kf.sqrt(), switch_rule: ErrorRule::Global }
    }

    pub fn validate(&self) -> Result<()> {
        if self.theta.is_nan() || self.theta < 0.0 {
            return Err(invalid_param(format!("theta = {} must be nonnegative", self.theta)));
        }
        if self.switch_rule == ErrorRule::RefinedClassical {
            return Err(invalid_param("learned Kleinberg switches on the global or refined-multi rule"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Prediction,
    Secretary,
}

/// Mode of learned Dynkin after a run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SwitchState {
    pub mode: Mode,
    /// Arrival time of the candidate that triggered the switch.
    pub switch_time: Option<f64>,
}

impl SwitchState {
    pub const PREDICTION: SwitchState = SwitchState { mode: Mode::Prediction, switch_time: None };

    pub fn switch_at(&mut self, t: f64) {
        if self.mode == Mode::Prediction {
            self.mode = Mode::Secretary;
            self.switch_time = Some(t);
        }
    }
}
