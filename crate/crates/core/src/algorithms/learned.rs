use super::kleinberg::kleinberg_hire;
use super::{ClassicalParams, Mode, MultiParams, SwitchState};
use crate::instance::{error_of, prediction_ratio, ErrorRule, Instance, Outcome};
use crate::schedule::Schedule;

/// Slack on the global switch test, so that an error equal to `theta` up to
/// floating-point rounding does not count as exceeding it.
pub const SWITCH_SLACK: f64 = 1e-12;

/// Mode-switch test of learned Dynkin.
#[derive(Clone, Debug)]
pub struct ClassicalSwitch {
    theta: f64,
    rule: ErrorRule,
    top: usize,
    top_prediction: f64,
}

impl ClassicalSwitch {
    pub fn new(instance: &Instance, theta: f64, rule: ErrorRule) -> Self {
        let top = instance.top_predicted();
        ClassicalSwitch { theta, rule, top, top_prediction: instance.predicted(top) }
    }

    /// Index of the top prediction.
    pub fn top(&self) -> usize {
        self.top
    }

    pub fn fires(&self, instance: &Instance, i: usize) -> bool {
        let c = instance.candidate(i);
        match self.rule {
            ErrorRule::Global => error_of(c.actual, c.predicted) > self.theta + SWITCH_SLACK,
            _ => {
                1.0 - prediction_ratio(self.top_prediction, c.actual) >= self.theta
                    || (i == self.top && prediction_ratio(self.top_prediction, c.actual) - 1.0 >= self.theta)
            }
        }
    }
}

/// Mode-switch test of learned Kleinberg, with the top-k prediction set.
#[derive(Clone, Debug)]
pub struct MultiSwitch {
    theta: f64,
    rule: ErrorRule,
    in_top: Vec<bool>,
    floor_prediction: f64,
}

impl MultiSwitch {
    pub fn new(instance: &Instance, theta: f64, rule: ErrorRule) -> Self {
        let top = instance.top_k_predicted(instance.capacity());
        let mut in_top = vec![false; instance.n() + 1];
        for &i in &top {
            in_top[i] = true;
        }
        let floor_prediction = instance.predicted(*top.last().expect("capacity >= 1"));
        MultiSwitch { theta, rule, in_top, floor_prediction }
    }

    pub fn in_top(&self, i: usize) -> bool {
        self.in_top[i]
    }

    pub fn fires(&self, instance: &Instance, i: usize) -> bool {
        let c = instance.candidate(i);
        match self.rule {
            ErrorRule::Global => error_of(c.actual, c.predicted) > self.theta + SWITCH_SLACK,
            _ => {
                if self.in_top[i] {
                    error_of(c.actual, c.predicted) >= self.theta
                } else {
                    1.0 - prediction_ratio(self.floor_prediction, c.actual) >= self.theta
                }
            }
        }
    }
}

/// Learned Dynkin with its final mode.
///
/// Each arrival is first checked against the switch rule; in prediction mode only
/// the top prediction is hired, in secretary mode the first arrival after `tau`
/// that strictly beats every earlier arrival (before or after the switch).
pub fn learned_dynkin_run(
    instance: &Instance,
    schedule: &Schedule,
    params: &ClassicalParams,
) -> (Outcome, SwitchState) {
    assert_eq!(instance.capacity(), 1, "learned Dynkin hires a single candidate");
    let switch = ClassicalSwitch::new(instance, params.theta, params.switch_rule);
    let mut state = SwitchState::PREDICTION;
    let mut best = f64::NEG_INFINITY;
    let mut hired = None;
    for (i, t) in schedule.arrivals() {
        if switch.fires(instance, i) {
            state.switch_at(t);
        }
        let v = instance.actual(i);
        let hire = match state.mode {
            Mode::Prediction => i == switch.top(),
            Mode::Secretary => t > params.tau && v > best,
        };
        if hire {
            hired = Some(i);
            break;
        }
        best = best.max(v);
    }
    (Outcome::new(instance, hired.into_iter().collect()), state)
}

pub fn learned_dynkin(instance: &Instance, schedule: &Schedule, params: &ClassicalParams) -> Outcome {
    learned_dynkin_run(instance, schedule, params).0
}

/// Position in `order` of the arrival that triggers learned Kleinberg's switch,
/// if it happens before the top-k set is complete. Depends on the order only.
pub fn learned_kleinberg_switch_position(instance: &Instance, order: &[usize], params: &MultiParams) -> Option<usize> {
    let switch = MultiSwitch::new(instance, params.theta, params.switch_rule);
    let k = instance.capacity();
    let mut taken = 0;
    for (pos, &i) in order.iter().enumerate() {
        if switch.fires(instance, i) {
            return Some(pos);
        }
        if switch.in_top(i) {
            taken += 1;
            if taken == k {
                return None;
            }
        }
    }
    None
}

/// Learned Kleinberg.
///
/// Follows the top-k predictions until some arrival trips the switch rule. That
/// arrival is hired and Kleinberg's rule runs with the remaining capacity on the
/// later arrivals, whose times are rescaled from `(t_switch, 1]` onto `(0, 1]`.
pub fn learned_kleinberg(instance: &Instance, schedule: &Schedule, params: &MultiParams) -> Outcome {
    let k = instance.capacity();
    let switch = MultiSwitch::new(instance, params.theta, params.switch_rule);
    let arrivals: Vec<(usize, f64)> = schedule.arrivals().collect();
    let mut hired = Vec::with_capacity(k);
    for (pos, &(i, t)) in arrivals.iter().enumerate() {
        if switch.fires(instance, i) {
            let remaining = k - hired.len() - 1;
            hired.push(i);
            let span = 1.0 - t;
            let rest: Vec<(usize, f64)> = arrivals[pos + 1..].iter().map(|&(j, s)| (j, (s - t) / span)).collect();
            kleinberg_hire(instance, &rest, remaining, 0.0, 1.0, &mut hired);
            break;
        }
        if switch.in_top(i) {
            hired.push(i);
            if hired.len() == k {
                break;
            }
        }
    }
    Outcome::new(instance, hired)
}

/// Hires every member of the top-k prediction set as it arrives.
pub fn top_k_prediction(instance: &Instance, schedule: &Schedule) -> Outcome {
    let k = instance.capacity();
    let top = instance.top_k_predicted(k);
    let mut in_top = vec![false; instance.n() + 1];
    for &i in &top {
        in_top[i] = true;
    }
    let hired = schedule.order().iter().copied().filter(|&i| in_top[i]).collect();
    Outcome::new(instance, hired)
}
