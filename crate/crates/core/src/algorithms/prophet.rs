//! Single-threshold prophet-secretary baseline.
//!
//! Candidate `i` is modelled as `Uniform[pred_i - theta, pred_i + theta]`. At time `t`
//! the threshold is the `alpha(t) = 0.53 - 0.38 t` quantile of the maximum of
//! these independent variables.

use crate::instance::{Instance, Outcome};
use crate::schedule::Schedule;

const BISECTION_TOL: f64 = 1e-10;

pub fn alpha(t: f64) -> f64 {
    0.53 - 0.38 * t
}

/// CDF of the maximum of the modelled value distributions.
#[derive(Clone, Debug)]
pub struct ProphetThreshold {
    lower: Vec<f64>,
    width: f64,
}

impl ProphetThreshold {
    /// # Panics
    /// If `theta` is not positive.
    pub fn new(instance: &Instance, theta: f64) -> Self {
        assert!(theta > 0.0, "theta must be positive");
        let lower = instance.candidates().iter().map(|c| c.predicted - theta).collect();
        ProphetThreshold { lower, width: 2.0 * theta }
    }

    /// `Pr(max_i X_i <= x)`.
    pub fn max_cdf(&self, x: f64) -> f64 {
        let mut p = 1.0;
        for &lo in &self.lower {
            p *= ((x - lo) / self.width).clamp(0.0, 1.0);
            if p == 0.0 {
                break;
            }
        }
        p
    }

    pub fn support(&self) -> (f64, f64) {
        let lo = self.lower.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = self.lower.iter().copied().fold(f64::NEG_INFINITY, f64::max) + self.width;
        (lo, hi)
    }

    /// Solves `max_cdf(x) = q` by bisection over the support.
    pub fn quantile(&self, q: f64) -> f64 {
        let (mut lo, mut hi) = self.support();
        while hi - lo > BISECTION_TOL {
            let mid = 0.5 * (lo + hi);
            if self.max_cdf(mid) < q {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    pub fn threshold_at(&self, t: f64) -> f64 {
        self.quantile(alpha(t))
    }

    /// Whether `value` clears the threshold at time `t`.
    ///
    /// The CDF is monotone, so `value > threshold_at(t)` agrees with
    /// `max_cdf(value) > alpha(t)` away from the boundary; the bisection is only run
    /// when the two are within rounding of each other.
    pub fn exceeds(&self, value: f64, t: f64) -> bool {
        let a = alpha(t);
        let f = self.max_cdf(value);
        if (f - a).abs() > 1e-9 {
            f > a
        } else {
            value > self.threshold_at(t)
        }
    }
}

/// Hires the first arrival whose value beats the time-dependent quantile threshold.
///
/// # Panics
/// If the capacity is not 1 or `theta` is not positive.
pub fn prophet_secretary_threshold(instance: &Instance, schedule: &Schedule, theta: f64) -> Outcome {
    assert_eq!(instance.capacity(), 1, "the threshold rule hires a single candidate");
    let model = ProphetThreshold::new(instance, theta);
    let hired = schedule.arrivals().find(|&(i, t)| model.exceeds(instance.actual(i), t)).map(|(i, _)| i);
    Outcome::new(instance, hired.into_iter().collect())
}
