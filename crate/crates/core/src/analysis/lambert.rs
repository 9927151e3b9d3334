//! Real branches of the Lambert W function.

use std::f64::consts::E;

use crate::error::{Error, Result};

const BRANCH_POINT: f64 = -1.0 / E;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    /// Principal branch `W_0`, values `>= -1`.
    Principal,
    /// Lower branch `W_{-1}`, values `<= -1`.
    Lower,
}

impl Branch {
    /// Maps the conventional branch numbers 0 and -1.
    pub fn from_index(k: i32) -> Result<Self> {
        match k {
            0 => Ok(Branch::Principal),
            -1 => Ok(Branch::Lower),
            _ => Err(Error::Domain(format!("no real branch {k}"))),
        }
    }
}

/// Solves `w e^w = x` on the chosen branch by Halley iteration.
pub fn lambert_w(branch: Branch, x: f64) -> Result<f64> {
    // Allow for -1/e being rounded slightly low.
    let lower_limit = BRANCH_POINT - 4.0 * f64::EPSILON;
    let in_domain = match branch {
        Branch::Principal => x >= lower_limit && x.is_finite(),
        Branch::Lower => x >= lower_limit && x < 0.0,
    };
    if !in_domain {
        return Err(Error::Domain(format!(
            "W{} undefined at {x}",
            if branch == Branch::Principal { "0" } else { "-1" }
        )));
    }
    if x <= BRANCH_POINT {
        return Ok(-1.0);
    }
    if x == 0.0 {
        return Ok(0.0);
    }

    let mut w = initial_guess(branch, x);
    for _ in 0..100 {
        let ew = w.exp();
        let f = w * ew - x;
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            break;
        }
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        w -= step;
        if step.abs() <= 1e-15 * (1.0 + w.abs()) {
            break;
        }
    }
    Ok(w)
}

fn initial_guess(branch: Branch, x: f64) -> f64 {
    // Series around the branch point in p = sqrt(2 (e x + 1)).
    let near_branch = x < -0.25;
    match branch {
        Branch::Principal if near_branch => {
            let p = (2.0 * (E * x + 1.0)).sqrt();
            -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p
        }
        Branch::Principal if x < 3.0 => x.ln_1p() * 0.8,
        Branch::Principal => {
            let l = x.ln();
            l - l.ln()
        }
        Branch::Lower if near_branch => {
            let p = (2.0 * (E * x + 1.0)).sqrt();
            -1.0 - p - p * p / 3.0 - 11.0 / 72.0 * p * p * p
        }
        Branch::Lower => {
            let l = (-x).ln();
            l - (-l).ln()
        }
    }
}
