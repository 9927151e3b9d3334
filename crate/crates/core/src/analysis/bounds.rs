//! Case analysis behind the single-choice guarantee, and the parameter grid search.
//!
//! `m` is the number of candidates whose observed error exceeds `theta`. Six cases
//! are distinguished by whether that set is empty and where the best candidate and
//! the top prediction fall relative to it; each case has a lower bound on the
//! probability of hiring the best candidate, written with
//!
//! * `J(tau, m) = ∫_tau^1 (1 - (1-t)^m) tau / t dt`
//! * `K(tau, m) = ∫_tau^1 (1-t)^m / t dt`

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use super::quadrature::integrate;
use crate::error::{invalid_param, Error, Result};

pub const QUAD_TOL: f64 = 1e-10;
pub const DEFAULT_M_MAX: usize = 50;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Case {
    I,
    Ii,
    Iii,
    Iv,
    V,
    Vi,
}

impl Case {
    pub const ALL: [Case; 6] = [Case::I, Case::Ii, Case::Iii, Case::Iv, Case::V, Case::Vi];

    pub fn as_str(self) -> &'static str {
        match self {
            Case::I => "i",
            Case::Ii => "ii",
            Case::Iii => "iii",
            Case::Iv => "iv",
            Case::V => "v",
            Case::Vi => "vi",
        }
    }

    /// Whether the bound depends on `m`.
    pub fn uses_m(self) -> bool {
        !matches!(self, Case::I | Case::Iii)
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Case::ALL
            .into_iter()
            .find(|c| c.as_str() == s.to_ascii_lowercase())
            .ok_or_else(|| invalid_param(format!("unknown case `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CaseBoundInput {
    pub tau: f64,
    pub theta: f64,
    pub m: usize,
}

impl CaseBoundInput {
    pub fn validate(&self) -> Result<()> {
        check_tau(self.tau)?;
        if !(self.theta >= 0.0 && self.theta.is_finite()) {
            return Err(invalid_param(format!("theta = {} must be finite and >= 0", self.theta)));
        }
        if self.m == 0 {
            return Err(invalid_param("m must be at least 1"));
        }
        Ok(())
    }
}

fn check_tau(tau: f64) -> Result<()> {
    if tau > 0.0 && tau < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("tau = {tau} outside (0, 1)")))
    }
}

/// `J(tau, m)` by adaptive quadrature.
pub fn j_integral(tau: f64, m: usize) -> Result<f64> {
    check_tau(tau)?;
    let m = m as i32;
    integrate(|t| (1.0 - (1.0 - t).powi(m)) * tau / t, tau, 1.0, QUAD_TOL)
}

/// `K(tau, m)` by adaptive quadrature.
pub fn k_integral(tau: f64, m: usize) -> Result<f64> {
    check_tau(tau)?;
    let m = m as i32;
    integrate(|t| (1.0 - t).powi(m) / t, tau, 1.0, QUAD_TOL)
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

/// `J(tau, m) = tau Σ_{k=1}^m C(m,k) (-1)^(k-1) (1 - tau^k) / k`.
///
/// The alternating sum cancels badly for large `m`; it is kept as a cross-check.
pub fn j_closed_form(tau: f64, m: usize) -> f64 {
    tau * (1..=m)
        .map(|k| {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            sign * binomial(m, k) * (1.0 - tau.powi(k as i32)) / k as f64
        })
        .sum::<f64>()
}

/// `K(tau, m) = ln(1/tau) + Σ_{k=1}^m C(m,k) (-1)^k (1 - tau^k) / k`.
pub fn k_closed_form(tau: f64, m: usize) -> f64 {
    -tau.ln()
        + (1..=m)
            .map(|k| {
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                sign * binomial(m, k) * (1.0 - tau.powi(k as i32)) / k as f64
            })
            .sum::<f64>()
}

/// `(1 - theta) / (1 + theta)`, the ratio guaranteed while predictions are trusted.
pub fn trust_ratio(theta: f64) -> f64 {
    (1.0 - theta) / (1.0 + theta)
}

fn tau_log(tau: f64) -> f64 {
    -tau * tau.ln()
}

/// Every `m`-dependent term needed for one `tau`, so that bounds for many `theta`
/// share the quadrature work.
#[derive(Clone, Debug)]
pub struct CaseTable {
    tau: f64,
    m_max: usize,
    /// `j[m] = J(tau, m)` for `m` in `0..=m_max + 1`.
    j: Vec<f64>,
    /// `k[m] = K(tau, m)` for `m` in `0..=m_max`.
    k: Vec<f64>,
    /// Minimum of the `theta`-free cases over `1..=m_max`.
    theta_free_min: f64,
}

impl CaseTable {
    pub fn new(tau: f64, m_max: usize) -> Result<Self> {
        check_tau(tau)?;
        if m_max == 0 {
            return Err(invalid_param("m_max must be at least 1"));
        }
        let j = (0..=m_max + 1).map(|m| j_integral(tau, m)).collect::<Result<Vec<_>>>()?;
        let k = (0..=m_max).map(|m| k_integral(tau, m)).collect::<Result<Vec<_>>>()?;
        let mut table = CaseTable { tau, m_max, j, k, theta_free_min: f64::INFINITY };
        let mut low = tau_log(tau);
        for m in 1..=m_max {
            for case in [Case::Ii, Case::Iv, Case::V] {
                low = low.min(table.case_value(case, 0.0, m));
            }
        }
        table.theta_free_min = low;
        Ok(table)
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    fn case_value(&self, case: Case, theta: f64, m: usize) -> f64 {
        let tau = self.tau;
        let mf = m as f64;
        let rest = 1.0 - tau;
        match case {
            Case::I | Case::Iii => tau_log(tau),
            Case::Ii => 1.0 / (mf + 1.0) + self.j[m],
            Case::Iv => self.j[m],
            Case::V => {
                rest.powi(m as i32 + 1) / (mf + 1.0) + tau_log(tau)
                    - tau * self.k[m]
                    - (rest / mf) * (1.0 - rest.powi(m as i32))
            }
            Case::Vi => {
                trust_ratio(theta) / (mf + 1.0) + self.j[m + 1] - (rest / (mf + 1.0)) * (1.0 - rest.powi(m as i32 + 1))
            }
        }
    }

    /// Bound of `case` at `(theta, m)`; `m` must be in `1..=m_max`.
    pub fn case_bound(&self, case: Case, theta: f64, m: usize) -> Result<f64> {
        if m == 0 || m > self.m_max {
            return Err(invalid_param(format!("m = {m} outside 1..={}", self.m_max)));
        }
        Ok(self.case_value(case, theta, m))
    }

    /// Minimum over all cases, all `m <= m_max`, and the trust ratio.
    pub fn overall(&self, theta: f64) -> f64 {
        let mut low = self.theta_free_min.min(trust_ratio(theta));
        for m in 1..=self.m_max {
            low = low.min(self.case_value(Case::Vi, theta, m));
        }
        low
    }
}

pub fn case_bound(case: Case, input: CaseBoundInput) -> Result<f64> {
    input.validate()?;
    CaseTable::new(input.tau, input.m)?.case_bound(case, input.theta, input.m)
}

/// Worst case over the six bounds for `m = 1..=m_max` and `(1 - theta) / (1 + theta)`.
pub fn overall_lower_bound(theta: f64, tau: f64, m_max: usize) -> Result<f64> {
    if !(theta >= 0.0 && theta.is_finite()) {
        return Err(invalid_param(format!("theta = {theta} must be finite and >= 0")));
    }
    Ok(CaseTable::new(tau, m_max)?.overall(theta))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GridOptimum {
    pub theta: f64,
    pub tau: f64,
    pub bound: f64,
}

impl GridOptimum {
    /// Larger bound wins; ties go to the larger `theta` (the widest trust region
    /// with the same worst case), then the smaller `tau`.
    fn better(self, other: GridOptimum) -> GridOptimum {
        let key = |g: &GridOptimum| (g.bound, g.theta, -g.tau);
        if key(&other).partial_cmp(&key(&self)) == Some(std::cmp::Ordering::Greater) {
            other
        } else {
            self
        }
    }
}

/// `lo, lo + step, ...` up to `hi`, rounded to 1e-9 so that a grid with a multiple of
/// `step` is a subset of this one.
pub fn grid_points(range: (f64, f64), step: f64) -> Result<Vec<f64>> {
    let (lo, hi) = range;
    if !(step > 0.0 && step.is_finite()) {
        return Err(invalid_param(format!("step = {step} must be positive")));
    }
    if !(lo <= hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(invalid_param(format!("empty range [{lo}, {hi}]")));
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize;
    Ok((0..=count).map(|i| ((lo + i as f64 * step) * 1e9).round() / 1e9).collect())
}

/// Maximises [`overall_lower_bound`] over a `(theta, tau)` grid.
pub fn grid_search(theta_range: (f64, f64), tau_range: (f64, f64), step: f64, m_max: usize) -> Result<GridOptimum> {
    let thetas = grid_points(theta_range, step)?;
    let taus = grid_points(tau_range, step)?;
    if thetas[0] < 0.0 {
        return Err(invalid_param("theta range must be non-negative"));
    }
    let per_tau = taus
        .par_iter()
        .map(|&tau| {
            let table = CaseTable::new(tau, m_max)?;
            let best = thetas
                .iter()
                .map(|&theta| GridOptimum { theta, tau, bound: table.overall(theta) })
                .reduce(GridOptimum::better)
                .expect("non-empty theta grid");
            Ok(best)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(per_tau.into_iter().reduce(GridOptimum::better).expect("non-empty tau grid"))
}
