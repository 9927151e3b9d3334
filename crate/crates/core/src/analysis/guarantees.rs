//! Guarantee curves, the comparison ratio built from the Lambert W branches, and
//! the reciprocal binomial mean.

use std::f64::consts::E;

use serde::Serialize;

use super::lambert::{lambert_w, Branch};
use crate::error::{invalid_param, Error, Result};

/// Worst-case floor of learned Dynkin.
pub const CLASSICAL_FLOOR: f64 = 0.215;

/// `max{0.215, (1 - eps) / (1 + eps)}`.
pub fn learned_dynkin_guarantee(epsilon: f64) -> Result<f64> {
    if !(epsilon >= 0.0) {
        return Err(invalid_param(format!("epsilon = {epsilon} must be >= 0")));
    }
    Ok(CLASSICAL_FLOOR.max((1.0 - epsilon) / (1.0 + epsilon)))
}

/// `1 - min{21 ln k / sqrt(k), 5 eps}`, which may be negative.
pub fn learned_kleinberg_guarantee(k: usize, epsilon: f64) -> Result<f64> {
    if k == 0 {
        return Err(invalid_param("k must be at least 1"));
    }
    if !(epsilon >= 0.0) {
        return Err(invalid_param(format!("epsilon = {epsilon} must be >= 0")));
    }
    let kf = k as f64;
    Ok(1.0 - (21.0 * kf.ln() / kf.sqrt()).min(5.0 * epsilon))
}

/// [`learned_kleinberg_guarantee`] floored at zero.
pub fn learned_kleinberg_guarantee_floored(k: usize, epsilon: f64) -> Result<f64> {
    learned_kleinberg_guarantee(k, epsilon).map(|g| g.max(0.0))
}

/// `E[1 / (X + 1)]` for `X ~ Binomial(n, p)`, i.e. `(1 - (1-p)^(n+1)) / ((n+1) p)`.
pub fn reciprocal_binomial_mean(n: usize, p: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 1.0) {
        return Err(Error::Domain(format!("p = {p} outside (0, 1]")));
    }
    let n1 = (n + 1) as f64;
    Ok((1.0 - (1.0 - p).powi(n as i32 + 1)) / (n1 * p))
}

/// `f(c) = exp(W_0(-1/(c e))) - exp(W_{-1}(-1/(c e)))`.
pub fn agkk_f(c: f64) -> Result<f64> {
    if !(c >= 1.0) {
        return Err(Error::Domain(format!("c = {c} must be >= 1")));
    }
    let x = -1.0 / (c * E);
    Ok(lambert_w(Branch::Principal, x)?.exp() - lambert_w(Branch::Lower, x)?.exp())
}

/// Competitive ratio of the AGKK algorithm with robustness parameter `c`, additive
/// prediction error `eta` and error-tolerance `lambda`, for maximum value `vmax`.
pub fn agkk_ratio(c: f64, lambda: f64, eta: f64, vmax: f64) -> Result<f64> {
    if !(vmax > 0.0) {
        return Err(Error::Domain(format!("vmax = {vmax} must be positive")));
    }
    if !(0.0..=vmax).contains(&lambda) {
        return Err(Error::Domain(format!("lambda = {lambda} outside [0, {vmax}]")));
    }
    if !(eta >= 0.0) {
        return Err(Error::Domain(format!("eta = {eta} must be >= 0")));
    }
    let f = agkk_f(c)?;
    let robust = 1.0 / (c * E);
    if eta >= lambda {
        return Ok(robust);
    }
    Ok(robust.max(f * (1.0 - (lambda + eta) / vmax).max(0.0)))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub c: f64,
    pub lambda: f64,
    pub epsilon: f64,
    pub agkk: f64,
    pub learned_dynkin: f64,
}

/// AGKK ratio with `eta = eps * vmax` (taking `vmax = 1`, so `lambda` is relative
/// to the maximum) next to the learned Dynkin guarantee, for every `(c, lambda, eps)`.
pub fn comparison_curves(c_values: &[f64], lambda_values: &[f64], epsilon_grid: &[f64]) -> Result<Vec<ComparisonRow>> {
    let mut rows = Vec::with_capacity(c_values.len() * lambda_values.len() * epsilon_grid.len());
    for &c in c_values {
        for &lambda in lambda_values {
            for &epsilon in epsilon_grid {
                rows.push(ComparisonRow {
                    c,
                    lambda,
                    epsilon,
                    agkk: agkk_ratio(c, lambda, epsilon, 1.0)?,
                    learned_dynkin: learned_dynkin_guarantee(epsilon)?,
                });
            }
        }
    }
    Ok(rows)
}

/// A guarantee sampled on an epsilon grid.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GuaranteeCurve {
    pub epsilon: Vec<f64>,
    pub ratio: Vec<f64>,
}

impl GuaranteeCurve {
    pub fn learned_dynkin(epsilon: &[f64]) -> Result<Self> {
        let ratio = epsilon.iter().map(|&e| learned_dynkin_guarantee(e)).collect::<Result<_>>()?;
        Ok(GuaranteeCurve { epsilon: epsilon.to_vec(), ratio })
    }

    /// Floored at zero.
    pub fn learned_kleinberg(k: usize, epsilon: &[f64]) -> Result<Self> {
        let ratio = epsilon.iter().map(|&e| learned_kleinberg_guarantee_floored(k, e)).collect::<Result<_>>()?;
        Ok(GuaranteeCurve { epsilon: epsilon.to_vec(), ratio })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dynkin_guarantee_values() {
        assert_eq!(learned_dynkin_guarantee(0.0).unwrap(), 1.0);
        assert!((learned_dynkin_guarantee(0.646).unwrap() - 0.354 / 1.646).abs() < 1e-15);
        assert_eq!(learned_dynkin_guarantee(1.0).unwrap(), 0.215);
    }

    #[test]
    fn kleinberg_guarantee_values() {
        assert_eq!(learned_kleinberg_guarantee(7, 0.0).unwrap(), 1.0);
        let k = E * E;
        let g = 1.0 - 21.0 * k.ln() / k.sqrt();
        assert!((g - (1.0 - 42.0 / E)).abs() < 1e-12);
        let v = learned_kleinberg_guarantee(1_000_000, 1.0).unwrap();
        assert!((v - (1.0 - 21.0 * 1e6f64.ln() / 1000.0)).abs() < 1e-12);
        assert!((v - 0.7098).abs() < 1e-4);
        assert_eq!(learned_kleinberg_guarantee_floored(8, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn reciprocal_binomial_small() {
        assert!((reciprocal_binomial_mean(0, 0.3).unwrap() - 1.0).abs() < 1e-15);
        assert!((reciprocal_binomial_mean(1, 0.5).unwrap() - 0.75).abs() < 1e-15);
        assert!(reciprocal_binomial_mean(3, 0.0).is_err());
    }

    #[test]
    fn agkk_special_values() {
        assert!((agkk_ratio(1.0, 0.2, 0.3, 1.0).unwrap() - 1.0 / E).abs() < 1e-15);
        assert!(agkk_f(1.0).unwrap().abs() < 1e-7);
        let c = 1.0 / (0.215 * E);
        assert!((agkk_ratio(c, 0.1, 0.5, 1.0).unwrap() - 0.215).abs() < 1e-12);
        assert!(agkk_ratio(0.5, 0.1, 0.5, 1.0).is_err());
    }
}
