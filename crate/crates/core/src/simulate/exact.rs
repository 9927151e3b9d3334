//! Exact expected ratio for small instances.
//!
//! Arrival times are i.i.d. uniform, so a uniformly random order together with the
//! numbers of arrivals in each interval between the rule's breakpoints has a
//! multinomial law, and the rule's decisions are constant on each such cell. The
//! enumeration runs the rule once per (order, cell) on a representative schedule
//! whose times sit strictly inside their intervals.

use itertools::Itertools;
use serde::Serialize;

use crate::algorithms::{OnlineAlgorithm, Timing};
use crate::error::{invalid_param, Error, Result};
use crate::instance::Instance;
use crate::schedule::Schedule;

pub const MAX_EXACT_N: usize = 8;

/// Upper limit on the number of (order, cell) evaluations.
pub const CELL_BUDGET: f64 = 5e7;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExactEvaluation {
    /// Expected ratio.
    pub ratio: f64,
    /// Probability of hiring the best candidate.
    pub success: f64,
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

/// Interval ends `0 = e_0 < ... < e_r = 1` for the given breakpoints.
fn interval_ends(breakpoints: &[f64]) -> Vec<f64> {
    let mut ends = vec![0.0];
    ends.extend(breakpoints.iter().copied().filter(|&b| b > 0.0 && b < 1.0));
    ends.push(1.0);
    ends.sort_by(f64::total_cmp);
    ends.dedup();
    ends
}

/// All ways to put `total` arrivals into `parts` ordered intervals.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, parts: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for c in 0..=left {
            cur.push(c);
            rec(left - c, parts - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, parts, &mut Vec::with_capacity(parts), &mut out);
    out
}

/// `Pr(cell)` for `m` i.i.d. uniform times sorted onto a fixed order, and
/// representative times inside each interval.
fn cells(m: usize, ends: &[f64]) -> Vec<(f64, Vec<f64>)> {
    let lengths: Vec<f64> = ends.windows(2).map(|w| w[1] - w[0]).collect();
    compositions(m, lengths.len())
        .into_iter()
        .filter_map(|comp| {
            let mut w = factorial(m);
            let mut times = Vec::with_capacity(m);
            for (j, &c) in comp.iter().enumerate() {
                w *= lengths[j].powi(c as i32) / factorial(c);
                for q in 0..c {
                    times.push(ends[j] + (q + 1) as f64 / (c + 1) as f64 * lengths[j]);
                }
            }
            (w > 0.0).then_some((w, times))
        })
        .collect()
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, j| acc * (n - j) as f64 / (j + 1) as f64)
}

fn schedule(order: &[usize], times_in_order: &[f64]) -> Schedule {
    let mut times = vec![0.0; order.len()];
    for (&i, &t) in order.iter().zip(times_in_order) {
        times[i - 1] = t;
    }
    Schedule::new(order.to_vec(), times).expect("representative times increase inside (0, 1)")
}

/// Exact expected ratio and success probability of `algorithm` on `instance`, by
/// enumerating all `n!` orders and every cell of the rule's time structure.
pub fn exact_ratio_small(instance: &Instance, algorithm: &dyn OnlineAlgorithm) -> Result<ExactEvaluation> {
    let n = instance.n();
    if n > MAX_EXACT_N {
        return Err(invalid_param(format!("exact evaluation supports n <= {MAX_EXACT_N}, got {n}")));
    }
    let timing = algorithm.timing(instance);
    let fixed_ends = match &timing {
        Timing::OrderOnly => vec![0.0, 1.0],
        Timing::Breakpoints(b) => interval_ends(b),
        Timing::Switching => Vec::new(),
        Timing::Unknown => {
            return Err(invalid_param(format!("{} does not describe how it uses arrival times", algorithm.name())))
        }
    };
    let per_order = if let Timing::Switching = timing {
        // Rescaled breakpoints never exceed those of the full capacity.
        let r = crate::algorithms::kleinberg_breakpoints(instance.capacity()).len();
        binomial(n + r, r)
    } else {
        binomial(n + fixed_ends.len() - 2, fixed_ends.len() - 2)
    };
    if factorial(n) * per_order > CELL_BUDGET {
        return Err(Error::BudgetExceeded(format!(
            "{} orders x {per_order} cells exceeds {CELL_BUDGET}",
            factorial(n)
        )));
    }

    let fixed_cells = if fixed_ends.is_empty() { Vec::new() } else { cells(n, &fixed_ends) };
    let order_weight = 1.0 / factorial(n);
    let mut ratio = 0.0;
    let mut success = 0.0;
    let mut add = |w: f64, s: &Schedule| {
        for (p, outcome) in algorithm.outcome_distribution(instance, s) {
            ratio += w * p * outcome.ratio;
            if outcome.hired_best(instance) {
                success += w * p;
            }
        }
    };
    for order in (1..=n).permutations(n) {
        if let Timing::Switching = timing {
            match algorithm.switch_point(instance, &order) {
                None => add(order_weight, &schedule(&order, &cells(n, &[0.0, 1.0])[0].1)),
                Some((pos, breakpoints)) => {
                    // Later times are i.i.d. uniform on (t_s, 1], so their rescaled
                    // values are i.i.d. uniform on (0, 1] whatever t_s is.
                    let head: Vec<f64> = (1..=pos + 1).map(|q| 0.5 * q as f64 / (pos + 1) as f64).collect();
                    for (w, tail) in cells(n - pos - 1, &interval_ends(&breakpoints)) {
                        let times: Vec<f64> = head.iter().copied().chain(tail.iter().map(|r| 0.5 + 0.5 * r)).collect();
                        add(order_weight * w, &schedule(&order, &times));
                    }
                }
            }
        } else {
            for (w, times) in &fixed_cells {
                add(order_weight * w, &schedule(&order, times));
            }
        }
    }
    Ok(ExactEvaluation { ratio, success })
}
