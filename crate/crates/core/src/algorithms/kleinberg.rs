use std::f64::consts::E;

use super::dynkin::dynkin_hire;
use crate::instance::{Instance, Outcome};
use crate::schedule::Schedule;

/// Kleinberg's recursive rule on `arrivals` (in arrival order, times inside `[lo, hi]`)
/// with capacity `k`. Hired indices are appended to `hired`.
///
/// With `k = 1` this is Dynkin's rule with its cutoff at the window's relative `1/e`
/// point. Otherwise the first half of the window is handled recursively with
/// capacity `floor(k/2)`, and second-half arrivals are hired while they beat the
/// `floor(k/2)`-th largest first-half value (0 when the first half had fewer
/// arrivals), until `k` hires have been made in this window.
pub fn kleinberg_hire(
    instance: &Instance,
    arrivals: &[(usize, f64)],
    k: usize,
    lo: f64,
    hi: f64,
    hired: &mut Vec<usize>,
) {
    match k {
        0 => {}
        1 => {
            let cutoff = lo + (hi - lo) / E;
            hired.extend(dynkin_hire(instance, arrivals.iter().copied(), cutoff));
        }
        _ => {
            let mid = 0.5 * (lo + hi);
            let split = arrivals.partition_point(|&(_, t)| t < mid);
            let (first, second) = arrivals.split_at(split);
            let half = k / 2;
            let before = hired.len();
            kleinberg_hire(instance, first, half, lo, mid, hired);

            let mut first_vals: Vec<f64> = first.iter().map(|&(i, _)| instance.actual(i)).collect();
            let threshold = if first_vals.len() < half {
                0.0
            } else {
                first_vals.sort_by(|a, b| b.total_cmp(a));
                first_vals[half - 1]
            };
            let mut count = hired.len() - before;
            for &(i, _) in second {
                if count >= k {
                    break;
                }
                if instance.actual(i) > threshold {
                    hired.push(i);
                    count += 1;
                }
            }
        }
    }
}

/// Relative times in `[0, 1]` at which Kleinberg's decisions with capacity `k` on
/// the unit window can change. Between consecutive breakpoints only the arrival
/// order matters.
pub fn kleinberg_breakpoints(k: usize) -> Vec<f64> {
    fn collect(k: usize, lo: f64, hi: f64, out: &mut Vec<f64>) {
        match k {
            0 => {}
            1 => out.push(lo + (hi - lo) / E),
            _ => {
                let mid = 0.5 * (lo + hi);
                out.push(mid);
                collect(k / 2, lo, mid, out);
            }
        }
    }
    let mut out = Vec::new();
    collect(k, 0.0, 1.0, &mut out);
    out.sort_by(f64::total_cmp);
    out
}

/// Kleinberg's multiple-choice rule with capacity `k`, seeing only the candidates
/// whose arrival time lies in `window`.
///
/// # Panics
/// If `k` is 0 or exceeds the instance capacity, or the window is not inside `[0, 1]`.
pub fn kleinberg(instance: &Instance, schedule: &Schedule, k: usize, window: (f64, f64)) -> Outcome {
    let (lo, hi) = window;
    assert!(k >= 1 && k <= instance.capacity(), "capacity {k} outside 1..={}", instance.capacity());
    assert!((0.0..=1.0).contains(&lo) && lo < hi && hi <= 1.0, "window {window:?} not inside [0, 1]");
    let visible: Vec<(usize, f64)> = schedule.arrivals().filter(|&(_, t)| lo <= t && t <= hi).collect();
    let mut hired = Vec::with_capacity(k);
    kleinberg_hire(instance, &visible, k, lo, hi, &mut hired);
    Outcome::new(instance, hired)
}
