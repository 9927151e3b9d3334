use crate::instance::{Instance, Outcome};
use crate::schedule::Schedule;

/// Dynkin's rule on a sequence of `(index, time)` arrivals: skip everything up to
/// `cutoff`, then take the first arrival that strictly beats every earlier one.
pub fn dynkin_hire(
    instance: &Instance,
    arrivals: impl IntoIterator<Item = (usize, f64)>,
    cutoff: f64,
) -> Option<usize> {
    let mut best = f64::NEG_INFINITY;
    for (i, t) in arrivals {
        let v = instance.actual(i);
        if t > cutoff && v > best {
            return Some(i);
        }
        best = best.max(v);
    }
    None
}

/// Classical secretary rule with observation cutoff `tau`.
///
/// # Panics
/// If the instance capacity is not 1.
pub fn dynkin(instance: &Instance, schedule: &Schedule, tau: f64) -> Outcome {
    assert_eq!(instance.capacity(), 1, "dynkin hires a single candidate");
    let hired = dynkin_hire(instance, schedule.arrivals(), tau);
    Outcome::new(instance, hired.into_iter().collect())
}
