//! Arrival schedules in the continuous-time model.
//!
//! A uniformly random arrival order combined with sorted i.i.d. uniform times is
//! distributed exactly like `n` candidates that each draw an independent uniform
//! arrival time, which is what [`random_schedule`] produces.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    order: Vec<usize>,
    times: Vec<f64>,
}

impl Schedule {
    /// Builds a schedule from an arrival order (1-based indices) and per-candidate times
    /// (`times[i - 1]` is candidate `i`'s arrival time).
    pub fn new(order: Vec<usize>, times: Vec<f64>) -> Result<Self> {
        let n = order.len();
        if times.len() != n {
            return Err(Error::InvalidParameter(format!("{n} arrivals but {} times", times.len())));
        }
        check_permutation(&order)?;
        let mut prev = f64::NEG_INFINITY;
        for &i in &order {
            let t = times[i - 1];
            if !(0.0..=1.0).contains(&t) {
                return Err(Error::InvalidParameter(format!("arrival time {t} outside [0, 1]")));
            }
            if t <= prev {
                return Err(Error::InvalidParameter("arrival times must increase along the order".into()));
            }
            prev = t;
        }
        Ok(Schedule { order, times })
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    /// Candidate indices in arrival order.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Arrival time of candidate `index`.
    pub fn time_of(&self, index: usize) -> f64 {
        self.times[index - 1]
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    /// `(index, time)` pairs in arrival order.
    pub fn arrivals(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.order.iter().map(move |&i| (i, self.times[i - 1]))
    }
}

fn check_permutation(perm: &[usize]) -> Result<()> {
    let n = perm.len();
    let mut seen = vec![false; n + 1];
    for &i in perm {
        if i == 0 || i > n || seen[i] {
            return Err(Error::InvalidParameter(format!("{perm:?} is not a permutation of 1..={n}")));
        }
        seen[i] = true;
    }
    Ok(())
}

/// Draws `n` distinct uniform times, sorts them, and hands the j-th smallest to the
/// j-th arrival of `perm`.
pub fn schedule_from_permutation<R: Rng + ?Sized>(perm: &[usize], rng: &mut R) -> Result<Schedule> {
    check_permutation(perm)?;
    let n = perm.len();
    let mut draws: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    loop {
        draws.sort_by(|a, b| a.partial_cmp(b).expect("uniform draws are finite"));
        let collision = draws.windows(2).position(|w| w[0] == w[1]);
        match collision {
            Some(pos) => draws[pos + 1] = rng.gen::<f64>(),
            None => break,
        }
    }
    let mut times = vec![0.0; n];
    for (&i, &t) in perm.iter().zip(&draws) {
        times[i - 1] = t;
    }
    Ok(Schedule { order: perm.to_vec(), times })
}

/// Uniformly random arrival order with continuous-time arrival times.
pub fn random_schedule<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Schedule {
    let mut perm: Vec<usize> = (1..=n).collect();
    perm.shuffle(rng);
    schedule_from_permutation(&perm, rng).expect("shuffled identity is a permutation")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_candidate() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let s = random_schedule(1, &mut rng);
        assert_eq!(s.order(), &[1]);
        assert!((0.0..1.0).contains(&s.time_of(1)));
    }

    #[test]
    fn sort_and_assign() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let s = schedule_from_permutation(&[2, 1], &mut rng).unwrap();
        assert!(s.time_of(2) < s.time_of(1));
        let arrivals: Vec<usize> = s.arrivals().map(|(i, _)| i).collect();
        assert_eq!(arrivals, vec![2, 1]);
    }

    #[test]
    fn explicit_schedule_validation() {
        assert!(Schedule::new(vec![2, 1], vec![0.8, 0.3]).is_ok());
        assert!(Schedule::new(vec![1, 2], vec![0.8, 0.3]).is_err());
        assert!(Schedule::new(vec![1, 1], vec![0.1, 0.3]).is_err());
        assert!(Schedule::new(vec![1], vec![1.5]).is_err());
    }

    #[test]
    fn rejects_non_permutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(schedule_from_permutation(&[1, 3], &mut rng).is_err());
    }
}
