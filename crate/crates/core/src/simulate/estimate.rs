use rand::Rng;
use serde::Serialize;

use crate::algorithms::OnlineAlgorithm;
use crate::error::{invalid_param, Result};
use crate::instance::Instance;
use crate::schedule::random_schedule;

/// Mean ratio over random schedules.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RatioEstimate {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(trials)`.
    pub std_error: f64,
    pub trials: usize,
    /// Fraction of trials that hired the best candidate.
    pub success_rate: f64,
}

/// Sum by recursive halving, which keeps rounding error logarithmic in the length
/// and makes the result independent of how the inputs were produced.
pub fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 8 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

/// Running per-trial samples, summarised once at the end.
#[derive(Clone, Debug, Default)]
pub struct Samples {
    ratios: Vec<f64>,
    hits: usize,
}

impl Samples {
    pub fn with_capacity(n: usize) -> Self {
        Samples { ratios: Vec::with_capacity(n), hits: 0 }
    }

    pub fn push(&mut self, ratio: f64, hit: bool) {
        self.ratios.push(ratio);
        self.hits += usize::from(hit);
    }

    pub fn estimate(&self) -> RatioEstimate {
        let trials = self.ratios.len();
        let nf = trials as f64;
        let mean = pairwise_sum(&self.ratios) / nf;
        let std_error = if trials > 1 {
            let dev: Vec<f64> = self.ratios.iter().map(|r| (r - mean) * (r - mean)).collect();
            (pairwise_sum(&dev) / (nf - 1.0)).sqrt() / nf.sqrt()
        } else {
            0.0
        };
        RatioEstimate { mean, std_error, trials, success_rate: self.hits as f64 / nf }
    }
}

/// Runs `algorithm` on `trials` independent uniformly random schedules.
pub fn estimate_ratio<R: Rng + ?Sized>(
    instance: &Instance,
    algorithm: &dyn OnlineAlgorithm,
    trials: usize,
    rng: &mut R,
) -> Result<RatioEstimate> {
    if trials == 0 {
        return Err(invalid_param("trials must be at least 1"));
    }
    let mut samples = Samples::with_capacity(trials);
    for _ in 0..trials {
        let schedule = random_schedule(instance.n(), rng);
        let outcome = algorithm.run(instance, &schedule);
        samples.push(outcome.ratio, outcome.hired_best(instance));
    }
    Ok(samples.estimate())
}

/// Combines per-dataset estimates: mean of means, and `sqrt(Σ se²) / D`.
pub fn combine(estimates: &[RatioEstimate]) -> RatioEstimate {
    let d = estimates.len() as f64;
    let means: Vec<f64> = estimates.iter().map(|e| e.mean).collect();
    let vars: Vec<f64> = estimates.iter().map(|e| e.std_error * e.std_error).collect();
    let hits: Vec<f64> = estimates.iter().map(|e| e.success_rate).collect();
    RatioEstimate {
        mean: pairwise_sum(&means) / d,
        std_error: pairwise_sum(&vars).sqrt() / d,
        trials: estimates.first().map_or(0, |e| e.trials),
        success_rate: pairwise_sum(&hits) / d,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::AlgorithmSpec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_predictions_top_k_is_one() {
        let i = Instance::new(vec![3.0, 1.0, 2.0], vec![3.0, 1.0, 2.0], 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let e = estimate_ratio(&i, &AlgorithmSpec::TopK, 50, &mut rng).unwrap();
        assert_eq!(e.mean, 1.0);
        assert_eq!(e.std_error, 0.0);
        assert_eq!(e.trials, 50);
    }

    #[test]
    fn zero_trials_rejected() {
        let i = Instance::new(vec![1.0], vec![1.0], 1).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert!(estimate_ratio(&i, &AlgorithmSpec::TopK, 0, &mut rng).is_err());
    }

    #[test]
    fn pairwise_matches_naive_on_integers() {
        let xs: Vec<f64> = (1..=1000).map(f64::from).collect();
        assert_eq!(pairwise_sum(&xs), 500500.0);
    }

    #[test]
    fn combine_two() {
        let a = RatioEstimate { mean: 0.2, std_error: 0.3, trials: 10, success_rate: 0.0 };
        let b = RatioEstimate { mean: 0.4, std_error: 0.4, trials: 10, success_rate: 1.0 };
        let c = combine(&[a, b]);
        assert!((c.mean - 0.3).abs() < 1e-15);
        assert!((c.std_error - 0.25).abs() < 1e-15);
        assert_eq!(c.success_rate, 0.5);
    }
}
