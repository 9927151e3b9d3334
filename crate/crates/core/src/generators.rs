//! Synthetic datasets of (actual, predicted) values at a chosen error level.

use rand::seq::index::sample;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid_param, Error, Result};
use crate::instance::Instance;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    /// Exp(1) values, predictions scaled by an independent factor in `[1-eps, 1+eps]`.
    Uniform,
    /// Exp(1) values; the top half is under-predicted by `1-eps`, the rest over-predicted by `1+eps`.
    Adversarial,
    /// Flat predictions around 1; `k` random candidates are worth `1/(1-eps)`.
    AlmostConstant,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 3] =
        [GeneratorKind::Uniform, GeneratorKind::Adversarial, GeneratorKind::AlmostConstant];

    pub fn as_str(self) -> &'static str {
        match self {
            GeneratorKind::Uniform => "uniform",
            GeneratorKind::Adversarial => "adversarial",
            GeneratorKind::AlmostConstant => "almost-constant",
        }
    }
}

impl std::fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for GeneratorKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(GeneratorKind::Uniform),
            "adversarial" => Ok(GeneratorKind::Adversarial),
            "almost-constant" => Ok(GeneratorKind::AlmostConstant),
            other => Err(invalid_param(format!("unknown generator `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    pub k: usize,
    pub epsilon: f64,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(invalid_param("n must be at least 1"));
        }
        if self.k == 0 || self.k > self.n {
            return Err(invalid_param(format!("k = {} outside 1..={}", self.k, self.n)));
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(invalid_param(format!("epsilon = {} outside [0, 1]", self.epsilon)));
        }
        if self.kind == GeneratorKind::AlmostConstant && self.epsilon >= 1.0 {
            return Err(invalid_param("almost-constant datasets need epsilon < 1"));
        }
        Ok(())
    }

    /// `{kind}_{eps}_{seed}.json`
    pub fn file_name(&self) -> String {
        format!("{}_{}_{}.json", self.kind, self.epsilon, self.seed)
    }
}

pub fn generate(spec: &GeneratorSpec) -> Result<Instance> {
    match spec.kind {
        GeneratorKind::Uniform => gen_uniform(spec),
        GeneratorKind::Adversarial => gen_adversarial(spec),
        GeneratorKind::AlmostConstant => gen_almost_constant(spec),
    }
}

fn check_kind(spec: &GeneratorSpec, kind: GeneratorKind) -> Result<()> {
    if spec.kind != kind {
        return Err(invalid_param(format!("expected a {kind} spec, got {}", spec.kind)));
    }
    spec.validate()
}

fn exponential<R: Rng>(rng: &mut R) -> f64 {
    -(1.0 - rng.gen::<f64>()).ln()
}

pub fn gen_uniform(spec: &GeneratorSpec) -> Result<Instance> {
    check_kind(spec, GeneratorKind::Uniform)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let eps = spec.epsilon;
    let values: Vec<f64> = (0..spec.n).map(|_| exponential(&mut rng)).collect();
    let predictions = values
        .iter()
        .map(|&v| {
            let delta = (1.0 - eps) + 2.0 * eps * rng.gen::<f64>();
            delta * v
        })
        .collect();
    Instance::new(values, predictions, spec.k)
}

pub fn gen_adversarial(spec: &GeneratorSpec) -> Result<Instance> {
    check_kind(spec, GeneratorKind::Adversarial)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let eps = spec.epsilon;
    let values: Vec<f64> = (0..spec.n).map(|_| exponential(&mut rng)).collect();
    let mut by_value: Vec<usize> = (0..spec.n).collect();
    by_value.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let top = spec.n.div_ceil(2);
    let mut predictions = vec![0.0; spec.n];
    for (rank, &pos) in by_value.iter().enumerate() {
        let factor = if rank < top { 1.0 - eps } else { 1.0 + eps };
        predictions[pos] = factor * values[pos];
    }
    Instance::new(values, predictions, spec.k)
}

pub fn gen_almost_constant(spec: &GeneratorSpec) -> Result<Instance> {
    check_kind(spec, GeneratorKind::AlmostConstant)?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let spike = 1.0 / (1.0 - spec.epsilon);
    let mut base = vec![1.0; spec.n];
    for pos in sample(&mut rng, spec.n, spec.k) {
        base[pos] = spike;
    }
    // One tie-breaking perturbation per candidate, shared by its value and prediction.
    let noise: Vec<f64> = (0..spec.n).map(|_| 0.01 * rng.gen::<f64>()).collect();
    let values = base.iter().zip(&noise).map(|(b, e)| b + e).collect();
    let predictions = noise.iter().map(|e| 1.0 + e).collect();
    Instance::new(values, predictions, spec.k)
}
