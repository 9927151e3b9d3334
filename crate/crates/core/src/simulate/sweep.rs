//! Parameter sweeps over generator cells, datasets, trials and algorithms.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::estimate::{combine, RatioEstimate, Samples};
use crate::algorithms::{AlgorithmSpec, ClassicalParams, MultiParams, OnlineAlgorithm};
use crate::error::{invalid_param, Result};
use crate::generators::{generate, GeneratorKind, GeneratorSpec};
use crate::instance::{epsilon_global, ErrorRule};
use crate::schedule::random_schedule;
use crate::seed::{derive_seed, rng_for};

const DATASET_STREAM: u64 = 1;
const TRIAL_STREAM: u64 = 2;

pub const CSV_HEADER: &str = "generator,k,epsilon,algorithm,params,datasets,trials,mean_ratio,std_error";

/// One algorithm family with a grid of parameter values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case", deny_unknown_fields)]
pub enum AlgorithmConfig {
    Dynkin {
        #[serde(default = "default_dynkin_tau")]
        tau: Vec<f64>,
    },
    LearnedDynkin {
        #[serde(default = "default_learned_tau")]
        tau: Vec<f64>,
        #[serde(default = "default_learned_theta")]
        theta: Vec<f64>,
        #[serde(default)]
        rule: ErrorRule,
    },
    Kleinberg,
    /// Without `theta`, uses `5 ln k / sqrt(k)` for each cell's `k`.
    LearnedKleinberg {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        theta: Option<Vec<f64>>,
        #[serde(default)]
        rule: ErrorRule,
    },
    TopK,
    /// Threshold rule with half-width `spread * max prediction`.
    ProphetThreshold {
        spread: Vec<f64>,
    },
}

fn default_dynkin_tau() -> Vec<f64> {
    vec![1.0 / std::f64::consts::E]
}

fn default_learned_tau() -> Vec<f64> {
    vec![ClassicalParams::GUARANTEED.tau]
}

fn default_learned_theta() -> Vec<f64> {
    vec![ClassicalParams::GUARANTEED.theta]
}

impl AlgorithmConfig {
    pub fn expand(&self) -> Result<Vec<AlgorithmSpec>> {
        let specs = match self {
            AlgorithmConfig::Dynkin { tau } => tau.iter().map(|&tau| AlgorithmSpec::Dynkin { tau }).collect(),
            AlgorithmConfig::LearnedDynkin { tau, theta, rule } => {
                let mut out = Vec::new();
                for &tau in tau {
                    for &theta in theta {
                        out.push(AlgorithmSpec::LearnedDynkin(ClassicalParams::new(tau, theta, *rule)?));
                    }
                }
                out
            }
            AlgorithmConfig::Kleinberg => vec![AlgorithmSpec::Kleinberg],
            AlgorithmConfig::LearnedKleinberg { theta: None, rule } => {
                vec![AlgorithmSpec::LearnedKleinbergGuaranteed { switch_rule: *rule }]
            }
            AlgorithmConfig::LearnedKleinberg { theta: Some(theta), rule } => theta
                .iter()
                .map(|&t| MultiParams::new(t, *rule).map(AlgorithmSpec::LearnedKleinberg))
                .collect::<Result<_>>()?,
            AlgorithmConfig::TopK => vec![AlgorithmSpec::TopK],
            AlgorithmConfig::ProphetThreshold { spread } => {
                spread.iter().map(|&spread| AlgorithmSpec::ProphetThreshold { spread }).collect()
            }
        };
        if specs.is_empty() {
            return Err(invalid_param("an algorithm entry has an empty parameter grid"));
        }
        for s in &specs {
            s.validate()?;
        }
        Ok(specs)
    }
}

/// Everything that determines a sweep.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub generators: Vec<GeneratorKind>,
    pub epsilons: Vec<f64>,
    pub ks: Vec<usize>,
    pub n: usize,
    pub datasets_per_cell: usize,
    pub trials_per_dataset: usize,
    pub algorithms: Vec<AlgorithmConfig>,
    pub master_seed: u64,
}

impl ExperimentConfig {
    /// The experimental protocol of the reference study: n = 100, eleven error levels,
    /// k in {1, 10, 50}, 100 datasets per cell and 100 schedules per dataset.
    pub fn reference() -> Self {
        let thetas = vec![0.1, 0.3, 0.5, 0.7, 0.9];
        let mut dynkin_thetas = thetas.clone();
        dynkin_thetas.insert(3, ClassicalParams::GUARANTEED.theta);
        ExperimentConfig {
            generators: GeneratorKind::ALL.to_vec(),
            epsilons: (0..=10).map(|i| f64::from(i) / 10.0).collect(),
            ks: vec![1, 10, 50],
            n: 100,
            datasets_per_cell: 100,
            trials_per_dataset: 100,
            algorithms: vec![
                AlgorithmConfig::LearnedDynkin {
                    tau: default_learned_tau(),
                    theta: dynkin_thetas,
                    rule: ErrorRule::Global,
                },
                AlgorithmConfig::LearnedKleinberg { theta: Some(thetas), rule: ErrorRule::Global },
                AlgorithmConfig::LearnedKleinberg { theta: None, rule: ErrorRule::Global },
                AlgorithmConfig::Dynkin { tau: default_dynkin_tau() },
                AlgorithmConfig::Kleinberg,
                AlgorithmConfig::TopK,
                AlgorithmConfig::ProphetThreshold { spread: vec![0.3, 0.7] },
            ],
            master_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.datasets_per_cell == 0 || self.trials_per_dataset == 0 {
            return Err(invalid_param("n, datasets_per_cell and trials_per_dataset must be at least 1"));
        }
        if self.generators.is_empty() || self.epsilons.is_empty() || self.ks.is_empty() || self.algorithms.is_empty() {
            return Err(invalid_param("generators, epsilons, ks and algorithms must be non-empty"));
        }
        if let Some(&k) = self.ks.iter().find(|&&k| k == 0 || k > self.n) {
            return Err(invalid_param(format!("k = {k} outside 1..={}", self.n)));
        }
        if let Some(e) = self.epsilons.iter().find(|e| !(0.0..=1.0).contains(*e)) {
            return Err(invalid_param(format!("epsilon = {e} outside [0, 1]")));
        }
        self.expand_algorithms().map(|_| ())
    }

    pub fn expand_algorithms(&self) -> Result<Vec<AlgorithmSpec>> {
        let mut out = Vec::new();
        for a in &self.algorithms {
            out.extend(a.expand()?);
        }
        Ok(out)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let config: ExperimentConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// One (generator, k, epsilon) combination.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Cell {
    pub generator: GeneratorKind,
    pub k: usize,
    pub epsilon: f64,
}

impl Cell {
    fn key(&self) -> [u64; 3] {
        let kind = GeneratorKind::ALL.iter().position(|&g| g == self.generator).expect("known kind") as u64;
        [kind, self.k as u64, self.epsilon.to_bits()]
    }

    /// Seed of dataset `d` in this cell. Independent of the rest of the grid.
    pub fn dataset_seed(&self, master: u64, d: usize) -> u64 {
        let [g, k, e] = self.key();
        derive_seed(master, &[DATASET_STREAM, g, k, e, d as u64])
    }

    pub fn trial_seed_path(&self, d: usize, trial: usize) -> [u64; 6] {
        let [g, k, e] = self.key();
        [TRIAL_STREAM, g, k, e, d as u64, trial as u64]
    }

    pub fn generator_spec(&self, n: usize, master: u64, d: usize) -> GeneratorSpec {
        GeneratorSpec { kind: self.generator, n, k: self.k, epsilon: self.epsilon, seed: self.dataset_seed(master, d) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SkippedCell {
    pub cell: Cell,
    pub reason: String,
}

/// Cells to run, in (generator, k, epsilon) order, plus those whose generator
/// preconditions fail.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Plan {
    pub cells: Vec<Cell>,
    pub skipped: Vec<SkippedCell>,
}

pub fn plan(config: &ExperimentConfig) -> Result<Plan> {
    config.validate()?;
    let mut cells = Vec::new();
    let mut skipped = Vec::new();
    for &generator in &config.generators {
        for &k in &config.ks {
            for &epsilon in &config.epsilons {
                let cell = Cell { generator, k, epsilon };
                match cell.generator_spec(config.n, config.master_seed, 0).validate() {
                    Ok(()) => cells.push(cell),
                    Err(e) => skipped.push(SkippedCell { cell, reason: e.to_string() }),
                }
            }
        }
    }
    Ok(Plan { cells, skipped })
}

/// Averaged result of one algorithm in one cell.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub cell: Cell,
    pub algorithm: String,
    pub params: String,
    pub datasets: usize,
    pub estimate: RatioEstimate,
}

/// Result of one algorithm on one dataset.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DatasetResult {
    pub cell: Cell,
    pub dataset: usize,
    pub seed: u64,
    /// Global prediction error of the generated dataset.
    pub epsilon_hat: f64,
    pub algorithm: String,
    pub params: String,
    pub estimate: RatioEstimate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepResult {
    pub rows: Vec<SweepRow>,
    pub datasets: Vec<DatasetResult>,
    pub skipped: Vec<SkippedCell>,
}

impl SweepResult {
    pub fn to_csv(&self) -> String {
        rows_to_csv(&self.rows)
    }
}

pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.cell.generator,
            r.cell.k,
            r.cell.epsilon,
            r.algorithm,
            r.params,
            r.datasets,
            r.estimate.trials,
            r.estimate.mean,
            r.estimate.std_error
        );
    }
    out
}

/// Runs the configured algorithms over every valid cell.
pub fn sweep(config: &ExperimentConfig) -> Result<SweepResult> {
    sweep_with(config, &config.expand_algorithms()?)
}

/// Like [`sweep`] but with an explicit algorithm list (which may hold custom rules).
///
/// Within a cell every algorithm sees the same datasets and the same schedules.
/// Rules that do not support a cell's `k` are left out of that cell.
pub fn sweep_with(config: &ExperimentConfig, algorithms: &[AlgorithmSpec]) -> Result<SweepResult> {
    let plan = plan(config)?;
    let per_cell: Vec<Vec<&AlgorithmSpec>> =
        plan.cells.iter().map(|c| algorithms.iter().filter(|a| a.supports_capacity(c.k)).collect()).collect();
    let work: Vec<(usize, usize)> =
        (0..plan.cells.len()).flat_map(|c| (0..config.datasets_per_cell).map(move |d| (c, d))).collect();

    let results = work
        .par_iter()
        .map(|&(c, d)| run_dataset(config, &plan.cells[c], d, &per_cell[c]))
        .collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::new();
    let mut datasets = Vec::new();
    let mut by_cell = results.into_iter();
    for (c, cell) in plan.cells.iter().enumerate() {
        let algs = &per_cell[c];
        let cell_results: Vec<(u64, f64, Vec<RatioEstimate>)> =
            by_cell.by_ref().take(config.datasets_per_cell).collect();
        for (a, alg) in algs.iter().enumerate() {
            let estimates: Vec<RatioEstimate> = cell_results.iter().map(|r| r.2[a]).collect();
            rows.push(SweepRow {
                cell: *cell,
                algorithm: alg.name(),
                params: alg.params_label(),
                datasets: config.datasets_per_cell,
                estimate: combine(&estimates),
            });
            for (d, r) in cell_results.iter().enumerate() {
                datasets.push(DatasetResult {
                    cell: *cell,
                    dataset: d,
                    seed: r.0,
                    epsilon_hat: r.1,
                    algorithm: alg.name(),
                    params: alg.params_label(),
                    estimate: r.2[a],
                });
            }
        }
    }
    Ok(SweepResult { rows, datasets, skipped: plan.skipped })
}

fn run_dataset(
    config: &ExperimentConfig,
    cell: &Cell,
    d: usize,
    algorithms: &[&AlgorithmSpec],
) -> Result<(u64, f64, Vec<RatioEstimate>)> {
    let spec = cell.generator_spec(config.n, config.master_seed, d);
    let instance = generate(&spec)?;
    for a in algorithms {
        a.check(&instance)?;
    }
    let mut samples: Vec<Samples> =
        algorithms.iter().map(|_| Samples::with_capacity(config.trials_per_dataset)).collect();
    for t in 0..config.trials_per_dataset {
        let mut rng = rng_for(config.master_seed, &cell.trial_seed_path(d, t));
        let schedule = random_schedule(instance.n(), &mut rng);
        for (a, s) in algorithms.iter().zip(samples.iter_mut()) {
            let o = a.run(&instance, &schedule);
            s.push(o.ratio, o.hired_best(&instance));
        }
    }
    Ok((spec.seed, epsilon_global(&instance), samples.iter().map(Samples::estimate).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ExperimentConfig {
        ExperimentConfig {
            generators: vec![GeneratorKind::Uniform, GeneratorKind::AlmostConstant],
            epsilons: vec![0.0, 1.0],
            ks: vec![1, 2],
            n: 10,
            datasets_per_cell: 3,
            trials_per_dataset: 5,
            algorithms: vec![AlgorithmConfig::TopK, AlgorithmConfig::Dynkin { tau: vec![0.3, 0.5] }],
            master_seed: 11,
        }
    }

    #[test]
    fn reference_grid_cell_count() {
        let p = plan(&ExperimentConfig::reference()).unwrap();
        assert_eq!(p.cells.len(), 96);
        assert_eq!(p.skipped.len(), 3);
    }

    #[test]
    fn rows_follow_capacity_support() {
        let r = sweep(&small()).unwrap();
        assert_eq!(r.skipped.len(), 2);
        // 6 cells; k = 1 cells run three rules, k = 2 cells only top-k.
        assert_eq!(r.rows.len(), 3 * 3 + 3);
        assert!(r.to_csv().starts_with(CSV_HEADER));
    }

    #[test]
    fn deterministic_and_order_invariant() {
        let a = sweep(&small()).unwrap();
        assert_eq!(a.to_csv(), sweep(&small()).unwrap().to_csv());
        let mut shuffled = small();
        shuffled.algorithms.reverse();
        let b = sweep(&shuffled).unwrap();
        for row in &a.rows {
            let twin =
                b.rows.iter().find(|r| r.cell == row.cell && r.params == row.params && r.algorithm == row.algorithm);
            assert_eq!(twin.unwrap().estimate, row.estimate);
        }
    }

    #[test]
    fn config_json_round_trip() {
        let c = ExperimentConfig::reference();
        assert_eq!(ExperimentConfig::from_json(&c.to_json().unwrap()).unwrap(), c);
        let bad = r#"{"generators":["uniform"],"epsilons":[0.1],"ks":[1],"n":5,"datasets_per_cell":0,
            "trials_per_dataset":1,"algorithms":[{"name":"top-k"}],"master_seed":1}"#;
        assert!(ExperimentConfig::from_json(bad).is_err());
        let defaults: AlgorithmConfig = serde_json::from_str(r#"{"name":"learned-dynkin"}"#).unwrap();
        assert_eq!(defaults.expand().unwrap()[0].params_label(), "tau=0.313;theta=0.646;rule=global");
    }
}
