//! Monte-Carlo and exact evaluation of hiring rules, and experiment sweeps.

mod estimate;
mod exact;
mod sweep;

pub use estimate::{combine, estimate_ratio, pairwise_sum, RatioEstimate, Samples};
pub use exact::{exact_ratio_small, ExactEvaluation, CELL_BUDGET, MAX_EXACT_N};
pub use sweep::{
    plan, rows_to_csv, sweep, sweep_with, AlgorithmConfig, Cell, DatasetResult, ExperimentConfig, Plan, SkippedCell,
    SweepResult, SweepRow, CSV_HEADER,
};
