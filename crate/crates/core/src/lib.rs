//! Learning-augmented secretary algorithms.
//!
//! Online hiring rules that trust value predictions until an observed prediction
//! error exceeds a threshold, and then fall back to a rule that needs no
//! predictions:
//!
//! * [`algorithms`]: Dynkin, learned Dynkin, Kleinberg, learned Kleinberg, the
//!   top-k prediction rule and a prophet-secretary threshold baseline.
//! * [`generators`]: synthetic datasets at a chosen prediction-error level.
//! * [`simulate`]: Monte-Carlo and exact competitive-ratio evaluation, and sweeps.
//! * [`analysis`]: the case bounds behind the single-choice guarantee, the
//!   parameter grid search, guarantee curves and the Lambert-W based comparison ratio.
//! * [`hardness`]: the linear program over partial permutations that bounds what
//!   any randomized algorithm can achieve, with exact policy certification.
//! * [`lp`]: a small LP model type, a dense simplex and an LP text format.

// `!(x > 0.0)` is the idiom for rejecting NaN along with out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod algorithms;
pub mod analysis;
pub mod error;
pub mod generators;
pub mod hardness;
pub mod instance;
pub mod lp;
pub mod schedule;
pub mod seed;
pub mod simulate;

pub use algorithms::{AlgorithmSpec, ClassicalParams, MultiParams, OnlineAlgorithm, Timing};
pub use error::{Error, Result};
pub use generators::{GeneratorKind, GeneratorSpec};
pub use instance::{
    epsilon, epsilon_global, epsilon_refined_classical, epsilon_refined_multi, error_of, offline_opt, Candidate,
    ErrorRule, Instance, Outcome,
};
pub use schedule::{random_schedule, schedule_from_permutation, Schedule};
