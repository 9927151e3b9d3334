//! Hardness instances and the linear program over partial permutations that
//! bounds every randomized rule on them.
//!
//! A partial permutation is an observed arrival prefix in which each candidate
//! other than candidate 1 is marked accurate or erroneous. The LP has one
//! variable `x(σ)` (the probability of hiring the last arrival after observing
//! `σ`) per prefix, a reachability bound per prefix, equalities forcing
//! candidate 1 to be hired after accurate prefixes, and one coverage row per
//! erroneous set `E`.

mod family;
mod model;
mod policy;
mod sigma;

pub use family::{ceiling_policy, deterministic_ceiling_check, instance_family, CeilingPolicy, CeilingReport};
pub use model::{
    build_lp, error_set, error_set_members, error_sets, export_lp, import_lp, in_sigma_e, optimal_of, solve_lp,
    ErrorSet, HardnessLp, HardnessSolution, FEASIBILITY_TOL, MAX_SOLVE_N,
};
pub use policy::{exact_policy_value, policy_from_lp, RandomizedPolicy};
pub use sigma::{enumerate_sigma, sigma_count, PartialPermutation, SigmaSet, SignedIndex, MAX_N, MIN_N};
