//! Bound formulas, the parameter grid search and supporting numerics.

mod bounds;
mod guarantees;
mod lambert;
mod quadrature;

pub use bounds::{
    case_bound, grid_points, grid_search, j_closed_form, j_integral, k_closed_form, k_integral, overall_lower_bound,
    trust_ratio, Case, CaseBoundInput, CaseTable, GridOptimum, DEFAULT_M_MAX, QUAD_TOL,
};
pub use guarantees::{
    agkk_f, agkk_ratio, comparison_curves, learned_dynkin_guarantee, learned_kleinberg_guarantee,
    learned_kleinberg_guarantee_floored, reciprocal_binomial_mean, ComparisonRow, GuaranteeCurve, CLASSICAL_FLOOR,
};
pub use lambert::{lambert_w, Branch};
pub use quadrature::integrate;
