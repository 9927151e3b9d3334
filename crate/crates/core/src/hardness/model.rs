use std::io::Write;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lp::{self, Coef, LinearProgram, Relation, Sense};

use super::sigma::{enumerate_sigma, sigma_count, PartialPermutation, SigmaSet, SignedIndex, MAX_N, MIN_N};

/// Largest `n` the embedded simplex is asked to solve.
pub const MAX_SOLVE_N: usize = 5;

/// Residual allowed when accepting a solution vector.
pub const FEASIBILITY_TOL: f64 = 1e-8;

fn factorial(n: usize) -> i64 {
    (1..=n as i64).product()
}

/// Erroneous set `E ⊆ {2..n}` as a bit mask (bit `i` for candidate `i`).
pub type ErrorSet = u32;

pub fn error_set(indices: &[usize]) -> ErrorSet {
    indices.iter().fold(0, |m, &i| m | (1 << i))
}

pub fn error_set_members(e: ErrorSet) -> Vec<usize> {
    (2..=MAX_N).filter(|&i| e & (1 << i) != 0).collect()
}

/// All `E ⊆ {2..n}` in increasing mask order; the empty set comes first.
pub fn error_sets(n: usize) -> Vec<ErrorSet> {
    (0..1u32 << (n - 1)).map(|m| m << 2).collect()
}

/// The optimal candidate of `I_{n,E}`: `max(E)` (erroneous), or 1 when `E` is empty.
pub fn optimal_of(e: ErrorSet) -> SignedIndex {
    match error_set_members(e).last() {
        Some(&j) => SignedIndex::err(j),
        None => SignedIndex::accurate(1),
    }
}

/// Whether `sigma` can be observed on `I_{n,E}` and ends at its optimal candidate.
pub fn in_sigma_e(sigma: &PartialPermutation, e: ErrorSet) -> bool {
    sigma.last() == optimal_of(e)
        && sigma.entries().iter().all(|s| s.index() == 1 || s.erroneous == (e & (1 << s.index()) != 0))
}

fn cover_name(e: ErrorSet) -> String {
    let m = error_set_members(e);
    if m.is_empty() {
        "cover_empty".into()
    } else {
        format!("cover_{}", m.iter().map(usize::to_string).collect::<Vec<_>>().join("_"))
    }
}

/// The hardness LP for `n` candidates over all partial permutations.
///
/// Variable 0 is `z`; the partial permutation with id `s` is variable `s + 1`.
/// Reachability and fixing rows are multiplied by `n!` so that every coefficient
/// is an integer.
#[derive(Clone, Debug)]
pub struct HardnessLp {
    n: usize,
    sigma: Arc<SigmaSet>,
    lp: LinearProgram,
    forced: Vec<Option<Coef>>,
    relevant: Vec<bool>,
    row_scale: Vec<f64>,
}

impl HardnessLp {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn sigma(&self) -> &SigmaSet {
        &self.sigma
    }

    pub fn sigma_arc(&self) -> Arc<SigmaSet> {
        Arc::clone(&self.sigma)
    }

    pub fn lp(&self) -> &LinearProgram {
        &self.lp
    }

    pub const Z: usize = 0;

    pub fn var_of(id: usize) -> usize {
        id + 1
    }

    /// Value forced by the requirement to hire candidate 1 on accurate prefixes.
    pub fn forced(&self, id: usize) -> Option<Coef> {
        self.forced[id]
    }

    /// Whether the variable appears in a coverage or fixing row.
    pub fn is_relevant(&self, id: usize) -> bool {
        self.relevant[id]
    }

    pub fn num_relevant(&self) -> usize {
        self.relevant.iter().filter(|&&r| r).count()
    }

    /// Probability of the first `|σ|` arrivals being `σ`: `(n-|σ|)!/n!`.
    pub fn prefix_probability(&self, len: usize) -> Coef {
        Coef::new(factorial(self.n - len), factorial(self.n))
    }

    /// Coefficient of `x(σ_i)` in the reachability bound of `σ`: `(n-|σ|)!/(n-i)!`.
    pub fn carry(&self, len: usize, i: usize) -> Coef {
        Coef::new(factorial(self.n - len), factorial(self.n - i))
    }

    /// Largest violation at a full variable vector, with rows in unscaled units.
    pub fn residual(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (c, &scale) in self.lp.constraints.iter().zip(&self.row_scale) {
            let lhs: f64 = c.terms.iter().map(|(j, a)| lp::to_f64(a) * x[*j]).sum();
            let rhs = lp::to_f64(&c.rhs);
            let v = match c.relation {
                Relation::Le => lhs - rhs,
                Relation::Ge => rhs - lhs,
                Relation::Eq => (lhs - rhs).abs(),
            };
            worst = worst.max(v / scale);
        }
        x.iter().fold(worst, |w, &v| w.max(-v))
    }

    /// `Pr(observe σ)` implied by `x` (a full variable vector).
    pub fn reach(&self, id: usize, x: &[f64]) -> f64 {
        let len = self.sigma.get(id).len();
        let mut r = lp::to_f64(&self.prefix_probability(len));
        for (i, a) in self.sigma.ancestors(id).into_iter().enumerate() {
            r -= lp::to_f64(&self.carry(len, i + 1)) * x[Self::var_of(a)];
        }
        r
    }

    /// Sum of `x` over `Σ_E`.
    pub fn coverage(&self, e: ErrorSet, x: &[f64]) -> f64 {
        (0..self.sigma.len()).filter(|&id| in_sigma_e(self.sigma.get(id), e)).map(|id| x[Self::var_of(id)]).sum()
    }
}

/// Builds the LP for `2 <= n <= 7`.
pub fn build_lp(n: usize) -> Result<HardnessLp> {
    let sigma = enumerate_sigma(n)?;
    let nf = factorial(n);
    let mut lp = LinearProgram::new(Sense::Maximize);
    let z = lp.add_variable("z")?;
    lp.objective = vec![(z, Coef::from_integer(1))];
    for s in sigma.items() {
        lp.add_variable(&s.var_name())?;
    }

    let mut model =
        HardnessLp { n, sigma: Arc::new(sigma), lp, forced: Vec::new(), relevant: Vec::new(), row_scale: Vec::new() };
    let sigma = Arc::clone(&model.sigma);

    for (id, s) in sigma.items().iter().enumerate() {
        let len = s.len();
        let mut terms = vec![(HardnessLp::var_of(id), Coef::from_integer(nf))];
        for (i, a) in sigma.ancestors(id).into_iter().enumerate() {
            terms.push((HardnessLp::var_of(a), model.carry(len, i + 1) * nf));
        }
        let rhs = Coef::from_integer(factorial(n - len));
        model.lp.add_constraint(format!("reach{}", &s.var_name()[1..]), terms, Relation::Le, rhs);
        model.row_scale.push(nf as f64);
    }

    model.forced = sigma
        .items()
        .iter()
        .map(|s| {
            let accurate = s.entries().iter().all(|e| !e.erroneous);
            (accurate && s.last().index() == 1).then(|| model.prefix_probability(s.len()))
        })
        .collect();
    for (id, s) in sigma.items().iter().enumerate() {
        if model.forced[id].is_some() {
            let rhs = Coef::from_integer(factorial(n - s.len()));
            let terms = vec![(HardnessLp::var_of(id), Coef::from_integer(nf))];
            model.lp.add_constraint(format!("fix{}", &s.var_name()[1..]), terms, Relation::Eq, rhs);
            model.row_scale.push(nf as f64);
        }
    }

    model.relevant = vec![false; sigma.len()];
    for e in error_sets(n) {
        let mut terms = Vec::new();
        for (id, s) in sigma.items().iter().enumerate() {
            if in_sigma_e(s, e) {
                terms.push((HardnessLp::var_of(id), Coef::from_integer(1)));
                model.relevant[id] = true;
            }
        }
        terms.push((z, Coef::from_integer(-1)));
        model.lp.add_constraint(cover_name(e), terms, Relation::Ge, Coef::from_integer(0));
        model.row_scale.push(1.0);
    }
    Ok(model)
}

/// Writes the model in LP text format.
pub fn export_lp<W: Write>(model: &HardnessLp, w: &mut W) -> Result<()> {
    lp::write_lp(&model.lp, w)
}

/// Reads an exported model back, checking that it is exactly the model `build_lp`
/// produces for its size.
pub fn import_lp(text: &str) -> Result<HardnessLp> {
    let parsed = lp::parse_lp(text)?;
    let n = (MIN_N..=MAX_N).find(|&n| sigma_count(n) + 1 == parsed.num_variables()).ok_or_else(|| Error::Parse {
        line: 0,
        message: format!("{} variables match no model size", parsed.num_variables()),
    })?;
    let model = build_lp(n)?;
    if model.lp != parsed {
        return Err(Error::Parse { line: 0, message: format!("text differs from the n = {n} model") });
    }
    Ok(model)
}

/// Optimal value and a full variable vector (indexed like the model's LP).
#[derive(Clone, Debug)]
pub struct HardnessSolution {
    pub n: usize,
    pub z: f64,
    pub values: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
    pub reduced_variables: usize,
    pub reduced_constraints: usize,
}

impl HardnessSolution {
    /// `x(σ)` for the partial permutation with id `id`.
    pub fn x(&self, id: usize) -> f64 {
        self.values[HardnessLp::var_of(id)]
    }
}

/// Solves the model with the embedded simplex after presolve.
///
/// Presolve fixes variables outside every coverage and fixing row to 0 (dropping
/// one only relaxes the reachability rows of its descendants, and its own row
/// restates its parent's) and substitutes the forced values.
pub fn solve_lp(model: &HardnessLp) -> Result<HardnessSolution> {
    let n = model.n;
    if n > MAX_SOLVE_N {
        return Err(Error::BudgetExceeded(format!(
            "the embedded solver handles n <= {MAX_SOLVE_N}; export the n = {n} model instead"
        )));
    }
    let sigma = model.sigma();
    let free: Vec<usize> = (0..sigma.len()).filter(|&id| model.relevant[id] && model.forced[id].is_none()).collect();

    let mut reduced = LinearProgram::new(Sense::Maximize);
    let z = reduced.add_variable("z")?;
    reduced.objective = vec![(z, Coef::from_integer(1))];
    let mut column = vec![None; sigma.len()];
    for &id in &free {
        column[id] = Some(reduced.add_variable(&sigma.get(id).var_name())?);
    }
    for &id in &free {
        let row = &model.lp.constraints[id];
        let mut terms = Vec::new();
        let mut rhs = row.rhs;
        for &(var, a) in &row.terms {
            let sid = var - 1;
            if let Some(c) = column[sid] {
                terms.push((c, a));
            } else if let Some(f) = model.forced[sid] {
                rhs -= a * f;
            }
        }
        reduced.add_constraint(row.name.clone(), terms, Relation::Le, rhs);
    }
    for e in error_sets(n) {
        let mut terms: Vec<_> = free
            .iter()
            .filter(|&&id| in_sigma_e(sigma.get(id), e))
            .map(|&id| (column[id].unwrap(), Coef::from_integer(1)))
            .collect();
        let fixed: Coef = (0..sigma.len())
            .filter(|&id| model.forced[id].is_some() && in_sigma_e(sigma.get(id), e))
            .map(|id| model.forced[id].unwrap())
            .sum();
        terms.push((z, Coef::from_integer(-1)));
        reduced.add_constraint(cover_name(e), terms, Relation::Ge, -fixed);
    }

    let sol = lp::solve(&reduced)?;
    let mut values = vec![0.0; sigma.len() + 1];
    values[HardnessLp::Z] = sol.values[z];
    for id in 0..sigma.len() {
        if let Some(f) = model.forced[id] {
            values[HardnessLp::var_of(id)] = lp::to_f64(&f);
        } else if let Some(c) = column[id] {
            values[HardnessLp::var_of(id)] = sol.values[c].max(0.0);
        }
    }
    let residual = model.residual(&values);
    if residual > 1e-9 {
        return Err(Error::InfeasibleSolution(format!("solver residual {residual:e} above 1e-9")));
    }
    Ok(HardnessSolution {
        n,
        z: sol.objective,
        values,
        residual,
        iterations: sol.iterations,
        reduced_variables: reduced.num_variables(),
        reduced_constraints: reduced.constraints.len(),
    })
}
