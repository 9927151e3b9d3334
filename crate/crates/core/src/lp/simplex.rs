//! Dense two-phase primal simplex on a full tableau.
//!
//! Pivoting uses Dantzig's rule and falls back to Bland's rule after a run of
//! degenerate pivots, which rules out cycling.

use super::{to_f64, LinearProgram, Relation, Sense};
use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-11;
const COST_TOL: f64 = 1e-10;
const FEAS_TOL: f64 = 1e-8;
const DEGENERATE_RUN: usize = 50;

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub objective: f64,
    /// Values of the program's variables, in its order.
    pub values: Vec<f64>,
    pub iterations: usize,
}

/// How an original variable maps onto nonnegative columns: `x = offset + sign * col`
/// or, for free variables, `x = col_plus - col_minus`.
#[derive(Clone, Copy, Debug)]
enum Column {
    Shifted { col: usize, offset: f64, sign: f64 },
    Split { plus: usize, minus: usize },
}

struct Tableau {
    rows: usize,
    cols: usize,
    /// `rows + 1` rows of `cols + 1` entries; the last row is the reduced cost row
    /// and the last column the right-hand side.
    a: Vec<f64>,
    basis: Vec<usize>,
    iterations: usize,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> f64 {
        self.a[r * (self.cols + 1) + c]
    }

    fn rhs(&self, r: usize) -> f64 {
        self.at(r, self.cols)
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.cols + 1;
        let p = self.a[pr * w + pc];
        for c in 0..w {
            self.a[pr * w + c] /= p;
        }
        let prow: Vec<f64> = self.a[pr * w..(pr + 1) * w].to_vec();
        for r in 0..=self.rows {
            if r == pr {
                continue;
            }
            let f = self.a[r * w + pc];
            if f == 0.0 {
                continue;
            }
            let row = &mut self.a[r * w..(r + 1) * w];
            for (x, &y) in row.iter_mut().zip(&prow) {
                *x -= f * y;
            }
            row[pc] = 0.0;
        }
        self.basis[pr] = pc;
        self.iterations += 1;
    }

    /// Minimises the cost row over columns allowed by `eligible`.
    fn optimize(&mut self, eligible: &dyn Fn(usize) -> bool) -> Result<()> {
        let mut degenerate = 0;
        let limit = 50 * (self.rows + self.cols) + 1000;
        loop {
            if self.iterations > limit {
                return Err(Error::BudgetExceeded(format!("simplex exceeded {limit} pivots")));
            }
            let bland = degenerate >= DEGENERATE_RUN;
            let cost = |c: usize| self.at(self.rows, c);
            let mut enter = None;
            let mut best = -COST_TOL;
            for c in (0..self.cols).filter(|&c| eligible(c)) {
                let d = cost(c);
                if d < best {
                    enter = Some(c);
                    if bland {
                        break;
                    }
                    best = d;
                }
            }
            let Some(pc) = enter else { return Ok(()) };

            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows {
                let a = self.at(r, pc);
                if a > PIVOT_TOL {
                    let ratio = self.rhs(r).max(0.0) / a;
                    let better = match leave {
                        None => true,
                        Some((lr, lratio)) => {
                            ratio < lratio - 1e-12 || (ratio <= lratio + 1e-12 && self.basis[r] < self.basis[lr])
                        }
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            let Some((pr, ratio)) = leave else { return Err(Error::Unbounded) };
            degenerate = if ratio <= 1e-12 { degenerate + 1 } else { 0 };
            self.pivot(pr, pc);
        }
    }
}

/// Solves `lp` to optimality.
pub fn solve(lp: &LinearProgram) -> Result<LpSolution> {
    // Map variables to nonnegative columns.
    let mut columns = Vec::with_capacity(lp.num_variables());
    let mut ncols = 0;
    let mut upper_rows: Vec<(usize, f64)> = Vec::new();
    for j in 0..lp.num_variables() {
        let b = lp.bounds(j);
        let col = match (b.lower.as_ref().map(to_f64), b.upper.as_ref().map(to_f64)) {
            (Some(l), u) => {
                if let Some(u) = u {
                    if u < l {
                        return Err(Error::Infeasible);
                    }
                    upper_rows.push((ncols, u - l));
                }
                Column::Shifted { col: ncols, offset: l, sign: 1.0 }
            }
            (None, Some(u)) => Column::Shifted { col: ncols, offset: u, sign: -1.0 },
            (None, None) => {
                ncols += 1;
                Column::Split { plus: ncols - 1, minus: ncols }
            }
        };
        ncols += 1;
        columns.push(col);
    }
    let structural = ncols;

    // Rows as dense coefficient vectors over structural columns.
    let mut rows: Vec<(Vec<f64>, Relation, f64)> = Vec::with_capacity(lp.constraints.len() + upper_rows.len());
    for c in &lp.constraints {
        let mut coef = vec![0.0; structural];
        let mut rhs = to_f64(&c.rhs);
        for (j, a) in &c.terms {
            let a = to_f64(a);
            match columns[*j] {
                Column::Shifted { col, offset, sign } => {
                    coef[col] += sign * a;
                    rhs -= a * offset;
                }
                Column::Split { plus, minus } => {
                    coef[plus] += a;
                    coef[minus] -= a;
                }
            }
        }
        rows.push((coef, c.relation, rhs));
    }
    for &(col, width) in &upper_rows {
        let mut coef = vec![0.0; structural];
        coef[col] = 1.0;
        rows.push((coef, Relation::Le, width));
    }
    for row in &mut rows {
        if row.2 < 0.0 {
            row.0.iter_mut().for_each(|x| *x = -*x);
            row.2 = -row.2;
            row.1 = match row.1 {
                Relation::Le => Relation::Ge,
                Relation::Ge => Relation::Le,
                Relation::Eq => Relation::Eq,
            };
        }
    }

    // Slack/surplus columns, then artificials.
    let m = rows.len();
    let slack_count = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    let art_count = rows.iter().filter(|r| r.1 != Relation::Le).count();
    let first_art = structural + slack_count;
    let cols = first_art + art_count;
    let w = cols + 1;
    let mut t = Tableau { rows: m, cols, a: vec![0.0; (m + 1) * w], basis: vec![0; m], iterations: 0 };
    let (mut s, mut art) = (structural, first_art);
    for (r, (coef, rel, rhs)) in rows.iter().enumerate() {
        t.a[r * w..r * w + structural].copy_from_slice(coef);
        t.a[r * w + cols] = *rhs;
        match rel {
            Relation::Le => {
                t.a[r * w + s] = 1.0;
                t.basis[r] = s;
                s += 1;
            }
            Relation::Ge => {
                t.a[r * w + s] = -1.0;
                s += 1;
                t.a[r * w + art] = 1.0;
                t.basis[r] = art;
                art += 1;
            }
            Relation::Eq => {
                t.a[r * w + art] = 1.0;
                t.basis[r] = art;
                art += 1;
            }
        }
    }
    drop(rows);

    // Phase 1: minimise the sum of artificials.
    if art_count > 0 {
        for r in 0..m {
            if t.basis[r] >= first_art {
                for c in 0..=cols {
                    let v = t.a[r * w + c];
                    t.a[m * w + c] -= v;
                }
            }
        }
        for c in first_art..cols {
            t.a[m * w + c] = 0.0;
        }
        t.optimize(&|_| true)?;
        if -t.a[m * w + cols] > FEAS_TOL {
            return Err(Error::Infeasible);
        }
        // Drive zero-level artificials out of the basis where possible.
        for r in 0..m {
            if t.basis[r] >= first_art {
                if let Some(c) = (0..first_art).find(|&c| t.at(r, c).abs() > 1e-9) {
                    t.pivot(r, c);
                }
            }
        }
    }

    // Phase 2 with the original objective, as a minimisation.
    let dir = if lp.sense == Sense::Maximize { -1.0 } else { 1.0 };
    let mut cost = vec![0.0; structural];
    for (j, a) in &lp.objective {
        let a = to_f64(a);
        match columns[*j] {
            Column::Shifted { col, sign, .. } => cost[col] += dir * sign * a,
            Column::Split { plus, minus } => {
                cost[plus] += dir * a;
                cost[minus] -= dir * a;
            }
        }
    }
    t.a[m * w..(m + 1) * w].iter_mut().for_each(|x| *x = 0.0);
    t.a[m * w..m * w + structural].copy_from_slice(&cost);
    for r in 0..m {
        let b = t.basis[r];
        let cb = t.a[m * w + b];
        if cb != 0.0 {
            for c in 0..=cols {
                let v = t.a[r * w + c];
                t.a[m * w + c] -= cb * v;
            }
        }
    }
    t.optimize(&|c| c < first_art)?;

    let mut y = vec![0.0; cols];
    for r in 0..m {
        y[t.basis[r]] = t.rhs(r);
    }
    let values: Vec<f64> = columns
        .iter()
        .map(|c| match *c {
            Column::Shifted { col, offset, sign } => offset + sign * y[col],
            Column::Split { plus, minus } => y[plus] - y[minus],
        })
        .collect();
    let objective = lp.objective.iter().map(|(j, a)| to_f64(a) * values[*j]).sum::<f64>();
    Ok(LpSolution { objective, values, iterations: t.iterations })
}
