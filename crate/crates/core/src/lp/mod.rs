//! Linear programs with exact rational coefficients, an LP text format, and a
//! dense two-phase simplex.

mod simplex;
mod text;

use std::collections::HashMap;

use num_rational::Rational64;

pub use simplex::{solve, LpSolution};
pub use text::{format_number, parse_lp, parse_solution, write_lp};

use crate::error::{invalid_param, Result};

pub type Coef = Rational64;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

impl Relation {
    pub fn as_str(self) -> &'static str {
        match self {
            Relation::Le => "<=",
            Relation::Ge => ">=",
            Relation::Eq => "=",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub name: String,
    pub terms: Vec<(usize, Coef)>,
    pub relation: Relation,
    pub rhs: Coef,
}

/// Variable bounds; `None` is infinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bounds {
    pub lower: Option<Coef>,
    pub upper: Option<Coef>,
}

impl Default for Bounds {
    fn default() -> Self {
        Bounds { lower: Some(Coef::from_integer(0)), upper: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective_name: String,
    pub objective: Vec<(usize, Coef)>,
    variables: Vec<String>,
    bounds: Vec<Bounds>,
    index: HashMap<String, usize>,
    pub constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new(sense: Sense) -> Self {
        LinearProgram {
            sense,
            objective_name: "obj".into(),
            objective: Vec::new(),
            variables: Vec::new(),
            bounds: Vec::new(),
            index: HashMap::new(),
            constraints: Vec::new(),
        }
    }

    /// Adds a variable with bounds `[0, inf)`, or returns the existing one.
    pub fn variable(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.variables.len();
        self.variables.push(name.to_string());
        self.bounds.push(Bounds::default());
        self.index.insert(name.to_string(), i);
        i
    }

    /// Adds a fresh variable; fails if the name is taken.
    pub fn add_variable(&mut self, name: &str) -> Result<usize> {
        if self.index.contains_key(name) {
            return Err(invalid_param(format!("duplicate variable `{name}`")));
        }
        Ok(self.variable(name))
    }

    pub fn set_bounds(&mut self, var: usize, bounds: Bounds) {
        self.bounds[var] = bounds;
    }

    pub fn bounds(&self, var: usize) -> Bounds {
        self.bounds[var]
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn var_name(&self, var: usize) -> &str {
        &self.variables[var]
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn num_variables(&self) -> usize {
        self.variables.len()
    }

    pub fn add_constraint(
        &mut self,
        name: impl Into<String>,
        terms: Vec<(usize, Coef)>,
        relation: Relation,
        rhs: Coef,
    ) {
        self.constraints.push(Constraint { name: name.into(), terms, relation, rhs });
    }

    /// Largest violation of any constraint or bound at `x`.
    pub fn max_violation(&self, x: &[f64]) -> f64 {
        let f = |c: &Coef| *c.numer() as f64 / *c.denom() as f64;
        let mut worst: f64 = 0.0;
        for c in &self.constraints {
            let lhs: f64 = c.terms.iter().map(|(j, a)| f(a) * x[*j]).sum();
            let rhs = f(&c.rhs);
            let v = match c.relation {
                Relation::Le => lhs - rhs,
                Relation::Ge => rhs - lhs,
                Relation::Eq => (lhs - rhs).abs(),
            };
            worst = worst.max(v);
        }
        for (j, b) in self.bounds.iter().enumerate() {
            if let Some(l) = &b.lower {
                worst = worst.max(f(l) - x[j]);
            }
            if let Some(u) = &b.upper {
                worst = worst.max(x[j] - f(u));
            }
        }
        worst
    }
}

pub(crate) fn to_f64(c: &Coef) -> f64 {
    *c.numer() as f64 / *c.denom() as f64
}
