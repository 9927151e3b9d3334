//! Candidates, instances, prediction-error measures and the offline optimum.
//!
//! Candidates are identified by their 1-based `index`, both here and in
//! [`Schedule`](crate::schedule::Schedule) and [`Outcome`].

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which definition of the prediction error (and of the matching mode switch) to use.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErrorRule {
    /// Largest multiplicative error over all candidates.
    #[default]
    Global,
    /// Single-choice refinement: only the top prediction and the best candidate matter.
    RefinedClassical,
    /// Multiple-choice refinement built around the top-k predictions.
    RefinedMulti,
}

impl ErrorRule {
    pub fn as_str(self) -> &'static str {
        match self {
            ErrorRule::Global => "global",
            ErrorRule::RefinedClassical => "refined-classical",
            ErrorRule::RefinedMulti => "refined-multi",
        }
    }
}

impl std::str::FromStr for ErrorRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "global" => Ok(ErrorRule::Global),
            "refined-classical" => Ok(ErrorRule::RefinedClassical),
            "refined-multi" => Ok(ErrorRule::RefinedMulti),
            other => Err(Error::InvalidParameter(format!("unknown error rule `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Candidate {
    pub index: usize,
    pub actual: f64,
    pub predicted: f64,
}

/// `n` candidates with actual and predicted values, plus the hiring capacity `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    candidates: Vec<Candidate>,
    capacity: usize,
}

/// On-disk layout: `{"values": [...], "predictions": [...], "k": int}`.
#[derive(Serialize, Deserialize)]
struct InstanceRecord {
    values: Vec<f64>,
    predictions: Vec<f64>,
    k: usize,
}

impl Instance {
    pub fn new(values: Vec<f64>, predictions: Vec<f64>, capacity: usize) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidInstance("at least one candidate is required".into()));
        }
        if values.len() != predictions.len() {
            return Err(Error::InvalidInstance(format!(
                "{} values but {} predictions",
                values.len(),
                predictions.len()
            )));
        }
        if capacity == 0 || capacity > values.len() {
            return Err(Error::InvalidInstance(format!("capacity {capacity} outside 1..={}", values.len())));
        }
        let mut candidates = Vec::with_capacity(values.len());
        for (pos, (&actual, &predicted)) in values.iter().zip(&predictions).enumerate() {
            if !(actual >= 0.0 && actual.is_finite()) || !(predicted >= 0.0 && predicted.is_finite()) {
                return Err(Error::InvalidInstance(format!(
                    "candidate {} has value {actual} and prediction {predicted}; both must be finite and nonnegative",
                    pos + 1
                )));
            }
            candidates.push(Candidate { index: pos + 1, actual, predicted });
        }
        Ok(Instance { candidates, capacity })
    }

    pub fn n(&self) -> usize {
        self.candidates.len()
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn candidates(&self) -> &[Candidate] {
        &self.candidates
    }

    /// Candidate with the given 1-based index.
    pub fn candidate(&self, index: usize) -> &Candidate {
        &self.candidates[index - 1]
    }

    pub fn actual(&self, index: usize) -> f64 {
        self.candidates[index - 1].actual
    }

    pub fn predicted(&self, index: usize) -> f64 {
        self.candidates[index - 1].predicted
    }

    pub fn values(&self) -> Vec<f64> {
        self.candidates.iter().map(|c| c.actual).collect()
    }

    pub fn predictions(&self) -> Vec<f64> {
        self.candidates.iter().map(|c| c.predicted).collect()
    }

    /// Same candidates with a different capacity.
    pub fn with_capacity(&self, capacity: usize) -> Result<Self> {
        Instance::new(self.values(), self.predictions(), capacity)
    }

    /// Multiplies every value and prediction by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Instance::new(
            self.candidates.iter().map(|c| c.actual * factor).collect(),
            self.candidates.iter().map(|c| c.predicted * factor).collect(),
            self.capacity,
        )
    }

    pub fn to_json(&self) -> Result<String> {
        let record = InstanceRecord { values: self.values(), predictions: self.predictions(), k: self.capacity };
        Ok(serde_json::to_string(&record)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let record: InstanceRecord = serde_json::from_str(text)?;
        Instance::new(record.values, record.predictions, record.k)
    }

    /// Index of the largest prediction (lowest index on ties).
    pub fn top_predicted(&self) -> usize {
        argmax_by(&self.candidates, |c| c.predicted)
    }

    /// Index of the largest actual value (lowest index on ties).
    pub fn best_actual(&self) -> usize {
        argmax_by(&self.candidates, |c| c.actual)
    }

    /// The `k` candidates with the largest predictions, best first, ties to the lowest index.
    pub fn top_k_predicted(&self, k: usize) -> Vec<usize> {
        let mut order: Vec<&Candidate> = self.candidates.iter().collect();
        order.sort_by(|a, b| desc(a.predicted, b.predicted).then(a.index.cmp(&b.index)));
        order.into_iter().take(k).map(|c| c.index).collect()
    }

    /// Sum of the given candidates' actual values, accumulated largest first.
    ///
    /// Every value total in this crate goes through here so that equal sets give
    /// bit-identical totals.
    pub fn value_of(&self, indices: &[usize]) -> f64 {
        let mut vals: Vec<f64> = indices.iter().map(|&i| self.actual(i)).collect();
        vals.sort_by(|a, b| desc(*a, *b));
        vals.iter().sum()
    }
}

fn desc(a: f64, b: f64) -> Ordering {
    b.partial_cmp(&a).unwrap_or(Ordering::Equal)
}

fn argmax_by(cands: &[Candidate], key: impl Fn(&Candidate) -> f64) -> usize {
    let mut best = &cands[0];
    for c in &cands[1..] {
        if key(c) > key(best) {
            best = c;
        }
    }
    best.index
}

/// `predicted / actual` with `0/0 = 1` and `p/0 = +inf` for `p > 0`.
pub fn prediction_ratio(predicted: f64, actual: f64) -> f64 {
    if actual == 0.0 {
        if predicted == 0.0 {
            1.0
        } else {
            f64::INFINITY
        }
    } else {
        predicted / actual
    }
}

/// Multiplicative prediction error `|1 - predicted/actual|`.
pub fn error_of(actual: f64, predicted: f64) -> f64 {
    (1.0 - prediction_ratio(predicted, actual)).abs()
}

/// Largest multiplicative error over all candidates.
pub fn epsilon_global(instance: &Instance) -> f64 {
    instance.candidates().iter().map(|c| error_of(c.actual, c.predicted)).fold(0.0, f64::max)
}

/// Error measured only through the top prediction and the best candidate.
pub fn epsilon_refined_classical(instance: &Instance) -> f64 {
    let top = instance.candidate(instance.top_predicted());
    let best = instance.candidate(instance.best_actual());
    let under = 1.0 - prediction_ratio(top.predicted, best.actual);
    let over = prediction_ratio(top.predicted, top.actual) - 1.0;
    under.max(over)
}

/// Error measured through the top-k predictions and the best candidates outside them.
pub fn epsilon_refined_multi(instance: &Instance) -> f64 {
    let k = instance.capacity();
    let top = instance.top_k_predicted(k);
    let floor = instance.predicted(*top.last().expect("k >= 1"));
    let mut in_top = vec![false; instance.n() + 1];
    for &i in &top {
        in_top[i] = true;
    }
    let outside = instance
        .candidates()
        .iter()
        .filter(|c| !in_top[c.index])
        .map(|c| 1.0 - prediction_ratio(floor, c.actual))
        .fold(0.0, f64::max);
    let inside = top.iter().map(|&i| error_of(instance.actual(i), instance.predicted(i))).fold(0.0, f64::max);
    outside.max(inside)
}

/// Error under the chosen rule.
pub fn epsilon(instance: &Instance, rule: ErrorRule) -> f64 {
    match rule {
        ErrorRule::Global => epsilon_global(instance),
        ErrorRule::RefinedClassical => epsilon_refined_classical(instance),
        ErrorRule::RefinedMulti => epsilon_refined_multi(instance),
    }
}

/// Sum of the `k` largest actual values.
pub fn offline_opt(instance: &Instance) -> f64 {
    let mut vals = instance.values();
    vals.sort_by(|a, b| desc(*a, *b));
    vals.iter().take(instance.capacity()).sum()
}

/// Result of running one algorithm on one arrival schedule.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    /// Hired candidates in hiring order.
    pub hired: Vec<usize>,
    pub value: f64,
    pub opt: f64,
    /// `value / opt`, or 1 when `opt = 0`.
    pub ratio: f64,
}

impl Outcome {
    pub fn new(instance: &Instance, hired: Vec<usize>) -> Self {
        debug_assert!(hired.len() <= instance.capacity());
        let value = instance.value_of(&hired);
        let opt = offline_opt(instance);
        let ratio = if opt == 0.0 { 1.0 } else { value / opt };
        Outcome { hired, value, opt, ratio }
    }

    pub fn hired_set(&self) -> Vec<usize> {
        let mut s = self.hired.clone();
        s.sort_unstable();
        s
    }

    /// Whether the hired set contains a candidate of maximum actual value.
    pub fn hired_best(&self, instance: &Instance) -> bool {
        let best = instance.actual(instance.best_actual());
        self.hired.iter().any(|&i| instance.actual(i) == best)
    }
}
