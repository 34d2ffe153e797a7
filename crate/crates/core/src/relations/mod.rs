//! Exact verification of the defining relations on truncated bases.
//!
//! Each check builds the full residual vector of a relation applied to a basis
//! pattern and passes only when every coefficient is exactly zero.

mod algebra;
mod module;

pub use algebra::{cartan_suite, check_cartan, check_serre, serre_suite, SerreFamily, SerreVariant};
pub use module::{
    boundary_suite, check_boundary_f, check_charge, check_highest_weight, check_restrictedness, charge_closed_form,
    restrictedness_suite, OpenInterval, Tightness,
};

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::action::{ActionError, Engine, GeneratorLabel, PatternVector};
use crate::patterns::{CPattern, PatternError};
use crate::qnum::RadicalSum;

/// Witnesses kept per report; the failure count is always exact.
pub const MAX_WITNESSES: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RelationError {
    #[error(transparent)]
    Action(#[from] ActionError),
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error("[e_{i}, f_{i}] on {pattern}: bracket argument {value} is not an integer")]
    NonIntegerBracket { i: i64, pattern: String, value: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// One failed case with its witness.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct Failure {
    /// What was checked: relation tag, indices, trial number, ...
    pub case: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pattern: Option<CPattern>,
    /// The nonzero residual (a pattern vector or a number).
    pub residual: Value,
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CheckReport {
    pub relation: String,
    pub params: Value,
    pub checked: usize,
    pub failed: usize,
    pub passed: bool,
    pub failures: Vec<Failure>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
}

impl CheckReport {
    pub fn new(relation: impl Into<String>, params: Value) -> Self {
        CheckReport {
            relation: relation.into(),
            params,
            checked: 0,
            failed: 0,
            passed: true,
            failures: Vec::new(),
            details: BTreeMap::new(),
        }
    }

    pub fn record_pass(&mut self) {
        self.checked += 1;
    }

    pub fn record_failure(&mut self, failure: Failure) {
        self.checked += 1;
        self.failed += 1;
        self.passed = false;
        if self.failures.len() < MAX_WITNESSES {
            self.failures.push(failure);
        }
    }

    /// Marks the report failed without counting a check (e.g. a missing
    /// tightness witness).
    pub fn fail_with(&mut self, failure: Failure) {
        self.failed += 1;
        self.passed = false;
        if self.failures.len() < MAX_WITNESSES {
            self.failures.push(failure);
        }
    }

    /// Folds `other` into `self`, keeping `self`'s name and parameters.
    pub fn absorb(&mut self, other: CheckReport) {
        self.checked += other.checked;
        self.failed += other.failed;
        self.passed &= other.passed;
        for f in other.failures {
            if self.failures.len() < MAX_WITNESSES {
                self.failures.push(f);
            }
        }
        for (k, v) in other.details {
            self.details.insert(k, v);
        }
    }

    pub fn note(&mut self, key: &str, value: Value) {
        self.details.insert(key.to_string(), value);
    }
}

/// `sum_t c_t rho(word_t) |p)`; an empty word is the identity.
pub(crate) fn combination(
    engine: &Engine,
    p: &CPattern,
    terms: &[(RadicalSum, Vec<GeneratorLabel>)],
) -> Result<PatternVector, ActionError> {
    let mut out = PatternVector::zero();
    for (c, word) in terms {
        let v = engine.apply_word(word, p)?;
        out.add_scaled(&v, c);
    }
    Ok(out)
}

/// `rho(a) rho(b) - rho(b) rho(a)` as a combination.
pub(crate) fn commutator(a: GeneratorLabel, b: GeneratorLabel) -> Vec<(RadicalSum, Vec<GeneratorLabel>)> {
    vec![(RadicalSum::one(), vec![a, b]), (RadicalSum::one().neg(), vec![b, a])]
}

/// Runs `check` over `cases x basis` in parallel and merges the outcomes in
/// case order, then basis order.
pub(crate) fn run_cases<C, F>(report: &mut CheckReport, cases: &[C], basis: &[CPattern], check: F) -> Result<(), RelationError>
where
    C: Sync,
    F: Fn(&C, &CPattern) -> Result<Option<Failure>, RelationError> + Sync,
{
    let jobs: Vec<(usize, usize)> = (0..cases.len()).flat_map(|c| (0..basis.len()).map(move |b| (c, b))).collect();
    let outcomes: Vec<Result<Option<Failure>, RelationError>> =
        jobs.par_iter().map(|&(c, b)| check(&cases[c], &basis[b])).collect();
    for o in outcomes {
        match o? {
            None => report.record_pass(),
            Some(f) => report.record_failure(f),
        }
    }
    Ok(())
}

pub(crate) fn vector_json(v: &PatternVector) -> Value {
    serde_json::to_value(v).expect("pattern vectors serialize")
}

#[cfg(test)]
mod tests;
