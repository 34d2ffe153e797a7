//! C-patterns, the truncated bases `V_N`, and the weight function.

mod pattern;
mod signature;

pub use pattern::{highest_weight_pattern, shift, validate, CPattern, PatternArray};
pub use signature::{row_range, Mode, ModuleParams, Signature};

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::qnum::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PatternError {
    #[error("invalid signature: {0}")]
    BadSignature(String),
    #[error("invalid module parameters: {0}")]
    BadParams(String),
    #[error("index {i} is outside the range of row {row}")]
    IndexOutOfRange { i: i64, row: usize },
    #[error("malformed pattern: {0}")]
    Malformed(String),
    #[error("not a C-pattern: {0}")]
    NotAPattern(String),
    #[error("truncation level must be at least 2, got {0}")]
    BadLevel(usize),
}

/// `theta(i) = 1` for `i >= 0`, else 0.
pub fn theta(i: i64) -> i64 {
    if i >= 0 {
        1
    } else {
        0
    }
}

/// `S(j, l; nu)`: `(-1)^nu` if `j = l`, `+1` if `j < l`, `-1` if `j > l`.
pub fn sign_s(j: i64, l: i64, nu: u8) -> i64 {
    use std::cmp::Ordering::*;
    match j.cmp(&l) {
        Equal => {
            if nu.is_multiple_of(2) {
                1
            } else {
                -1
            }
        }
        Less => 1,
        Greater => -1,
    }
}

/// Every C-pattern of stabilization level at most `level`, in ascending
/// order (rows compared from the top down, entries left to right).
pub fn enumerate_basis(sig: &Arc<Signature>, level: usize) -> Result<Vec<CPattern>, PatternError> {
    if level < 2 {
        return Err(PatternError::BadLevel(level));
    }
    let top = level - 1;
    let mut rows: Vec<Vec<i64>> = (1..=top).map(|p| vec![0; p]).collect();
    let mut out = Vec::new();
    fill(sig, &mut rows, top, &sig.row(level), &mut out);
    Ok(out)
}

/// Fills row `p` between the entries of `upper` (row `p + 1`) in lexicographic
/// order, recursing downwards.
fn fill(sig: &Arc<Signature>, rows: &mut Vec<Vec<i64>>, p: usize, upper: &[i64], out: &mut Vec<CPattern>) {
    if p == 0 {
        let pat = CPattern::from_rows(sig.clone(), rows.clone()).expect("enumerated rows satisfy betweenness");
        out.push(pat);
        return;
    }
    // Odometer over row[k] in [upper[k+1], upper[k]], last entry fastest.
    let lo: Vec<i64> = (0..p).map(|k| upper[k + 1]).collect();
    let hi: Vec<i64> = (0..p).map(|k| upper[k]).collect();
    let mut cur = lo.clone();
    loop {
        rows[p - 1].copy_from_slice(&cur);
        let this = cur.clone();
        fill(sig, rows, p - 1, &this, out);
        let mut k = p;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            if cur[k] < hi[k] {
                cur[k] += 1;
                cur[k + 1..p].copy_from_slice(&lo[k + 1..p]);
                break;
            }
        }
    }
}

/// Eigenvalue of `h_i` on `p`:
/// `sum(row 2|i|+theta(i)) - sum(row 2|i|+theta(i)-1) + (xi1 - xi0) theta(-i) - xi1`.
pub fn h_eigenvalue(p: &CPattern, i: i64, params: &ModuleParams) -> Rational {
    let top = (2 * i.abs() + theta(i)) as usize;
    let diff = p.row_sum(top) - p.row_sum(top - 1);
    let xi_part = (params.xi1() - params.xi0()) * Rational::from(theta(-i)) - params.xi1();
    Rational::from(diff) + xi_part
}

/// Eigenvalues of `h_i` for `i` in a finite window.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightVector {
    pub window: (i64, i64),
    pub eigenvalues: BTreeMap<i64, Rational>,
}

impl WeightVector {
    /// The eigenvalue of `h_i` far from the pattern's explicit rows, where
    /// every row is the signature: `M_i - xi1` for `i >= 1`, `M_i - xi0` otherwise.
    pub fn asymptotic(params: &ModuleParams, i: i64) -> Rational {
        let xi = if i >= 1 { params.xi1() } else { params.xi0() };
        Rational::from(params.signature().value(i)) - xi
    }
}

pub fn weight_of(p: &CPattern, params: &ModuleParams, window: (i64, i64)) -> WeightVector {
    let eigenvalues = (window.0..=window.1).map(|i| (i, h_eigenvalue(p, i, params))).collect();
    WeightVector { window, eigenvalues }
}
