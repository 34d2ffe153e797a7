//! C-patterns and unvalidated pattern arrays.
//!
//! Row `p` (`p >= 1`) holds `p` entries indexed by `i` in
//! `[-floor(p/2), ceil(p/2) - 1]`. A pattern stores rows `1..N` explicitly;
//! rows `N` and above equal the signature. Stored patterns are always
//! normalized to the smallest such `N` (never below 2), so equality of
//! patterns is structural equality.
//!
//! With rows stored left to right by increasing `i`, betweenness takes one
//! positional form for both parities:
//! `row[p+1][k] >= row[p][k] >= row[p+1][k+1]`.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{row_range, PatternError, Signature};

/// A stabilized, valid C-pattern.
#[derive(Clone)]
pub struct CPattern {
    sig: Arc<Signature>,
    rows: Vec<Vec<i64>>,
}

/// Rows `1..=R` of a candidate pattern, rows above `R` taken from the
/// signature. Nothing is checked until [`PatternArray::is_valid`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternArray {
    sig: Arc<Signature>,
    rows: Vec<Vec<i64>>,
}

fn slot(i: i64, p: usize) -> Option<usize> {
    let r = row_range(p);
    if r.contains(&i) {
        Some((i - r.start()) as usize)
    } else {
        None
    }
}

fn entry_in(sig: &Signature, rows: &[Vec<i64>], i: i64, p: usize) -> Result<i64, PatternError> {
    let k = slot(i, p).ok_or(PatternError::IndexOutOfRange { i, row: p })?;
    Ok(if p <= rows.len() { rows[p - 1][k] } else { sig.value(i) })
}

fn rows_are_valid(sig: &Signature, rows: &[Vec<i64>]) -> bool {
    for (idx, row) in rows.iter().enumerate() {
        let p = idx + 1;
        if row.len() != p {
            return false;
        }
        let upper = rows.get(p).cloned().unwrap_or_else(|| sig.row(p + 1));
        for k in 0..p {
            if upper[k] < row[k] || row[k] < upper[k + 1] {
                return false;
            }
        }
    }
    true
}

fn normalize(sig: &Signature, mut rows: Vec<Vec<i64>>) -> Vec<Vec<i64>> {
    while rows.len() > 1 && *rows.last().unwrap() == sig.row(rows.len()) {
        rows.pop();
    }
    if rows.is_empty() {
        rows.push(sig.row(1));
    }
    rows
}

impl CPattern {
    /// Builds a pattern from explicit rows `1..=rows.len()`, checking row
    /// lengths and betweenness, then normalizing.
    pub fn from_rows(sig: Arc<Signature>, rows: Vec<Vec<i64>>) -> Result<Self, PatternError> {
        for (idx, row) in rows.iter().enumerate() {
            if row.len() != idx + 1 {
                return Err(PatternError::Malformed(format!("row {} has {} entries", idx + 1, row.len())));
            }
        }
        if !rows_are_valid(&sig, &rows) {
            return Err(PatternError::NotAPattern(format!("{rows:?} violates betweenness")));
        }
        let rows = normalize(&sig, rows);
        Ok(CPattern { sig, rows })
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    /// Stabilization level `N`: rows `N` and above equal the signature.
    pub fn level(&self) -> usize {
        self.rows.len() + 1
    }

    /// Explicit rows `1..N`, bottom-up.
    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// Row `p`, materialized from the signature when `p >= N`.
    pub fn row(&self, p: usize) -> Vec<i64> {
        if p == 0 {
            Vec::new()
        } else if p <= self.rows.len() {
            self.rows[p - 1].clone()
        } else {
            self.sig.row(p)
        }
    }

    /// `M_{i,p}`.
    pub fn entry(&self, i: i64, p: usize) -> Result<i64, PatternError> {
        entry_in(&self.sig, &self.rows, i, p)
    }

    /// `L_{i,p} = M_{i,p} - i`.
    pub fn l_value(&self, i: i64, p: usize) -> Result<i64, PatternError> {
        Ok(self.entry(i, p)? - i)
    }

    /// Sum of the entries of row `p` (zero for `p = 0`).
    pub fn row_sum(&self, p: usize) -> i64 {
        if p == 0 {
            0
        } else if p <= self.rows.len() {
            self.rows[p - 1].iter().sum()
        } else {
            row_range(p).map(|i| self.sig.value(i)).sum()
        }
    }

    pub fn to_array(&self) -> PatternArray {
        PatternArray { sig: self.sig.clone(), rows: self.rows.clone() }
    }
}

impl PatternArray {
    pub fn signature(&self) -> &Arc<Signature> {
        &self.sig
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    pub fn entry(&self, i: i64, p: usize) -> Result<i64, PatternError> {
        entry_in(&self.sig, &self.rows, i, p)
    }

    pub fn l_value(&self, i: i64, p: usize) -> Result<i64, PatternError> {
        Ok(self.entry(i, p)? - i)
    }

    /// Betweenness and stabilization.
    pub fn is_valid(&self) -> bool {
        rows_are_valid(&self.sig, &self.rows)
    }

    /// The normalized pattern, or `None` if the array is not a C-pattern.
    pub fn into_pattern(self) -> Option<CPattern> {
        if self.is_valid() {
            let rows = normalize(&self.sig, self.rows);
            Some(CPattern { sig: self.sig, rows })
        } else {
            None
        }
    }

    /// Applies `(i, row, delta)` moves in place, materializing signature rows
    /// as needed.
    pub fn apply_moves(&mut self, moves: &[(i64, usize, i64)]) -> Result<(), PatternError> {
        for &(i, p, delta) in moves {
            let k = slot(i, p).ok_or(PatternError::IndexOutOfRange { i, row: p })?;
            while self.rows.len() < p {
                let next = self.rows.len() + 1;
                self.rows.push(self.sig.row(next));
            }
            self.rows[p - 1][k] += delta;
        }
        Ok(())
    }
}

/// The array obtained from `p` by the replacements `M_{i,row} -> M_{i,row} + delta`.
/// The result is not validated; pair with [`PatternArray::is_valid`].
pub fn shift(p: &CPattern, moves: &[(i64, usize, i64)]) -> Result<PatternArray, PatternError> {
    let mut a = p.to_array();
    a.apply_moves(moves)?;
    Ok(a)
}

/// Re-checks betweenness and stabilization of a stored pattern.
pub fn validate(p: &CPattern) -> bool {
    rows_are_valid(&p.sig, &p.rows)
}

/// The pattern with every row equal to the signature.
pub fn highest_weight_pattern(sig: &Arc<Signature>) -> CPattern {
    CPattern { sig: sig.clone(), rows: vec![sig.row(1)] }
}

impl PartialEq for CPattern {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && (Arc::ptr_eq(&self.sig, &other.sig) || self.sig == other.sig)
    }
}

impl Eq for CPattern {}

impl Hash for CPattern {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.rows.hash(state);
    }
}

impl Ord for CPattern {
    /// Lexicographic by rows from the top down, entries left to right.
    fn cmp(&self, other: &Self) -> Ordering {
        let top = self.rows.len().max(other.rows.len());
        for p in (1..=top).rev() {
            for i in row_range(p) {
                let a = self.entry(i, p).expect("in range");
                let b = other.entry(i, p).expect("in range");
                match a.cmp(&b) {
                    Ordering::Equal => {}
                    o => return o,
                }
            }
        }
        if Arc::ptr_eq(&self.sig, &other.sig) {
            Ordering::Equal
        } else {
            (self.sig.m(), self.sig.n(), self.sig.values()).cmp(&(other.sig.m(), other.sig.n(), other.sig.values()))
        }
    }
}

impl PartialOrd for CPattern {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for CPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CPattern(N={}, rows={:?})", self.level(), self.rows)
    }
}

impl fmt::Display for CPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "[{}]", rows.join(" | "))
    }
}

#[derive(Serialize, Deserialize)]
struct PatternRepr {
    signature: Signature,
    #[serde(rename = "N")]
    level: usize,
    rows: Vec<Vec<i64>>,
}

impl Serialize for CPattern {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PatternRepr { signature: (*self.sig).clone(), level: self.level(), rows: self.rows.clone() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CPattern {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let r = PatternRepr::deserialize(deserializer)?;
        if r.level != r.rows.len() + 1 {
            return Err(D::Error::custom(format!("N = {} but {} rows given", r.level, r.rows.len())));
        }
        let p = CPattern::from_rows(Arc::new(r.signature), r.rows).map_err(D::Error::custom)?;
        if p.level() != r.level {
            return Err(D::Error::custom(format!("N = {} is not minimal (should be {})", r.level, p.level())));
        }
        Ok(p)
    }
}
