//! Finite signatures and module parameters.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::PatternError;
use crate::qnum::{QValue, Rational};

/// A nonincreasing integer sequence `{M_i}` that is constant below `m` and
/// above `n`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(try_from = "SignatureRepr")]
pub struct Signature {
    m: i64,
    n: i64,
    values: Vec<i64>,
}

#[derive(Deserialize)]
struct SignatureRepr {
    m: i64,
    n: i64,
    values: Vec<i64>,
}

impl TryFrom<SignatureRepr> for Signature {
    type Error = PatternError;
    fn try_from(r: SignatureRepr) -> Result<Self, Self::Error> {
        Signature::new(r.m, r.n, r.values)
    }
}

impl Signature {
    pub fn new(m: i64, n: i64, values: Vec<i64>) -> Result<Self, PatternError> {
        if m > n {
            return Err(PatternError::BadSignature(format!("window [{m},{n}] is empty")));
        }
        let expected = (n - m + 1) as usize;
        if values.len() != expected {
            return Err(PatternError::BadSignature(format!(
                "window [{m},{n}] needs {expected} values, got {}",
                values.len()
            )));
        }
        if let Some(w) = values.windows(2).find(|w| w[0] < w[1]) {
            return Err(PatternError::BadSignature(format!(
                "values must be nonincreasing, found {} before {}",
                w[0], w[1]
            )));
        }
        Ok(Signature { m, n, values })
    }

    /// All-zero signature on a one-point window.
    pub fn trivial() -> Self {
        Signature { m: 0, n: 0, values: vec![0] }
    }

    pub fn m(&self) -> i64 {
        self.m
    }

    pub fn n(&self) -> i64 {
        self.n
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// `M_i`, with the constant tails outside `[m, n]`.
    pub fn value(&self, i: i64) -> i64 {
        let i = i.clamp(self.m, self.n);
        self.values[(i - self.m) as usize]
    }

    /// The stabilized row `p`: entries `M_i` for `i` in the row's index range.
    pub fn row(&self, p: usize) -> Vec<i64> {
        row_range(p).map(|i| self.value(i)).collect()
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        write!(f, "{}:{}:{}", self.m, self.n, vals.join(","))
    }
}

/// Parses the compact `m:n:v1,v2,...` form.
impl FromStr for Signature {
    type Err = PatternError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PatternError::BadSignature(format!("expected m:n:v1,v2,..., got {s:?}"));
        let mut parts = s.trim().splitn(3, ':');
        let m = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        let n = parts.next().ok_or_else(bad)?.trim().parse().map_err(|_| bad())?;
        let vals = parts.next().ok_or_else(bad)?;
        let values = vals
            .split(',')
            .map(|v| v.trim().parse::<i64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| bad())?;
        Signature::new(m, n, values)
    }
}

/// Index range of row `p`: `[-floor(p/2), ceil(p/2) - 1]`.
pub fn row_range(p: usize) -> std::ops::RangeInclusive<i64> {
    let p = p as i64;
    -(p / 2)..=((p + 1) / 2 - 1)
}

/// Which algebra the module is built for.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Mode {
    /// `U_h(a_inf)`: any `xi0`, `xi1`.
    #[serde(rename = "a_infinity")]
    Small,
    /// `U_h(A_inf)`: requires `xi0 = M_m` and `xi1 = M_n`.
    #[serde(rename = "A_infinity")]
    Completed,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Small => "a_infinity",
            Mode::Completed => "A_infinity",
        })
    }
}

impl FromStr for Mode {
    type Err = PatternError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "a_infinity" | "a" => Ok(Mode::Small),
            "A_infinity" | "A" => Ok(Mode::Completed),
            _ => Err(PatternError::BadParams(format!("unknown mode {s:?} (a_infinity or A_infinity)"))),
        }
    }
}

/// Everything that labels a module `V({M}; xi0, xi1)` plus the scalar setting.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ModuleParams {
    signature: Arc<Signature>,
    xi0: Rational,
    xi1: Rational,
    qv: QValue,
    mode: Mode,
}

impl ModuleParams {
    pub fn new(signature: Signature, xi0: Rational, xi1: Rational, qv: QValue, mode: Mode) -> Result<Self, PatternError> {
        qv.validate().map_err(|e| PatternError::BadParams(e.to_string()))?;
        if let QValue::Quantum(q) = &qv {
            // The |.| in the matrix elements only yields a representation for q > 0.
            if !q.is_positive() {
                return Err(PatternError::BadParams(format!("q = {q} must be positive")));
            }
        }
        if mode == Mode::Completed {
            let mm = Rational::from(signature.value(signature.m()));
            let mn = Rational::from(signature.value(signature.n()));
            if xi0 != mm || xi1 != mn {
                return Err(PatternError::BadParams(format!(
                    "A_infinity mode needs xi0 = M_m = {mm} and xi1 = M_n = {mn}, got xi0 = {xi0}, xi1 = {xi1}"
                )));
            }
        }
        Ok(ModuleParams { signature: Arc::new(signature), xi0, xi1, qv, mode })
    }

    /// The finite-signature module `V({M}; M_m, M_n)` in `A_infinity` mode.
    pub fn finite_signature(signature: Signature, qv: QValue) -> Result<Self, PatternError> {
        let xi0 = Rational::from(signature.value(signature.m()));
        let xi1 = Rational::from(signature.value(signature.n()));
        ModuleParams::new(signature, xi0, xi1, qv, Mode::Completed)
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn xi0(&self) -> &Rational {
        &self.xi0
    }

    pub fn xi1(&self) -> &Rational {
        &self.xi1
    }

    pub fn qv(&self) -> &QValue {
        &self.qv
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Whether `xi0 = M_m` and `xi1 = M_n`, the finite-signature labels.
    pub fn xi_matches_tails(&self) -> bool {
        let s = &self.signature;
        self.xi0 == Rational::from(s.value(s.m())) && self.xi1 == Rational::from(s.value(s.n()))
    }

    /// Same module with another `q` (or the classical limit).
    pub fn with_qv(&self, qv: QValue) -> Result<Self, PatternError> {
        ModuleParams::new((*self.signature).clone(), self.xi0.clone(), self.xi1.clone(), qv, self.mode)
    }
}
