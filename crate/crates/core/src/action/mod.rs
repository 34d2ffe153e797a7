//! The represented Chevalley generators acting on C-patterns.
//!
//! `e_k`, `f_k` for `k >= 0` and for `k <= -2` share one shape. For a
//! candidate pair `(j, l)` with `j` in row `a` and `l` in row `b`, the target
//! pattern moves `M_{j,a}` and `M_{l,b}` by `delta`, and the coefficient is
//! `-S(j, l; nu) sqrt(|N1 N2 / (D1 D2)|)` with
//!
//! ```text
//! N1 = prod_{i in b, i != l} [L_ib - L_ja + o1] * prod_{i in d} [L_id - L_ja + o1]
//! D1 = prod_{i in a, i != j} [L_ia - L_ja] [L_ia - L_ja + od]
//! N2 = prod_{i in c} [L_ic - L_lb + o2] * prod_{i in a, i != j} [L_ia - L_lb + o2]
//! D2 = prod_{i in b, i != l} [L_ib - L_lb] [L_ib - L_lb + od]
//! ```
//!
//! | generator      | a, b, c, d               | o1 | o2 | od | delta | nu |
//! |----------------|--------------------------|----|----|----|-------|----|
//! | `e_k`, k >= 0  | 2k+1, 2k+2, 2k+3, 2k     | -1 | 0  | -1 | +1    | 0  |
//! | `f_k`, k >= 0  | 2k+1, 2k+2, 2k+3, 2k     | 0  | +1 | +1 | -1    | 0  |
//! | `e_-k`, k > 1  | 2k-2, 2k-1, 2k, 2k-3     | +1 | 0  | +1 | -1    | 1  |
//! | `f_-k`, k > 1  | 2k-2, 2k-1, 2k, 2k-3     | 0  | -1 | -1 | +1    | 1  |
//!
//! `e_-1` and `f_-1` only touch `M_{0,1}`. Candidates whose target violates
//! betweenness are dropped before any bracket is evaluated.

mod vector;

pub use vector::PatternVector;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::patterns::{h_eigenvalue, row_range, shift, sign_s, CPattern, ModuleParams, PatternArray, PatternError};
use crate::qnum::{factor_bracket, Factored, QnumError, RadicalSum};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ActionError {
    #[error(transparent)]
    Pattern(#[from] PatternError),
    #[error(transparent)]
    Qnum(#[from] QnumError),
    #[error("{generator} on {pattern}: zero denominator bracket [{arg}] for a valid target")]
    ZeroDenominator { generator: GeneratorLabel, pattern: String, arg: i64 },
    #[error("pattern signature differs from the module signature")]
    SignatureMismatch,
    #[error("cannot parse generator {0:?} (expected E<i>, F<i>, H<i> or C)")]
    BadGenerator(String),
}

/// `e_i`, `f_i`, `h_i` or the central `c`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum GeneratorLabel {
    E(i64),
    F(i64),
    H(i64),
    C,
}

impl GeneratorLabel {
    pub fn index(&self) -> Option<i64> {
        match *self {
            GeneratorLabel::E(i) | GeneratorLabel::F(i) | GeneratorLabel::H(i) => Some(i),
            GeneratorLabel::C => None,
        }
    }
}

impl fmt::Display for GeneratorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorLabel::E(i) => write!(f, "E{i}"),
            GeneratorLabel::F(i) => write!(f, "F{i}"),
            GeneratorLabel::H(i) => write!(f, "H{i}"),
            GeneratorLabel::C => f.write_str("C"),
        }
    }
}

impl FromStr for GeneratorLabel {
    type Err = ActionError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let bad = || ActionError::BadGenerator(s.to_string());
        if t.eq_ignore_ascii_case("c") {
            return Ok(GeneratorLabel::C);
        }
        let mut chars = t.chars();
        let kind = chars.next().ok_or_else(bad)?;
        let rest = chars.as_str().trim_start_matches('_');
        let i: i64 = rest.parse().map_err(|_| bad())?;
        match kind.to_ascii_uppercase() {
            'E' => Ok(GeneratorLabel::E(i)),
            'F' => Ok(GeneratorLabel::F(i)),
            'H' => Ok(GeneratorLabel::H(i)),
            _ => Err(bad()),
        }
    }
}

impl Serialize for GeneratorLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GeneratorLabel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

struct Shape {
    a: usize,
    b: usize,
    c: usize,
    d: usize,
    o1: i64,
    o2: i64,
    od: i64,
    delta: i64,
    nu: u8,
}

fn shape(g: GeneratorLabel) -> Option<Shape> {
    let (k, raising) = match g {
        GeneratorLabel::E(k) => (k, true),
        GeneratorLabel::F(k) => (k, false),
        _ => return None,
    };
    if k >= 0 {
        let k = k as usize;
        let (a, b, c, d) = (2 * k + 1, 2 * k + 2, 2 * k + 3, 2 * k);
        Some(if raising {
            Shape { a, b, c, d, o1: -1, o2: 0, od: -1, delta: 1, nu: 0 }
        } else {
            Shape { a, b, c, d, o1: 0, o2: 1, od: 1, delta: -1, nu: 0 }
        })
    } else if k <= -2 {
        let k = (-k) as usize;
        let (a, b, c, d) = (2 * k - 2, 2 * k - 1, 2 * k, 2 * k - 3);
        Some(if raising {
            Shape { a, b, c, d, o1: 1, o2: 0, od: 1, delta: -1, nu: 1 }
        } else {
            Shape { a, b, c, d, o1: 0, o2: -1, od: -1, delta: 1, nu: 1 }
        })
    } else {
        None
    }
}

/// One term of an `e`/`f` action before the deletion convention is applied.
#[derive(Clone, Debug)]
pub struct Candidate {
    /// Index moved in the lower-numbered row of the pair (`M_{0,1}` for index -1).
    pub j: i64,
    /// Index moved in the other row, absent for `e_-1`, `f_-1`.
    pub l: Option<i64>,
    pub target: PatternArray,
    pub valid: bool,
    /// Integer arguments of the numerator brackets.
    pub numerator_args: Vec<i64>,
    /// Integer arguments of the denominator brackets.
    pub denominator_args: Vec<i64>,
    /// Sign in front of the square root.
    pub sign: i64,
}

impl Candidate {
    pub fn numerator_vanishes(&self) -> bool {
        self.numerator_args.contains(&0)
    }

    pub fn denominator_vanishes(&self) -> bool {
        self.denominator_args.contains(&0)
    }
}

/// All candidate terms of `g` on `p` (only for `E`/`F`), valid or not.
pub fn candidates(g: GeneratorLabel, p: &CPattern) -> Result<Vec<Candidate>, ActionError> {
    let l = |i: i64, row: usize| p.l_value(i, row);
    let mut out = Vec::new();
    match (g, shape(g)) {
        (GeneratorLabel::E(-1), _) | (GeneratorLabel::F(-1), _) => {
            let mu = i64::from(matches!(g, GeneratorLabel::F(_)));
            let target = shift(p, &[(0, 1, if mu == 0 { -1 } else { 1 })])?;
            let valid = target.is_valid();
            out.push(Candidate {
                j: 0,
                l: None,
                target,
                valid,
                numerator_args: vec![l(-1, 2)? - l(0, 1)? - mu, l(0, 1)? - l(0, 2)? + mu],
                denominator_args: Vec::new(),
                sign: 1,
            });
        }
        (_, Some(s)) => {
            for j in row_range(s.a) {
                let lja = l(j, s.a)?;
                for li in row_range(s.b) {
                    let target = shift(p, &[(j, s.a, s.delta), (li, s.b, s.delta)])?;
                    let valid = target.is_valid();
                    let llb = l(li, s.b)?;
                    let mut num = Vec::new();
                    let mut den = Vec::new();
                    for i in row_range(s.b).filter(|&i| i != li) {
                        num.push(l(i, s.b)? - lja + s.o1);
                    }
                    for i in row_range(s.d) {
                        num.push(l(i, s.d)? - lja + s.o1);
                    }
                    for i in row_range(s.a).filter(|&i| i != j) {
                        let x = l(i, s.a)? - lja;
                        den.push(x);
                        den.push(x + s.od);
                    }
                    for i in row_range(s.c) {
                        num.push(l(i, s.c)? - llb + s.o2);
                    }
                    for i in row_range(s.a).filter(|&i| i != j) {
                        num.push(l(i, s.a)? - llb + s.o2);
                    }
                    for i in row_range(s.b).filter(|&i| i != li) {
                        let x = l(i, s.b)? - llb;
                        den.push(x);
                        den.push(x + s.od);
                    }
                    out.push(Candidate {
                        j,
                        l: Some(li),
                        target,
                        valid,
                        numerator_args: num,
                        denominator_args: den,
                        sign: -sign_s(j, li, s.nu),
                    });
                }
            }
        }
        _ => {}
    }
    Ok(out)
}

/// Applies generators for one module, memoizing bracket factorizations and
/// generator images. Safe to share across threads.
pub struct Engine {
    params: ModuleParams,
    brackets: Mutex<HashMap<i64, Arc<Factored>>>,
    images: Mutex<HashMap<(GeneratorLabel, CPattern), Arc<PatternVector>>>,
}

impl Engine {
    pub fn new(params: ModuleParams) -> Self {
        Engine { params, brackets: Mutex::new(HashMap::new()), images: Mutex::new(HashMap::new()) }
    }

    pub fn params(&self) -> &ModuleParams {
        &self.params
    }

    fn bracket(&self, x: i64) -> Result<Arc<Factored>, ActionError> {
        if let Some(f) = self.brackets.lock().unwrap().get(&x) {
            return Ok(f.clone());
        }
        let f = Arc::new(factor_bracket(x, self.params.qv())?);
        self.brackets.lock().unwrap().insert(x, f.clone());
        Ok(f)
    }

    fn coefficient(&self, g: GeneratorLabel, p: &CPattern, cand: &Candidate) -> Result<RadicalSum, ActionError> {
        if let Some(&arg) = cand.denominator_args.iter().find(|&&x| x == 0) {
            return Err(ActionError::ZeroDenominator { generator: g, pattern: p.to_string(), arg });
        }
        if cand.numerator_vanishes() {
            return Ok(RadicalSum::zero());
        }
        let mut radicand = Factored::one();
        for &x in &cand.numerator_args {
            radicand.mul_assign(&*self.bracket(x)?);
        }
        for &x in &cand.denominator_args {
            radicand.div_assign(&*self.bracket(x)?)?;
        }
        let root = radicand.sqrt_abs();
        Ok(if cand.sign < 0 { root.neg() } else { root })
    }

    fn compute(&self, g: GeneratorLabel, p: &CPattern) -> Result<PatternVector, ActionError> {
        if **p.signature() != **self.params.signature() {
            return Err(ActionError::SignatureMismatch);
        }
        let mut out = PatternVector::zero();
        match g {
            GeneratorLabel::H(i) => {
                out.add_term(p.clone(), RadicalSum::from_rational(h_eigenvalue(p, i, &self.params)));
            }
            GeneratorLabel::C => {
                out.add_term(p.clone(), RadicalSum::from_rational(self.params.xi0() - self.params.xi1()));
            }
            GeneratorLabel::E(_) | GeneratorLabel::F(_) => {
                for cand in candidates(g, p)? {
                    if !cand.valid {
                        continue;
                    }
                    let coeff = self.coefficient(g, p, &cand)?;
                    let target = cand.target.into_pattern().expect("validated");
                    out.add_term(target, coeff);
                }
            }
        }
        Ok(out)
    }

    /// `rho(g)|p)`.
    pub fn apply(&self, g: GeneratorLabel, p: &CPattern) -> Result<Arc<PatternVector>, ActionError> {
        let key = (g, p.clone());
        if let Some(v) = self.images.lock().unwrap().get(&key) {
            return Ok(v.clone());
        }
        let v = Arc::new(self.compute(g, p)?);
        self.images.lock().unwrap().insert(key, v.clone());
        Ok(v)
    }

    /// Linear extension of [`Engine::apply`].
    pub fn apply_to_vector(&self, g: GeneratorLabel, v: &PatternVector) -> Result<PatternVector, ActionError> {
        let mut out = PatternVector::zero();
        for (p, c) in v.iter() {
            let image = self.apply(g, p)?;
            out.add_scaled(&image, c);
        }
        Ok(out)
    }

    /// `rho(w_1) rho(w_2) ... rho(w_r) |p)`: the rightmost letter acts first.
    pub fn apply_word(&self, word: &[GeneratorLabel], p: &CPattern) -> Result<PatternVector, ActionError> {
        let mut v = PatternVector::unit(p.clone());
        for &g in word.iter().rev() {
            v = self.apply_to_vector(g, &v)?;
        }
        Ok(v)
    }

    /// Number of memoized generator images.
    pub fn cached_images(&self) -> usize {
        self.images.lock().unwrap().len()
    }
}

/// One-shot [`Engine::apply`] without a shared cache.
pub fn apply_generator(g: GeneratorLabel, p: &CPattern, params: &ModuleParams) -> Result<PatternVector, ActionError> {
    Engine::new(params.clone()).compute(g, p)
}

pub fn apply_to_vector(g: GeneratorLabel, v: &PatternVector, params: &ModuleParams) -> Result<PatternVector, ActionError> {
    Engine::new(params.clone()).apply_to_vector(g, v)
}

pub fn apply_word(word: &[GeneratorLabel], p: &CPattern, params: &ModuleParams) -> Result<PatternVector, ActionError> {
    Engine::new(params.clone()).apply_word(word, p)
}

#[cfg(test)]
mod tests;
