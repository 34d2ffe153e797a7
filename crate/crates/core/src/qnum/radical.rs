//! Finite sums `sum c_k sqrt(k)` over distinct squarefree kernels `k`.
//!
//! Square roots of distinct squarefree integers are linearly independent over
//! the rationals, so a canonical sum is zero exactly when it has no terms.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{factor_integer, QnumError, Rational};

/// Digits after the decimal point in advisory decimal renderings.
pub const DEFAULT_DECIMAL_PLACES: usize = 50;

#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct RadicalSum {
    terms: BTreeMap<BigUint, Rational>,
}

impl RadicalSum {
    pub fn zero() -> Self {
        RadicalSum::default()
    }

    pub fn one() -> Self {
        RadicalSum::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        RadicalSum::term(r, BigUint::one())
    }

    /// `coeff * sqrt(kernel)`; the kernel must already be squarefree.
    pub fn term(coeff: Rational, kernel: BigUint) -> Self {
        assert!(!kernel.is_zero(), "kernel must be positive");
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(kernel, coeff);
        }
        RadicalSum { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigUint, &Rational)> {
        self.terms.iter()
    }

    /// The rational value, if the sum has no irrational part.
    pub fn as_rational(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&BigUint::one()).cloned(),
            _ => None,
        }
    }

    fn add_term(&mut self, kernel: BigUint, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(kernel) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += coeff;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &RadicalSum) -> RadicalSum {
        let mut out = self.clone();
        out.add_assign(other);
        out
    }

    pub fn add_assign(&mut self, other: &RadicalSum) {
        for (k, c) in &other.terms {
            self.add_term(k.clone(), c.clone());
        }
    }

    pub fn neg(&self) -> RadicalSum {
        RadicalSum { terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect() }
    }

    pub fn sub(&self, other: &RadicalSum) -> RadicalSum {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &Rational) -> RadicalSum {
        if r.is_zero() {
            return RadicalSum::zero();
        }
        RadicalSum { terms: self.terms.iter().map(|(k, c)| (k.clone(), c * r)).collect() }
    }

    pub fn mul(&self, other: &RadicalSum) -> RadicalSum {
        let mut out = RadicalSum::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &other.terms {
                // k1, k2 squarefree: sqrt(k1 k2) = g sqrt((k1/g)(k2/g)), g = gcd.
                let g = k1.gcd(k2);
                let kernel = (k1 / &g) * (k2 / &g);
                let coeff = c1 * c2 * Rational::from(BigInt::from(g));
                out.add_term(kernel, coeff);
            }
        }
        out
    }

    /// Decimal rendering with `places` digits after the point, rounded half
    /// away from zero. Advisory only.
    pub fn to_decimal(&self, places: usize) -> String {
        let guard = 10;
        let scale = num_traits::pow(BigUint::from(10u32), places + guard);
        let mut total = Rational::zero();
        for (k, c) in &self.terms {
            // floor(sqrt(k) * scale), error below 1/scale per unit coefficient.
            let root = (k * &scale * &scale).sqrt();
            total += c * Rational::from(BigInt::from(root));
        }
        let total = total.checked_div(&Rational::from(BigInt::from(scale))).expect("nonzero scale");
        render_rational(&total, places)
    }
}

/// Fixed-point rendering of an exact rational.
fn render_rational(r: &Rational, places: usize) -> String {
    let neg = r.is_negative();
    let a = r.abs();
    let scale = num_traits::pow(BigInt::from(10), places);
    let scaled: BigInt = a.numer() * &scale * 2 + a.denom();
    let rounded = scaled.div_floor(&(a.denom() * 2));
    let (int, frac) = rounded.div_rem(&scale);
    let mut s = String::new();
    if neg && !rounded.is_zero() {
        s.push('-');
    }
    s.push_str(&int.to_string());
    if places > 0 {
        let f = frac.to_string();
        s.push('.');
        s.push_str(&"0".repeat(places - f.len()));
        s.push_str(&f);
    }
    s
}

/// Canonical `sqrt(r)`: with `r = a/b` and `ab = k s^2`, returns `(s/b) sqrt(k)`.
pub fn radical_of(r: &Rational) -> Result<RadicalSum, QnumError> {
    if r.is_negative() {
        return Err(QnumError::NegativeRadicand(r.to_string()));
    }
    if r.is_zero() {
        return Ok(RadicalSum::zero());
    }
    let ab = (r.numer() * r.denom()).to_biguint().expect("positive");
    let mut kernel = BigUint::one();
    let mut s = BigUint::one();
    for (p, e) in factor_integer(&ab) {
        if e % 2 == 1 {
            kernel *= &p;
        }
        s *= num_traits::pow(p, (e / 2) as usize);
    }
    let coeff = Rational::new(BigInt::from(s), r.denom().clone())?;
    Ok(RadicalSum::term(coeff, kernel))
}

pub fn radsum_add(a: &RadicalSum, b: &RadicalSum) -> RadicalSum {
    a.add(b)
}

pub fn radsum_mul(a: &RadicalSum, b: &RadicalSum) -> RadicalSum {
    a.mul(b)
}

pub fn radsum_is_zero(a: &RadicalSum) -> bool {
    a.is_zero()
}

impl fmt::Display for RadicalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (k, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            if k.is_one() {
                write!(f, "{c}")?;
            } else {
                write!(f, "({c})*sqrt({k})")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for RadicalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Kernels that fit in `u64` serialize as JSON numbers, larger ones as strings.
#[derive(Serialize, Deserialize)]
struct TermRepr {
    coeff: Rational,
    kernel: serde_json::Value,
}

impl Serialize for RadicalSum {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<TermRepr> = self
            .terms
            .iter()
            .map(|(k, c)| TermRepr {
                coeff: c.clone(),
                kernel: match k.to_u64() {
                    Some(v) => serde_json::Value::from(v),
                    None => serde_json::Value::from(k.to_string()),
                },
            })
            .collect();
        terms.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for RadicalSum {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let terms = Vec::<TermRepr>::deserialize(deserializer)?;
        let mut out = RadicalSum::zero();
        for t in terms {
            let kernel: BigUint = match &t.kernel {
                serde_json::Value::Number(n) => {
                    n.as_u64().map(BigUint::from).ok_or_else(|| D::Error::custom("kernel must be a positive integer"))?
                }
                serde_json::Value::String(s) => s.parse().map_err(D::Error::custom)?,
                _ => return Err(D::Error::custom("kernel must be a number or a decimal string")),
            };
            if kernel.is_zero() {
                return Err(D::Error::custom("kernel must be positive"));
            }
            // Re-canonicalize in case the input kernel carries a square factor.
            let root = radical_of(&Rational::from(BigInt::from(kernel))).map_err(D::Error::custom)?;
            out.add_assign(&root.scale(&t.coeff));
        }
        Ok(out)
    }
}
