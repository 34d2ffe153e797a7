//! Prime factorizations of rationals and of q-brackets.
//!
//! Square roots of matrix-element radicands are canonicalized by factoring.
//! Radicands are products of many brackets, so factoring the product directly
//! would mean factoring large numbers. Instead each bracket is factored on its
//! own, which stays cheap: for `q = a/b` with `a > b > 0` and `x > 0`,
//!
//! `[x] = prod_{d | 2x, d > 2} Phi_d(a, b) / (ab)^(x-1)`
//!
//! where `Phi_d(a, b) = b^phi(d) Phi_d(a/b)` is the homogenized cyclotomic
//! polynomial. Each `Phi_d(a, b)` is much smaller than the bracket itself.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{QValue, QnumError, Rational, RadicalSum};

/// A signed rational kept as a sign and a map prime -> (possibly negative) exponent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factored {
    sign: i8,
    exps: BTreeMap<BigUint, i64>,
}

/// Prime factorization of a positive integer. `1` factors as the empty map.
pub fn factor_integer(n: &BigUint) -> BTreeMap<BigUint, u32> {
    assert!(!n.is_zero(), "cannot factor zero");
    if n.is_one() {
        return BTreeMap::new();
    }
    num_prime::nt_funcs::factorize(n.clone())
        .into_iter()
        .map(|(p, e)| (p, e as u32))
        .collect()
}

impl Factored {
    pub fn one() -> Self {
        Factored { sign: 1, exps: BTreeMap::new() }
    }

    pub fn zero() -> Self {
        Factored { sign: 0, exps: BTreeMap::new() }
    }

    pub fn from_bigint(n: &BigInt) -> Self {
        match n.sign() {
            Sign::NoSign => Factored::zero(),
            s => {
                let exps = factor_integer(n.magnitude()).into_iter().map(|(p, e)| (p, e as i64)).collect();
                Factored { sign: if s == Sign::Minus { -1 } else { 1 }, exps }
            }
        }
    }

    pub fn from_i64(n: i64) -> Self {
        Factored::from_bigint(&BigInt::from(n))
    }

    pub fn from_rational(r: &Rational) -> Self {
        if r.is_zero() {
            return Factored::zero();
        }
        let mut f = Factored::from_bigint(r.numer());
        f.accumulate(&Factored::from_bigint(r.denom()), -1);
        f
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    /// -1, 0 or 1.
    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn exponents(&self) -> &BTreeMap<BigUint, i64> {
        &self.exps
    }

    fn accumulate(&mut self, other: &Factored, times: i64) {
        for (p, e) in &other.exps {
            let slot = self.exps.entry(p.clone()).or_insert(0);
            *slot += e * times;
            if *slot == 0 {
                self.exps.remove(p);
            }
        }
    }

    pub fn mul(&self, other: &Factored) -> Factored {
        if self.is_zero() || other.is_zero() {
            return Factored::zero();
        }
        let mut out = self.clone();
        out.sign *= other.sign;
        out.accumulate(other, 1);
        out
    }

    pub fn mul_assign(&mut self, other: &Factored) {
        if self.is_zero() {
            return;
        }
        if other.is_zero() {
            *self = Factored::zero();
            return;
        }
        self.sign *= other.sign;
        self.accumulate(other, 1);
    }

    pub fn div(&self, other: &Factored) -> Result<Factored, QnumError> {
        if other.is_zero() {
            return Err(QnumError::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Factored::zero());
        }
        let mut out = self.clone();
        out.sign *= other.sign;
        out.accumulate(other, -1);
        Ok(out)
    }

    pub fn div_assign(&mut self, other: &Factored) -> Result<(), QnumError> {
        if other.is_zero() {
            return Err(QnumError::DivisionByZero);
        }
        if !self.is_zero() {
            self.sign *= other.sign;
            self.accumulate(other, -1);
        }
        Ok(())
    }

    pub fn neg(&self) -> Factored {
        let mut out = self.clone();
        out.sign = -out.sign;
        out
    }

    pub fn abs(&self) -> Factored {
        let mut out = self.clone();
        out.sign = out.sign.abs();
        out
    }

    pub fn to_rational(&self) -> Rational {
        if self.is_zero() {
            return Rational::zero();
        }
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for (p, &e) in &self.exps {
            if e > 0 {
                num *= num_traits::pow(p.clone(), e as usize);
            } else {
                den *= num_traits::pow(p.clone(), (-e) as usize);
            }
        }
        let num = BigInt::from_biguint(if self.sign < 0 { Sign::Minus } else { Sign::Plus }, num);
        Rational::new(num, BigInt::from(den)).expect("denominator is a product of primes")
    }

    /// Canonical `sqrt(self)`; fails when `self` is negative.
    pub fn sqrt(&self) -> Result<RadicalSum, QnumError> {
        if self.sign < 0 {
            return Err(QnumError::NegativeRadicand(self.to_rational().to_string()));
        }
        Ok(self.sqrt_abs())
    }

    /// Canonical `sqrt(|self|)`.
    pub fn sqrt_abs(&self) -> RadicalSum {
        if self.is_zero() {
            return RadicalSum::zero();
        }
        let mut kernel = BigUint::one();
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for (p, &e) in &self.exps {
            if e.rem_euclid(2) == 1 {
                kernel *= p;
            }
            let half = e.div_euclid(2);
            if half > 0 {
                num *= num_traits::pow(p.clone(), half as usize);
            } else if half < 0 {
                den *= num_traits::pow(p.clone(), (-half) as usize);
            }
        }
        // sqrt(k * s^2 / t^2) with odd negative exponents: p^(-1) = p * p^(-2),
        // which `div_euclid` already accounts for (-1 div 2 = -1, rem 1).
        let coeff = Rational::new(BigInt::from(num), BigInt::from(den)).expect("nonzero denominator");
        RadicalSum::term(coeff, kernel)
    }
}

/// Homogenized cyclotomic values `Phi_d(a, b)` for every divisor `d` of `n`.
fn cyclotomic_values(n: u64, a: &BigInt, b: &BigInt) -> BTreeMap<u64, BigInt> {
    let divisors: Vec<u64> = (1..=n).filter(|d| n.is_multiple_of(*d)).collect();
    let mut phi: BTreeMap<u64, BigInt> = BTreeMap::new();
    for &d in &divisors {
        let mut v = num_traits::pow(a.clone(), d as usize) - num_traits::pow(b.clone(), d as usize);
        for (&e, val) in &phi {
            if d % e == 0 {
                v /= val;
            }
        }
        phi.insert(d, v);
    }
    phi
}

/// Factorization of `[x]` at `qv`.
pub fn factor_bracket(x: i64, qv: &QValue) -> Result<Factored, QnumError> {
    qv.validate()?;
    let q = match qv {
        QValue::Classical => return Ok(Factored::from_i64(x)),
        QValue::Quantum(q) => q,
    };
    if x == 0 {
        return Ok(Factored::zero());
    }
    let n = x.unsigned_abs();
    let mut sign: i8 = if x < 0 { -1 } else { 1 };
    // [x] at -t equals (-1)^(x-1) [x] at t.
    if q.is_negative() && n.is_multiple_of(2) {
        sign = -sign;
    }
    // [x] is invariant under q -> 1/q, so take a > b > 0.
    let (mut a, mut b) = (q.numer().abs(), q.denom().clone());
    if a < b {
        std::mem::swap(&mut a, &mut b);
    }
    debug_assert!(a.gcd(&b).is_one());
    let mut out = Factored::one();
    for (d, val) in cyclotomic_values(2 * n, &a, &b) {
        if d > 2 {
            out.mul_assign(&Factored::from_bigint(&val));
        }
    }
    let ab = Factored::from_bigint(&(&a * &b));
    for _ in 1..n {
        out = out.div(&ab)?;
    }
    out.sign *= sign;
    Ok(out)
}
