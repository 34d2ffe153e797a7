//! The deformation parameter and the q-bracket `[x] = (q^x - q^-x)/(q - q^-1)`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{QnumError, Rational};

/// Either an exact rational `q` (never a root of unity once `|q| != 1`), or
/// the classical degeneration where `[x] = x`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum QValue {
    Classical,
    Quantum(Rational),
}

impl QValue {
    pub fn quantum(q: Rational) -> Result<Self, QnumError> {
        let v = QValue::Quantum(q);
        v.validate()?;
        Ok(v)
    }

    pub fn validate(&self) -> Result<(), QnumError> {
        match self {
            QValue::Classical => Ok(()),
            QValue::Quantum(q) => {
                if q.is_zero() || q.abs().is_one() {
                    Err(QnumError::InvalidQ(q.to_string()))
                } else {
                    Ok(())
                }
            }
        }
    }

    pub fn is_classical(&self) -> bool {
        matches!(self, QValue::Classical)
    }

    /// `[x]` at this parameter.
    pub fn bracket(&self, x: i64) -> Result<Rational, QnumError> {
        qbracket(x, self)
    }
}

/// `[x] = (q^x - q^-x)/(q - q^-1)`, or `x` in classical mode.
pub fn qbracket(x: i64, qv: &QValue) -> Result<Rational, QnumError> {
    qv.validate()?;
    match qv {
        QValue::Classical => Ok(Rational::from(x)),
        QValue::Quantum(q) => {
            if x == 0 {
                return Ok(Rational::zero());
            }
            let qinv = q.recip()?;
            let num = q.pow(x)? - qinv.pow(x)?;
            let den = q - &qinv;
            num.checked_div(&den)
        }
    }
}

impl fmt::Display for QValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QValue::Classical => f.write_str("classical"),
            QValue::Quantum(q) => write!(f, "{q}"),
        }
    }
}

impl FromStr for QValue {
    type Err = QnumError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim().eq_ignore_ascii_case("classical") {
            Ok(QValue::Classical)
        } else {
            QValue::quantum(s.parse()?)
        }
    }
}

impl Serialize for QValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for QValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Text(String),
            Int(i64),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
            Repr::Int(n) => QValue::quantum(Rational::from(n)).map_err(serde::de::Error::custom),
        }
    }
}
