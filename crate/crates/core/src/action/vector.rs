//! Finite linear combinations of C-patterns.

use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::patterns::CPattern;
use crate::qnum::{RadicalSum, Rational};

/// `sum c_p |p)` with no zero coefficients, ordered by the basis order.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct PatternVector {
    terms: BTreeMap<CPattern, RadicalSum>,
}

impl PatternVector {
    pub fn zero() -> Self {
        PatternVector::default()
    }

    pub fn unit(p: CPattern) -> Self {
        let mut v = PatternVector::zero();
        v.add_term(p, RadicalSum::one());
        v
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

    pub fn iter(&self) -> impl Iterator<Item = (&CPattern, &RadicalSum)> {
        self.terms.iter()
    }

    pub fn get(&self, p: &CPattern) -> Option<&RadicalSum> {
        self.terms.get(p)
    }

    pub fn add_term(&mut self, p: CPattern, c: RadicalSum) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(p) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                o.get_mut().add_assign(&c);
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &PatternVector, c: &RadicalSum) {
        for (p, d) in &other.terms {
            self.add_term(p.clone(), d.mul(c));
        }
    }

    pub fn add(&self, other: &PatternVector) -> PatternVector {
        let mut out = self.clone();
        out.add_scaled(other, &RadicalSum::one());
        out
    }

    pub fn sub(&self, other: &PatternVector) -> PatternVector {
        let mut out = self.clone();
        out.add_scaled(other, &RadicalSum::one().neg());
        out
    }

    pub fn scale(&self, c: &RadicalSum) -> PatternVector {
        let mut out = PatternVector::zero();
        out.add_scaled(self, c);
        out
    }

    pub fn scale_rational(&self, r: &Rational) -> PatternVector {
        self.scale(&RadicalSum::from_rational(r.clone()))
    }

    pub fn neg(&self) -> PatternVector {
        self.scale(&RadicalSum::one().neg())
    }
}

impl fmt::Debug for PatternVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(p, c)| format!("({c}) {p}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

#[derive(Serialize)]
struct TermRef<'a> {
    pattern: &'a CPattern,
    coeff: &'a RadicalSum,
}

impl Serialize for PatternVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.terms.len()))?;
        for (pattern, coeff) in &self.terms {
            seq.serialize_element(&TermRef { pattern, coeff })?;
        }
        seq.end()
    }
}
