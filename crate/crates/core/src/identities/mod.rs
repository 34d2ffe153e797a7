//! Exact evaluators and a seeded fuzzer for the q-number identities behind
//! the relations.
//!
//! Every identity is a rational-function identity, so it is checked by exact
//! evaluation of `LHS - RHS` at many random generic points. A point is generic
//! when no denominator vanishes; points hitting a pole are rejected and
//! resampled, never perturbed.

mod cross;
mod eval;
mod sample;

pub use cross::{cross_check_suite, i23a_matches_a21, i24a_matches_a26, i24c_matches_a26, a27_matches_a26};
pub use eval::{a21_parts, a26_half, a27_halves, evaluate_identity, i23a_parts};
pub use sample::{
    default_corpus, fuzz_identity, generic_assignment_with, identity_suite, random_generic_assignment, SamplingConfig, DEFAULT_MAX_RETRIES,
};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::qnum::{QValue, QnumError, Rational};

/// Largest accepted size parameter `k` or `n`.
pub const MAX_SIZE: u32 = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdentityError {
    #[error("{identity}: pole at {factor}")]
    Pole { identity: String, factor: String },
    #[error("{0}")]
    BadAssignment(String),
    #[error("cannot parse identity {0:?}")]
    BadIdentity(String),
    #[error("{identity}: no generic assignment within {retries} tries")]
    NoGenericPoint { identity: String, retries: usize },
    #[error(transparent)]
    Qnum(#[from] QnumError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum IdentityTag {
    I23a,
    I23b,
    I24a,
    I24b,
    I24c,
    I24d,
    I25,
    I26,
    I27,
    A21,
    A26,
    A46L,
    A46R,
}

impl IdentityTag {
    pub const ALL: [IdentityTag; 13] = [
        IdentityTag::I23a,
        IdentityTag::I23b,
        IdentityTag::I24a,
        IdentityTag::I24b,
        IdentityTag::I24c,
        IdentityTag::I24d,
        IdentityTag::I25,
        IdentityTag::I26,
        IdentityTag::I27,
        IdentityTag::A21,
        IdentityTag::A26,
        IdentityTag::A46L,
        IdentityTag::A46R,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            IdentityTag::I23a => "I23a",
            IdentityTag::I23b => "I23b",
            IdentityTag::I24a => "I24a",
            IdentityTag::I24b => "I24b",
            IdentityTag::I24c => "I24c",
            IdentityTag::I24d => "I24d",
            IdentityTag::I25 => "I25",
            IdentityTag::I26 => "I26",
            IdentityTag::I27 => "I27",
            IdentityTag::A21 => "A21",
            IdentityTag::A26 => "A26",
            IdentityTag::A46L => "A46L",
            IdentityTag::A46R => "A46R",
        }
    }

    /// Smallest size, or `None` for the scalar identities.
    pub fn min_size(&self) -> Option<u32> {
        match self {
            IdentityTag::I23a | IdentityTag::I23b | IdentityTag::I24b | IdentityTag::I24c | IdentityTag::I24d => Some(1),
            // Two distinct excluded labels in row 2k - 1.
            IdentityTag::I24a => Some(2),
            IdentityTag::A21 => Some(2),
            IdentityTag::A26 => Some(1),
            _ => None,
        }
    }
}

impl FromStr for IdentityTag {
    type Err = IdentityError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        IdentityTag::ALL
            .iter()
            .find(|t| t.name().eq_ignore_ascii_case(s.trim()))
            .copied()
            .ok_or_else(|| IdentityError::BadIdentity(s.to_string()))
    }
}

/// An identity with its size parameter (`k` for I23/I24, `n` for A21/A26).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IdentityId {
    pub tag: IdentityTag,
    pub size: Option<u32>,
}

impl IdentityId {
    pub fn new(tag: IdentityTag, size: Option<u32>) -> Result<Self, IdentityError> {
        let id = IdentityId { tag, size };
        match (tag.min_size(), size) {
            (None, None) => Ok(id),
            (None, Some(_)) => Err(IdentityError::BadIdentity(format!("{} takes no size parameter", tag.name()))),
            (Some(_), None) => Err(IdentityError::BadIdentity(format!("{} needs a size parameter", tag.name()))),
            (Some(lo), Some(s)) if s < lo || s > MAX_SIZE => Err(IdentityError::BadIdentity(format!(
                "{} size must lie in [{lo}, {MAX_SIZE}], got {s}",
                tag.name()
            ))),
            _ => Ok(id),
        }
    }

    pub fn scalar(tag: IdentityTag) -> Self {
        IdentityId::new(tag, None).expect("scalar identity")
    }

    pub fn sized(tag: IdentityTag, size: u32) -> Self {
        IdentityId::new(tag, Some(size)).expect("size in range")
    }

    pub(crate) fn k(&self) -> i64 {
        self.size.expect("sized identity") as i64
    }
}

/// `I23a:2`, `A26:3`, `I27`.
impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.size {
            Some(s) => write!(f, "{}:{s}", self.tag.name()),
            None => f.write_str(self.tag.name()),
        }
    }
}

impl FromStr for IdentityId {
    type Err = IdentityError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (tag, size) = match s.split_once(':') {
            Some((t, n)) => (t, Some(n.trim().parse::<u32>().map_err(|_| IdentityError::BadIdentity(s.to_string()))?)),
            None => (s, None),
        };
        IdentityId::new(tag.parse()?, size)
    }
}

impl Serialize for IdentityId {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for IdentityId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Values for the free symbols of one identity.
///
/// `rows[p]` is the L-row `p` (entries in increasing index order);
/// `excluded` holds the two removed labels of I24a-d; `arrays` holds the
/// integer lists `a`, `b`, `c` of A26; `variables` the multiplicative
/// variables `A`, `B`, `C`, `D` of A21.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Assignment {
    pub qv: QValue,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub scalars: BTreeMap<String, i64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub rows: BTreeMap<usize, Vec<i64>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub excluded: Vec<i64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub arrays: BTreeMap<String, Vec<i64>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub variables: BTreeMap<String, Vec<Rational>>,
}

impl Assignment {
    pub fn new(qv: QValue) -> Self {
        Assignment {
            qv,
            scalars: BTreeMap::new(),
            rows: BTreeMap::new(),
            excluded: Vec::new(),
            arrays: BTreeMap::new(),
            variables: BTreeMap::new(),
        }
    }

    pub fn with_scalars(qv: QValue, pairs: &[(&str, i64)]) -> Self {
        let mut a = Assignment::new(qv);
        for (k, v) in pairs {
            a.scalars.insert(k.to_string(), *v);
        }
        a
    }

    pub(crate) fn scalar(&self, name: &str) -> Result<i64, IdentityError> {
        self.scalars.get(name).copied().ok_or_else(|| IdentityError::BadAssignment(format!("missing scalar {name}")))
    }

    pub(crate) fn array(&self, name: &str) -> Result<&[i64], IdentityError> {
        self.arrays.get(name).map(|v| v.as_slice()).ok_or_else(|| IdentityError::BadAssignment(format!("missing array {name}")))
    }

    pub(crate) fn vars(&self, name: &str) -> Result<&[Rational], IdentityError> {
        self.variables
            .get(name)
            .map(|v| v.as_slice())
            .ok_or_else(|| IdentityError::BadAssignment(format!("missing variables {name}")))
    }
}
