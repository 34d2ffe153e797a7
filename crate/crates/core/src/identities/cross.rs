//! Agreement between different encodings of the same identity.

use rayon::prelude::*;
use serde_json::json;

use super::eval::i24_half_of;
use super::sample::generic_assignment_with;
use super::{a21_parts, a26_half, a27_halves, i23a_parts, Assignment, IdentityError, IdentityId, IdentityTag, SamplingConfig};
use crate::patterns::row_range;
use crate::qnum::{QValue, Rational};
use crate::relations::{CheckReport, Failure};

fn quantum_q(qv: &QValue) -> Result<Rational, IdentityError> {
    match qv {
        QValue::Quantum(q) => Ok(q.clone()),
        QValue::Classical => Err(IdentityError::BadAssignment("the multiplicative forms need a rational q".into())),
    }
}

fn row_of(a: &Assignment, p: i64) -> Vec<i64> {
    if p <= 0 {
        Vec::new()
    } else {
        a.rows.get(&(p as usize)).cloned().unwrap_or_default()
    }
}

fn entry(a: &Assignment, i: i64, p: i64) -> i64 {
    let start = *row_range(p as usize).start();
    a.rows[&(p as usize)][(i - start) as usize]
}

/// Substituting `A = q^(2 L_{2k-1})`, `B = q^(2 L_{2k})`, `C = q^(2 L_{2k+1})`,
/// `D = q^(2 L_{2k-2})` into A21 with `n = 2k` reproduces each part of I23a
/// up to the common factor `q^(X-1) / (q - q^-1)^2`, where `X` is the argument
/// of the I23a right-hand bracket plus one.
pub fn i23a_matches_a21(k: i64, a: &Assignment) -> Result<bool, IdentityError> {
    let q = quantum_q(&a.qv)?;
    let bracket_parts = i23a_parts(k, a)?;
    let pw = |p: i64| -> Result<Vec<Rational>, IdentityError> {
        row_of(a, p).iter().map(|&x| q.pow(2 * x).map_err(IdentityError::from)).collect()
    };
    let (av, bv, cv, dv) = (pw(2 * k - 1)?, pw(2 * k)?, pw(2 * k + 1)?, pw(2 * k - 2)?);
    let mult_parts = a21_parts((2 * k) as usize, &av, &bv, &cv, &dv, &a.qv)?;
    let sum = |p: i64| row_of(a, p).iter().sum::<i64>();
    let x = sum(2 * k - 1) - sum(2 * k - 2) - sum(2 * k + 1) + sum(2 * k);
    let gap = &q - &q.recip()?;
    let g = q.pow(x - 1)? / (&gap * &gap);
    Ok(bracket_parts.iter().zip(&mult_parts).all(|(b, m)| *b == &g * m))
}

/// I24a halves equal A26 halves for `a = L_{2k}`, `b = L_{2k+1}` without its
/// last two entries, and `c` = row `2k - 1` without the excluded labels
/// followed by those two entries.
pub fn i24a_matches_a26(k: i64, a: &Assignment) -> Result<bool, IdentityError> {
    let id = IdentityId::sized(IdentityTag::I24a, k as u32);
    let x = row_of(a, 2 * k);
    let top = row_of(a, 2 * k + 1);
    let y = top[..top.len() - 2].to_vec();
    let mut z: Vec<i64> = row_range((2 * k - 1) as usize)
        .filter(|i| !a.excluded.contains(i))
        .map(|i| entry(a, i, 2 * k - 1))
        .collect();
    z.extend_from_slice(&top[top.len() - 2..]);
    for s in 0..2 {
        if i24_half_of(id, a, s)? != a26_half(&x, &y, &z, &a.qv, s)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Half `s` of I24c is minus half `1 - s` of A26 for `a = L_{2k-1} + 1`,
/// `b = L_{2k-2}` and `c` = row `2k` without the excluded labels.
pub fn i24c_matches_a26(k: i64, a: &Assignment) -> Result<bool, IdentityError> {
    let id = IdentityId::sized(IdentityTag::I24c, k as u32);
    let x: Vec<i64> = row_of(a, 2 * k - 1).iter().map(|v| v + 1).collect();
    let y = row_of(a, 2 * k - 2);
    let z: Vec<i64> = row_range((2 * k) as usize).filter(|i| !a.excluded.contains(i)).map(|i| entry(a, i, 2 * k)).collect();
    for s in 0..2 {
        if i24_half_of(id, a, s)? != -a26_half(&x, &y, &z, &a.qv, 1 - s)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The multiplicative form of A26 agrees half by half with the bracket form.
pub fn a27_matches_a26(a: &Assignment) -> Result<bool, IdentityError> {
    let (x, y, z) = (a.array("a")?, a.array("b")?, a.array("c")?);
    let halves = a27_halves(x, y, z, &a.qv)?;
    Ok(halves[0] == a26_half(x, y, z, &a.qv, 0)? && halves[1] == a26_half(x, y, z, &a.qv, 1)?)
}

#[derive(Clone, Copy)]
enum Cross {
    I23aA21(u32),
    I24aA26(u32),
    I24cA26(u32),
    A27A26(u32),
}

impl Cross {
    fn source(&self) -> IdentityId {
        match *self {
            Cross::I23aA21(k) => IdentityId::sized(IdentityTag::I23a, k),
            Cross::I24aA26(k) => IdentityId::sized(IdentityTag::I24a, k),
            Cross::I24cA26(k) => IdentityId::sized(IdentityTag::I24c, k),
            Cross::A27A26(n) => IdentityId::sized(IdentityTag::A26, n),
        }
    }

    fn name(&self) -> String {
        match *self {
            Cross::I23aA21(k) => format!("I23a:{k}~A21:{}", 2 * k),
            Cross::I24aA26(k) => format!("I24a:{k}~A26:{}", 2 * k),
            Cross::I24cA26(k) => format!("I24c:{k}~A26:{}", 2 * k - 1),
            Cross::A27A26(n) => format!("A26:{n}~multiplicative"),
        }
    }

    fn check(&self, a: &Assignment) -> Result<bool, IdentityError> {
        match *self {
            Cross::I23aA21(k) => i23a_matches_a21(k as i64, a),
            Cross::I24aA26(k) => i24a_matches_a26(k as i64, a),
            Cross::I24cA26(k) => i24c_matches_a26(k as i64, a),
            Cross::A27A26(_) => a27_matches_a26(a),
        }
    }
}

/// Each encoding pair on `trials` generic assignments of its source identity.
pub fn cross_check_suite(trials: usize, seed: u64, cfg: &SamplingConfig) -> Result<CheckReport, IdentityError> {
    let pairs = [
        Cross::I23aA21(1),
        Cross::I23aA21(2),
        Cross::I23aA21(3),
        Cross::I24aA26(2),
        Cross::I24aA26(3),
        Cross::I24cA26(1),
        Cross::I24cA26(2),
        Cross::A27A26(2),
        Cross::A27A26(3),
        Cross::A27A26(4),
    ];
    let mut report = CheckReport::new("identity_cross_checks", json!({"trials": trials, "seed": seed}));
    let mut skipped = 0usize;
    for pair in pairs {
        let outcomes: Vec<Result<Option<(Assignment, bool)>, IdentityError>> = (0..trials as u64)
            .into_par_iter()
            .map(|t| {
                let (a, _, _) = generic_assignment_with(pair.source(), seed, t, cfg)?;
                match pair.check(&a) {
                    Ok(ok) => Ok(Some((a, ok))),
                    // The other encoding can have a removable pole the source does not.
                    Err(IdentityError::Pole { .. }) => Ok(None),
                    Err(e) => Err(e),
                }
            })
            .collect();
        for (t, o) in outcomes.into_iter().enumerate() {
            match o? {
                None => skipped += 1,
                Some((_, true)) => report.record_pass(),
                Some((a, false)) => report.record_failure(Failure {
                    case: json!({"pair": pair.name(), "trial": t, "assignment": a}),
                    pattern: None,
                    residual: json!("encodings disagree"),
                }),
            }
        }
    }
    report.note("skipped_poles", json!(skipped));
    Ok(report)
}
