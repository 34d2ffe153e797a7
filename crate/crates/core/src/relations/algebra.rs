//! Cartan and Serre relations.

use serde_json::json;

use super::{combination, commutator, run_cases, vector_json, CheckReport, Failure, RelationError};
use crate::action::{Engine, GeneratorLabel, PatternVector};
use crate::patterns::{h_eigenvalue, theta, CPattern};
use crate::qnum::{qbracket, RadicalSum, Rational};

use GeneratorLabel::{C, E, F, H};

type Terms = Vec<(RadicalSum, Vec<GeneratorLabel>)>;

enum Case {
    /// A fixed combination of words that must vanish.
    Fixed { tag: &'static str, i: i64, j: i64, terms: Terms },
    /// `[e_i, f_i] - [lambda]`, with `lambda` read off each pattern.
    EF { i: i64 },
}

fn scalar(r: i64) -> RadicalSum {
    RadicalSum::from_rational(Rational::from(r))
}

fn cartan_cases(i: i64, j: i64) -> Vec<Case> {
    let delta = i64::from(i == j) - i64::from(i == j + 1);
    let mut cases = Vec::new();
    if i == j {
        for a in [H(i), E(i), F(i)] {
            cases.push(Case::Fixed { tag: "1a", i, j, terms: commutator(C, a) });
        }
    }
    cases.push(Case::Fixed { tag: "1b", i, j, terms: commutator(H(i), H(j)) });
    let mut t = commutator(H(i), E(j));
    t.push((scalar(-delta), vec![E(j)]));
    cases.push(Case::Fixed { tag: "1c", i, j, terms: t });
    let mut t = commutator(H(i), F(j));
    t.push((scalar(delta), vec![F(j)]));
    cases.push(Case::Fixed { tag: "1d", i, j, terms: t });
    if i == j {
        cases.push(Case::EF { i });
    } else {
        cases.push(Case::Fixed { tag: "1f", i, j, terms: commutator(E(i), F(j)) });
    }
    cases
}

/// `h_i - h_{i+1} + (theta(-i) - theta(-i-1)) c` on `p`, which must be an integer.
fn ef_argument(engine: &Engine, p: &CPattern, i: i64) -> Result<i64, RelationError> {
    let params = engine.params();
    let c = params.xi0() - params.xi1();
    let lambda = h_eigenvalue(p, i, params) - h_eigenvalue(p, i + 1, params) + c * Rational::from(theta(-i) - theta(-i - 1));
    lambda.to_i64().filter(|_| lambda.is_integer()).ok_or_else(|| RelationError::NonIntegerBracket {
        i,
        pattern: p.to_string(),
        value: lambda.to_string(),
    })
}

fn check_case(engine: &Engine, case: &Case, p: &CPattern) -> Result<Option<Failure>, RelationError> {
    let (residual, label) = match case {
        Case::Fixed { tag, i, j, terms } => (combination(engine, p, terms)?, json!({"relation": tag, "i": i, "j": j})),
        Case::EF { i } => {
            let lambda = ef_argument(engine, p, *i)?;
            let b = qbracket(lambda, engine.params().qv()).map_err(crate::action::ActionError::from)?;
            let mut terms = commutator(E(*i), F(*i));
            terms.push((RadicalSum::from_rational(-b), vec![]));
            (combination(engine, p, &terms)?, json!({"relation": "1e", "i": i, "j": i, "lambda": lambda}))
        }
    };
    Ok(failure(residual, label, p))
}

fn failure(residual: PatternVector, case: serde_json::Value, p: &CPattern) -> Option<Failure> {
    if residual.is_zero() {
        None
    } else {
        Some(Failure { case, pattern: Some(p.clone()), residual: vector_json(&residual) })
    }
}

/// Relations (1a)-(1f) for the index pair `(i, j)` on every pattern of `basis`.
/// (1a) and (1e) are only checked when `i = j`.
pub fn check_cartan(i: i64, j: i64, basis: &[CPattern], engine: &Engine) -> Result<CheckReport, RelationError> {
    let mut report = CheckReport::new("cartan", json!({"i": i, "j": j, "basis_size": basis.len()}));
    let cases = cartan_cases(i, j);
    run_cases(&mut report, &cases, basis, |c, p| check_case(engine, c, p))?;
    Ok(report)
}

/// (1a)-(1f) for all `i, j` in `window`.
pub fn cartan_suite(window: (i64, i64), basis: &[CPattern], engine: &Engine) -> Result<CheckReport, RelationError> {
    let mut report =
        CheckReport::new("cartan", json!({"window": [window.0, window.1], "basis_size": basis.len()}));
    let mut cases = Vec::new();
    for i in window.0..=window.1 {
        for j in window.0..=window.1 {
            cases.extend(cartan_cases(i, j));
        }
    }
    run_cases(&mut report, &cases, basis, |c, p| check_case(engine, c, p))?;
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SerreFamily {
    E,
    F,
}

/// `A`: `[x_i, x_j] = 0` for `|i - j| != 1`; `B`, `C`: the cubic relations at `(i, i+1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SerreVariant {
    A,
    B,
    C,
}

fn serre_tag(family: SerreFamily, variant: SerreVariant) -> &'static str {
    match (family, variant) {
        (SerreFamily::E, SerreVariant::A) => "2a",
        (SerreFamily::E, SerreVariant::B) => "2b",
        (SerreFamily::E, SerreVariant::C) => "2c",
        (SerreFamily::F, SerreVariant::A) => "3a",
        (SerreFamily::F, SerreVariant::B) => "3b",
        (SerreFamily::F, SerreVariant::C) => "3c",
    }
}

fn serre_case(
    family: SerreFamily,
    variant: SerreVariant,
    i: i64,
    j: i64,
    engine: &Engine,
) -> Result<Case, RelationError> {
    let x = |k: i64| match family {
        SerreFamily::E => E(k),
        SerreFamily::F => F(k),
    };
    let tag = serre_tag(family, variant);
    let two = RadicalSum::from_rational(qbracket(2, engine.params().qv()).map_err(crate::action::ActionError::from)?);
    let one = RadicalSum::one();
    let cubic = |a: i64, b: i64| -> Terms {
        vec![
            (one.clone(), vec![x(a), x(a), x(b)]),
            (two.neg(), vec![x(a), x(b), x(a)]),
            (one.clone(), vec![x(b), x(a), x(a)]),
        ]
    };
    let terms = match variant {
        SerreVariant::A => {
            if (i - j).abs() == 1 {
                return Err(RelationError::Precondition(format!("{tag} needs |i - j| != 1, got i = {i}, j = {j}")));
            }
            commutator(x(i), x(j))
        }
        SerreVariant::B => cubic(i, i + 1),
        SerreVariant::C => cubic(i + 1, i),
    };
    let j = if variant == SerreVariant::A { j } else { i + 1 };
    Ok(Case::Fixed { tag, i, j, terms })
}

/// One Serre relation on every pattern of `basis`. `j` is only used by the
/// commutation variant.
pub fn check_serre(
    family: SerreFamily,
    variant: SerreVariant,
    i: i64,
    j: i64,
    basis: &[CPattern],
    engine: &Engine,
) -> Result<CheckReport, RelationError> {
    let case = serre_case(family, variant, i, j, engine)?;
    let tag = serre_tag(family, variant);
    let mut report = CheckReport::new("serre", json!({"relation": tag, "i": i, "j": j, "basis_size": basis.len()}));
    run_cases(&mut report, &[case], basis, |c, p| check_case(engine, c, p))?;
    Ok(report)
}

/// All six Serre relations with indices in `window`.
pub fn serre_suite(window: (i64, i64), basis: &[CPattern], engine: &Engine) -> Result<CheckReport, RelationError> {
    let mut report = CheckReport::new("serre", json!({"window": [window.0, window.1], "basis_size": basis.len()}));
    let mut cases = Vec::new();
    for family in [SerreFamily::E, SerreFamily::F] {
        for i in window.0..=window.1 {
            for j in i + 2..=window.1 {
                cases.push(serre_case(family, SerreVariant::A, i, j, engine)?);
            }
            cases.push(serre_case(family, SerreVariant::B, i, i + 1, engine)?);
            cases.push(serre_case(family, SerreVariant::C, i, i + 1, engine)?);
        }
    }
    run_cases(&mut report, &cases, basis, |c, p| check_case(engine, c, p))?;
    Ok(report)
}
