//! Properties of the module itself: the highest-weight vector, restrictedness
//! of the action on `V_N`, the boundary form of `f_k`, and the charge.

use std::fmt;

use serde_json::{json, Value};

use super::{run_cases, vector_json, CheckReport, Failure, RelationError};
use crate::action::{ActionError, Engine, GeneratorLabel, PatternVector};
use crate::patterns::{enumerate_basis, highest_weight_pattern, shift, CPattern, WeightVector};
use crate::qnum::{qbracket, radical_of, Rational};

use GeneratorLabel::{E, F, H};

/// The open interval `(lo2 / 2, hi2 / 2)`, stored with doubled endpoints so
/// half-integers stay exact.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OpenInterval {
    pub lo2: i64,
    pub hi2: i64,
}

impl OpenInterval {
    pub fn contains(&self, k: i64) -> bool {
        self.lo2 < 2 * k && 2 * k < self.hi2
    }

    /// Smallest and largest integers inside, if any.
    pub fn integer_ends(&self) -> Option<(i64, i64)> {
        let first = self.lo2.div_euclid(2) + 1;
        let last = (self.hi2 - 1).div_euclid(2);
        (first <= last).then_some((first, last))
    }

    /// Interval where `e_k` may act nonzero on `V_N`.
    pub fn raising(level: usize) -> Self {
        let n = level as i64;
        OpenInterval { lo2: -(n + 1), hi2: n - 2 }
    }

    /// Interval where `f_k` may act nonzero on `V_N`.
    pub fn lowering(level: usize, m: i64, n: i64) -> Self {
        let nn = level as i64;
        OpenInterval { lo2: (-(nn + 3)).min(2 * (m - 1)), hi2: nn.max(2 * n) }
    }

    /// Interval where `h_k` may have a nonzero eigenvalue on `V_N`.
    pub fn cartan(level: usize, m: i64, n: i64) -> Self {
        let nn = level as i64;
        OpenInterval { lo2: (-(nn + 1)).min(2 * m), hi2: nn.max(2 * n) }
    }
}

impl fmt::Display for OpenInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let half = |x: i64| Rational::from(x) / Rational::from(2);
        write!(f, "({}, {})", half(self.lo2), half(self.hi2))
    }
}

/// Twice `r_N = max((N+3)/2, 1-m, n)`.
fn doubled_r(level: usize, m: i64, n: i64) -> i64 {
    (level as i64 + 3).max(2 * (1 - m)).max(2 * n)
}

fn h_value(engine: &Engine, p: &CPattern, i: i64) -> Result<Rational, ActionError> {
    let v = engine.apply(H(i), p)?;
    Ok(v.get(p).map(|c| c.as_rational().expect("h acts by rationals")).unwrap_or_else(Rational::zero))
}

/// `e_i` kills the highest-weight pattern and `h_i` acts on it by
/// `M_i - xi1` (`i >= 1`) or `M_i - xi0` (`i <= 0`), for `i` in `window`.
pub fn check_highest_weight(engine: &Engine, window: (i64, i64)) -> Result<CheckReport, RelationError> {
    let params = engine.params();
    let hw = highest_weight_pattern(params.signature());
    let mut report = CheckReport::new("highest_weight", json!({"window": [window.0, window.1]}));
    let mut eigen = serde_json::Map::new();
    for i in window.0..=window.1 {
        let image = engine.apply(E(i), &hw)?;
        if image.is_zero() {
            report.record_pass();
        } else {
            report.record_failure(Failure {
                case: json!({"relation": "annihilation", "i": i}),
                pattern: Some(hw.clone()),
                residual: vector_json(&image),
            });
        }
        let got = h_value(engine, &hw, i)?;
        let want = WeightVector::asymptotic(params, i);
        eigen.insert(i.to_string(), json!(got.to_string()));
        if got == want {
            report.record_pass();
        } else {
            report.record_failure(Failure {
                case: json!({"relation": "eigenvalue", "i": i, "expected": want.to_string()}),
                pattern: Some(hw.clone()),
                residual: json!((&got - &want).to_string()),
            });
        }
    }
    report.note("eigenvalues", Value::Object(eigen));
    Ok(report)
}

#[derive(Clone, Copy)]
enum Rule {
    /// The image must vanish (`which` names the bound).
    Vanish(GeneratorLabel, &'static str),
    /// The `h_k` eigenvalue must vanish.
    ZeroWeight(i64, &'static str),
    /// `e_k` maps `V_N` into `V_N`.
    Stable(i64),
}

/// Whether a missing tightness witness fails the report.
///
/// The bounds hold for every module, but a witness exists only when the
/// signature leaves room: at `N = 2` the space `V_2` of `(1, 0)` is the
/// highest-weight line alone, where every `e_k` vanishes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Tightness {
    Required,
    #[default]
    Reported,
}

/// The vanishing bounds for `e_k`, `f_k`, `h_k` on `V_N`, the combined bound
/// `|k| >= r_N`, stability of `V_N` under the raising operators that may act,
/// and a nonzero witness just inside each interval.
///
/// The `h_k` bound presumes `xi0 = M_m`, `xi1 = M_n`; with other labels the
/// far eigenvalues are the nonzero constants `M_m - xi0`, `M_n - xi1` and that
/// part is skipped (noted in the report).
pub fn check_restrictedness(engine: &Engine, level: usize, tightness: Tightness) -> Result<CheckReport, RelationError> {
    if level < 2 {
        return Err(RelationError::Precondition(format!("restrictedness needs N > 1, got {level}")));
    }
    let params = engine.params();
    let sig = params.signature();
    let (m, n) = (sig.m(), sig.n());
    let basis = enumerate_basis(sig, level)?;
    let e_int = OpenInterval::raising(level);
    let f_int = OpenInterval::lowering(level, m, n);
    let h_int = OpenInterval::cartan(level, m, n);
    let r2 = doubled_r(level, m, n);
    let with_h = params.xi_matches_tails();

    let mut report = CheckReport::new(
        "restrictedness",
        json!({
            "N": level,
            "basis_size": basis.len(),
            "e_interval": e_int.to_string(),
            "f_interval": f_int.to_string(),
            "h_interval": h_int.to_string(),
            "r_N": (Rational::from(r2) / Rational::from(2)).to_string(),
        }),
    );
    if !with_h {
        report.note("h_bound", json!("skipped: xi0, xi1 differ from the signature tails"));
    }

    let reach = r2.div_euclid(2) + 3;
    let mut rules = Vec::new();
    for k in -reach..=reach {
        let beyond = 2 * k.abs() >= r2;
        if !e_int.contains(k) {
            rules.push(Rule::Vanish(E(k), "e_bound"));
        } else {
            rules.push(Rule::Stable(k));
        }
        if !f_int.contains(k) {
            rules.push(Rule::Vanish(F(k), "f_bound"));
        }
        if with_h && !h_int.contains(k) {
            rules.push(Rule::ZeroWeight(k, "h_bound"));
        }
        if beyond {
            rules.push(Rule::Vanish(E(k), "r_N"));
            rules.push(Rule::Vanish(F(k), "r_N"));
            if with_h {
                rules.push(Rule::ZeroWeight(k, "r_N"));
            }
        }
    }
    run_cases(&mut report, &rules, &basis, |rule, p| {
        Ok(match *rule {
            Rule::Vanish(g, which) => {
                let v = engine.apply(g, p)?;
                (!v.is_zero()).then(|| Failure {
                    case: json!({"relation": which, "generator": g}),
                    pattern: Some(p.clone()),
                    residual: vector_json(&v),
                })
            }
            Rule::ZeroWeight(k, which) => {
                let h = h_value(engine, p, k)?;
                (!h.is_zero()).then(|| Failure {
                    case: json!({"relation": which, "generator": H(k)}),
                    pattern: Some(p.clone()),
                    residual: json!(h.to_string()),
                })
            }
            Rule::Stable(k) => {
                let v = engine.apply(E(k), p)?;
                let escaped: PatternVector = {
                    let mut out = PatternVector::zero();
                    for (t, c) in v.iter().filter(|(t, _)| t.level() > level) {
                        out.add_term(t.clone(), c.clone());
                    }
                    out
                };
                (!escaped.is_zero()).then(|| Failure {
                    case: json!({"relation": "stability", "generator": E(k)}),
                    pattern: Some(p.clone()),
                    residual: vector_json(&escaped),
                })
            }
        })
    })?;

    // Tightness: some pattern is moved by the generator just inside each end.
    let mut witnesses = Vec::new();
    let mut missing = Vec::new();
    let mut probes: Vec<(GeneratorLabel, OpenInterval)> = Vec::new();
    if let Some((a, b)) = e_int.integer_ends() {
        probes.push((E(a), e_int));
        probes.push((E(b), e_int));
    }
    if let Some((a, b)) = f_int.integer_ends() {
        probes.push((F(a), f_int));
        probes.push((F(b), f_int));
    }
    if with_h {
        if let Some((a, b)) = h_int.integer_ends() {
            probes.push((H(a), h_int));
            probes.push((H(b), h_int));
        }
    }
    for (g, interval) in probes {
        let mut found = None;
        for p in &basis {
            let moved = match g {
                H(k) => !h_value(engine, p, k)?.is_zero(),
                _ => !engine.apply(g, p)?.is_zero(),
            };
            if moved {
                found = Some(p.clone());
                break;
            }
        }
        match found {
            Some(p) => witnesses.push(json!({"generator": g, "interval": interval.to_string(), "pattern": p})),
            None if tightness == Tightness::Required => report.fail_with(Failure {
                case: json!({"relation": "tightness", "generator": g, "interval": interval.to_string()}),
                pattern: None,
                residual: json!("acts as zero on every pattern of V_N"),
            }),
            None => missing.push(json!({"generator": g, "interval": interval.to_string()})),
        }
    }
    report.note("tightness_witnesses", Value::Array(witnesses));
    if !missing.is_empty() {
        report.note("tightness_missing", Value::Array(missing));
    }
    Ok(report)
}

/// Restrictedness for each level in `levels`.
pub fn restrictedness_suite(engine: &Engine, levels: &[usize], tightness: Tightness) -> Result<CheckReport, RelationError> {
    let mut report = CheckReport::new(
        "restrictedness",
        json!({"levels": levels, "tightness_required": tightness == Tightness::Required}),
    );
    let mut per_level = Vec::new();
    for &level in levels {
        let r = check_restrictedness(engine, level, tightness)?;
        per_level.push(json!({"N": level, "params": r.params, "details": r.details}));
        report.checked += r.checked;
        report.failed += r.failed;
        report.passed &= r.passed;
        for f in r.failures {
            if report.failures.len() < super::MAX_WITNESSES {
                report.failures.push(f);
            }
        }
    }
    report.note("levels", Value::Array(per_level));
    Ok(report)
}

/// For `k >= N/2`, `f_k` on `V_N` is the single term lowering `M_{k,2k+1}` and
/// `M_{k,2k+2}` with coefficient `-sqrt|[M_{k+1} - M_k]|`, and zero once `k >= n`.
pub fn check_boundary_f(engine: &Engine, level: usize, k: i64) -> Result<CheckReport, RelationError> {
    if level < 2 || 2 * k < level as i64 {
        return Err(RelationError::Precondition(format!("boundary form needs k >= N/2, got k = {k}, N = {level}")));
    }
    let params = engine.params();
    let sig = params.signature();
    let basis = enumerate_basis(sig, level)?;
    let gap = sig.value(k + 1) - sig.value(k);
    let mut report = CheckReport::new("boundary", json!({"N": level, "k": k, "basis_size": basis.len()}));
    let row = (2 * k + 1) as usize;
    let coeff = if gap == 0 {
        None
    } else {
        let b = qbracket(gap, params.qv()).map_err(ActionError::from)?;
        Some(radical_of(&b.abs()).map_err(ActionError::from)?.neg())
    };
    let vanish = k >= sig.n();
    let cases = [false, true];
    run_cases(&mut report, &cases[..1 + usize::from(vanish)], &basis, |&only_vanish, p| {
        let general = engine.apply(F(k), p)?;
        let expected = if only_vanish {
            PatternVector::zero()
        } else {
            let mut v = PatternVector::zero();
            if let Some(c) = &coeff {
                let target = shift(p, &[(k, row, -1), (k, row + 1, -1)])?;
                match target.into_pattern() {
                    Some(t) => v.add_term(t, c.clone()),
                    None => {
                        return Ok(Some(Failure {
                            case: json!({"relation": "boundary_target", "k": k}),
                            pattern: Some(p.clone()),
                            residual: json!("closed-form target is not a C-pattern"),
                        }))
                    }
                }
            }
            v
        };
        let diff = general.sub(&expected);
        Ok((!diff.is_zero()).then(|| Failure {
            case: json!({"relation": if only_vanish { "boundary_vanish" } else { "boundary" }, "k": k}),
            pattern: Some(p.clone()),
            residual: vector_json(&diff),
        }))
    })?;
    Ok(report)
}

/// The boundary form at every `k` from `ceil(N/2)` to `max(n, ceil(N/2)) + 2`,
/// for each level.
pub fn boundary_suite(engine: &Engine, levels: &[usize]) -> Result<CheckReport, RelationError> {
    let n = engine.params().signature().n();
    let mut report = CheckReport::new("boundary", json!({"levels": levels}));
    for &level in levels {
        let start = (level as i64 + 1) / 2;
        for k in start..=n.max(start) + 2 {
            report.absorb(check_boundary_f(engine, level, k)?);
        }
    }
    Ok(report)
}

/// `sum_{i <= 0} (M_i - M_m) + sum_{i >= 1} (M_i - M_n)`, read off the signature.
pub fn charge_closed_form(sig: &crate::patterns::Signature) -> i64 {
    let (m, n) = (sig.m(), sig.n());
    let left: i64 = (m.min(0)..=0).map(|i| sig.value(i) - sig.value(m)).sum();
    let right: i64 = (1..=n.max(1)).map(|i| sig.value(i) - sig.value(n)).sum();
    left + right
}

/// Eigenvalue of `I = sum_i h_i` on the highest-weight pattern from the
/// partial sums over `|i| <= W`, `W <= window_cap`. They must stop changing
/// at `W = max(|m|, n)` and equal [`charge_closed_form`]; otherwise the tail
/// is nonzero and the sum diverges.
pub fn check_charge(engine: &Engine, window_cap: i64) -> Result<CheckReport, RelationError> {
    let params = engine.params();
    let sig = params.signature();
    let hw = highest_weight_pattern(sig);
    let w0 = sig.m().abs().max(sig.n());
    let cap = window_cap.max(w0 + 2);
    let mut report = CheckReport::new(
        "charge",
        json!({"window_cap": cap, "stabilization_W": w0, "xi0": params.xi0(), "xi1": params.xi1()}),
    );
    // Individual terms, so a tail that cancels in symmetric sums is still caught.
    let mut terms = Vec::new();
    for i in -cap..=cap {
        terms.push((i, h_value(engine, &hw, i)?));
    }
    let mut partial = Vec::new();
    for w in 0..=cap {
        let s: Rational = terms.iter().filter(|(i, _)| i.abs() <= w).map(|(_, h)| h.clone()).sum();
        partial.push(s);
    }
    report.note("partial_sums", json!(partial.iter().map(|r| r.to_string()).collect::<Vec<_>>()));
    let stable = &partial[w0 as usize];
    let drift: Vec<&(i64, Rational)> = terms.iter().filter(|(i, h)| i.abs() > w0 && !h.is_zero()).collect();
    if drift.is_empty() {
        report.record_pass();
        report.note("eigenvalue", json!(stable.to_string()));
    } else {
        report.record_failure(Failure {
            case: json!({"relation": "divergence", "from_W": w0 + 1}),
            pattern: Some(hw.clone()),
            residual: json!(drift.iter().map(|(i, h)| json!({"i": i, "h_i": h.to_string()})).collect::<Vec<_>>()),
        });
    }
    let closed = Rational::from(charge_closed_form(sig));
    report.note("closed_form", json!(closed.to_string()));
    if drift.is_empty() {
        if *stable == closed {
            report.record_pass();
        } else {
            report.record_failure(Failure {
                case: json!({"relation": "charge_value", "expected": closed.to_string()}),
                pattern: Some(hw),
                residual: json!((stable - &closed).to_string()),
            });
        }
    }
    Ok(report)
}
