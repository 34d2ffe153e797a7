//! Seeded generic assignments and the fuzzing driver.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use super::eval::i24_layout;
use super::{evaluate_identity, Assignment, IdentityError, IdentityId, IdentityTag};
use crate::patterns::row_range;
use crate::qnum::{QValue, Rational};
use crate::relations::{CheckReport, Failure};

pub const DEFAULT_MAX_RETRIES: usize = 10_000;

/// Where random assignments come from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamplingConfig {
    /// Inclusive range for integer symbols.
    pub range: (i64, i64),
    pub q_pool: Vec<Rational>,
    pub max_retries: usize,
}

impl Default for SamplingConfig {
    fn default() -> Self {
        let q = |s: &str| s.parse::<Rational>().expect("literal");
        SamplingConfig { range: (-12, 12), q_pool: vec![q("3/2"), q("2"), q("5/3"), q("7/4")], max_retries: DEFAULT_MAX_RETRIES }
    }
}

/// The identities and sizes exercised by default.
pub fn default_corpus() -> Vec<IdentityId> {
    use IdentityTag::*;
    let mut out = Vec::new();
    for k in 1..=3 {
        out.push(IdentityId::sized(I23a, k));
    }
    for k in 1..=2 {
        out.push(IdentityId::sized(I23b, k));
    }
    for k in 2..=3 {
        out.push(IdentityId::sized(I24a, k));
    }
    for tag in [I24b, I24c, I24d] {
        for k in 1..=2 {
            out.push(IdentityId::sized(tag, k));
        }
    }
    out.extend([IdentityId::scalar(I25), IdentityId::scalar(I26), IdentityId::scalar(I27)]);
    out.extend([IdentityId::sized(A21, 2), IdentityId::sized(A21, 4)]);
    for n in 2..=4 {
        out.push(IdentityId::sized(A26, n));
    }
    out.extend([IdentityId::scalar(A46L), IdentityId::scalar(A46R)]);
    out
}

/// FNV-1a, so the per-identity stream does not depend on std's hasher.
fn fnv(s: &str) -> u64 {
    s.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

fn rng_for(id: IdentityId, seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv(&id.to_string()));
    rng.set_stream(trial);
    rng
}

fn int(rng: &mut ChaCha8Rng, cfg: &SamplingConfig) -> i64 {
    rng.gen_range(cfg.range.0..=cfg.range.1)
}

/// A row of `len` integers; strictly decreasing (like a real L-row) when
/// `decreasing` is set and the range is wide enough.
fn row(rng: &mut ChaCha8Rng, cfg: &SamplingConfig, len: usize, decreasing: bool) -> Vec<i64> {
    let pool: Vec<i64> = (cfg.range.0..=cfg.range.1).collect();
    if decreasing && pool.len() >= len {
        let mut v: Vec<i64> = pool.choose_multiple(rng, len).copied().collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        v
    } else {
        (0..len).map(|_| int(rng, cfg)).collect()
    }
}

fn nonzero_rational(rng: &mut ChaCha8Rng, cfg: &SamplingConfig) -> Rational {
    loop {
        let n = int(rng, cfg);
        if n != 0 {
            let d: i64 = rng.gen_range(1..=6);
            return Rational::new(n, d).expect("positive denominator");
        }
    }
}

fn draw(id: IdentityId, rng: &mut ChaCha8Rng, cfg: &SamplingConfig) -> Result<Assignment, IdentityError> {
    use IdentityTag::*;
    let q = cfg.q_pool.choose(rng).cloned().ok_or_else(|| IdentityError::BadAssignment("empty q pool".into()))?;
    let mut a = Assignment::new(QValue::quantum(q.clone())?);
    let decreasing = rng.gen_bool(0.5);
    let rows = |a: &mut Assignment, ps: &[i64], rng: &mut ChaCha8Rng| {
        for &p in ps {
            if p > 0 {
                a.rows.insert(p as usize, row(rng, cfg, p as usize, decreasing));
            }
        }
    };
    match id.tag {
        I23a => {
            let k = id.k();
            rows(&mut a, &[2 * k - 2, 2 * k - 1, 2 * k, 2 * k + 1], rng);
        }
        I23b => {
            let k = id.k();
            rows(&mut a, &[2 * k - 1, 2 * k, 2 * k + 1, 2 * k + 2], rng);
        }
        I24a | I24b | I24c | I24d => {
            let (c, full, excl, _) = i24_layout(id.tag, id.k());
            rows(&mut a, &[c as i64, full as i64, excl as i64], rng);
            let labels: Vec<i64> = row_range(excl).collect();
            a.excluded = labels.choose_multiple(rng, 2).copied().collect();
            a.excluded.sort_unstable();
        }
        A26 => {
            let n = id.k() as usize;
            for (name, len) in [("a", n), ("b", n - 1), ("c", n - 1)] {
                a.arrays.insert(name.into(), (0..len).map(|_| int(rng, cfg)).collect());
            }
        }
        A21 => {
            let n = id.k() as usize;
            // Either the q^(2L) points the relations use, or arbitrary rationals.
            let powers = rng.gen_bool(0.5);
            for (name, len) in [("A", n - 1), ("B", n), ("C", n + 1), ("D", n - 2)] {
                let vals = (0..len)
                    .map(|_| if powers { q.pow(2 * int(rng, cfg)) } else { Ok(nonzero_rational(rng, cfg)) })
                    .collect::<Result<Vec<_>, _>>()?;
                a.variables.insert(name.into(), vals);
            }
        }
        I25 | I26 | I27 | A46L | A46R => {
            let names: &[&str] = match id.tag {
                I25 => &["a", "b", "c", "d", "e"],
                I26 => &["a", "b"],
                I27 => &["a"],
                _ => &["a", "b", "c", "d"],
            };
            for n in names {
                a.scalars.insert(n.to_string(), int(rng, cfg));
            }
        }
    }
    Ok(a)
}

/// A generic assignment for `id` plus the number of rejected draws.
/// Deterministic in `(id, seed, trial)`.
pub fn generic_assignment_with(
    id: IdentityId,
    seed: u64,
    trial: u64,
    cfg: &SamplingConfig,
) -> Result<(Assignment, Rational, usize), IdentityError> {
    let mut rng = rng_for(id, seed, trial);
    for rejected in 0..cfg.max_retries {
        let a = draw(id, &mut rng, cfg)?;
        match evaluate_identity(id, &a) {
            Ok(v) => return Ok((a, v, rejected)),
            Err(IdentityError::Pole { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(IdentityError::NoGenericPoint { identity: id.to_string(), retries: cfg.max_retries })
}

/// The first generic assignment drawn from `seed` with the default sampling.
pub fn random_generic_assignment(id: IdentityId, seed: u64) -> Result<Assignment, IdentityError> {
    generic_assignment_with(id, seed, 0, &SamplingConfig::default()).map(|(a, _, _)| a)
}

/// `trials` generic evaluations of `id`; passes when each is exactly zero.
pub fn fuzz_identity(id: IdentityId, trials: usize, seed: u64, cfg: &SamplingConfig) -> Result<CheckReport, IdentityError> {
    let outcomes: Vec<Result<(Assignment, Rational, usize), IdentityError>> =
        (0..trials as u64).into_par_iter().map(|t| generic_assignment_with(id, seed, t, cfg)).collect();
    let mut report = CheckReport::new(id.to_string(), json!({"identity": id, "trials": trials, "seed": seed}));
    let mut rejections = 0;
    for (t, o) in outcomes.into_iter().enumerate() {
        let (a, v, rejected) = o?;
        rejections += rejected;
        if v.is_zero() {
            report.record_pass();
        } else {
            report.record_failure(Failure {
                case: json!({"identity": id, "trial": t, "assignment": a}),
                pattern: None,
                residual: json!(v.to_string()),
            });
        }
    }
    report.note("rejections", json!(rejections));
    Ok(report)
}

/// Every identity of `corpus`, `trials` times each.
pub fn identity_suite(
    corpus: &[IdentityId],
    trials: usize,
    seed: u64,
    cfg: &SamplingConfig,
) -> Result<CheckReport, IdentityError> {
    let mut report = CheckReport::new("identities", json!({"trials": trials, "seed": seed}));
    let mut per = serde_json::Map::new();
    for &id in corpus {
        let r = fuzz_identity(id, trials, seed, cfg)?;
        per.insert(id.to_string(), json!({"checked": r.checked, "failed": r.failed, "rejections": r.details["rejections"]}));
        report.absorb(CheckReport { details: Default::default(), ..r });
    }
    report.note("per_identity", serde_json::Value::Object(per));
    Ok(report)
}
