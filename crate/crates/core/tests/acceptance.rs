//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any criterion fails.

use std::collections::BTreeSet;
use std::process::Command;
use std::time::Instant;

use qainf::action::Engine;
use qainf::identities::{default_corpus, identity_suite, IdentityId, IdentityTag, SamplingConfig};
use qainf::patterns::{enumerate_basis, CPattern, Mode, ModuleParams, Signature};
use qainf::qnum::{QValue, Rational};
use qainf::relations::{
    boundary_suite, cartan_suite, check_charge, check_highest_weight, restrictedness_suite, serre_suite, CheckReport,
    Tightness,
};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

const SIGNATURE: &str = "-1:1:2,1,0";

fn module(qv: QValue) -> ModuleParams {
    let sig: Signature = SIGNATURE.parse().unwrap();
    ModuleParams::new(sig, Rational::from(2), Rational::from(0), qv, Mode::Completed).unwrap()
}

fn q32() -> QValue {
    "3/2".parse().unwrap()
}

fn basis(params: &ModuleParams, level: usize) -> Vec<CPattern> {
    enumerate_basis(params.signature(), level).unwrap()
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn verdict(r: &CheckReport) -> Outcome {
    if r.passed && r.checked > 0 {
        Ok(format!("{} checks", r.checked))
    } else if r.checked == 0 {
        Err(format!("{}: nothing was checked", r.relation))
    } else {
        Err(format!("{}: {} of {} failed, first witness {}", r.relation, r.failed, r.checked, serde_json::to_string(&r.failures[0]).unwrap()))
    }
}

fn cartan(params: &ModuleParams) -> Outcome {
    let b = basis(params, 5);
    if b.len() != 75 {
        return Err(format!("dim V_5 = {}, expected 75", b.len()));
    }
    verdict(&ok(cartan_suite((-6, 6), &b, &Engine::new(params.clone())))?).map(|s| format!("V_5 (dim 75), i,j in [-6,6]: {s}"))
}

fn serre(params: &ModuleParams) -> Outcome {
    let b = basis(params, 4);
    verdict(&ok(serre_suite((-4, 4), &b, &Engine::new(params.clone())))?).map(|s| format!("V_4 (dim {}), [-4,4]: {s}", b.len()))
}

/// `h_i` on the highest-weight pattern straight from the row sums, every
/// row being the signature.
fn hw_eigenvalue_from_rows(sig: &Signature, xi0: i64, xi1: i64, i: i64) -> i64 {
    let theta = |x: i64| i64::from(x >= 0);
    let p = 2 * i.abs() + theta(i);
    let sum = |p: i64| if p <= 0 { 0 } else { sig.row(p as usize).iter().sum::<i64>() };
    sum(p) - sum(p - 1) + (xi1 - xi0) * theta(-i) - xi1
}

fn highest_weight(params: &ModuleParams) -> Outcome {
    let r = ok(check_highest_weight(&Engine::new(params.clone()), (-8, 8)))?;
    let summary = verdict(&r)?;
    // Table from the statement: (2,1,0) on [-1,1] with xi = (2,0).
    let sig = params.signature();
    for i in -8..=8 {
        let table = if i >= 1 { sig.value(i) } else { sig.value(i) - 2 };
        let rows = hw_eigenvalue_from_rows(sig, 2, 0, i);
        let got = r.details["eigenvalues"][i.to_string()].as_str().unwrap_or("?").to_string();
        if got != table.to_string() || rows != table {
            return Err(format!("h_{i}: engine {got}, table {table}, row sums {rows}"));
        }
    }
    Ok(format!("E_i kills hw and h_i matches both oracles for i in [-8,8]: {summary}"))
}

fn restricted(params: &ModuleParams) -> Outcome {
    let r = ok(restrictedness_suite(&Engine::new(params.clone()), &[2, 3, 4], Tightness::Required))?;
    verdict(&r).map(|s| format!("N in {{2,3,4}} with tightness witnesses: {s}"))
}

fn boundary(params: &ModuleParams) -> Outcome {
    verdict(&ok(boundary_suite(&Engine::new(params.clone()), &[2, 3, 4, 5]))?).map(|s| format!("N in {{2..5}}: {s}"))
}

fn identities() -> Outcome {
    use IdentityTag::*;
    let corpus = default_corpus();
    let have: BTreeSet<IdentityId> = corpus.iter().copied().collect();
    let mut required: Vec<IdentityId> = [I25, I26, I27, A46L, A46R].into_iter().map(IdentityId::scalar).collect();
    required.extend([IdentityId::sized(I23a, 1), IdentityId::sized(I23b, 1), IdentityId::sized(I24a, 2)]);
    required.extend([I24b, I24c, I24d].map(|t| IdentityId::sized(t, 1)));
    required.extend([2, 4].map(|n| IdentityId::sized(A21, n)));
    required.extend([2, 3, 4].map(|n| IdentityId::sized(A26, n)));
    if let Some(missing) = required.iter().find(|id| !have.contains(id)) {
        return Err(format!("{missing} is not in the corpus"));
    }
    let start = Instant::now();
    let r = ok(identity_suite(&corpus, 100, 42, &SamplingConfig::default()))?;
    let secs = start.elapsed().as_secs_f64();
    if r.checked != 100 * corpus.len() {
        return Err(format!("{} evaluations for {} identities", r.checked, corpus.len()));
    }
    verdict(&r).map(|s| format!("{} identities x 100 trials, seed 42: {s} in {secs:.1}s", corpus.len()))
}

fn classical() -> Outcome {
    let params = module(QValue::Classical);
    let parts = [
        ("1", cartan(&params)),
        ("2", serre(&params)),
        ("3", highest_weight(&params)),
        ("4", restricted(&params)),
        ("5", boundary(&params)),
    ];
    let mut bad = Vec::new();
    for (c, o) in parts {
        if let Err(e) = o {
            bad.push(format!("criterion {c}: {e}"));
        }
    }
    if bad.is_empty() {
        Ok("criteria 1-5 pass with [x] = x".into())
    } else {
        Err(bad.join("; "))
    }
}

fn charge() -> Outcome {
    let r = ok(check_charge(&Engine::new(module(q32())), 12))?;
    verdict(&r)?;
    // sum_{i<=0} (M_i - M_{-1}) + sum_{i>=1} (M_i - M_1) = (2-2) + (1-2) + (0-0)
    if r.details["eigenvalue"] != "-1" || r.details["closed_form"] != "-1" {
        return Err(format!("eigenvalue {} closed form {}, expected -1", r.details["eigenvalue"], r.details["closed_form"]));
    }
    let partial: Vec<&str> = r.details["partial_sums"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    if partial[1..].iter().any(|s| *s != "-1") {
        return Err(format!("partial sums do not settle at W = 1: {partial:?}"));
    }
    let sig: Signature = SIGNATURE.parse().unwrap();
    let off = ModuleParams::new(sig, Rational::from(2), Rational::from(1), q32(), Mode::Small).unwrap();
    let d = ok(check_charge(&Engine::new(off), 12))?;
    if d.passed || d.failures[0].case["relation"] != "divergence" {
        return Err("xi1 = 1 was not reported as divergent".into());
    }
    Ok("eigenvalue -1 stable from W = 1; xi1 = 1 reported divergent".into())
}

fn run_cli(args: &[&str], out: &std::path::Path) -> Result<Vec<u8>, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_qainf")).args(args).arg("--out").arg(out).status().map_err(|e| e.to_string())?;
    if !status.success() {
        return Err(format!("qainf {args:?} exited with {status}"));
    }
    std::fs::read(out).map_err(|e| e.to_string())
}

fn determinism() -> Outcome {
    let dir = std::env::temp_dir().join(format!("qainf-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let runs: [&[&str]; 3] = [
        &["matrix", "--generator", "F0", "--level", "4"],
        &["matrix", "--generator", "E-1", "--level", "5"],
        &["check", "--suite", "all", "--level", "3", "--trials", "5", "--seed", "9"],
    ];
    let mut total = 0;
    for (k, args) in runs.iter().enumerate() {
        let a = run_cli(args, &dir.join(format!("{k}a.json")))?;
        let b = run_cli(args, &dir.join(format!("{k}b.json")))?;
        if a != b {
            return Err(format!("qainf {args:?} differs between runs"));
        }
        total += a.len();
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!("{} outputs byte-identical across two runs ({total} bytes)", runs.len()))
}

fn main() {
    let params = module(q32());
    let criteria: Vec<Criterion> = vec![
        ("Cartan relations", Box::new(|| cartan(&params))),
        ("Serre relations", Box::new(|| serre(&params))),
        ("highest weight", Box::new(|| highest_weight(&params))),
        ("restrictedness", Box::new(|| restricted(&params))),
        ("boundary formula", Box::new(|| boundary(&params))),
        ("identity corpus", Box::new(identities)),
        ("classical limit", Box::new(classical)),
        ("charge operator", Box::new(charge)),
        ("determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (n, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {}: PASS {name} ({secs:.1}s): {msg}", n + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL {name} ({secs:.1}s): {msg}", n + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} of {} criteria failed", criteria.len());
        std::process::exit(1);
    }
    println!("all {} criteria passed", criteria.len());
}
