use std::collections::BTreeMap;
use std::path::Path;
use std::process::{Command, Output};

use qainf::action::{Engine, GeneratorLabel};
use qainf::patterns::{enumerate_basis, weight_of, Mode, ModuleParams, Signature};
use qainf::qnum::{QValue, RadicalSum, Rational};
use serde_json::Value;

fn qainf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qainf")).args(args).output().expect("binary runs")
}

fn json_out(args: &[&str], dir: &Path, name: &str) -> (i32, Value) {
    let out = dir.join(name);
    let o = Command::new(env!("CARGO_BIN_EXE_qainf")).args(args).arg("--out").arg(&out).output().unwrap();
    let code = o.status.code().unwrap();
    let doc = std::fs::read_to_string(&out).map(|t| serde_json::from_str(&t).unwrap()).unwrap_or(Value::Null);
    (code, doc)
}

fn module() -> ModuleParams {
    let sig: Signature = "-1:1:2,1,0".parse().unwrap();
    ModuleParams::new(sig, Rational::from(2), Rational::from(0), "3/2".parse().unwrap(), Mode::Small).unwrap()
}

#[test]
fn basis_listing() {
    let dir = tempfile::tempdir().unwrap();
    let (code, doc) = json_out(&["basis", "--signature", "-1:1:2,1,0", "--level", "5"], dir.path(), "b.json");
    assert_eq!(code, 0);
    assert_eq!(doc["schema"], "qainf.basis/1");
    assert_eq!(doc["count"], 75);
    let (_, hw) = json_out(&["basis", "--level", "2", "--signature", "0:1:1,0"], dir.path(), "hw.json");
    assert_eq!(hw["count"], 1);
    let (_, free) = json_out(&["basis", "--level", "2", "--signature", "-1:0:1,0"], dir.path(), "free.json");
    assert_eq!(free["count"], 2);
}

#[test]
fn exit_codes() {
    let up = qainf(&["basis", "--signature", "0:1:0,1"]);
    assert_eq!(up.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&up.stderr).contains("nonincreasing"));
    assert_eq!(qainf(&["check", "--suite", "nonsense"]).status.code(), Some(2));
    assert_eq!(qainf(&["check", "--q", "-2"]).status.code(), Some(2));
    assert_eq!(qainf(&["basis", "--config", "/nonexistent/run.json"]).status.code(), Some(2));
    let mismatched = qainf(&["check", "--suite", "charge", "--mode", "A_infinity", "--xi1", "1"]);
    assert_eq!(mismatched.status.code(), Some(2));
}

#[test]
fn charge_divergence_fails_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let (code, doc) = json_out(&["check", "--suite", "charge", "--xi1", "1"], dir.path(), "c.json");
    assert_eq!(code, 1);
    assert_eq!(doc["passed"], false);
    assert_eq!(doc["reports"][0]["failures"][0]["case"]["relation"], "divergence");
    let (ok, _) = json_out(&["check", "--suite", "charge", "--mode", "A_infinity"], dir.path(), "ok.json");
    assert_eq!(ok, 0);
}

#[test]
fn all_suites_on_the_smallest_module() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["check", "--signature", "0:1:1,0", "--level", "4", "--q", "3/2", "--trials", "10"];
    let (code, doc) = json_out(&args, dir.path(), "all.json");
    assert_eq!(code, 0, "{doc}");
    let relations: Vec<&str> = doc["reports"].as_array().unwrap().iter().map(|r| r["relation"].as_str().unwrap()).collect();
    assert_eq!(
        relations,
        ["cartan", "serre", "highest_weight", "restrictedness", "boundary", "charge", "identities", "identity_cross_checks"]
    );
    // The same module cannot witness every bound at N = 2.
    let strict: Vec<&str> = args.iter().copied().chain(["--suite", "restricted", "--require-tightness"]).collect();
    let (code, _) = json_out(&strict, dir.path(), "strict.json");
    assert_eq!(code, 1);
}

#[test]
fn identities_alias() {
    let dir = tempfile::tempdir().unwrap();
    let (a, da) = json_out(&["identities", "--trials", "3", "--seed", "5"], dir.path(), "a.json");
    let (b, db) = json_out(&["check", "--suite", "identities", "--trials", "3", "--seed", "5"], dir.path(), "b.json");
    assert_eq!((a, b), (0, 0));
    assert_eq!(da["reports"], db["reports"]);
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"signature": "-1:1:2,1,0", "level": 3, "xi0": "5/2", "q": "classical"}"#).unwrap();
    let (code, doc) = json_out(&["basis", "--config", cfg.to_str().unwrap(), "--level", "4"], dir.path(), "b.json");
    assert_eq!(code, 0);
    assert_eq!(doc["level"], 4);
    assert_eq!(doc["params"]["xi0"], "5/2");
    assert_eq!(doc["params"]["q"], "classical");
    assert!(doc["config"].get("out").is_none());
}

fn load_matrix(doc: &Value) -> BTreeMap<(usize, usize), RadicalSum> {
    assert!(doc["escaped"] == 0, "matrix leaves V_N");
    doc["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| {
            let key = (e["row"].as_u64().unwrap() as usize, e["col"].as_u64().unwrap() as usize);
            (key, serde_json::from_value(e["value"].clone()).unwrap())
        })
        .collect()
}

fn multiply(a: &BTreeMap<(usize, usize), RadicalSum>, b: &BTreeMap<(usize, usize), RadicalSum>) -> BTreeMap<(usize, usize), RadicalSum> {
    let mut out: BTreeMap<(usize, usize), RadicalSum> = BTreeMap::new();
    for (&(i, k), x) in a {
        for (&(k2, j), y) in b {
            if k == k2 {
                let slot = out.entry((i, j)).or_insert_with(RadicalSum::zero);
                slot.add_assign(&x.mul(y));
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

#[test]
fn matrices_reproduce_words() {
    let dir = tempfile::tempdir().unwrap();
    let params = module();
    let engine = Engine::new(params.clone());
    let basis = enumerate_basis(params.signature(), 4).unwrap();
    // Raising operators inside the bound keep V_4; h and c always do.
    let mut nonzero = 0;
    for (a, b) in [("E-1", "E0"), ("E0", "E-1"), ("E-2", "H1"), ("C", "E-1"), ("E-1", "E-1")] {
        let (_, da) = json_out(&["matrix", "-g", a, "--level", "4"], dir.path(), "a.json");
        let (_, db) = json_out(&["matrix", "-g", b, "--level", "4"], dir.path(), "b.json");
        let product = multiply(&load_matrix(&da), &load_matrix(&db));
        let word: Vec<GeneratorLabel> = [a, b].iter().map(|g| g.parse().unwrap()).collect();
        let mut expected = BTreeMap::new();
        for (j, p) in basis.iter().enumerate() {
            for (t, c) in engine.apply_word(&word, p).unwrap().iter() {
                let i = basis.iter().position(|x| x == t).expect("word stays in V_4");
                expected.insert((i, j), c.clone());
            }
        }
        nonzero += expected.len();
        assert_eq!(product, expected, "{a}{b}");
    }
    assert!(nonzero > 20);
}

#[test]
fn cartan_and_central_matrices() {
    let dir = tempfile::tempdir().unwrap();
    let params = module();
    let basis = enumerate_basis(params.signature(), 3).unwrap();
    for i in -3..=3 {
        let g = format!("H{i}");
        let (_, doc) = json_out(&["matrix", "-g", &g, "--level", "3"], dir.path(), "h.json");
        for e in doc["entries"].as_array().unwrap() {
            assert_eq!(e["row"], e["col"]);
            let p = &basis[e["col"].as_u64().unwrap() as usize];
            let want = &weight_of(p, &params, (i, i)).eigenvalues[&i];
            let got: RadicalSum = serde_json::from_value(e["value"].clone()).unwrap();
            assert_eq!(got.as_rational().as_ref(), Some(want));
        }
    }
    let (_, c) = json_out(&["matrix", "-g", "C", "--level", "3", "--xi1", "-1/3"], dir.path(), "c.json");
    assert_eq!(c["nonzero"].as_u64().unwrap() as usize, basis.len());
    assert!(c["entries"].as_array().unwrap().iter().all(|e| e["value"][0]["coeff"] == "7/3" && e["row"] == e["col"]));
    assert!(c["entries"][0]["decimal"].as_str().unwrap().starts_with("2.33333"));
}

#[test]
fn raising_past_the_bound_is_empty() {
    let dir = tempfile::tempdir().unwrap();
    for k in 1..=5 {
        let (_, doc) = json_out(&["matrix", "-g", &format!("E{k}"), "--level", "4"], dir.path(), "e.json");
        assert_eq!(doc["nonzero"], 0, "E{k}");
    }
}

#[test]
fn classical_q_flag() {
    let dir = tempfile::tempdir().unwrap();
    let (code, doc) = json_out(&["check", "--suite", "cartan", "--q", "classical", "--level", "3"], dir.path(), "c.json");
    assert_eq!(code, 0);
    assert_eq!(doc["params"]["q"], "classical");
    assert_eq!(QValue::Classical.to_string(), "classical");
}

#[test]
fn stdout_when_no_out_path() {
    let o = qainf(&["basis", "--level", "2"]);
    assert!(o.status.success());
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["count"], 2);
}
