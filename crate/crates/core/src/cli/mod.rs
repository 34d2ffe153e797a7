//! Command-line front end: basis listings, generator matrices and the
//! verification suites, all written as deterministic JSON.
//!
//! Exit codes: 0 when every check passes, 1 on a verification failure,
//! 2 on a usage or configuration error.

mod config;

pub use config::{parse_window, Resolved, RunConfig};

use std::collections::HashMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

use crate::action::{Engine, GeneratorLabel};
use crate::identities::{cross_check_suite, identity_suite, IdentityError};
use crate::patterns::{enumerate_basis, CPattern, Mode, ModuleParams};
use crate::qnum::{QValue, Rational};
use crate::relations::{
    boundary_suite, cartan_suite, check_charge, check_highest_weight, restrictedness_suite, serre_suite, CheckReport,
    RelationError, Tightness,
};

pub const BASIS_SCHEMA: &str = "qainf.basis/1";
pub const MATRIX_SCHEMA: &str = "qainf.matrix/1";
pub const CHECK_SCHEMA: &str = "qainf.check/1";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Relation(#[from] RelationError),
    #[error(transparent)]
    Identity(#[from] IdentityError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Relation(RelationError::Precondition(_) | RelationError::Pattern(_)) => 2,
            // An exact computation that broke mid-check is a verification failure.
            CliError::Relation(_) | CliError::Identity(_) => 1,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "qainf", version, about = "Exact highest-weight modules of U_h(a_inf) and U_h(A_inf) on C-pattern bases")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the basis of V_N.
    Basis(ConfigArgs),
    /// Sparse matrix of one generator on V_N.
    Matrix {
        #[arg(long, short)]
        generator: GeneratorLabel,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Run verification suites.
    Check {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[command(flatten)]
        config: ConfigArgs,
    },
    /// Same as `check --suite identities`.
    Identities(ConfigArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Cartan,
    Serre,
    Hw,
    Restricted,
    Boundary,
    Charge,
    Identities,
    All,
}

impl Suite {
    fn members(self) -> Vec<Suite> {
        use Suite::*;
        match self {
            All => vec![Cartan, Serre, Hw, Restricted, Boundary, Charge, Identities],
            s => vec![s],
        }
    }
}

/// Flags override keys of the `--config` document.
#[derive(Args, Debug, Default, Clone)]
pub struct ConfigArgs {
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// `m:n:v_m,...,v_n`
    #[arg(long, allow_hyphen_values = true)]
    pub signature: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub xi0: Option<Rational>,
    #[arg(long, allow_hyphen_values = true)]
    pub xi1: Option<Rational>,
    /// A positive rational, or `classical`.
    #[arg(long)]
    pub q: Option<QValue>,
    /// `a_infinity` or `A_infinity`.
    #[arg(long)]
    pub mode: Option<Mode>,
    #[arg(long)]
    pub level: Option<usize>,
    /// Generator index window `lo:hi`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_window)]
    pub window: Option<(i64, i64)>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub decimal_places: Option<usize>,
    /// Fail restrictedness when a bound has no nonzero witness in V_N.
    #[arg(long)]
    pub require_tightness: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl ConfigArgs {
    pub fn into_config(self) -> Result<RunConfig, CliError> {
        let mut c = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(v) = self.signature {
            c.signature = v;
        }
        if let Some(v) = self.xi0 {
            c.xi0 = Some(v);
        }
        if let Some(v) = self.xi1 {
            c.xi1 = Some(v);
        }
        if let Some(v) = self.q {
            c.q = v;
        }
        if let Some(v) = self.mode {
            c.mode = v;
        }
        if let Some(v) = self.level {
            c.level = v;
        }
        if let Some(v) = self.window {
            c.window = Some(v);
        }
        if let Some(v) = self.trials {
            c.trials = v;
        }
        if let Some(v) = self.seed {
            c.seed = v;
        }
        if let Some(v) = self.decimal_places {
            c.decimal_places = v;
        }
        if self.require_tightness {
            c.require_tightness = true;
        }
        if self.out.is_some() {
            c.out = self.out;
        }
        Ok(c)
    }
}

/// A finished command: the JSON document and whether every check passed.
#[derive(Debug)]
pub struct Outcome {
    pub document: Value,
    pub passed: bool,
}

fn params_json(p: &ModuleParams) -> Value {
    json!({
        "signature": p.signature().to_string(),
        "xi0": p.xi0(),
        "xi1": p.xi1(),
        "q": p.qv(),
        "mode": p.mode(),
    })
}

fn basis_of(r: &Resolved, level: usize) -> Result<Vec<CPattern>, CliError> {
    enumerate_basis(r.params.signature(), level).map_err(|e| CliError::Usage(e.to_string()))
}

/// The basis of `V_N` in its canonical order.
pub fn cmd_basis(r: &Resolved) -> Result<Outcome, CliError> {
    let basis = basis_of(r, r.level)?;
    let patterns: Vec<Value> =
        basis.iter().enumerate().map(|(i, p)| json!({"index": i, "display": p.to_string(), "pattern": p})).collect();
    Ok(Outcome {
        document: json!({
            "schema": BASIS_SCHEMA,
            "config": r.echo,
            "params": params_json(&r.params),
            "level": r.level,
            "count": basis.len(),
            "patterns": patterns,
        }),
        passed: true,
    })
}

/// Sparse triplets of `g` on `V_N`. Column `j` is basis pattern `j`; a target
/// outside `V_N` is indexed in the basis of the smallest enlarged truncation
/// holding every escaping target (at least `V_{N+2}`) and flagged.
pub fn cmd_matrix(r: &Resolved, g: GeneratorLabel) -> Result<Outcome, CliError> {
    if let Some(i) = g.index() {
        if i < r.window.0 || i > r.window.1 {
            return Err(CliError::Usage(format!("{g} is outside the window [{}, {}]", r.window.0, r.window.1)));
        }
    }
    let engine = Engine::new(r.params.clone());
    let basis = basis_of(r, r.level)?;
    let index: HashMap<&CPattern, usize> = basis.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let images = basis
        .iter()
        .map(|p| engine.apply(g, p).map_err(|e| CliError::Relation(e.into())))
        .collect::<Result<Vec<_>, _>>()?;

    let top = images.iter().flat_map(|v| v.iter().map(|(t, _)| t.level())).max().unwrap_or(r.level);
    let enlarged_level = (top > r.level).then(|| top.max(r.level + 2));
    let enlarged = match enlarged_level {
        Some(l) => basis_of(r, l)?,
        None => Vec::new(),
    };
    let enlarged_index: HashMap<&CPattern, usize> = enlarged.iter().enumerate().map(|(i, p)| (p, i)).collect();

    let mut entries = Vec::new();
    let mut escaped = 0usize;
    for (col, image) in images.iter().enumerate() {
        for (target, coeff) in image.iter() {
            let (row, escapes) = match index.get(target) {
                Some(&i) => (i, false),
                None => {
                    escaped += 1;
                    let i = *enlarged_index
                        .get(target)
                        .ok_or_else(|| CliError::Usage(format!("{target} lies outside V_{}", enlarged_level.unwrap_or(r.level))))?;
                    (i, true)
                }
            };
            let mut e = json!({
                "row": row,
                "col": col,
                "value": coeff,
                "decimal": coeff.to_decimal(r.decimal_places),
            });
            if escapes {
                e["escapes"] = json!(true);
            }
            entries.push(e);
        }
    }
    let mut doc = json!({
        "schema": MATRIX_SCHEMA,
        "config": r.echo,
        "params": params_json(&r.params),
        "generator": g,
        "level": r.level,
        "dimension": basis.len(),
        "nonzero": entries.len(),
        "escaped": escaped,
        "entries": entries,
    });
    if let Some(l) = enlarged_level {
        doc["enlarged_level"] = json!(l);
        doc["enlarged_dimension"] = json!(enlarged.len());
    }
    Ok(Outcome { document: doc, passed: true })
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Cartan => "cartan",
        Suite::Serre => "serre",
        Suite::Hw => "hw",
        Suite::Restricted => "restricted",
        Suite::Boundary => "boundary",
        Suite::Charge => "charge",
        Suite::Identities => "identities",
        Suite::All => "all",
    }
}

fn run_suite(r: &Resolved, engine: &Engine, basis: &[CPattern], s: Suite) -> Result<Vec<CheckReport>, CliError> {
    let levels: Vec<usize> = (2..=r.level).collect();
    Ok(match s {
        Suite::Cartan => vec![cartan_suite(r.window, basis, engine)?],
        Suite::Serre => vec![serre_suite(r.window, basis, engine)?],
        Suite::Hw => vec![check_highest_weight(engine, r.window)?],
        Suite::Restricted => {
            let t = if r.require_tightness { Tightness::Required } else { Tightness::Reported };
            vec![restrictedness_suite(engine, &levels, t)?]
        },
        Suite::Boundary => vec![boundary_suite(engine, &levels)?],
        Suite::Charge => vec![check_charge(engine, r.window.0.abs().max(r.window.1.abs()))?],
        Suite::Identities => vec![
            identity_suite(&r.corpus, r.trials, r.seed, &r.sampling)?,
            cross_check_suite(r.trials, r.seed, &r.sampling)?,
        ],
        Suite::All => unreachable!("expanded by Suite::members"),
    })
}

/// Runs the named suites in a fixed order and collects their reports.
pub fn cmd_check(r: &Resolved, suite: Suite) -> Result<Outcome, CliError> {
    let engine = Engine::new(r.params.clone());
    let members = suite.members();
    let needs_basis = members.iter().any(|s| matches!(s, Suite::Cartan | Suite::Serre));
    let basis = if needs_basis { basis_of(r, r.level)? } else { Vec::new() };
    let mut reports = Vec::new();
    for s in members {
        reports.extend(run_suite(r, &engine, &basis, s)?);
    }
    let passed = reports.iter().all(|x| x.passed);
    Ok(Outcome {
        document: json!({
            "schema": CHECK_SCHEMA,
            "config": r.echo,
            "params": params_json(&r.params),
            "suite": suite_name(suite),
            "level": r.level,
            "basis_size": basis.len(),
            "passed": passed,
            "reports": reports,
        }),
        passed,
    })
}

enum Action {
    Basis,
    Matrix(GeneratorLabel),
    Check(Suite),
}

/// Runs a parsed command; returns the document and where to write it.
pub fn execute(command: Command) -> Result<(Outcome, Option<PathBuf>), CliError> {
    let (args, action) = match command {
        Command::Basis(a) => (a, Action::Basis),
        Command::Matrix { generator, config } => (config, Action::Matrix(generator)),
        Command::Check { suite, config } => (config, Action::Check(suite)),
        Command::Identities(a) => (a, Action::Check(Suite::Identities)),
    };
    let resolved = args.into_config()?.resolve()?;
    let outcome = match action {
        Action::Basis => cmd_basis(&resolved)?,
        Action::Matrix(g) => cmd_matrix(&resolved, g)?,
        Action::Check(s) => cmd_check(&resolved, s)?,
    };
    Ok((outcome, resolved.out))
}

fn write_document(doc: &Value, out: Option<&PathBuf>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(doc).map_err(|e| CliError::Io(e.to_string()))?;
    text.push('\n');
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout().lock().write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
    }
}

/// One line per failed report on stderr, with its first witness.
fn summarize_failures(doc: &Value) {
    let Some(reports) = doc["reports"].as_array() else { return };
    for r in reports.iter().filter(|r| r["passed"] == json!(false)) {
        eprintln!("FAIL {}: {} of {} checks failed", r["relation"].as_str().unwrap_or("?"), r["failed"], r["checked"]);
        if let Some(w) = r["failures"].get(0) {
            eprintln!("  witness: {w}");
        }
    }
}

/// Entry point for the binary.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match execute(cli.command) {
        Ok((outcome, out)) => {
            if let Err(e) = write_document(&outcome.document, out.as_ref()) {
                eprintln!("error: {e}");
                return ExitCode::from(e.exit_code());
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                summarize_failures(&outcome.document);
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
