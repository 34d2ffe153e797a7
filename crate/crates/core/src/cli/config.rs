//! Run configuration: one JSON document, overridable flag by flag.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::identities::{default_corpus, IdentityId, SamplingConfig};
use crate::patterns::{Mode, ModuleParams, Signature};
use crate::qnum::{QValue, Rational, DEFAULT_DECIMAL_PLACES};

/// Everything a run depends on. Missing keys take the defaults below; `xi0`
/// and `xi1` default to the signature tails and `window` to `[-(N+3), N+3]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// `m:n:v_m,...,v_n`.
    pub signature: String,
    pub xi0: Option<Rational>,
    pub xi1: Option<Rational>,
    pub q: QValue,
    pub mode: Mode,
    pub level: usize,
    pub window: Option<(i64, i64)>,
    pub trials: usize,
    pub seed: u64,
    pub decimal_places: usize,
    pub require_tightness: bool,
    /// Identity corpus; `None` is the default corpus.
    pub identities: Option<Vec<IdentityId>>,
    /// Where to write the JSON output; stdout when absent. Never echoed into
    /// reports, so the output path cannot change their bytes.
    #[serde(skip_serializing)]
    pub out: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            signature: "-1:1:2,1,0".into(),
            xi0: None,
            xi1: None,
            q: QValue::Quantum(Rational::new(3, 2).expect("literal")),
            mode: Mode::Small,
            level: 4,
            window: None,
            trials: 100,
            seed: 42,
            decimal_places: DEFAULT_DECIMAL_PLACES,
            require_tightness: false,
            identities: None,
            out: None,
        }
    }
}

/// A validated configuration with every default filled in.
#[derive(Clone, Debug)]
pub struct Resolved {
    pub params: ModuleParams,
    pub level: usize,
    pub window: (i64, i64),
    pub trials: usize,
    pub seed: u64,
    pub decimal_places: usize,
    pub require_tightness: bool,
    pub corpus: Vec<IdentityId>,
    pub sampling: SamplingConfig,
    pub out: Option<PathBuf>,
    /// The config as run, for embedding in outputs.
    pub echo: RunConfig,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))
    }

    pub fn resolve(&self) -> Result<Resolved, CliError> {
        let signature: Signature = self.signature.parse().map_err(|e| CliError::Usage(format!("{e}")))?;
        if self.level < 2 {
            return Err(CliError::Usage(format!("level must be at least 2, got {}", self.level)));
        }
        let xi0 = self.xi0.clone().unwrap_or_else(|| Rational::from(signature.value(signature.m())));
        let xi1 = self.xi1.clone().unwrap_or_else(|| Rational::from(signature.value(signature.n())));
        let params = ModuleParams::new(signature, xi0.clone(), xi1.clone(), self.q.clone(), self.mode)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let reach = self.level as i64 + 3;
        let window = self.window.unwrap_or((-reach, reach));
        if window.0 > window.1 {
            return Err(CliError::Usage(format!("empty window [{}, {}]", window.0, window.1)));
        }
        let corpus = self.identities.clone().unwrap_or_else(default_corpus);
        let echo = RunConfig { xi0: Some(xi0), xi1: Some(xi1), window: Some(window), identities: Some(corpus.clone()), ..self.clone() };
        Ok(Resolved {
            params,
            level: self.level,
            window,
            trials: self.trials,
            seed: self.seed,
            decimal_places: self.decimal_places,
            require_tightness: self.require_tightness,
            corpus,
            sampling: SamplingConfig::default(),
            out: self.out.clone(),
            echo,
        })
    }
}

/// `lo:hi`, also accepting `lo,hi`.
pub fn parse_window(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(':').or_else(|| s.split_once(',')).ok_or_else(|| format!("window {s:?} is not lo:hi"))?;
    let lo = a.trim().parse().map_err(|_| format!("bad window bound {a:?}"))?;
    let hi = b.trim().parse().map_err(|_| format!("bad window bound {b:?}"))?;
    Ok((lo, hi))
}
