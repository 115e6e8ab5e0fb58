//! Declarative experiment configuration.
//!
//! Experiments are TOML files so they stay diffable and citable; CLI
//! flags override the corresponding keys. The effective configuration is
//! hashed (output directory excluded) and the hash is stamped into every
//! produced artifact.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::data::RawFormat;
use crate::error::{Error, Result};
use crate::models::{ModelKind, ModelParams, ParamValue};
use crate::tuning::{ParamDomain, Scale, SearchSpace};

fn default_cutoffs() -> Vec<usize> {
    vec![10, 20]
}

fn default_fraction() -> u64 {
    1
}

fn default_retail_gap() -> u64 {
    30
}

fn default_min_support() -> u32 {
    crate::data::DEFAULT_MIN_ITEM_SUPPORT
}

fn default_min_length() -> usize {
    crate::data::DEFAULT_MIN_SESSION_LENGTH
}

/// Raw dataset description.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct DatasetConfig {
    /// Display name; defaults to the upper-cased format tag.
    pub name: Option<String>,
    pub format: String,
    pub path: PathBuf,
    pub test_days: u32,
    #[serde(default = "default_fraction")]
    pub fraction: u64,
    #[serde(default = "default_retail_gap")]
    pub retail_gap_minutes: u64,
    #[serde(default = "default_min_support")]
    pub min_item_support: u32,
    #[serde(default = "default_min_length")]
    pub min_session_length: usize,
}

/// Scalar as written in TOML; strings cover `disabled` / `unlimited`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum TomlParam {
    Int(i64),
    Float(f64),
    Text(String),
}

impl TomlParam {
    fn to_value(&self) -> Result<ParamValue> {
        match self {
            TomlParam::Int(v) => Ok(ParamValue::Int(*v)),
            TomlParam::Float(v) => Ok(ParamValue::Float(*v)),
            TomlParam::Text(s) => s.parse(),
        }
    }
}

/// Search-space override for one parameter.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(untagged)]
pub enum DomainSpec {
    Choice(Vec<TomlParam>),
    Range {
        low: f64,
        high: f64,
        #[serde(default)]
        scale: Option<String>,
        #[serde(default)]
        allow_disabled: bool,
    },
}

impl DomainSpec {
    fn to_domain(&self, name: &str) -> Result<ParamDomain> {
        match self {
            DomainSpec::Choice(values) => {
                let values = values
                    .iter()
                    .map(TomlParam::to_value)
                    .collect::<Result<Vec<_>>>()?;
                Ok(ParamDomain::Choice(values))
            }
            DomainSpec::Range {
                low,
                high,
                scale,
                allow_disabled,
            } => {
                let scale = match scale.as_deref().unwrap_or("linear") {
                    "linear" => Scale::Linear,
                    "log" => Scale::Log,
                    other => {
                        return Err(Error::InvalidConfig(format!(
                            "unknown scale `{other}` for `{name}` (linear or log)"
                        )))
                    }
                };
                Ok(ParamDomain::Range {
                    low: *low,
                    high: *high,
                    scale,
                    allow_disabled: *allow_disabled,
                })
            }
        }
    }
}

/// Per-model section: fixed parameters and/or a search-space override.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Default)]
pub struct ModelEntry {
    pub n_trials: Option<usize>,
    #[serde(default)]
    pub fixed: BTreeMap<String, TomlParam>,
    #[serde(default)]
    pub space: BTreeMap<String, DomainSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawConfig {
    seed: Option<u64>,
    out: Option<PathBuf>,
    #[serde(default = "default_cutoffs")]
    cutoffs: Vec<usize>,
    n_trials: Option<usize>,
    dataset: DatasetConfig,
    #[serde(default)]
    models: BTreeMap<String, ModelEntry>,
}

/// CLI-level overrides applied on top of the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

/// The effective experiment configuration.
#[derive(Debug, Clone, Serialize)]
pub struct ExperimentConfig {
    pub seed: u64,
    #[serde(skip)]
    pub out: PathBuf,
    pub cutoffs: Vec<usize>,
    pub n_trials: Option<usize>,
    pub dataset: DatasetConfig,
    pub models: BTreeMap<String, ModelEntry>,
}

impl ExperimentConfig {
    pub fn load(path: &Path, overrides: &Overrides) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text, overrides)
    }

    pub fn from_toml(text: &str, overrides: &Overrides) -> Result<Self> {
        let raw: RawConfig = toml::from_str(text)
            .map_err(|e| Error::InvalidConfig(format!("config parse error: {e}")))?;
        let seed = overrides.seed.or(raw.seed).ok_or_else(|| {
            Error::InvalidConfig("seed is required (config `seed` key or --seed flag)".into())
        })?;
        let out = overrides.out.clone().or(raw.out).ok_or_else(|| {
            Error::InvalidConfig(
                "output directory required (config `out` key or --out flag)".into(),
            )
        })?;
        let config = ExperimentConfig {
            seed,
            out,
            cutoffs: raw.cutoffs,
            n_trials: raw.n_trials,
            dataset: raw.dataset,
            models: raw.models,
        };
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<()> {
        if self.cutoffs.is_empty() || self.cutoffs.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidConfig(
                "cutoffs must be non-empty and strictly ascending".into(),
            ));
        }
        self.dataset.format.parse::<RawFormat>()?;
        if self.dataset.fraction == 0 {
            return Err(Error::InvalidConfig("dataset.fraction must be >= 1".into()));
        }
        if self.dataset.test_days == 0 {
            return Err(Error::InvalidConfig(
                "dataset.test_days must be >= 1".into(),
            ));
        }
        for (name, entry) in &self.models {
            let kind: ModelKind = name
                .parse()
                .map_err(|_| Error::InvalidConfig(format!("unknown model `{name}` in [models]")))?;
            for param in entry.fixed.keys().chain(entry.space.keys()) {
                if !kind.param_names().contains(&param.as_str()) {
                    return Err(Error::InvalidConfig(format!(
                        "model `{name}` does not accept parameter `{param}`"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn format(&self) -> RawFormat {
        self.dataset
            .format
            .parse()
            .expect("format validated at load time")
    }

    /// Display name, with the temporal fraction folded in.
    pub fn dataset_name(&self) -> String {
        let base = self
            .dataset
            .name
            .clone()
            .unwrap_or_else(|| self.dataset.format.to_uppercase());
        if self.dataset.fraction > 1 {
            format!("{base} (1/{})", self.dataset.fraction)
        } else {
            base
        }
    }

    /// Fixed parameters from the config, if the section lists any.
    pub fn fixed_params(&self, kind: ModelKind) -> Result<Option<ModelParams>> {
        let Some(entry) = self.models.get(kind.as_str()) else {
            return Ok(None);
        };
        if entry.fixed.is_empty() {
            return Ok(None);
        }
        let mut params = ModelParams::new();
        for (name, value) in &entry.fixed {
            params.insert(name.clone(), value.to_value()?);
        }
        Ok(Some(params))
    }

    /// The model's search space: published defaults with any per-parameter
    /// overrides from the config applied.
    pub fn space_for(&self, kind: ModelKind) -> Result<SearchSpace> {
        let mut space = SearchSpace::default_for(kind);
        if let Some(entry) = self.models.get(kind.as_str()) {
            for (name, spec) in &entry.space {
                let domain = spec.to_domain(name)?;
                match space.params.iter_mut().find(|(n, _)| n == name) {
                    Some(slot) => slot.1 = domain,
                    None => space.params.push((name.clone(), domain)),
                }
            }
        }
        Ok(space)
    }

    /// Trial budget: per-model override, then global, then the default.
    pub fn trials_for(&self, kind: ModelKind) -> usize {
        self.models
            .get(kind.as_str())
            .and_then(|entry| entry.n_trials)
            .or(self.n_trials)
            .unwrap_or_else(|| SearchSpace::default_trials(kind))
    }

    /// Stable short hash of the effective configuration (output directory
    /// excluded: it relocates results without changing them).
    pub fn hash(&self) -> String {
        let canonical = toml::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        let mut hex = String::with_capacity(12);
        for byte in digest.iter().take(6) {
            hex.push_str(&format!("{byte:02x}"));
        }
        hex
    }

    /// Provenance line stamped into output files.
    pub fn provenance(&self) -> String {
        format!("sbrbench v{} config={}", crate::VERSION, self.hash())
    }

    pub fn paths(&self) -> OutputLayout {
        OutputLayout {
            root: self.out.clone(),
        }
    }
}

/// Filesystem layout under the experiment's output directory.
#[derive(Debug, Clone)]
pub struct OutputLayout {
    pub root: PathBuf,
}

impl OutputLayout {
    pub fn data_dir(&self) -> PathBuf {
        self.root.join("data")
    }

    pub fn tuned_dir(&self) -> PathBuf {
        self.root.join("tuned")
    }

    pub fn sweeps_dir(&self) -> PathBuf {
        self.root.join("sweeps")
    }

    pub fn normalized(&self) -> PathBuf {
        self.data_dir().join("normalized.csv")
    }

    pub fn train(&self) -> PathBuf {
        self.data_dir().join("train.csv")
    }

    pub fn test(&self) -> PathBuf {
        self.data_dir().join("test.csv")
    }

    pub fn subtrain(&self) -> PathBuf {
        self.data_dir().join("train_tune.csv")
    }

    pub fn validation(&self) -> PathBuf {
        self.data_dir().join("valid.csv")
    }

    pub fn stats(&self) -> PathBuf {
        self.data_dir().join("stats.csv")
    }

    pub fn best_params(&self, kind: ModelKind) -> PathBuf {
        self.tuned_dir().join(format!("{kind}.best"))
    }

    pub fn trial_log(&self, kind: ModelKind) -> PathBuf {
        self.tuned_dir().join(format!("{kind}.trials.csv"))
    }

    pub fn search_summary(&self, kind: ModelKind) -> PathBuf {
        self.tuned_dir().join(format!("{kind}.summary.json"))
    }

    pub fn flaw_demo(&self, kind: ModelKind) -> PathBuf {
        self.tuned_dir().join(format!("{kind}.flawdemo.txt"))
    }

    pub fn results(&self) -> PathBuf {
        self.root.join("results.csv")
    }

    pub fn report(&self) -> PathBuf {
        self.root.join("report.txt")
    }

    pub fn sweep_csv(&self, kind: ModelKind, variable: &str) -> PathBuf {
        self.sweeps_dir().join(format!("{kind}.{variable}.csv"))
    }

    pub fn sweep_summary(&self, kind: ModelKind, variable: &str) -> PathBuf {
        self.sweeps_dir()
            .join(format!("{kind}.{variable}.summary.json"))
    }

    pub fn sweep_histogram(&self, kind: ModelKind, variable: &str) -> PathBuf {
        self.sweeps_dir()
            .join(format!("{kind}.{variable}.hist.csv"))
    }
}
