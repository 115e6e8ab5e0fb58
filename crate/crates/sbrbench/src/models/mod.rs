//! The four baseline recommenders behind one model contract.

use std::collections::HashMap;
use std::str::FromStr;

use crate::data::{ItemId, PopularityTable, SessionDataset};
use crate::error::{Error, Result};

pub mod index;
pub mod knn;
pub mod params;
pub mod sr;

pub use index::SessionIndex;
pub use knn::{knn_score, retrieve_neighbors, KnnConfig, Neighbor, SessionKnn};
pub use params::{parse_params, render_params, ModelParams, ParamValue};
pub use sr::{sr_fit, sr_score, RuleTable, SequentialRules};

/// Item scores produced by a model for one session prefix.
pub type ScoreMap = HashMap<ItemId, f64>;

/// The model contract: fitted models are immutable and scoring is a pure
/// function of `(model, prefix, query_time)`.
pub trait SessionModel: Send + Sync {
    fn score(&self, prefix: &[ItemId], query_time: i64) -> ScoreMap;
}

/// A fitted model behind the uniform contract.
pub type FittedModel = Box<dyn SessionModel>;

/// The four baselines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ModelKind {
    Sr,
    Stan,
    Vstan,
    Sfsknn,
}

pub const ALL_MODEL_KINDS: [ModelKind; 4] = [
    ModelKind::Sr,
    ModelKind::Stan,
    ModelKind::Vstan,
    ModelKind::Sfsknn,
];

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sr" => Ok(ModelKind::Sr),
            "stan" => Ok(ModelKind::Stan),
            "vstan" => Ok(ModelKind::Vstan),
            "sfsknn" => Ok(ModelKind::Sfsknn),
            other => Err(Error::InvalidArguments(format!(
                "unknown model `{other}` (expected sr, stan, vstan or sfsknn)"
            ))),
        }
    }
}

impl std::fmt::Display for ModelKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.pad(self.as_str())
    }
}

impl ModelKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ModelKind::Sr => "sr",
            ModelKind::Stan => "stan",
            ModelKind::Vstan => "vstan",
            ModelKind::Sfsknn => "sfsknn",
        }
    }

    /// Hyperparameter names this kind accepts.
    pub fn param_names(self) -> &'static [&'static str] {
        match self {
            ModelKind::Sr => &["max_steps"],
            ModelKind::Stan | ModelKind::Sfsknn => &["k", "m", "lambda1", "lambda2", "lambda3"],
            ModelKind::Vstan => &["k", "m", "lambda1", "lambda2", "lambda3", "idf_power"],
        }
    }

    /// Untuned fallback parameters.
    pub fn default_params(self) -> ModelParams {
        let mut params = ModelParams::new();
        match self {
            ModelKind::Sr => {
                params.insert("max_steps".into(), ParamValue::Int(10));
            }
            ModelKind::Stan | ModelKind::Vstan => {
                params.insert("k".into(), ParamValue::Int(500));
                params.insert("m".into(), ParamValue::Int(5000));
                params.insert("lambda1".into(), ParamValue::Float(1.0));
                params.insert("lambda2".into(), ParamValue::Float(10.0));
                params.insert("lambda3".into(), ParamValue::Float(1.0));
                if self == ModelKind::Vstan {
                    params.insert("idf_power".into(), ParamValue::Float(1.0));
                }
            }
            ModelKind::Sfsknn => {
                params.insert("k".into(), ParamValue::Int(500));
                params.insert("m".into(), ParamValue::Int(5000));
                params.insert("lambda1".into(), ParamValue::Disabled);
                params.insert("lambda2".into(), ParamValue::Disabled);
                params.insert("lambda3".into(), ParamValue::Disabled);
            }
        }
        params
    }

    /// Fit on a training dataset.
    ///
    /// The seed is part of the contract but unused: all four baselines are
    /// deterministic.
    pub fn fit(
        self,
        train: &SessionDataset,
        params: &ModelParams,
        _seed: u64,
    ) -> Result<FittedModel> {
        if train.is_empty() {
            return Err(Error::EmptyDataset("cannot fit on an empty dataset".into()));
        }
        for name in params.keys() {
            if !self.param_names().contains(&name.as_str()) {
                return Err(Error::InvalidModelConfig(format!(
                    "model `{self}` does not accept parameter `{name}`"
                )));
            }
        }
        let defaults = self.default_params();
        let get = |name: &str| -> ParamValue {
            params
                .get(name)
                .or_else(|| defaults.get(name))
                .copied()
                .unwrap_or(ParamValue::Disabled)
        };
        match self {
            ModelKind::Sr => {
                let max_steps = get("max_steps").as_limit("max_steps")?;
                Ok(Box::new(SequentialRules::fit(train, max_steps)))
            }
            ModelKind::Stan | ModelKind::Vstan | ModelKind::Sfsknn => {
                let cfg = KnnConfig {
                    k: get("k").as_usize("k")?,
                    m: get("m").as_usize("m")?,
                    lambda1: get("lambda1").as_decay("lambda1")?,
                    lambda2: get("lambda2").as_decay("lambda2")?,
                    lambda3: get("lambda3").as_decay("lambda3")?,
                    idf_power: if self == ModelKind::Vstan {
                        get("idf_power").as_f64("idf_power")?
                    } else {
                        0.0
                    },
                    sequential_filter: self == ModelKind::Sfsknn,
                };
                Ok(Box::new(SessionKnn::fit(train, cfg)?))
            }
        }
    }
}

/// Deterministic top-K ranking: score descending, then training
/// popularity descending, then item id ascending. Prefix items stay
/// eligible (repeat views are real in e-commerce).
pub fn rank_topk(scores: &ScoreMap, k: usize, popularity: &PopularityTable) -> Vec<ItemId> {
    let mut ranked: Vec<(ItemId, f64)> =
        scores.iter().map(|(&item, &score)| (item, score)).collect();
    ranked.sort_unstable_by(|a, b| {
        b.1.total_cmp(&a.1)
            .then_with(|| popularity.count(b.0).cmp(&popularity.count(a.0)))
            .then_with(|| a.0.cmp(&b.0))
    });
    ranked.truncate(k);
    ranked.into_iter().map(|(item, _)| item).collect()
}
