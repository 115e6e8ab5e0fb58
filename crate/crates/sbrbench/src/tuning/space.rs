//! Hyperparameter search spaces and seeded sampling.

use rand::Rng;

use crate::error::{Error, Result};
use crate::models::{ModelKind, ModelParams, ParamValue};

/// Probability of sampling `disabled` from a range that allows it.
pub const DISABLED_PROBABILITY: f64 = 0.125;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Linear,
    Log,
}

/// Domain of one hyperparameter: a finite value list or a numeric range.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamDomain {
    Choice(Vec<ParamValue>),
    Range {
        low: f64,
        high: f64,
        scale: Scale,
        allow_disabled: bool,
    },
}

impl ParamDomain {
    pub fn log_range(low: f64, high: f64, allow_disabled: bool) -> Self {
        ParamDomain::Range {
            low,
            high,
            scale: Scale::Log,
            allow_disabled,
        }
    }

    fn validate(&self, name: &str) -> Result<()> {
        match self {
            ParamDomain::Choice(values) if values.is_empty() => Err(Error::InvalidConfig(format!(
                "search space for `{name}` has no values"
            ))),
            ParamDomain::Choice(_) => Ok(()),
            ParamDomain::Range {
                low, high, scale, ..
            } => {
                if !(low.is_finite() && high.is_finite() && low < high) {
                    return Err(Error::InvalidConfig(format!(
                        "range for `{name}` needs low < high, got [{low}, {high}]"
                    )));
                }
                if *scale == Scale::Log && *low <= 0.0 {
                    return Err(Error::InvalidConfig(format!(
                        "log range for `{name}` needs low > 0, got {low}"
                    )));
                }
                Ok(())
            }
        }
    }

    fn sample<R: Rng>(&self, rng: &mut R) -> ParamValue {
        match self {
            ParamDomain::Choice(values) => values[rng.gen_range(0..values.len())],
            ParamDomain::Range {
                low,
                high,
                scale,
                allow_disabled,
            } => {
                if *allow_disabled && rng.gen::<f64>() < DISABLED_PROBABILITY {
                    return ParamValue::Disabled;
                }
                let u = rng.gen::<f64>();
                let value = match scale {
                    Scale::Linear => low + u * (high - low),
                    Scale::Log => (low.ln() + u * (high.ln() - low.ln())).exp(),
                };
                ParamValue::Float(value)
            }
        }
    }

    pub fn contains(&self, value: ParamValue) -> bool {
        match self {
            ParamDomain::Choice(values) => values.contains(&value),
            ParamDomain::Range {
                low,
                high,
                allow_disabled,
                ..
            } => match value {
                ParamValue::Disabled => *allow_disabled,
                ParamValue::Int(v) => (v as f64) >= *low && (v as f64) <= *high,
                ParamValue::Float(v) => v >= *low && v <= *high,
            },
        }
    }
}

/// Ordered parameter domains; the order fixes the sampling sequence.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SearchSpace {
    pub params: Vec<(String, ParamDomain)>,
}

impl SearchSpace {
    pub fn new(params: Vec<(String, ParamDomain)>) -> Self {
        Self { params }
    }

    pub fn validate(&self) -> Result<()> {
        if self.params.is_empty() {
            return Err(Error::InvalidConfig("search space is empty".into()));
        }
        for (name, domain) in &self.params {
            domain.validate(name)?;
        }
        Ok(())
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> ModelParams {
        self.params
            .iter()
            .map(|(name, domain)| (name.clone(), domain.sample(rng)))
            .collect()
    }

    /// Does the assignment lie inside this space (same names, each value
    /// within its domain)?
    pub fn contains(&self, params: &ModelParams) -> bool {
        params.len() == self.params.len()
            && self.params.iter().all(|(name, domain)| {
                params
                    .get(name)
                    .map(|&value| domain.contains(value))
                    .unwrap_or(false)
            })
    }

    /// Published default spaces per model.
    pub fn default_for(kind: ModelKind) -> Self {
        let ints = |values: &[i64]| {
            ParamDomain::Choice(values.iter().map(|&v| ParamValue::Int(v)).collect())
        };
        let k_domain = ints(&[50, 100, 200, 500, 1000, 1500]);
        let m_domain = ints(&[500, 1000, 2500, 5000, 10000]);
        let lambda = || ParamDomain::log_range(0.1, 100.0, true);
        let params = match kind {
            ModelKind::Sr => vec![(
                "max_steps".to_owned(),
                ParamDomain::Choice(vec![
                    ParamValue::Disabled,
                    ParamValue::Int(5),
                    ParamValue::Int(10),
                    ParamValue::Int(20),
                ]),
            )],
            ModelKind::Stan => vec![
                ("k".to_owned(), k_domain),
                ("m".to_owned(), m_domain),
                ("lambda1".to_owned(), lambda()),
                ("lambda2".to_owned(), lambda()),
                ("lambda3".to_owned(), lambda()),
            ],
            ModelKind::Vstan => vec![
                ("k".to_owned(), k_domain),
                ("m".to_owned(), m_domain),
                ("lambda1".to_owned(), lambda()),
                ("lambda2".to_owned(), lambda()),
                ("lambda3".to_owned(), lambda()),
                ("idf_power".to_owned(), ints(&[0, 1, 2, 3])),
            ],
            // SFSKNN stays a plain cosine kNN plus the sequential filter,
            // so only the neighborhood sizes are searched.
            ModelKind::Sfsknn => vec![("k".to_owned(), k_domain), ("m".to_owned(), m_domain)],
        };
        SearchSpace::new(params)
    }

    /// Trial budget per model kind: cheap models get the full 60 rounds,
    /// the kNN family 40.
    pub fn default_trials(kind: ModelKind) -> usize {
        match kind {
            ModelKind::Sr => 60,
            _ => 40,
        }
    }
}
