//! Hyperparameter values as they travel between configs, tuning and models.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A single hyperparameter value.
///
/// `Disabled` doubles as "unlimited" for count-like parameters (SR's
/// `max_steps`) and "off" for decay parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParamValue {
    Int(i64),
    Float(f64),
    Disabled,
}

impl ParamValue {
    pub fn as_usize(self, name: &str) -> Result<usize> {
        match self {
            ParamValue::Int(v) if v >= 0 => Ok(v as usize),
            other => Err(Error::InvalidModelConfig(format!(
                "parameter `{name}` must be a non-negative integer, got {other}"
            ))),
        }
    }

    pub fn as_f64(self, name: &str) -> Result<f64> {
        match self {
            ParamValue::Int(v) => Ok(v as f64),
            ParamValue::Float(v) if v.is_finite() => Ok(v),
            other => Err(Error::InvalidModelConfig(format!(
                "parameter `{name}` must be a finite number, got {other}"
            ))),
        }
    }

    /// Decay-style parameter: `Disabled` maps to `None`.
    pub fn as_decay(self, name: &str) -> Result<Option<f64>> {
        match self {
            ParamValue::Disabled => Ok(None),
            other => other.as_f64(name).map(Some),
        }
    }

    /// Count-style parameter where `Disabled` means "no limit".
    pub fn as_limit(self, name: &str) -> Result<Option<usize>> {
        match self {
            ParamValue::Disabled => Ok(None),
            other => other.as_usize(name).map(Some),
        }
    }
}

impl fmt::Display for ParamValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamValue::Int(v) => write!(f, "{v}"),
            ParamValue::Float(v) => write!(f, "{v}"),
            ParamValue::Disabled => write!(f, "disabled"),
        }
    }
}

impl FromStr for ParamValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        match trimmed.to_ascii_lowercase().as_str() {
            "disabled" | "unlimited" | "none" | "off" => return Ok(ParamValue::Disabled),
            _ => {}
        }
        if let Ok(v) = trimmed.parse::<i64>() {
            return Ok(ParamValue::Int(v));
        }
        if let Ok(v) = trimmed.parse::<f64>() {
            if v.is_finite() {
                return Ok(ParamValue::Float(v));
            }
        }
        Err(Error::InvalidArguments(format!(
            "cannot parse parameter value `{s}`"
        )))
    }
}

/// Named hyperparameter assignment for one model.
pub type ModelParams = BTreeMap<String, ParamValue>;

/// Render params as deterministic `key = value` lines.
pub fn render_params(params: &ModelParams) -> String {
    let mut out = String::new();
    for (key, value) in params {
        out.push_str(&format!("{key} = {value}\n"));
    }
    out
}

/// Parse `key = value` lines as written by [`render_params`].
pub fn parse_params(text: &str) -> Result<ModelParams> {
    let mut params = ModelParams::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::InvalidConfig(format!("expected `key = value`, got `{line}`")))?;
        params.insert(key.trim().to_owned(), value.trim().parse()?);
    }
    Ok(params)
}
