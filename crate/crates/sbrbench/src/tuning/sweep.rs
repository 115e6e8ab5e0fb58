//! Robustness sweeps: vary one parameter (or the seed), hold the rest.

use crate::data::SessionDataset;
use crate::error::{Error, Result};
use crate::models::{ModelKind, ModelParams, ParamValue};

use super::search::run_trials;

/// MRR@20 for one swept value.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub value: ParamValue,
    pub objective: f64,
    pub failed: bool,
    pub note: Option<String>,
}

/// Mean ± population std plus extremes over the successful points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSummary {
    pub mean: f64,
    pub std: f64,
    pub max: f64,
    pub min: f64,
    pub diff: f64,
}

impl SweepSummary {
    /// `mean ± std | max | min | diff`, the robustness-table row format.
    pub fn render(&self) -> String {
        format!(
            "{:.3} ± {:.3} | {:.3} | {:.3} | {:.3}",
            self.mean, self.std, self.max, self.min, self.diff
        )
    }
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub model: ModelKind,
    pub variable: String,
    pub points: Vec<SweepPoint>,
    pub summary: SweepSummary,
}

fn summarize(objectives: &[f64]) -> SweepSummary {
    let n = objectives.len() as f64;
    let mean = objectives.iter().sum::<f64>() / n;
    let max = objectives.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = objectives.iter().copied().fold(f64::INFINITY, f64::min);
    // max == min means every value is identical and the population std is
    // zero by definition; computing it would only surface mean rounding.
    let std = if max == min {
        0.0
    } else {
        (objectives.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt()
    };
    SweepSummary {
        mean,
        std,
        max,
        min,
        diff: max - min,
    }
}

/// Evaluate MRR@20 for each value of `variable` (a model parameter name
/// or `"seed"`), keeping the remaining configuration fixed. Per-value
/// failures are recorded and excluded from the summary.
pub fn sweep(
    kind: ModelKind,
    base_params: &ModelParams,
    variable: &str,
    values: &[ParamValue],
    train: &SessionDataset,
    eval_set: &SessionDataset,
    base_seed: u64,
) -> Result<SweepResult> {
    if values.is_empty() {
        return Err(Error::InvalidArguments(
            "sweep needs at least one value".into(),
        ));
    }
    let is_seed = variable == "seed";
    if !is_seed && !kind.param_names().contains(&variable) {
        return Err(Error::InvalidArguments(format!(
            "unknown sweep variable `{variable}` for model `{kind}` \
             (expected one of {:?} or `seed`)",
            kind.param_names()
        )));
    }

    let mut points = Vec::with_capacity(values.len());
    for &value in values {
        let (params, seed) = if is_seed {
            let seed = match value {
                ParamValue::Int(v) if v >= 0 => v as u64,
                other => {
                    return Err(Error::InvalidArguments(format!(
                        "seed sweep values must be non-negative integers, got {other}"
                    )))
                }
            };
            (base_params.clone(), seed)
        } else {
            let mut params = base_params.clone();
            params.insert(variable.to_owned(), value);
            (params, base_seed)
        };
        let trial = run_trials(kind, &[params], train, eval_set, seed)
            .into_iter()
            .next()
            .expect("one trial per value");
        points.push(SweepPoint {
            value,
            objective: trial.objective,
            failed: trial.failed,
            note: trial.note,
        });
    }

    let objectives: Vec<f64> = points
        .iter()
        .filter(|p| !p.failed)
        .map(|p| p.objective)
        .collect();
    if objectives.is_empty() {
        return Err(Error::TuningFailed(format!(
            "every value of `{variable}` failed"
        )));
    }
    Ok(SweepResult {
        model: kind,
        variable: variable.to_owned(),
        points,
        summary: summarize(&objectives),
    })
}

/// Equal-width histogram: exactly `bins` bins covering `[min, max]`,
/// returned as (bin lower edge, count). A degenerate range puts all mass
/// in the first bin.
pub fn histogram_bins(values: &[f64], bins: usize) -> Vec<(f64, usize)> {
    assert!(bins > 0, "histogram needs at least one bin");
    if values.is_empty() {
        return (0..bins).map(|i| (i as f64, 0)).collect();
    }
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let width = (max - min) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &value in values {
        let idx = if width == 0.0 {
            0
        } else {
            (((value - min) / width) as usize).min(bins - 1)
        };
        counts[idx] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| (min + i as f64 * width, count))
        .collect()
}
