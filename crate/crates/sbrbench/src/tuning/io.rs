//! File outputs for tuning and sweeps: trial logs, best-config files,
//! sweep CSVs, summary JSON and histogram bins.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde_json::json;

use crate::error::{Error, Result};
use crate::models::{parse_params, render_params, ModelParams};

use super::search::SearchOutcome;
use super::sweep::{histogram_bins, SweepResult};

pub const HISTOGRAM_BINS: usize = 20;

fn writer(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(
        File::create(path).map_err(|e| Error::io(path, e))?,
    ))
}

fn finish(mut out: BufWriter<File>, path: &Path) -> Result<()> {
    out.flush().map_err(|e| Error::io(path, e))
}

/// Trial log: `trial,<param columns>,objective,seconds`.
pub fn write_trial_csv(path: &Path, outcome: &SearchOutcome, provenance: &str) -> Result<()> {
    let mut out = writer(path)?;
    let param_names: Vec<&String> = outcome
        .trials
        .first()
        .map(|t| t.params.keys().collect())
        .unwrap_or_default();
    let mut write =
        |line: String| -> Result<()> { writeln!(out, "{line}").map_err(|e| Error::io(path, e)) };
    write(format!("# {provenance}"))?;
    let mut header = vec!["trial".to_owned()];
    header.extend(param_names.iter().map(|n| n.to_string()));
    header.push("objective".into());
    header.push("seconds".into());
    header.push("status".into());
    write(header.join(","))?;
    for trial in &outcome.trials {
        let mut fields = vec![trial.index.to_string()];
        for name in &param_names {
            fields.push(
                trial
                    .params
                    .get(*name)
                    .map(|v| v.to_string())
                    .unwrap_or_default(),
            );
        }
        fields.push(format!("{:.6}", trial.objective));
        fields.push(format!("{:.3}", trial.seconds));
        fields.push(if trial.failed { "failed" } else { "ok" }.into());
        write(fields.join(","))?;
    }

    finish(out, path)
}

/// Human-readable best-config file (`key = value` lines).
pub fn write_best_params(
    path: &Path,
    params: &ModelParams,
    provenance: &str,
    objective: f64,
) -> Result<()> {
    let mut out = writer(path)?;
    writeln!(out, "# {provenance}").map_err(|e| Error::io(path, e))?;
    writeln!(out, "# objective mrr@20 = {objective:.6}").map_err(|e| Error::io(path, e))?;
    write!(out, "{}", render_params(params)).map_err(|e| Error::io(path, e))?;
    finish(out, path)
}

/// Read a best-config file back.
pub fn read_best_params(path: &Path) -> Result<ModelParams> {
    if !path.exists() {
        return Err(Error::MissingArtifact(format!(
            "tuned config not found: {} (run `tune` first)",
            path.display()
        )));
    }
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_params(&text)
}

/// JSON summary of a search.
pub fn write_search_summary(path: &Path, outcome: &SearchOutcome, provenance: &str) -> Result<()> {
    let best: std::collections::BTreeMap<String, String> = outcome
        .best_params
        .iter()
        .map(|(k, v)| (k.clone(), v.to_string()))
        .collect();
    let body = json!({
        "provenance": provenance,
        "model": outcome.model.as_str(),
        "seed": outcome.seed,
        "trials": outcome.trials.len(),
        "failed_trials": outcome.trials.iter().filter(|t| t.failed).count(),
        "best_trial": outcome.best_trial,
        "best_objective_mrr20": outcome.best_objective,
        "best_params": best,
    });
    std::fs::write(path, format!("{:#}\n", body)).map_err(|e| Error::io(path, e))
}

/// Sweep points: `value,mrr@20` (failed points annotated).
pub fn write_sweep_csv(path: &Path, result: &SweepResult, provenance: &str) -> Result<()> {
    let mut out = writer(path)?;
    let mut write =
        |line: String| -> Result<()> { writeln!(out, "{line}").map_err(|e| Error::io(path, e)) };
    write(format!("# {provenance}"))?;
    write("value,mrr@20,status".into())?;
    for point in &result.points {
        write(format!(
            "{},{:.6},{}",
            point.value,
            point.objective,
            if point.failed { "failed" } else { "ok" }
        ))?;
    }

    finish(out, path)
}

/// JSON sweep summary with the `mean ± std | max | min | diff` row.
pub fn write_sweep_summary(path: &Path, result: &SweepResult, provenance: &str) -> Result<()> {
    let body = json!({
        "provenance": provenance,
        "model": result.model.as_str(),
        "variable": result.variable,
        "values": result.points.len(),
        "failed": result.points.iter().filter(|p| p.failed).count(),
        "mean": result.summary.mean,
        "std": result.summary.std,
        "max": result.summary.max,
        "min": result.summary.min,
        "diff": result.summary.diff,
        "row": result.summary.render(),
    });
    std::fs::write(path, format!("{:#}\n", body)).map_err(|e| Error::io(path, e))
}

/// Histogram-bin file over the successful objectives: `value,count` for
/// exactly [`HISTOGRAM_BINS`] equal-width bins covering [min, max].
pub fn write_histogram(path: &Path, result: &SweepResult, provenance: &str) -> Result<()> {
    let objectives: Vec<f64> = result
        .points
        .iter()
        .filter(|p| !p.failed)
        .map(|p| p.objective)
        .collect();
    let bins = histogram_bins(&objectives, HISTOGRAM_BINS);
    let mut out = writer(path)?;
    let mut write =
        |line: String| -> Result<()> { writeln!(out, "{line}").map_err(|e| Error::io(path, e)) };
    write(format!("# {provenance}"))?;
    write("value,count".into())?;
    for (edge, count) in bins {
        write(format!("{edge:.6},{count}"))?;
    }

    finish(out, path)
}
