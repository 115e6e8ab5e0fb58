//! Result rows (append-only CSV) and plain-text result tables.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};

use super::metrics::{MetricReport, TimingReport};

/// One results-file row: metrics for a (dataset, model, config) run.
#[derive(Debug, Clone, PartialEq)]
pub struct ResultRow {
    pub model: String,
    pub cutoffs: Vec<usize>,
    pub mrr: Vec<f64>,
    pub hr: Vec<f64>,
    pub cov: f64,
    pub pop: f64,
    pub t_time_min: f64,
    pub p_time_ms: f64,
    pub events: usize,
    pub seed: u64,
    pub config_hash: String,
}

impl ResultRow {
    pub fn new(
        model: &str,
        metrics: &MetricReport,
        timing: &TimingReport,
        seed: u64,
        config_hash: &str,
    ) -> Self {
        Self {
            model: model.to_owned(),
            cutoffs: metrics.cutoffs.clone(),
            mrr: metrics.mrr.clone(),
            hr: metrics.hr.clone(),
            cov: metrics.cov,
            pop: metrics.pop,
            t_time_min: timing.train_time_min,
            p_time_ms: timing.mean_predict_ms,
            events: metrics.event_count,
            seed,
            config_hash: config_hash.to_owned(),
        }
    }

    /// MRR at the largest cutoff; the sort key of every report table.
    pub fn primary_mrr(&self) -> f64 {
        *self.mrr.last().unwrap_or(&0.0)
    }
}

pub fn results_header(cutoffs: &[usize]) -> String {
    let max_k = cutoffs.last().copied().unwrap_or(20);
    let mut columns = vec!["model".to_owned()];
    columns.extend(cutoffs.iter().map(|k| format!("mrr@{k}")));
    columns.extend(cutoffs.iter().map(|k| format!("hr@{k}")));
    columns.push(format!("cov@{max_k}"));
    columns.push(format!("pop@{max_k}"));
    columns.extend(
        ["t_time_min", "p_time_ms", "events", "seed", "config_hash"]
            .iter()
            .map(|s| s.to_string()),
    );
    columns.join(",")
}

fn format_row(row: &ResultRow) -> String {
    let mut fields = vec![row.model.clone()];
    fields.extend(row.mrr.iter().map(|v| format!("{v:.6}")));
    fields.extend(row.hr.iter().map(|v| format!("{v:.6}")));
    fields.push(format!("{:.6}", row.cov));
    fields.push(format!("{:.6}", row.pop));
    fields.push(format!("{:.6}", row.t_time_min));
    fields.push(format!("{:.6}", row.p_time_ms));
    fields.push(row.events.to_string());
    fields.push(row.seed.to_string());
    fields.push(row.config_hash.clone());
    fields.join(",")
}

/// Append one row, creating the file (with provenance comment and header)
/// on first use.
pub fn append_result(path: &Path, row: &ResultRow, provenance: &str) -> Result<()> {
    let fresh = !path.exists();
    let mut file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .map_err(|e| Error::io(path, e))?;
    let mut write =
        |line: String| -> Result<()> { writeln!(file, "{line}").map_err(|e| Error::io(path, e)) };
    if fresh {
        write(format!("# {provenance}"))?;
        write(results_header(&row.cutoffs))?;
    }
    write(format_row(row))
}

/// Read all rows; a missing file reads as no rows.
pub fn read_results(path: &Path) -> Result<Vec<ResultRow>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let contents = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut rows = Vec::new();
    let mut cutoffs: Vec<usize> = Vec::new();
    let mut saw_header = false;
    for (idx, line) in contents.lines().enumerate() {
        let lineno = idx as u64 + 1;
        if line.starts_with('#') || line.trim().is_empty() {
            continue;
        }
        let bad_row = |message: String| Error::MalformedRow {
            path: path.to_owned(),
            line: lineno,
            message,
        };
        if !saw_header {
            cutoffs = line
                .split(',')
                .filter_map(|col| col.strip_prefix("mrr@"))
                .map(|k| k.parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| bad_row(format!("bad header: {e}")))?;
            if cutoffs.is_empty() {
                return Err(bad_row("header has no mrr@K columns".into()));
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        let expected = 1 + 2 * cutoffs.len() + 2 + 5;
        if fields.len() != expected {
            return Err(bad_row(format!(
                "expected {expected} fields, got {}",
                fields.len()
            )));
        }
        let parse = |s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|e| bad_row(format!("bad number `{s}`: {e}")))
        };
        let n = cutoffs.len();
        let mrr = fields[1..1 + n]
            .iter()
            .map(|s| parse(s))
            .collect::<Result<Vec<_>>>()?;
        let hr = fields[1 + n..1 + 2 * n]
            .iter()
            .map(|s| parse(s))
            .collect::<Result<Vec<_>>>()?;
        let base = 1 + 2 * n;
        rows.push(ResultRow {
            model: fields[0].to_owned(),
            cutoffs: cutoffs.clone(),
            mrr,
            hr,
            cov: parse(fields[base])?,
            pop: parse(fields[base + 1])?,
            t_time_min: parse(fields[base + 2])?,
            p_time_ms: parse(fields[base + 3])?,
            events: fields[base + 4]
                .parse()
                .map_err(|e| bad_row(format!("bad events: {e}")))?,
            seed: fields[base + 5]
                .parse()
                .map_err(|e| bad_row(format!("bad seed: {e}")))?,
            config_hash: fields[base + 6].to_owned(),
        });
    }
    Ok(rows)
}

/// Render a result table sorted by MRR at the largest cutoff, best value
/// per metric column marked with asterisks.
pub fn render_table(title: &str, rows: &[ResultRow]) -> String {
    let mut out = format!("{title}\n");
    if rows.is_empty() {
        out.push_str("(no results)\n");
        return out;
    }
    let cutoffs = &rows[0].cutoffs;
    let max_k = cutoffs.last().copied().unwrap_or(20);
    let mut sorted: Vec<&ResultRow> = rows.iter().collect();
    sorted.sort_by(|a, b| {
        b.primary_mrr()
            .total_cmp(&a.primary_mrr())
            .then_with(|| a.model.cmp(&b.model))
    });

    // Column values per row: metric columns first, then timing.
    let metric_count = 2 * cutoffs.len() + 2;
    let values: Vec<Vec<f64>> = sorted
        .iter()
        .map(|row| {
            let mut v = Vec::with_capacity(metric_count + 2);
            v.extend(&row.mrr);
            v.extend(&row.hr);
            v.push(row.cov);
            v.push(row.pop);
            v.push(row.t_time_min);
            v.push(row.p_time_ms);
            v
        })
        .collect();
    let mut best = vec![f64::NEG_INFINITY; metric_count];
    for row_values in &values {
        for (idx, slot) in best.iter_mut().enumerate() {
            *slot = slot.max(row_values[idx]);
        }
    }

    let mut header = vec!["model".to_owned()];
    header.extend(cutoffs.iter().map(|k| format!("mrr@{k}")));
    header.extend(cutoffs.iter().map(|k| format!("hr@{k}")));
    header.push(format!("cov@{max_k}"));
    header.push(format!("pop@{max_k}"));
    header.push("t_time_m".into());
    header.push("p_time_ms".into());

    let model_width = sorted
        .iter()
        .map(|r| r.model.len())
        .chain([header[0].len()])
        .max()
        .unwrap_or(8);
    out.push_str(&format!("{:model_width$}", header[0]));
    for column in &header[1..] {
        out.push_str(&format!(" {column:>10}"));
    }
    out.push('\n');
    for (row, row_values) in sorted.iter().zip(&values) {
        out.push_str(&format!("{:model_width$}", row.model));
        for (idx, value) in row_values.iter().enumerate() {
            let is_metric = idx < metric_count;
            let cell = if is_metric && (best[idx] - value).abs() < 5e-7 {
                format!("*{value:.3}*")
            } else {
                format!("{value:.3}")
            };
            out.push_str(&format!(" {cell:>10}"));
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(model: &str, mrr20: f64) -> ResultRow {
        ResultRow {
            model: model.to_owned(),
            cutoffs: vec![10, 20],
            mrr: vec![mrr20 - 0.01, mrr20],
            hr: vec![mrr20 + 0.1, mrr20 + 0.2],
            cov: 0.08,
            pop: 0.07,
            t_time_min: 0.05,
            p_time_ms: 4.2,
            events: 1000,
            seed: 42,
            config_hash: "abc123".into(),
        }
    }

    #[test]
    fn roundtrip_and_sort() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("results.csv");
        append_result(&path, &row("sr", 0.337), "test v0").unwrap();
        append_result(&path, &row("stan", 0.351), "test v0").unwrap();
        let rows = read_results(&path).unwrap();
        assert_eq!(rows.len(), 2);
        assert_eq!(rows[0].model, "sr");
        assert!((rows[1].mrr[1] - 0.351).abs() < 1e-9);

        let table = render_table("DIGI", &rows);
        let lines: Vec<&str> = table.lines().collect();
        assert!(lines[2].starts_with("stan"), "sorted by mrr@20: {table}");
        assert!(lines[2].contains("*0.351*"));
    }

    #[test]
    fn empty_results_render_cleanly() {
        let table = render_table("EMPTY", &[]);
        assert!(table.contains("(no results)"));
        let dir = tempfile::tempdir().unwrap();
        let missing = dir.path().join("absent.csv");
        assert!(read_results(&missing).unwrap().is_empty());
    }

    #[test]
    fn partial_tables_render_without_missing_models() {
        // A results file holding any subset of models still renders.
        let rows = vec![row("vstan", 0.346)];
        let table = render_table("SUBSET", &rows);
        assert!(table.contains("vstan"));
        assert_eq!(table.lines().count(), 3);
    }
}
