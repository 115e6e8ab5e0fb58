//! Command-line orchestration: `prepare`, `tune`, `eval`, `sweep`,
//! `report`.
//!
//! Exit codes: 0 success, 2 input error, 3 tuning failure, 4 missing
//! artifact, 5 bad arguments.

use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Parser, Subcommand};

use crate::config::{ExperimentConfig, Overrides};
use crate::data::{self, PopularityTable};
use crate::error::{Error, Result};
use crate::eval::{self, ResultRow};
use crate::models::{ModelKind, ModelParams, ParamValue};
use crate::tuning;

/// Trial cap applied by `--smoke`.
const SMOKE_TRIALS: usize = 5;

#[derive(Debug, Parser)]
#[command(
    name = "sbrbench",
    version,
    about = "Session-based recommendation benchmarking: baselines, protocol, tuning, sweeps"
)]
pub struct Cli {
    /// Experiment config file (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    /// Override the config's master seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    /// Override the config's output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// With `tune`: also validate directly on the test set and report the
    /// leakage advantage (methodological-flaw demonstration).
    #[arg(long, global = true)]
    pub tune_on_test: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ingest and preprocess the raw dataset; write normalized data,
    /// train/test and tuning splits, and the statistics row.
    Prepare,
    /// Random-search a model's hyperparameters (MRR@20 objective).
    Tune {
        #[arg(long)]
        model: String,
        /// Override the trial budget.
        #[arg(long)]
        trials: Option<usize>,
        /// Quick pass: at most 5 trials.
        #[arg(long)]
        smoke: bool,
    },
    /// Evaluate a model on the test split and append a results row.
    Eval {
        #[arg(long)]
        model: String,
    },
    /// Robustness sweep over one parameter or the random seed.
    Sweep {
        /// One model, a comma-separated list, or `all`.
        #[arg(long)]
        model: String,
        /// Parameter name, or `seed`.
        #[arg(long)]
        variable: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<String>,
        /// Which split to score: `test` or `validation`.
        #[arg(long, default_value = "test")]
        split: String,
    },
    /// Render the result table for this experiment.
    Report,
}

pub fn run(cli: Cli) -> Result<()> {
    if let Some(threads) = cli.threads {
        // Ignore the error when a pool already exists (e.g. under tests).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    let config_path = cli
        .config
        .as_deref()
        .ok_or_else(|| Error::InvalidArguments("--config <path> is required".into()))?;
    let overrides = Overrides {
        seed: cli.seed,
        out: cli.out.clone(),
    };
    let config = ExperimentConfig::load(config_path, &overrides)?;
    match &cli.command {
        Command::Prepare => cmd_prepare(&config),
        Command::Tune {
            model,
            trials,
            smoke,
        } => cmd_tune(&config, model, *trials, *smoke, cli.tune_on_test),
        Command::Eval { model } => cmd_eval(&config, model),
        Command::Sweep {
            model,
            variable,
            values,
            split,
        } => cmd_sweep(&config, model, variable, values, split),
        Command::Report => cmd_report(&config),
    }
}

fn ensure_dir(path: &Path) -> Result<()> {
    std::fs::create_dir_all(path).map_err(|e| Error::io(path, e))
}

fn require_prepared(paths: &[PathBuf]) -> Result<()> {
    for path in paths {
        if !path.exists() {
            return Err(Error::MissingArtifact(format!(
                "{} not found; run `prepare` first",
                path.display()
            )));
        }
    }
    Ok(())
}

pub fn cmd_prepare(config: &ExperimentConfig) -> Result<()> {
    let raw_path = &config.dataset.path;
    if !raw_path.exists() {
        return Err(Error::io(
            raw_path,
            std::io::Error::new(
                std::io::ErrorKind::NotFound,
                "raw dataset file does not exist",
            ),
        ));
    }
    let paths = config.paths();
    ensure_dir(&paths.data_dir())?;
    let provenance = config.provenance();

    let gap = Duration::from_secs(config.dataset.retail_gap_minutes * 60);
    let events = data::ingest(raw_path, config.format(), gap)?;
    let preprocessed = data::preprocess(
        &events,
        config.dataset.min_item_support,
        config.dataset.min_session_length,
    )?;
    if config.dataset.fraction as usize > preprocessed.sessions.len() {
        eprintln!(
            "warning: fraction 1/{} exceeds the session count ({}); keeping the most recent session",
            config.dataset.fraction,
            preprocessed.sessions.len()
        );
    }
    let dataset = data::temporal_fraction(&preprocessed, config.dataset.fraction)?;

    data::write_normalized(&dataset, &paths.normalized())?;
    let stats = data::compute_stats(&dataset)?;
    data::write_stats(&stats, &config.dataset_name(), &paths.stats(), &provenance)?;

    let split = data::split_by_days(&dataset, config.dataset.test_days)?;
    data::write_normalized(&split.train, &paths.train())?;
    data::write_normalized(&split.test, &paths.test())?;

    let validation = tuning::make_validation_split(&split.train, config.dataset.test_days)?;
    data::write_normalized(&validation.train, &paths.subtrain())?;
    data::write_normalized(&validation.test, &paths.validation())?;

    println!(
        "{}: {} clicks, {} items, {} categories, {} sessions, avg length {:.2}",
        config.dataset_name(),
        stats.clicks,
        stats.items,
        stats.categories,
        stats.sessions,
        stats.avg_session_length
    );
    println!(
        "train {} / test {} sessions (boundary {}), tuning split {} / {}",
        split.train.sessions.len(),
        split.test.sessions.len(),
        split.split_boundary,
        validation.train.sessions.len(),
        validation.test.sessions.len()
    );
    println!("wrote {}", paths.data_dir().display());
    Ok(())
}

pub fn cmd_tune(
    config: &ExperimentConfig,
    model: &str,
    trials: Option<usize>,
    smoke: bool,
    tune_on_test: bool,
) -> Result<()> {
    let kind: ModelKind = model.parse()?;
    let paths = config.paths();
    ensure_dir(&paths.tuned_dir())?;
    let provenance = config.provenance();
    let space = config.space_for(kind)?;
    let mut n_trials = trials.unwrap_or_else(|| config.trials_for(kind));
    if smoke {
        n_trials = n_trials.min(SMOKE_TRIALS);
    }

    if tune_on_test {
        require_prepared(&[paths.train(), paths.test()])?;
        let (train, test) = data::read_split(&paths.train(), &paths.test())?;
        let report = tuning::tune_on_test(
            kind,
            &space,
            n_trials,
            config.seed,
            &train,
            &test,
            config.dataset.test_days,
        )?;
        let rendered = format!(
            "# {provenance}\n{}\nproperly tuned params:\n{}\ntest-tuned params:\n{}",
            report.render(),
            crate::models::render_params(&report.proper_params),
            crate::models::render_params(&report.test_tuned_params),
        );
        let path = paths.flaw_demo(kind);
        std::fs::write(&path, &rendered).map_err(|e| Error::io(&path, e))?;
        print!("{rendered}");
        println!("wrote {}", path.display());
        return Ok(());
    }

    require_prepared(&[paths.subtrain(), paths.validation()])?;
    let (subtrain, validation) = data::read_split(&paths.subtrain(), &paths.validation())?;
    let outcome =
        tuning::random_search(kind, &space, n_trials, config.seed, &subtrain, &validation)?;
    tuning::write_best_params(
        &paths.best_params(kind),
        &outcome.best_params,
        &provenance,
        outcome.best_objective,
    )?;
    tuning::write_trial_csv(&paths.trial_log(kind), &outcome, &provenance)?;
    tuning::write_search_summary(&paths.search_summary(kind), &outcome, &provenance)?;
    println!(
        "{kind}: best mrr@20 {:.4} at trial {} of {}",
        outcome.best_objective,
        outcome.best_trial,
        outcome.trials.len()
    );
    println!("wrote {}", paths.best_params(kind).display());
    Ok(())
}

/// Parameters for eval/sweep: tuned file, else fixed params from the
/// config, else an error pointing at `tune`.
fn resolve_params(
    config: &ExperimentConfig,
    kind: ModelKind,
    allow_defaults: bool,
) -> Result<ModelParams> {
    let tuned_path = config.paths().best_params(kind);
    if tuned_path.exists() {
        return tuning::read_best_params(&tuned_path);
    }
    if let Some(fixed) = config.fixed_params(kind)? {
        return Ok(fixed);
    }
    if allow_defaults {
        return Ok(kind.default_params());
    }
    Err(Error::MissingArtifact(format!(
        "no tuned config at {} and no [models.{kind}.fixed] section; run `tune` first",
        tuned_path.display()
    )))
}

pub fn cmd_eval(config: &ExperimentConfig, model: &str) -> Result<()> {
    let kind: ModelKind = model.parse()?;
    let paths = config.paths();
    require_prepared(&[paths.train(), paths.test()])?;
    let params = resolve_params(config, kind, false)?;
    let (train, test) = data::read_split(&paths.train(), &paths.test())?;
    let popularity = PopularityTable::from_dataset(&train);

    let fit_start = Instant::now();
    let fitted = kind.fit(&train, &params, config.seed)?;
    let train_time = fit_start.elapsed();
    let outcome = eval::evaluate(
        fitted.as_ref(),
        &test,
        &popularity,
        &config.cutoffs,
        train_time,
    )?;

    let row = ResultRow::new(
        kind.as_str(),
        &outcome.metrics,
        &outcome.timing,
        config.seed,
        &config.hash(),
    );
    eval::append_result(&paths.results(), &row, &config.provenance())?;
    let max_k = *config.cutoffs.last().expect("validated cutoffs");
    println!(
        "{kind} on {}: mrr@{max_k} {:.4}, hr@{max_k} {:.4}, cov@{max_k} {:.4}, pop@{max_k} {:.4} \
         ({} events, fit {:.3} min, {:.3} ms/list)",
        config.dataset_name(),
        outcome.metrics.mrr.last().unwrap(),
        outcome.metrics.hr.last().unwrap(),
        outcome.metrics.cov,
        outcome.metrics.pop,
        outcome.metrics.event_count,
        outcome.timing.train_time_min,
        outcome.timing.mean_predict_ms
    );
    println!("appended {}", paths.results().display());
    Ok(())
}

fn parse_model_list(spec: &str) -> Result<Vec<ModelKind>> {
    if spec.eq_ignore_ascii_case("all") {
        return Ok(crate::models::ALL_MODEL_KINDS.to_vec());
    }
    spec.split(',')
        .map(|name| name.trim().parse())
        .collect::<Result<Vec<ModelKind>>>()
}

pub fn cmd_sweep(
    config: &ExperimentConfig,
    model: &str,
    variable: &str,
    raw_values: &[String],
    split: &str,
) -> Result<()> {
    let kinds = parse_model_list(model)?;
    let values: Vec<ParamValue> = raw_values
        .iter()
        .map(|v| v.parse())
        .collect::<Result<_>>()?;
    let paths = config.paths();
    let (fit_file, eval_file) = match split {
        "test" => (paths.train(), paths.test()),
        "validation" => (paths.subtrain(), paths.validation()),
        other => {
            return Err(Error::InvalidArguments(format!(
                "unknown split `{other}` (test or validation)"
            )))
        }
    };
    require_prepared(&[fit_file.clone(), eval_file.clone()])?;
    ensure_dir(&paths.sweeps_dir())?;
    let (train, eval_set) = data::read_split(&fit_file, &eval_file)?;
    let provenance = config.provenance();

    let mut results = Vec::with_capacity(kinds.len());
    for &kind in &kinds {
        let base = resolve_params(config, kind, true)?;
        let result = tuning::sweep(
            kind,
            &base,
            variable,
            &values,
            &train,
            &eval_set,
            config.seed,
        )?;
        tuning::write_sweep_csv(&paths.sweep_csv(kind, variable), &result, &provenance)?;
        tuning::write_sweep_summary(&paths.sweep_summary(kind, variable), &result, &provenance)?;
        tuning::write_histogram(&paths.sweep_histogram(kind, variable), &result, &provenance)?;
        println!(
            "{kind} sweep over {variable} ({} values, {} split): {}",
            result.points.len(),
            split,
            result.summary.render()
        );
        results.push(result);
    }

    if results.len() > 1 {
        // Robustness table over all swept models, sorted by diff.
        results.sort_by(|a, b| b.summary.diff.total_cmp(&a.summary.diff));
        let mut table = format!("# {provenance}\nsweep over {variable}, sorted by diff\n");
        table.push_str("model   mrr@20 mean ± std | max | min | diff\n");
        for result in &results {
            table.push_str(&format!(
                "{:<7} {}\n",
                result.model,
                result.summary.render()
            ));
        }
        let path = paths.sweeps_dir().join(format!("{variable}.summary.txt"));
        std::fs::write(&path, &table).map_err(|e| Error::io(&path, e))?;
        print!("{table}");
    }
    println!("wrote {}", paths.sweeps_dir().display());
    Ok(())
}

pub fn cmd_report(config: &ExperimentConfig) -> Result<()> {
    let paths = config.paths();
    let rows = eval::read_results(&paths.results())?;
    let title = format!(
        "{} — results sorted by MRR@{} ({})",
        config.dataset_name(),
        config.cutoffs.last().expect("validated cutoffs"),
        config.provenance()
    );
    let table = eval::render_table(&title, &rows);
    print!("{table}");
    ensure_dir(&paths.root)?;
    std::fs::write(paths.report(), &table).map_err(|e| Error::io(paths.report(), e))?;
    Ok(())
}
