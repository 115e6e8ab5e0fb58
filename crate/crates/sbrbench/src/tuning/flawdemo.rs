//! Tune-on-test demonstrator.
//!
//! Runs the identical trial sequence twice: once validated properly (on a
//! held-out slice of the training data) and once validated on the test
//! set itself. Both winners are then scored on the test set. The gap
//! shows how much of an "improvement" data leakage alone can buy.

use std::time::Duration;

use crate::data::{PopularityTable, SessionDataset};
use crate::error::{Error, Result};
use crate::eval::evaluate;
use crate::models::{ModelKind, ModelParams};

use super::search::{
    best_trial, make_validation_split, run_trials, sample_trials, Trial, OBJECTIVE_CUTOFF,
};
use super::space::SearchSpace;

/// Every rendered tune-on-test report carries this label.
pub const FLAW_DEMO_LABEL: &str = "METHODOLOGICAL FLAW DEMO";

#[derive(Debug, Clone)]
pub struct TuneOnTestReport {
    pub model: ModelKind,
    pub n_trials: usize,
    pub seed: u64,
    pub proper_params: ModelParams,
    pub proper_validation_mrr: f64,
    pub proper_test_mrr: f64,
    pub test_tuned_params: ModelParams,
    pub test_tuned_test_mrr: f64,
    /// (test-tuned − properly-tuned) / properly-tuned, in percent.
    pub delta_percent: f64,
    pub proper_trials: Vec<Trial>,
    pub test_tuned_trials: Vec<Trial>,
}

impl TuneOnTestReport {
    pub fn render(&self) -> String {
        format!(
            "=== {label} ===\n\
             Tuning on the test set leaks the evaluation data into model\n\
             selection; the numbers below quantify the resulting optimism.\n\
             model: {model}   trials: {trials}   seed: {seed}\n\
             properly tuned   : MRR@{k} {proper:.4} on test (validation objective {valid:.4})\n\
             tuned on test    : MRR@{k} {leaky:.4} on test\n\
             leakage advantage: {delta:+.1}%\n",
            label = FLAW_DEMO_LABEL,
            model = self.model,
            trials = self.n_trials,
            seed = self.seed,
            k = OBJECTIVE_CUTOFF,
            proper = self.proper_test_mrr,
            valid = self.proper_validation_mrr,
            leaky = self.test_tuned_test_mrr,
            delta = self.delta_percent,
        )
    }
}

/// Run the two-arm comparison.
pub fn tune_on_test(
    kind: ModelKind,
    space: &SearchSpace,
    n_trials: usize,
    seed: u64,
    train: &SessionDataset,
    test: &SessionDataset,
    test_days: u32,
) -> Result<TuneOnTestReport> {
    if n_trials == 0 {
        return Err(Error::InvalidArguments("n_trials must be >= 1".into()));
    }
    space.validate()?;
    let configs = sample_trials(space, n_trials, seed);

    // Arm 1: proper protocol. Tune on (subtrain, validation), refit the
    // winner on the full training data, report on test.
    let validation_split = make_validation_split(train, test_days)?;
    let proper_trials = run_trials(
        kind,
        &configs,
        &validation_split.train,
        &validation_split.test,
        seed,
    );
    let proper_best = best_trial(&proper_trials)?.clone();
    let train_pop = PopularityTable::from_dataset(train);
    let proper_model = kind.fit(train, &proper_best.params, seed)?;
    let proper_test_mrr = evaluate(
        proper_model.as_ref(),
        test,
        &train_pop,
        &[OBJECTIVE_CUTOFF],
        Duration::ZERO,
    )?
    .metrics
    .mrr_at(OBJECTIVE_CUTOFF)
    .unwrap_or(0.0);

    // Arm 2: the flawed protocol. The identical configurations are
    // validated directly on the test set.
    let leaky_trials = run_trials(kind, &configs, train, test, seed);
    let leaky_best = best_trial(&leaky_trials)?.clone();
    let test_tuned_test_mrr = leaky_best.objective;

    let delta_percent = if proper_test_mrr > 0.0 {
        (test_tuned_test_mrr - proper_test_mrr) / proper_test_mrr * 100.0
    } else {
        0.0
    };

    Ok(TuneOnTestReport {
        model: kind,
        n_trials,
        seed,
        proper_params: proper_best.params,
        proper_validation_mrr: proper_best.objective,
        proper_test_mrr,
        test_tuned_params: leaky_best.params,
        test_tuned_test_mrr,
        delta_percent,
        proper_trials,
        test_tuned_trials: leaky_trials,
    })
}
