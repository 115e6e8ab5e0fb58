//! Random-search tuning, robustness sweeps and the tune-on-test demo.

pub mod flawdemo;
pub mod io;
pub mod search;
pub mod space;
pub mod sweep;

pub use flawdemo::{tune_on_test, TuneOnTestReport, FLAW_DEMO_LABEL};
pub use io::{
    read_best_params, write_best_params, write_histogram, write_search_summary, write_sweep_csv,
    write_sweep_summary, write_trial_csv, HISTOGRAM_BINS,
};
pub use search::{
    make_validation_split, random_search, sample_trials, SearchOutcome, Trial, OBJECTIVE_CUTOFF,
};
pub use space::{ParamDomain, Scale, SearchSpace, DISABLED_PROBABILITY};
pub use sweep::{histogram_bins, sweep, SweepPoint, SweepResult, SweepSummary};
