//! Incremental-reveal evaluation: protocol, metrics, runner and reports.

pub mod metrics;
pub mod protocol;
pub mod report;
pub mod runner;

pub use metrics::{MetricReport, TimingReport};
pub use protocol::{iterate_events, rank_of_target, PredictionEvent};
pub use report::{append_result, read_results, render_table, results_header, ResultRow};
pub use runner::{evaluate, EvalOutcome};
