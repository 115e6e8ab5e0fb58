//! Benchmarking toolkit for session-based recommendation.
//!
//! The crate covers the full offline-evaluation loop for non-neural
//! session-based recommenders on click-stream data:
//!
//! - [`data`] — ingestion of the RSC15 / Diginetica / Retailrocket raw
//!   formats, preprocessing (item-support and session-length filters),
//!   temporal fractions, day-based train/test splits and dataset statistics.
//! - [`models`] — four baselines behind one [`models::SessionModel`]
//!   contract: sequential rules (SR) and the session-kNN family
//!   (STAN, VSTAN, SFSKNN) built on an inverted [`models::SessionIndex`].
//! - [`eval`] — the incremental-reveal protocol with MRR@K, HR@K,
//!   coverage, popularity and timing reports.
//! - [`tuning`] — seeded random-search hyperparameter optimization on a
//!   validation split, parameter/seed robustness sweeps, and a
//!   tune-on-test demonstrator for the data-leakage anti-pattern.
//! - [`config`] / [`cli`] — declarative experiment configs and the
//!   `prepare` / `tune` / `eval` / `sweep` / `report` commands.
//! - [`synth`] — synthetic click-stream generators so every example and
//!   test can run without the (separately licensed) public datasets.
//!
//! Run `cargo run --release -- --help` for the CLI, or start from the
//! runnable programs under `examples/`.

pub mod cli;
pub mod config;
pub mod data;
pub mod error;
pub mod eval;
pub mod models;
pub mod synth;
pub mod tuning;

pub use error::{Error, Result};

/// Toolkit version stamped into result files for provenance.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
