//! Ingest a raw click log, preprocess it and build the temporal splits.
//!
//! Works on a synthetic Diginetica-format file so it runs without any
//! downloaded dataset:
//!
//! ```bash
//! cargo run --release --example prepare_dataset
//! ```

use sbrbench::data::{
    compute_stats, ingest, preprocess, split_by_days, temporal_fraction, RawFormat,
    DEFAULT_RETAIL_GAP,
};
use sbrbench::synth::{generate_events, write_raw_file, SynthConfig};
use sbrbench::tuning::make_validation_split;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let raw = dir.path().join("train-item-views.csv");
    let events = generate_events(&SynthConfig {
        sessions: 600,
        items: 80,
        days: 14,
        ..SynthConfig::default()
    });
    write_raw_file(&events, RawFormat::Digi, &raw)?;
    println!("wrote synthetic raw file: {}", raw.display());

    let parsed = ingest(&raw, RawFormat::Digi, DEFAULT_RETAIL_GAP)?;
    println!("ingested {} events", parsed.len());

    // Item-support and session-length filters, as one pass.
    let dataset = preprocess(&parsed, 5, 2)?;
    let stats = compute_stats(&dataset)?;
    println!(
        "preprocessed: {} clicks, {} items, {} sessions, avg length {:.2}",
        stats.clicks, stats.items, stats.sessions, stats.avg_session_length
    );

    // Temporal fraction: keep the most recent half of the sessions.
    let half = temporal_fraction(&dataset, 2)?;
    println!("1/2 fraction keeps {} sessions", half.sessions.len());

    // Last two days as test, and the same scheme again for tuning.
    let split = split_by_days(&dataset, 2)?;
    println!(
        "split at {}: {} train / {} test sessions",
        split.split_boundary,
        split.train.sessions.len(),
        split.test.sessions.len()
    );
    let validation = make_validation_split(&split.train, 2)?;
    println!(
        "tuning split: {} subtrain / {} validation sessions",
        validation.train.sessions.len(),
        validation.test.sessions.len()
    );
    Ok(())
}
