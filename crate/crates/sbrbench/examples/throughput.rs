//! Training/prediction timing at realistic scale: a synthetic corpus in
//! the size class of the public e-commerce datasets.
//!
//! ```bash
//! cargo run --release --example throughput
//! ```

use std::time::Instant;

use sbrbench::data::{compute_stats, preprocess, split_by_days, PopularityTable};
use sbrbench::eval::evaluate;
use sbrbench::models::ALL_MODEL_KINDS;
use sbrbench::synth::{generate_events, SynthConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sessions: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(100_000);
    println!("generating ~{sessions} synthetic sessions...");
    let events = generate_events(&SynthConfig {
        sessions,
        items: 20_000,
        days: 60,
        ..SynthConfig::default()
    });
    let started = Instant::now();
    let dataset = preprocess(&events, 5, 2)?;
    let stats = compute_stats(&dataset)?;
    println!(
        "preprocessed {} clicks / {} items / {} sessions in {:.2?}",
        stats.clicks,
        stats.items,
        stats.sessions,
        started.elapsed()
    );
    let split = split_by_days(&dataset, 2)?;
    let test_events: usize = split.test.sessions.iter().map(|s| s.len() - 1).sum();
    println!(
        "train {} sessions, test {} sessions ({test_events} prediction events)",
        split.train.sessions.len(),
        split.test.sessions.len()
    );

    let popularity = PopularityTable::from_dataset(&split.train);
    println!("\nmodel    t_time_m   p_time_ms   mrr@20");
    for kind in ALL_MODEL_KINDS {
        let params = kind.default_params();
        let fit_start = Instant::now();
        let model = kind.fit(&split.train, &params, 0)?;
        let train_time = fit_start.elapsed();
        let outcome = evaluate(
            model.as_ref(),
            &split.test,
            &popularity,
            &[10, 20],
            train_time,
        )?;
        println!(
            "{kind:<7}  {:>8.3}  {:>10.3}  {:>7.4}",
            outcome.timing.train_time_min,
            outcome.timing.mean_predict_ms,
            outcome.metrics.mrr_at(20).unwrap()
        );
    }
    Ok(())
}
