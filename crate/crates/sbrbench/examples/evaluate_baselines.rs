//! Fit all four baselines and run the incremental-reveal evaluation,
//! rendering the usual result table.
//!
//! ```bash
//! cargo run --release --example evaluate_baselines
//! ```

use std::time::Instant;

use sbrbench::data::{preprocess, split_by_days, PopularityTable};
use sbrbench::eval::{evaluate, render_table, ResultRow};
use sbrbench::models::ALL_MODEL_KINDS;
use sbrbench::synth::{generate_events, SynthConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let events = generate_events(&SynthConfig {
        sessions: 1_500,
        items: 200,
        days: 12,
        ..SynthConfig::default()
    });
    let dataset = preprocess(&events, 5, 2)?;
    let split = split_by_days(&dataset, 2)?;
    println!(
        "synthetic corpus: {} train / {} test sessions",
        split.train.sessions.len(),
        split.test.sessions.len()
    );

    let popularity = PopularityTable::from_dataset(&split.train);
    let mut rows = Vec::new();
    for kind in ALL_MODEL_KINDS {
        let params = kind.default_params();
        let started = Instant::now();
        let model = kind.fit(&split.train, &params, 0)?;
        let train_time = started.elapsed();
        let outcome = evaluate(
            model.as_ref(),
            &split.test,
            &popularity,
            &[10, 20],
            train_time,
        )?;
        rows.push(ResultRow::new(
            kind.as_str(),
            &outcome.metrics,
            &outcome.timing,
            0,
            "untuned",
        ));
    }

    print!("{}", render_table("SYNTH — untuned defaults", &rows));
    println!("(tune with the `random_search` example or the CLI for fair numbers)");
    Ok(())
}
