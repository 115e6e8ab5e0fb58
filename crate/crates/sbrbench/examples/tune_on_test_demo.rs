//! What tuning on the test set buys you: the data-leakage demonstration.
//!
//! ```bash
//! cargo run --release --example tune_on_test_demo
//! ```

use sbrbench::data::{preprocess, split_by_days};
use sbrbench::models::ModelKind;
use sbrbench::synth::{generate_events, SynthConfig};
use sbrbench::tuning::{tune_on_test, SearchSpace};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let events = generate_events(&SynthConfig {
        sessions: 900,
        items: 120,
        days: 12,
        seed: 21,
        ..SynthConfig::default()
    });
    let dataset = preprocess(&events, 2, 2)?;
    let split = split_by_days(&dataset, 2)?;

    let kind = ModelKind::Stan;
    let report = tune_on_test(
        kind,
        &SearchSpace::default_for(kind),
        20,
        3,
        &split.train,
        &split.test,
        2,
    )?;
    print!("{}", report.render());
    println!(
        "winning configs differ: {}",
        report.proper_params != report.test_tuned_params
    );
    Ok(())
}
