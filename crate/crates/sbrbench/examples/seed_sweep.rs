//! Robustness sweeps: vary the random seed (a no-op for these
//! deterministic baselines) and a real hyperparameter.
//!
//! ```bash
//! cargo run --release --example seed_sweep
//! ```

use sbrbench::data::{preprocess, split_by_days};
use sbrbench::models::{ModelKind, ParamValue, ALL_MODEL_KINDS};
use sbrbench::synth::{generate_events, SynthConfig};
use sbrbench::tuning::{histogram_bins, sweep};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let events = generate_events(&SynthConfig {
        sessions: 700,
        items: 100,
        days: 10,
        ..SynthConfig::default()
    });
    let dataset = preprocess(&events, 2, 2)?;
    let split = split_by_days(&dataset, 2)?;

    // Seeds drawn from a wide range; the baselines ignore them, so every
    // diff column is exactly zero.
    let seeds: Vec<ParamValue> = [100i64, 2_000, 55_555, 1_000_000, 7_777_777]
        .iter()
        .map(|&s| ParamValue::Int(s))
        .collect();
    println!("seed sweep, mean ± std | max | min | diff:");
    for kind in ALL_MODEL_KINDS {
        let result = sweep(
            kind,
            &kind.default_params(),
            "seed",
            &seeds,
            &split.train,
            &split.test,
            0,
        )?;
        println!("  {kind:<7} {}", result.summary.render());
    }

    // A parameter that actually matters.
    let values: Vec<ParamValue> = [1i64, 2, 5, 10, 20]
        .iter()
        .map(|&v| ParamValue::Int(v))
        .collect();
    let result = sweep(
        ModelKind::Sr,
        &ModelKind::Sr.default_params(),
        "max_steps",
        &values,
        &split.train,
        &split.test,
        0,
    )?;
    println!("\nsr over max_steps:");
    for point in &result.points {
        println!(
            "  max_steps={:<9} mrr@20 {:.4}",
            point.value.to_string(),
            point.objective
        );
    }
    println!("  summary: {}", result.summary.render());

    let objectives: Vec<f64> = result.points.iter().map(|p| p.objective).collect();
    let bins = histogram_bins(&objectives, 20);
    let occupied = bins.iter().filter(|(_, count)| *count > 0).count();
    println!("  histogram: 20 bins over [min, max], {occupied} occupied");
    Ok(())
}
