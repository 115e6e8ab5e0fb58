//! The whole CLI pipeline driven programmatically from a config file:
//! prepare -> tune -> eval -> sweep -> report, on synthetic data.
//!
//! ```bash
//! cargo run --release --example cli_pipeline
//! ```

use sbrbench::cli::{cmd_eval, cmd_prepare, cmd_report, cmd_sweep, cmd_tune};
use sbrbench::config::{ExperimentConfig, Overrides};
use sbrbench::data::RawFormat;
use sbrbench::synth::{generate_events, write_raw_file, SynthConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = tempfile::tempdir()?;
    let raw = dir.path().join("clicks.csv");
    let events = generate_events(&SynthConfig {
        sessions: 500,
        items: 80,
        days: 10,
        ..SynthConfig::default()
    });
    write_raw_file(&events, RawFormat::Rsc15, &raw)?;

    let config_text = format!(
        r#"
seed = 42
out = "{out}"
cutoffs = [10, 20]

[dataset]
name = "SYNTH"
format = "rsc15"
path = "{raw}"
test_days = 2
min_item_support = 2

[models.sr]
n_trials = 4

[models.stan]
n_trials = 6
"#,
        out = dir.path().join("runs").display(),
        raw = raw.display(),
    );
    let config_path = dir.path().join("synth.toml");
    std::fs::write(&config_path, config_text)?;

    let config = ExperimentConfig::load(&config_path, &Overrides::default())?;
    println!("config hash {}", config.hash());

    cmd_prepare(&config)?;
    for model in ["sr", "stan"] {
        cmd_tune(&config, model, None, false, false)?;
        cmd_eval(&config, model)?;
    }
    cmd_sweep(
        &config,
        "sr",
        "seed",
        &["1".into(), "2".into(), "3".into()],
        "test",
    )?;
    cmd_report(&config)?;
    println!("\nartifacts under {}", config.out.display());
    Ok(())
}
