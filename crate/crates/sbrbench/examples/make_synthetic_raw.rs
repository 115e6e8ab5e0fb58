//! Write a synthetic raw click log so the CLI can be tried without any
//! downloaded dataset.
//!
//! ```bash
//! cargo run --release --example make_synthetic_raw -- clicks.csv rsc15 20000
//! sbrbench prepare --config my.toml   # with dataset.path = "clicks.csv"
//! ```

use sbrbench::data::RawFormat;
use sbrbench::synth::{generate_events, write_raw_file, SynthConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| "clicks.csv".into());
    let format: RawFormat = args.next().unwrap_or_else(|| "rsc15".into()).parse()?;
    let sessions: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(20_000);

    let events = generate_events(&SynthConfig {
        sessions,
        items: (sessions / 5).clamp(50, 40_000),
        days: 30,
        ..SynthConfig::default()
    });
    write_raw_file(&events, format, std::path::Path::new(&path))?;
    println!(
        "wrote {} events / {sessions} sessions in {} format to {path}",
        events.len(),
        format.as_str()
    );
    Ok(())
}
