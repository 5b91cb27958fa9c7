//! Run one experiment driver and write every output format it offers.
//!
//! `cargo run --example run_experiment -- warmup /tmp/out`

use std::path::PathBuf;

use chaos_itineraries::experiments::{run, Command, ExperimentConfig};

fn main() -> chaos_itineraries::Result<()> {
    let mut args = std::env::args().skip(1);
    let command: Command = args.next().unwrap_or_else(|| "rho-table".into()).parse()?;
    let out = PathBuf::from(args.next().unwrap_or_else(|| "out".into()));
    let report = run(command, &ExperimentConfig::default())?;
    for path in report.write(&out, None)? {
        println!("wrote {}", path.display());
    }
    for line in report.assertion_lines() {
        println!("{line}");
    }
    Ok(())
}
