use std::path::PathBuf;
use std::process::ExitCode;

use chaos_itineraries::experiments::{parse_map_spec, run, Command, ExperimentConfig, Format};
use chaos_itineraries::Error;
use clap::{Parser, ValueEnum};

#[derive(Clone, Copy, Debug, ValueEnum)]
#[value(rename_all = "kebab-case")]
enum Cmd {
    RhoTable,
    Superstable,
    Warmup,
    Bifurcation,
    Certify,
    Phase,
    Cycles,
    Synth,
    Vc,
    Counterexample,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Command {
        match c {
            Cmd::RhoTable => Command::RhoTable,
            Cmd::Superstable => Command::Superstable,
            Cmd::Warmup => Command::Warmup,
            Cmd::Bifurcation => Command::Bifurcation,
            Cmd::Certify => Command::Certify,
            Cmd::Phase => Command::Phase,
            Cmd::Cycles => Command::Cycles,
            Cmd::Synth => Command::Synth,
            Cmd::Vc => Command::Vc,
            Cmd::Counterexample => Command::Counterexample,
        }
    }
}

/// Reproduce the tables, figures and certificates of the
/// itinerary/depth-width library.
#[derive(Debug, Parser)]
#[command(version)]
struct Cli {
    #[arg(value_enum)]
    command: Cmd,
    /// JSON file mirroring the experiment configuration; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Map as `kind:r`, e.g. `logistic:0.8671` or `tent:1`. Repeatable.
    #[arg(long = "map")]
    maps: Vec<String>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long = "p-max")]
    p_max: Option<usize>,
    #[arg(long = "k-max")]
    k_max: Option<usize>,
    #[arg(long)]
    l: Option<usize>,
    /// Rational or decimal, e.g. `1/10`.
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    d: Option<usize>,
    /// Regular expression over {0,1}. Repeatable.
    #[arg(long)]
    regex: Vec<String>,
    #[arg(long = "r-lo")]
    r_lo: Option<f64>,
    #[arg(long = "r-hi")]
    r_hi: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    burn: Option<usize>,
    #[arg(long)]
    keep: Option<usize>,
    /// Output directory; without it the chosen format goes to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    format: Option<String>,
    /// Knot or node cap for exact iteration.
    #[arg(long)]
    cap: Option<usize>,
    /// Worker threads.
    #[arg(long)]
    jobs: Option<usize>,
    /// Seed for the random candidate sweep.
    #[arg(long)]
    seed: Option<u64>,
}

impl Cli {
    fn config(&self) -> chaos_itineraries::Result<ExperimentConfig> {
        let base = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        let flags = ExperimentConfig {
            maps: self
                .maps
                .iter()
                .map(|s| parse_map_spec(s))
                .collect::<chaos_itineraries::Result<_>>()?,
            k_max: self.k_max,
            p: self.p,
            p_max: self.p_max,
            l: self.l,
            eps: self.eps.clone(),
            d: self.d,
            regex: self.regex.clone(),
            r_lo: self.r_lo,
            r_hi: self.r_hi,
            steps: self.steps,
            burn: self.burn,
            keep: self.keep,
            out: self.out.clone(),
            format: self
                .format
                .as_deref()
                .map(str::parse::<Format>)
                .transpose()?,
            cap: self.cap,
            jobs: self.jobs,
            seed: self.seed,
            ..ExperimentConfig::default()
        };
        let cfg = base.overlay(flags);
        cfg.validate()?;
        Ok(cfg)
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::ResourceCap { .. } => 3,
        Error::Parse(_) | Error::InvalidArgument(_) | Error::OutOfRange(_) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let cfg = match cli.config() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    if let Some(jobs) = cfg.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let report = match run(cli.command.into(), &cfg) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(exit_code(&e));
        }
    };
    let written = match &cfg.out {
        Some(dir) => report.write(dir, cfg.format).map(|paths| {
            for p in paths {
                eprintln!("wrote {}", p.display());
            }
        }),
        None => report
            .render(cfg.format.unwrap_or(Format::Csv))
            .map(|text| print!("{text}")),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(exit_code(&e));
    }
    for line in report.assertion_lines() {
        eprintln!("{line}");
    }
    ExitCode::from(if report.passed() { 0 } else { 1 })
}
