use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use noisefold_cli::{run_experiment, write_outputs, CliError, RunConfig, EXIT_ASSERTION, EXIT_PASS, SEED_ENV};

#[derive(Parser)]
#[command(name = "noisefold", about = "Perturbative master equations for combined quantum and classical noise")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one configured experiment and write its outputs.
    Run {
        /// TOML configuration file; omitted fields take their defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Dotted override, e.g. `strengths.lambda=0.05`. Repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
        /// Also write SVG plots.
        #[arg(long)]
        plot: bool,
        /// Worker thread cap.
        #[arg(long)]
        threads: Option<usize>,
    },
}

fn load(config: Option<&PathBuf>, set: &[String]) -> Result<RunConfig, CliError> {
    let text = match config {
        Some(p) => std::fs::read_to_string(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?,
        None => String::new(),
    };
    let mut overrides = set.to_vec();
    if let Ok(seed) = std::env::var(SEED_ENV) {
        let seed: u64 = seed
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("{SEED_ENV}: expected an unsigned integer, got {seed:?}")))?;
        overrides.push(format!("noise.seed={seed}"));
    }
    let cfg = RunConfig::from_toml_str(&text, &overrides)?;
    cfg.validate()?;
    Ok(cfg)
}

fn run(config: Option<PathBuf>, set: Vec<String>, plot: bool, threads: Option<usize>) -> Result<i32, CliError> {
    if let Some(n) = threads {
        if n == 0 {
            return Err(CliError::Config("--threads: must be >= 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Engine(e.to_string()))?;
    }
    let cfg = load(config.as_ref(), &set)?;
    let outcome = run_experiment(&cfg)?;
    let files = write_outputs(&cfg.output_dir, &cfg, &outcome, plot)?;
    for c in &outcome.checks {
        println!("{} {}: {:.6e} ({})", if c.passed { "PASS" } else { "FAIL" }, c.name, c.measured, c.tolerance);
    }
    for f in files {
        println!("wrote {}", f.display());
    }
    if outcome.passed() {
        Ok(EXIT_PASS)
    } else {
        for c in outcome.checks.iter().filter(|c| !c.passed) {
            eprintln!("assertion failed: {} measured {:e}, required {}", c.name, c.measured, c.tolerance);
        }
        Ok(EXIT_ASSERTION)
    }
}

fn main() -> ExitCode {
    let Command::Run { config, set, plot, threads } = Cli::parse().command;
    match run(config, set, plot, threads) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
