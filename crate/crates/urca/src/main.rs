use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use urca::{run, ConfigError, Experiment, Preset, RunConfig, EXIT_CONFIG, EXIT_RUNTIME};

/// Runs the inverse beta decay experiment battery and writes report.json
/// and CSV tables.
#[derive(Parser, Debug)]
#[command(version, about)]
struct Cli {
    /// TOML run configuration; omitted keys come from the preset.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Experiment to run; defaults to the config value (all).
    #[arg(long, value_enum)]
    experiment: Option<Experiment>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for all sampling and Lanczos start vectors.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    /// Suppress progress lines on stderr.
    #[arg(long, short)]
    quiet: bool,
}

fn load(cli: &Cli) -> Result<RunConfig, ConfigError> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p, cli.preset)?,
        None => RunConfig::preset(cli.preset.unwrap_or(Preset::Toy)),
    };
    if let Some(e) = cli.experiment {
        cfg.experiment = e;
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(o) = &cli.out {
        cfg.output.dir = o.display().to_string();
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match load(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    let out = PathBuf::from(&cfg.output.dir);
    match run(&cfg, &out, !cli.quiet) {
        Ok(summary) => {
            if !cli.quiet {
                eprintln!(
                    "{} -> {}",
                    if summary.report.pass { "PASS" } else { "FAIL" },
                    out.join("report.json").display()
                );
            }
            ExitCode::from(summary.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_RUNTIME as u8)
        }
    }
}
