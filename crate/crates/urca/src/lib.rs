//! Config-driven experiment runner over `urca-core`.

pub mod config;
pub mod experiments;
pub mod report;

use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde_json::{json, Map};

pub use config::{ConfigError, Experiment, Preset, RunConfig};
pub use experiments::{Outcome, RunError, Session};

/// Process exit codes.
pub const EXIT_PASS: i32 = 0;
pub const EXIT_GATE_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

pub struct RunSummary {
    pub report: report::Report,
    pub outcomes: Vec<Outcome>,
    pub out_dir: PathBuf,
}

impl RunSummary {
    pub fn exit_code(&self) -> i32 {
        if self.report.pass {
            EXIT_PASS
        } else {
            EXIT_GATE_FAILED
        }
    }
}

fn timestamp() -> String {
    let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    format!("unix:{secs}")
}

/// Runs the configured experiments and writes the outputs under `out`.
pub fn run(cfg: &RunConfig, out: &Path, verbose: bool) -> Result<RunSummary, RunError> {
    let mut session = Session::new(cfg);
    let mut outcomes = Vec::new();
    for e in cfg.experiment.selected() {
        let t = Instant::now();
        let mut o = session.run(e)?;
        if verbose {
            for x in &o {
                let state = match (x.gated, x.pass) {
                    (_, true) => "pass",
                    (true, false) => "FAIL",
                    (false, false) => "fail (not gated)",
                };
                eprintln!("{:<18} {state:<16} {:.2?}", x.name, t.elapsed());
            }
        }
        outcomes.append(&mut o);
    }

    let mut extra = Map::new();
    let thresholds = session.thresholds_table();
    if cfg.experiment.selected().iter().any(|e| !matches!(e, Experiment::HypothesisChecks | Experiment::Invariants)) {
        let main = session.main()?;
        extra.insert(
            "constants".into(),
            report::constants_with_formulas(&main.constants, cfg.ir.n_max + 2),
        );
        extra.insert(
            "basis".into(),
            json!({
                "sector": "reachable closure of the vacuum",
                "dim": main.basis.len(),
                "modes": main.model.grid.counts(),
                "species": urca_core::fock::SPECIES.map(|s| s.name()),
                "max_coefficient": main.model.max_coeff(),
            }),
        );
    }
    let report = report::build(cfg, extra, &outcomes, &timestamp());
    report::write_all(out, &report, &[thresholds], &outcomes).map_err(|e| RunError::Setup(format!("writing {}: {e}", out.display())))?;
    Ok(RunSummary {
        report,
        outcomes,
        out_dir: out.to_path_buf(),
    })
}
