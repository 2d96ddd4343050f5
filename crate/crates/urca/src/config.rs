//! Run configuration: a TOML file layered over a named preset.

use std::path::Path;

use serde::{Deserialize, Serialize};
use urca_core::fock::{Axis, GridConfig, DEFAULT_MAX_DIM, DEFAULT_MODE_CAP};
use urca_core::kernels::{ChargedProfile, KernelPair, KernelSpec, NeutrinoProfile, NeutronProfile};
use urca_core::params::{Masses, ModelParams, COS_CABIBBO, G_FERMI};
use urca_core::spectra::{EigenOptions, Solver, CLUSTER_TOL};
use urca_core::vertex::DEFAULT_QUAD_ORDER;
use urca_core::C64;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Preset {
    Toy,
    Physical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Experiment {
    HypothesisChecks,
    Invariants,
    RelativeBound,
    GroundState,
    IrGap,
    PullThrough,
    SoftNumber,
    Degeneracy,
    All,
}

impl Experiment {
    pub const EACH: [Experiment; 8] = [
        Experiment::HypothesisChecks,
        Experiment::Invariants,
        Experiment::RelativeBound,
        Experiment::GroundState,
        Experiment::IrGap,
        Experiment::PullThrough,
        Experiment::SoftNumber,
        Experiment::Degeneracy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::HypothesisChecks => "hypothesis-checks",
            Experiment::Invariants => "invariants",
            Experiment::RelativeBound => "relative-bound",
            Experiment::GroundState => "ground-state",
            Experiment::IrGap => "ir-gap",
            Experiment::PullThrough => "pull-through",
            Experiment::SoftNumber => "soft-number",
            Experiment::Degeneracy => "degeneracy",
            Experiment::All => "all",
        }
    }

    pub fn selected(self) -> Vec<Experiment> {
        match self {
            Experiment::All => Self::EACH.to_vec(),
            e => vec![e],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MassSection {
    pub m_e: f64,
    pub m_p: f64,
    pub m_n: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldSection {
    /// Field strength times the unit charge.
    pub eb: f64,
    pub g_a: f64,
}

/// Couplings are given as fractions of the derived thresholds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingSection {
    /// Infrared step parameter, `0 < δ < m_e`.
    pub delta: f64,
    /// Ground-state runs, as fractions of g₀.
    pub ground_state: Vec<f64>,
    /// Pull-through run, fraction of g₀.
    pub pull_through: f64,
    /// Soft-neutrino runs, fractions of g₀.
    pub soft_number: Vec<f64>,
    /// Infrared gap study, fraction of g₂.
    pub ir_gap: f64,
    /// Multiplicity check, fraction of g₂.
    pub degeneracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairSection {
    /// `[re, im]` of the F amplitude.
    pub f_amp: [f64; 2],
    pub g_amp: [f64; 2],
    pub damping: f64,
    pub charged_width: f64,
    pub neutron_width: f64,
    pub neutrino_width: f64,
    /// Exponent of `|p₄|` in the neutrino profile.
    pub eta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelSection {
    pub beta1: PairSection,
    pub beta2: PairSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub n_landau: u32,
    pub charged_p1_count: usize,
    pub charged_p1_spacing: f64,
    pub charged_p3_count: usize,
    pub charged_p3_spacing: f64,
    pub neutron_count: usize,
    pub neutron_spacing: f64,
    pub single_helicity: bool,
    pub neutrino_edges: Vec<f64>,
    pub neutrino_directions: usize,
    pub mode_cap: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IrSection {
    /// Runs n = 1..=n_max.
    pub n_max: usize,
    /// Outer radius of the last neutrino shell.
    pub outer_edge: f64,
    pub directions: usize,
    /// Explicit shell edges; by default σ₁ … σ_{n_max+1} and `outer_edge`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edges: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SectorSection {
    pub max_dim: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    pub tol: f64,
    pub max_iter: usize,
    pub max_krylov: usize,
    pub cluster_tol: f64,
    pub quad_order: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChecksSection {
    pub relative_bound_trials: usize,
    pub spinor_n_max: u32,
    pub spinor_samples: usize,
    pub conjugation_samples: usize,
    /// Modes per species for the anticommutation check (12 in total at most).
    pub car_modes: [usize; 6],
    pub variational_trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: String,
    /// Write the Hamiltonian of the ground-state run in coordinate format.
    pub dump_operator: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub preset: Preset,
    pub experiment: Experiment,
    pub seed: u64,
    pub masses: MassSection,
    pub field: FieldSection,
    pub coupling: CouplingSection,
    pub kernels: KernelSection,
    pub grid: GridSection,
    pub ir: IrSection,
    pub sector: SectorSection,
    pub solver: SolverSection,
    pub checks: ChecksSection,
    pub output: OutputSection,
}

fn toy_pair(phase: f64, width: f64) -> PairSection {
    PairSection {
        f_amp: [phase.cos(), phase.sin()],
        g_amp: [(-0.5 * phase).cos(), (-0.5 * phase).sin()],
        damping: 0.5,
        charged_width: width,
        neutron_width: width,
        neutrino_width: width,
        eta: 0.0,
    }
}

impl RunConfig {
    pub fn preset(preset: Preset) -> Self {
        let toy = ModelParams::toy();
        let (params, unit) = match preset {
            Preset::Toy => (toy, 1.0),
            Preset::Physical => {
                let p = ModelParams::physical();
                (p, p.masses.m_e)
            }
        };
        RunConfig {
            preset,
            experiment: Experiment::All,
            seed: 7,
            masses: MassSection {
                m_e: params.masses.m_e,
                m_p: params.masses.m_p,
                m_n: params.masses.m_n,
            },
            field: FieldSection {
                eb: params.eb,
                g_a: params.g_a,
            },
            coupling: CouplingSection {
                delta: 0.5 * params.masses.m_e,
                ground_state: vec![0.2, 0.4, 0.6, 0.8, 1.0],
                pull_through: 0.25,
                soft_number: vec![0.125, 0.25, 0.5],
                ir_gap: 0.25,
                degeneracy: 0.5,
            },
            kernels: KernelSection {
                beta1: toy_pair(0.3, unit),
                beta2: toy_pair(-0.2, unit),
            },
            grid: GridSection {
                n_landau: 1,
                charged_p1_count: 1,
                charged_p1_spacing: unit,
                charged_p3_count: 1,
                charged_p3_spacing: unit,
                neutron_count: 1,
                neutron_spacing: unit,
                single_helicity: false,
                neutrino_edges: vec![0.5 * unit, unit, 1.5 * unit],
                neutrino_directions: 2,
                mode_cap: DEFAULT_MODE_CAP,
            },
            ir: IrSection {
                n_max: 4,
                outer_edge: unit,
                directions: 2,
                edges: None,
            },
            sector: SectorSection { max_dim: DEFAULT_MAX_DIM },
            solver: SolverSection {
                tol: 1e-10,
                max_iter: 20_000,
                max_krylov: 250,
                cluster_tol: CLUSTER_TOL,
                quad_order: DEFAULT_QUAD_ORDER,
            },
            checks: ChecksSection {
                relative_bound_trials: 1000,
                spinor_n_max: 6,
                spinor_samples: 20,
                conjugation_samples: 50,
                car_modes: [2, 2, 2, 2, 2, 2],
                variational_trials: 100,
            },
            output: OutputSection {
                dir: "out".into(),
                dump_operator: false,
            },
        }
    }

    /// Parses `text` layered over the preset it names (or `preset` when
    /// given, which takes precedence).
    pub fn from_toml(text: &str, origin: &str, preset: Option<Preset>) -> Result<Self, ConfigError> {
        let parse_err = |e: toml::de::Error| ConfigError::Parse {
            path: origin.into(),
            message: e.to_string(),
        };
        let user: toml::Table = toml::from_str(text).map_err(parse_err)?;
        // Field and type diagnostics with line numbers against a full schema.
        let base = preset
            .or_else(|| user.get("preset").and_then(|v| v.as_str()).and_then(|s| Self::parse_preset(s)))
            .unwrap_or(Preset::Toy);
        let mut merged = toml::Table::try_from(Self::preset(base)).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        merge(&mut merged, user);
        merged.insert("preset".into(), toml::Value::String(preset_name(base).into()));
        let rendered = toml::to_string(&merged).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        let cfg: RunConfig = match toml::from_str(&rendered) {
            Ok(c) => c,
            Err(_) => {
                // Re-parse the user text alone to point at the offending line.
                return Err(locate_error(text, origin, base));
            }
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path, preset: Option<Preset>) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_toml(&text, &path.display().to_string(), preset)
    }

    fn parse_preset(s: &str) -> Option<Preset> {
        match s {
            "toy" => Some(Preset::Toy),
            "physical" => Some(Preset::Physical),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        let m = &self.masses;
        if !(m.m_e > 0.0 && m.m_p > 0.0 && m.m_n > 0.0) {
            return bad("masses must be positive".into());
        }
        if !(self.field.eb > 0.0) {
            return bad("field.eb must be positive".into());
        }
        if !(self.coupling.delta > 0.0 && self.coupling.delta < m.m_e) {
            return bad(format!("coupling.delta = {} must lie in (0, m_e)", self.coupling.delta));
        }
        let fractions = self
            .coupling
            .ground_state
            .iter()
            .chain(&self.coupling.soft_number)
            .chain([&self.coupling.pull_through, &self.coupling.ir_gap, &self.coupling.degeneracy]);
        for f in fractions {
            if !(f.is_finite() && *f >= 0.0) {
                return bad(format!("coupling fractions must be finite and non-negative, got {f}"));
            }
        }
        if self.checks.car_modes.iter().sum::<usize>() > 12 {
            return bad("checks.car_modes allows at most 12 modes in total".into());
        }
        if self.ir.n_max == 0 {
            return bad("ir.n_max must be at least 1".into());
        }
        if !(self.solver.tol > 0.0 && self.solver.cluster_tol > 0.0) {
            return bad("solver tolerances must be positive".into());
        }
        self.kernel_spec()
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        self.params().validate().map_err(|e| ConfigError::Invalid(e.to_string()))
    }

    pub fn params(&self) -> ModelParams {
        ModelParams {
            masses: Masses {
                m_e: self.masses.m_e,
                m_p: self.masses.m_p,
                m_n: self.masses.m_n,
            },
            eb: self.field.eb,
            g_a: self.field.g_a,
            g_fermi: G_FERMI,
            cos_cabibbo: COS_CABIBBO,
        }
    }

    pub fn kernel_spec(&self) -> KernelSpec {
        let pair = |p: &PairSection| KernelPair {
            f_amp: C64::new(p.f_amp[0], p.f_amp[1]),
            f_charged: ChargedProfile {
                damping: p.damping,
                width: p.charged_width,
            },
            f_neutron: NeutronProfile { width: p.neutron_width },
            g_amp: C64::new(p.g_amp[0], p.g_amp[1]),
            g_charged: ChargedProfile {
                damping: p.damping,
                width: p.charged_width,
            },
            g_neutrino: NeutrinoProfile {
                eta: p.eta,
                width: p.neutrino_width,
            },
        };
        KernelSpec {
            beta: [pair(&self.kernels.beta1), pair(&self.kernels.beta2)],
        }
    }

    /// Grid of the main experiments.
    pub fn grid_config(&self) -> GridConfig {
        self.grid_with_edges(self.grid.neutrino_edges.clone(), self.grid.neutrino_directions)
    }

    pub fn grid_with_edges(&self, edges: Vec<f64>, directions: usize) -> GridConfig {
        let g = &self.grid;
        GridConfig {
            n_landau: g.n_landau,
            charged_p1: Axis {
                count: g.charged_p1_count,
                spacing: g.charged_p1_spacing,
            },
            charged_p3: Axis {
                count: g.charged_p3_count,
                spacing: g.charged_p3_spacing,
            },
            neutron: Axis {
                count: g.neutron_count,
                spacing: g.neutron_spacing,
            },
            single_helicity: g.single_helicity,
            neutrino_edges: edges,
            neutrino_directions: directions,
            mode_cap: g.mode_cap,
        }
    }

    pub fn eigen_options(&self) -> EigenOptions {
        EigenOptions {
            k: 3,
            tol: self.solver.tol,
            max_iter: self.solver.max_iter,
            max_krylov: self.solver.max_krylov,
            seed: self.seed,
            solver: Solver::Lanczos,
        }
    }
}

fn preset_name(p: Preset) -> &'static str {
    match p {
        Preset::Toy => "toy",
        Preset::Physical => "physical",
    }
}

/// Overwrites `base` with `over`, recursing into tables.
fn merge(base: &mut toml::Table, over: toml::Table) {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o),
            (_, v) => {
                base.insert(k, v);
            }
        }
    }
}

/// Finds the first section or key of `text` the schema rejects, so the
/// diagnostic carries its line.
fn locate_error(text: &str, origin: &str, base: Preset) -> ConfigError {
    #[derive(Deserialize)]
    #[serde(deny_unknown_fields)]
    #[allow(dead_code)]
    struct Partial {
        preset: Option<Preset>,
        experiment: Option<Experiment>,
        seed: Option<u64>,
        masses: Option<toml::Table>,
        field: Option<toml::Table>,
        coupling: Option<toml::Table>,
        kernels: Option<toml::Table>,
        grid: Option<toml::Table>,
        ir: Option<toml::Table>,
        sector: Option<toml::Table>,
        solver: Option<toml::Table>,
        checks: Option<toml::Table>,
        output: Option<toml::Table>,
    }
    if let Err(e) = toml::from_str::<Partial>(text) {
        return ConfigError::Parse {
            path: origin.into(),
            message: e.to_string(),
        };
    }
    // Merge one leaf at a time into the preset to find the rejected key.
    let user: toml::Table = toml::from_str(text).unwrap_or_default();
    let mut leaves = Vec::new();
    collect_leaves(&user, &mut Vec::new(), &mut leaves);
    for (path, value) in leaves {
        let mut merged = toml::Table::try_from(RunConfig::preset(base)).unwrap_or_default();
        let mut one = toml::Table::new();
        let mut cursor = &mut one;
        for seg in &path[..path.len() - 1] {
            cursor = cursor
                .entry(seg.clone())
                .or_insert_with(|| toml::Value::Table(toml::Table::new()))
                .as_table_mut()
                .expect("fresh table");
        }
        cursor.insert(path[path.len() - 1].clone(), value);
        merge(&mut merged, one);
        let rendered = toml::to_string(&merged).unwrap_or_default();
        if let Err(e) = toml::from_str::<RunConfig>(&rendered) {
            let at = key_line(text, &path).map(|l| format!("line {l}, ")).unwrap_or_default();
            return ConfigError::Parse {
                path: origin.into(),
                message: format!("{at}`{}`: {}", path.join("."), e.message()),
            };
        }
    }
    ConfigError::Parse {
        path: origin.into(),
        message: "configuration does not match the schema".into(),
    }
}

fn collect_leaves(t: &toml::Table, prefix: &mut Vec<String>, out: &mut Vec<(Vec<String>, toml::Value)>) {
    for (k, v) in t {
        prefix.push(k.clone());
        match v {
            toml::Value::Table(inner) if !inner.is_empty() => collect_leaves(inner, prefix, out),
            _ => out.push((prefix.clone(), v.clone())),
        }
        prefix.pop();
    }
}

/// One-based line of `key` inside the `[a.b]` header named by `path`.
fn key_line(text: &str, path: &[String]) -> Option<usize> {
    let (key, section) = path.split_last()?;
    let header = format!("[{}]", section.join("."));
    let mut inside = section.is_empty();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.starts_with('[') {
            inside = t == header;
            continue;
        }
        if inside && t.split('=').next().map(str::trim) == Some(key.as_str()) {
            return Some(i + 1);
        }
    }
    None
}
