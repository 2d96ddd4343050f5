//! Acceptance suite: one line per criterion, non-zero exit if any fails.
//!
//! Each criterion is evaluated here against the core library with its own
//! tolerance and time limit, independent of the runner's gating.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use urca::{Experiment, Preset, RunConfig};
use urca_core::fock::{build_grid, enumerate_basis, FockState, GridConfig, SectorCaps};
use urca_core::hamiltonian::{
    assemble_h, assemble_h0, assemble_hi, bound_samples, relative_bound_check, Model,
};
use urca_core::invariants::{car_check, charge_conjugation, spinor_exactness};
use urca_core::kernels::{check_hypothesis_61, KernelSpec};
use urca_core::params::ModelParams;
use urca_core::spectra::{
    degeneracy_check, dense_lowest, ground_state, ir_gap_study, lanczos_lowest, multiplicity, pull_through_residual,
    soft_number_scaling, EigenOptions,
};
use urca_core::vertex::DEFAULT_QUAD_ORDER;

const SEED: u64 = 7;
const DELTA_FRACTION: f64 = 0.5;

type Verdict = Result<String, String>;

fn toy_model(cfg: &GridConfig) -> Model {
    let grid = build_grid(cfg).expect("toy grid");
    Model::new(ModelParams::toy(), grid, KernelSpec::toy(0.0), DEFAULT_QUAD_ORDER).expect("toy model")
}

fn main_grid() -> GridConfig {
    GridConfig::toy(vec![0.5, 1.0, 1.5], 2)
}

fn opts(k: usize) -> EigenOptions {
    EigenOptions {
        k,
        tol: 1e-10,
        seed: SEED,
        ..Default::default()
    }
}

fn ensure(ok: bool, detail: String) -> Verdict {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c1_spinors() -> Verdict {
    let p = ModelParams::toy();
    let r = spinor_exactness(&p.masses, p.eb, 6, 20, SEED).map_err(|e| e.to_string())?;
    ensure(
        r.max_eigen_rel_err < 1e-6 && r.max_gram_dev < 1e-10,
        format!(
            "{} spinors, eigen rel err {:.1e}, Gram dev {:.1e}",
            r.spinors, r.max_eigen_rel_err, r.max_gram_dev
        ),
    )
}

fn c2_conjugation() -> Verdict {
    let p = ModelParams::toy();
    let r = charge_conjugation(&p.masses, p.eb, 50, SEED).map_err(|e| e.to_string())?;
    let worst = r.landau_max_err.max(r.neutron_max_err).max(r.neutrino_max_err);
    ensure(
        r.samples == 50 && worst <= 1e-12,
        format!(
            "landau {:.1e}, neutron {:.1e}, neutrino {:.1e}",
            r.landau_max_err, r.neutron_max_err, r.neutrino_max_err
        ),
    )
}

fn c3_car() -> Verdict {
    let layouts = [
        [1, 1, 1, 1, 1, 1],
        [2, 2, 2, 2, 2, 2],
        [3, 0, 3, 0, 3, 3],
        [4, 4, 0, 0, 2, 2],
        [0, 0, 0, 0, 6, 6],
        [12, 0, 0, 0, 0, 0],
    ];
    let mut relations = 0;
    let mut failures = 0;
    for l in layouts {
        let r = car_check(l);
        relations += r.relations;
        failures += r.failures;
    }
    ensure(failures == 0, format!("{relations} relations over {} layouts, {failures} failures", layouts.len()))
}

fn c4_hermitian_dense() -> Verdict {
    let mut cfg = GridConfig::toy(vec![0.5, 1.5], 1);
    cfg.n_landau = 0;
    cfg.single_helicity = true;
    let m = toy_model(&cfg);
    let basis = enumerate_basis(&SectorCaps::pauli(&m.grid), |_| true).map_err(|e| e.to_string())?;
    let c = m.constants(DELTA_FRACTION * m.params.masses.m_e).map_err(|e| e.to_string())?;
    let h = assemble_h(&m, &basis, c.g0, None).map_err(|e| e.to_string())?;
    let dev = h.max_hermitian_deviation();
    let lanczos = lanczos_lowest(&h, &opts(basis.len())).map_err(|e| e.to_string())?;
    let dense = dense_lowest(&h, basis.len());
    let diff = lanczos
        .values
        .iter()
        .zip(&dense.values)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    ensure(
        basis.len() == 64 && dev <= 1e-12 && lanczos.values.len() == 64 && diff <= 1e-10,
        format!("dim {}, Hermitian dev {dev:.1e}, spectrum diff {diff:.1e}", basis.len()),
    )
}

fn c5_relative_bound() -> Verdict {
    let m = toy_model(&main_grid());
    let basis = m.vacuum_sector(&SectorCaps::pauli(&m.grid)).map_err(|e| e.to_string())?;
    let c = m.constants(DELTA_FRACTION * m.params.masses.m_e).map_err(|e| e.to_string())?;
    let h0 = assemble_h0(&m, &basis);
    let hi = assemble_hi(&m, &basis, None).map_err(|e| e.to_string())?;
    let samples = bound_samples(&basis, &h0, 1000, SEED);
    let r = relative_bound_check(&basis, &h0, &hi, &c, &samples);
    ensure(
        basis.len() >= 1000 && r.samples >= 1000 && r.violations == 0,
        format!(
            "dim {}, {} samples, {} violations, max ratio {:.3}",
            basis.len(),
            r.samples,
            r.violations,
            r.max_ratio
        ),
    )
}

fn c6_ground_state() -> Verdict {
    let m = toy_model(&main_grid());
    let basis = m.vacuum_sector(&SectorCaps::pauli(&m.grid)).map_err(|e| e.to_string())?;
    let c = m.constants(DELTA_FRACTION * m.params.masses.m_e).map_err(|e| e.to_string())?;
    let vac = basis.index_of(&FockState::vacuum()).ok_or("vacuum missing")?;
    let h0 = assemble_h0(&m, &basis);
    let d = h0.diag();
    let omega_unique = d[vac] == 0.0 && d.iter().enumerate().all(|(i, e)| i == vac || *e > 0.0);
    let free = ground_state(&h0, &opts(1)).map_err(|e| e.to_string())?;
    let overlap = free.vectors[0][vac].norm();
    let mut violations = 0;
    let mut worst: f64 = 0.0;
    for f in [0.2, 0.4, 0.6, 0.8, 1.0] {
        let g = f * c.g0;
        let h = assemble_h(&m, &basis, g, None).map_err(|e| e.to_string())?;
        let e0 = ground_state(&h, &opts(1)).map_err(|e| e.to_string())?.values[0];
        let bound = c.energy_bound(g);
        if e0 > 0.0 || e0.abs() > bound {
            violations += 1;
        }
        worst = worst.max(e0.abs() / bound);
    }
    ensure(
        omega_unique && free.values[0].abs() <= 1e-10 && overlap >= 1.0 - 1e-8 && violations == 0,
        format!(
            "E0(0) = {:.1e} on vacuum (overlap {overlap:.12}), 5 couplings, {violations} violations, max |E0|/bound {worst:.2e}",
            free.values[0]
        ),
    )
}

fn c7_ir_gap() -> Verdict {
    let base = toy_model(&main_grid());
    let c0 = base.constants(DELTA_FRACTION * base.params.masses.m_e).map_err(|e| e.to_string())?;
    let mut edges: Vec<f64> = (1..=5).rev().map(|n| c0.sigma(n)).collect();
    edges.push(1.0);
    let m = toy_model(&GridConfig::toy(edges, 2));
    let c = m.constants(DELTA_FRACTION * m.params.masses.m_e).map_err(|e| e.to_string())?;
    let g = c.g2 / 4.0;
    let r = ir_gap_study(&m, &c, g, &[1, 2, 3, 4], &opts(3)).map_err(|e| e.to_string())?;
    let ok = r.rows.len() == 4 && r.rows.iter().all(|x| x.gap >= x.bound && multiplicity(&[x.e0, x.e1], 1e-7) == 1);
    let detail: Vec<String> = r
        .rows
        .iter()
        .map(|x| format!("n={} gap {:.4} >= {:.4}", x.n, x.gap, x.bound))
        .collect();
    ensure(ok, format!("g = g2/4 = {g:.2e}; {}", detail.join(", ")))
}

fn c8_pull_through() -> Verdict {
    let m = toy_model(&main_grid());
    let basis = m.vacuum_sector(&SectorCaps::pauli(&m.grid)).map_err(|e| e.to_string())?;
    let c = m.constants(DELTA_FRACTION * m.params.masses.m_e).map_err(|e| e.to_string())?;
    let g = c.g0 / 4.0;
    let h = assemble_h(&m, &basis, g, None).map_err(|e| e.to_string())?;
    let eig = ground_state(&h, &opts(1)).map_err(|e| e.to_string())?;
    let r = pull_through_residual(&m, &basis, &h, g, None, eig.values[0], &eig.vectors[0], &c);
    ensure(
        r.max_residual <= 1e-8 && r.violations == 0 && !r.rows.is_empty(),
        format!(
            "{} modes, max residual {:.1e}, {} bound violations",
            r.rows.len(),
            r.max_residual,
            r.violations
        ),
    )
}

fn c9_soft_number() -> Verdict {
    let m = toy_model(&main_grid());
    let basis = m.vacuum_sector(&SectorCaps::pauli(&m.grid)).map_err(|e| e.to_string())?;
    let c = m.constants(DELTA_FRACTION * m.params.masses.m_e).map_err(|e| e.to_string())?;
    let gs = [c.g0 / 8.0, c.g0 / 4.0, c.g0 / 2.0];
    let r = soft_number_scaling(&m, &basis, &gs, None, &opts(1)).map_err(|e| e.to_string())?;
    let bounded = r.rows.iter().all(|x| x.n_nu / (x.g * x.g) <= r.c_squared * (1.0 + 1e-12));
    ensure(
        r.slope >= 1.9 && r.c_squared.is_finite() && bounded,
        format!("slope {:.5}, C(F,G)^2 estimate {:.4e}", r.slope, r.c_squared),
    )
}

fn c10_simplicity() -> Verdict {
    let m = toy_model(&main_grid());
    let spec = &m.spec;
    let h61 = check_hypothesis_61(spec, 0.5, 1.5);
    let basis = m.vacuum_sector(&SectorCaps::pauli(&m.grid)).map_err(|e| e.to_string())?;
    let c = m.constants(DELTA_FRACTION * m.params.masses.m_e).map_err(|e| e.to_string())?;
    let h = assemble_h(&m, &basis, c.g2 / 2.0, None).map_err(|e| e.to_string())?;
    let r = degeneracy_check(&h, 1e-7, &opts(3)).map_err(|e| e.to_string())?;
    let h0 = assemble_h0(&m, &basis);
    let control = degeneracy_check(&h0.direct_sum(&h0), 1e-7, &opts(3)).map_err(|e| e.to_string())?;
    ensure(
        h61.pass && r.multiplicity == 1 && control.multiplicity == 2,
        format!(
            "kernel derivative check {}, multiplicity {}, doubled control {}",
            h61.pass, r.multiplicity, control.multiplicity
        ),
    )
}

fn c11_determinism() -> Verdict {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut cfg = RunConfig::preset(Preset::Toy);
    cfg.seed = SEED;
    cfg.experiment = Experiment::All;
    let mut texts = Vec::new();
    let mut hashes = Vec::new();
    for k in 0..2 {
        let out = dir.path().join(format!("run{k}"));
        let s = urca::run(&cfg, &out, false).map_err(|e| e.to_string())?;
        let text = std::fs::read_to_string(out.join("report.json")).map_err(|e| e.to_string())?;
        let mut v: serde_json::Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        hashes.push(v["content_hash"].as_str().unwrap_or_default().to_string());
        v.as_object_mut().map(|o| o.remove("generated_at"));
        texts.push(serde_json::to_string(&v).map_err(|e| e.to_string())?);
        if !s.report.pass {
            return Err("runner gates failed".into());
        }
    }
    let tables_equal = ["ir_gap", "soft_number", "thresholds", "ground_state", "pull_through"].iter().all(|t| {
        let a = std::fs::read(dir.path().join(format!("run0/tables/{t}.csv"))).ok();
        let b = std::fs::read(dir.path().join(format!("run1/tables/{t}.csv"))).ok();
        a.is_some() && a == b
    });
    ensure(
        texts[0] == texts[1] && hashes[0] == hashes[1] && tables_equal,
        format!("content hash {}", &hashes[0][..16.min(hashes[0].len())]),
    )
}

fn main() -> ExitCode {
    // libtest arguments (filters, --nocapture, ...) are accepted and ignored.
    let criteria: [(&str, Duration, fn() -> Verdict); 11] = [
        ("spinor exactness", Duration::from_secs(10), c1_spinors),
        ("charge conjugation", Duration::from_secs(5), c2_conjugation),
        ("CAR exactness", Duration::from_secs(30), c3_car),
        ("Hermiticity and dense oracle", Duration::from_secs(5), c4_hermitian_dense),
        ("relative bound", Duration::from_secs(120), c5_relative_bound),
        ("ground-state energy", Duration::from_secs(300), c6_ground_state),
        ("infrared gap", Duration::from_secs(600), c7_ir_gap),
        ("pull-through identity", Duration::from_secs(300), c8_pull_through),
        ("soft-neutrino scaling", Duration::from_secs(600), c9_soft_number),
        ("simplicity", Duration::from_secs(300), c10_simplicity),
        ("determinism", Duration::from_secs(60), c11_determinism),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let verdict = f();
        let took = t.elapsed();
        let (ok, detail) = match verdict {
            Ok(d) if took <= *limit => (true, d),
            Ok(d) => (false, format!("{d}; over time limit {limit:?}")),
            Err(d) => (false, d),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {} {:<30} {:>9.2?}  {}",
            i + 1,
            if ok { "PASS" } else { "FAIL" },
            name,
            took,
            detail
        );
    }
    println!("acceptance: {} passed, {} failed", criteria.len() - failed, failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
