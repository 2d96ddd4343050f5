//! `report.json` (schema version 1), CSV tables and extra files.

use std::fs;
use std::path::Path;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};
use urca_core::kernels::ModelConstants;

use crate::config::RunConfig;
use crate::experiments::{hex, Outcome, Table};

pub const SCHEMA_VERSION: u32 = 1;
/// Fields left out of the content hash.
pub const VOLATILE_FIELDS: [&str; 2] = ["generated_at", "content_hash"];

/// Each derived constant with the formula that defines it.
pub fn constants_with_formulas(c: &ModelConstants, n_sigma: usize) -> Value {
    let entry = |v: f64, f: &str| json!({ "value": v, "formula": f });
    json!({
        "C0": entry(c.c0, "C0 = (1/2)(1/m_e + 1/m_p) sup_a|gamma^a(1 - g_A gamma5)| sup_a|gamma_a(1 - gamma5)|"),
        "K": entry(c.k, "K(F,G) = sum_beta ||F^(beta)|| ||G^(beta)||, discrete norms on the mode grid"),
        "C": entry(c.c, "C = 2 C0"),
        "B": entry(c.b, "B = 2 m_p C0"),
        "g0": entry(c.g0, "g0 = 0.99 / (2 C0 K)"),
        "delta": entry(c.delta, "0 < delta < m_e"),
        "gamma": entry(c.gamma, "gamma = 1 - delta / (2 m_e - delta)"),
        "C_tilde": entry(c.c_tilde, "C~ = C / (1 - g0 K C)"),
        "B_tilde": entry(c.b_tilde, "B~ = B / (1 - g0 K C)^2"),
        "K_tilde_G": entry(c.k_tilde_g, "K~(G) = sup_sigma max_beta ||G^(beta) 1{|p4| <= sigma}|| / sigma"),
        "K_tilde_FG": entry(c.k_tilde_fg, "K~(F,G) = 2 (||F^(1)|| + ||F^(2)||) K~(G)"),
        "D_tilde": entry(c.d_tilde, "D~ = max(4(2m+1) gamma / (2m - delta), 2) K~(F,G) (2m C~ + B~), m = m_e"),
        "D_tilde_neutron_mass": entry(c.d_tilde_neutron, "D~ with m = m_n"),
        "g1": entry(c.g1, "g1 = 0.99 min(1, g0, (gamma - gamma^2) / (3 D~))"),
        "g1_neutron_mass": entry(c.g1_neutron, "g1 with D~ at m = m_n"),
        "g3": entry(c.g3, "g3 = 1 / (2 K (2C + B))"),
        "g2": entry(c.g2, "g2 = min(g1, g3)"),
        "g2_neutron_mass": entry(c.g2_neutron, "g2 with D~ at m = m_n"),
        "M": entry(c.m_bound, "M = g0 K B / (1 - g0 K C) (1 + 1/(1 - g0 K C))"),
        "energy_bound_slope": entry(c.energy_bound(1.0), "|E0| <= |g| K B / (1 - g0 K C)"),
        "sigma": {
            "values": c.sigmas(n_sigma),
            "formula": "sigma_0 = 2 m_e + 1, sigma_1 = m_e - delta/2, sigma_(n+1) = gamma sigma_n",
        },
    })
}

pub struct Report {
    pub value: Value,
    pub pass: bool,
}

/// Assembles the report; `extra` carries basis statistics and constants.
pub fn build(cfg: &RunConfig, extra: Map<String, Value>, outcomes: &[Outcome], generated_at: &str) -> Report {
    let pass = outcomes.iter().all(|o| o.ok());
    let warnings: Vec<String> = outcomes.iter().flat_map(|o| o.warnings.iter().map(|w| format!("{}: {w}", o.name))).collect();
    let gates: Vec<Value> = outcomes
        .iter()
        .map(|o| json!({ "experiment": o.name, "gated": o.gated, "pass": o.pass }))
        .collect();
    let mut root = Map::new();
    root.insert("schema_version".into(), json!(SCHEMA_VERSION));
    root.insert("generated_at".into(), json!(generated_at));
    root.insert("tool".into(), json!({ "name": env!("CARGO_PKG_NAME"), "version": env!("CARGO_PKG_VERSION") }));
    let mut config = serde_json::to_value(cfg).unwrap_or(Value::Null);
    // Where the files go is not part of the run's content.
    if let Some(Value::Object(o)) = config.get_mut("output") {
        o.remove("dir");
    }
    root.insert("config".into(), config);
    for (k, v) in extra {
        root.insert(k, v);
    }
    root.insert("experiments".into(), serde_json::to_value(outcomes).unwrap_or(Value::Null));
    root.insert("gates".into(), Value::Array(gates));
    root.insert("warnings".into(), json!(warnings));
    root.insert("pass".into(), json!(pass));
    let hash = content_hash(&Value::Object(root.clone()));
    root.insert("content_hash".into(), json!(hash));
    Report {
        value: Value::Object(root),
        pass,
    }
}

/// SHA-256 of the report without its volatile fields.
pub fn content_hash(report: &Value) -> String {
    let mut v = report.clone();
    if let Value::Object(m) = &mut v {
        for k in VOLATILE_FIELDS {
            m.remove(k);
        }
    }
    let text = serde_json::to_string(&v).unwrap_or_default();
    hex(&Sha256::digest(text.as_bytes()))
}

pub fn write_table(dir: &Path, t: &Table) -> std::io::Result<()> {
    let path = dir.join(format!("{}.csv", t.name));
    let mut w = csv::Writer::from_path(&path).map_err(std::io::Error::other)?;
    w.write_record(&t.header).map_err(std::io::Error::other)?;
    for r in &t.rows {
        w.write_record(r).map_err(std::io::Error::other)?;
    }
    w.flush()
}

/// Writes `report.json`, `tables/*.csv` and any extra files under `out`.
pub fn write_all(out: &Path, report: &Report, tables: &[Table], outcomes: &[Outcome]) -> std::io::Result<()> {
    fs::create_dir_all(out.join("tables"))?;
    let text = serde_json::to_string_pretty(&report.value).map_err(std::io::Error::other)?;
    fs::write(out.join("report.json"), text + "\n")?;
    for t in tables.iter().chain(outcomes.iter().flat_map(|o| o.tables.iter())) {
        write_table(&out.join("tables"), t)?;
    }
    for o in outcomes {
        for (rel, body) in &o.files {
            let p = out.join(rel);
            if let Some(parent) = p.parent() {
                fs::create_dir_all(parent)?;
            }
            fs::write(p, body)?;
        }
    }
    Ok(())
}
