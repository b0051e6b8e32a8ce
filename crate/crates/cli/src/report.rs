//! Machine-readable run reports shared by all subcommands.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use symfock::linalg::RMat;

/// One named check with its measured residual. The `passed` flag is
/// derived, never set independently: passed <=> max_residual <= tolerance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub passed: bool,
    pub max_residual: f64,
    pub tolerance: f64,
}

impl CheckRecord {
    pub fn new(name: &str, max_residual: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            passed: max_residual <= tolerance,
            max_residual,
            tolerance,
        }
    }
}

/// Matrices attached to a report; keys absent when a command does not
/// produce them (validate emits none, quantize emits J and H).
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Matrices {
    #[serde(rename = "J", skip_serializing_if = "Option::is_none")]
    pub j: Option<Vec<Vec<f64>>>,
    #[serde(rename = "g", skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<Vec<f64>>>,
    #[serde(rename = "H", skip_serializing_if = "Option::is_none")]
    pub h: Option<Vec<Vec<f64>>>,
}

impl Matrices {
    pub fn is_empty(&self) -> bool {
        self.j.is_none() && self.g.is_none() && self.h.is_none()
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScenarioRef {
    Single(String),
    Pair([String; 2]),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Parameters {
    pub m: f64,
    pub omega: f64,
    pub hbar: f64,
    pub cutoff: usize,
    pub seed: u64,
}

/// Full report for one run. Serialized field order is fixed, and every
/// value except `elapsed_ms` is a deterministic function of the scenario,
/// parameters, and seed.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunReport {
    pub scenario: ScenarioRef,
    pub parameters: Parameters,
    pub checks: Vec<CheckRecord>,
    #[serde(skip_serializing_if = "Matrices::is_empty", default)]
    pub matrices: Matrices,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub spectrum: Vec<f64>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub diagnostics: BTreeMap<String, serde_json::Value>,
    pub elapsed_ms: f64,
}

impl RunReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

pub fn matrix_rows(m: &RMat) -> Vec<Vec<f64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

pub fn render_json(report: &RunReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

pub fn render_text(report: &RunReport) -> String {
    let mut out = String::new();
    match &report.scenario {
        ScenarioRef::Single(name) => out.push_str(&format!("scenario: {}\n", name)),
        ScenarioRef::Pair([a, b]) => out.push_str(&format!("scenario: {} vs {}\n", a, b)),
    }
    let p = &report.parameters;
    out.push_str(&format!(
        "parameters: m={} omega={} hbar={} cutoff={} seed={}\n",
        p.m, p.omega, p.hbar, p.cutoff, p.seed
    ));
    out.push_str("checks:\n");
    for c in &report.checks {
        out.push_str(&format!(
            "  [{}] {:<28} max_residual={:<12.6e} tolerance={:.6e}\n",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.max_residual,
            c.tolerance
        ));
    }
    if !report.spectrum.is_empty() {
        let values: Vec<String> = report.spectrum.iter().map(|x| format!("{:.6}", x)).collect();
        out.push_str(&format!("spectrum: [{}]\n", values.join(", ")));
    }
    for (key, rows) in [
        ("J", &report.matrices.j),
        ("g", &report.matrices.g),
        ("H", &report.matrices.h),
    ] {
        if let Some(rows) = rows {
            out.push_str(&format!("matrix {}:\n", key));
            for row in rows {
                let cells: Vec<String> = row.iter().map(|x| format!("{:>10.4}", x)).collect();
                out.push_str(&format!("  [{}]\n", cells.join(", ")));
            }
        }
    }
    for (key, value) in &report.diagnostics {
        out.push_str(&format!("{}: {}\n", key, value));
    }
    out.push_str(&format!(
        "result: {}\n",
        if report.all_passed() { "PASS" } else { "FAIL" }
    ));
    out.push_str(&format!("elapsed_ms: {:.1}\n", report.elapsed_ms));
    out
}
