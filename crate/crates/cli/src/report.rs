//! JSON report written by `solve` and `verify`. Every float that can be
//! non-finite is an `Option`, so the document always parses back.

use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: String,
    pub tool: String,
    pub command: String,
    pub spec: SpecEcho,
    pub case_label: String,
    pub h: f64,
    pub thresholds: Thresholds,
    pub beta_plus: f64,
    pub beta_minus: f64,
    #[serde(rename = "U_plus")]
    pub u_plus: Option<f64>,
    #[serde(rename = "U_minus")]
    pub u_minus: Option<f64>,
    pub lambda_plus: Option<f64>,
    pub lambda_minus: Option<f64>,
    #[serde(rename = "R_plus")]
    pub r_plus: f64,
    #[serde(rename = "R_minus")]
    pub r_minus: f64,
    #[serde(rename = "R_total")]
    pub r_total: f64,
    pub validation: Vec<LawValidation>,
    pub oracle: Option<OracleSummary>,
    pub timing_ms: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpecEcho {
    pub dim: u32,
    #[serde(rename = "T")]
    pub radius: f64,
    #[serde(rename = "H")]
    pub height: f64,
    pub p_plus: String,
    pub p_minus: String,
    pub ball_volume: bool,
    pub samples: usize,
    pub root_tol: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Thresholds {
    pub u0_plus: f64,
    pub u0_minus: Option<f64>,
    /// `None` when infinite (zero rear law).
    pub u_star: Option<f64>,
    pub h_star: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawValidation {
    pub branch: String,
    pub law: String,
    pub passed: bool,
    pub limit_at_infinity: Option<f64>,
    pub u_bar: Option<f64>,
    pub violations: Vec<ViolationEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViolationEntry {
    pub condition: String,
    pub witness: Option<f64>,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub passed: bool,
    pub profile_source: String,
    pub maximality: Vec<MaximalityEntry>,
    pub brute_force: Vec<BruteForceEntry>,
    /// Resistance of the certified profiles by direct quadrature.
    pub profile_resistance: Option<f64>,
    /// `(DP total - R_total) / |R_total|`.
    pub total_relative_gap: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximalityEntry {
    pub branch: String,
    /// False when the branch has no multiplier (zero law).
    pub checked: bool,
    pub passed: bool,
    pub lambda: Option<f64>,
    pub worst_violation: Option<f64>,
    pub scale: Option<f64>,
    pub witness_t: Option<f64>,
    pub witness_u: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BruteForceEntry {
    pub branch: String,
    pub n_cells: usize,
    pub n_heights: usize,
    pub u_cap: f64,
    pub beta: f64,
    pub best_value: f64,
    pub analytic: f64,
    pub gap: f64,
}

/// `Some(x)` for finite `x`.
pub fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}
