use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::matrices::MatrixFile;
use crate::certify::Certificate;
use crate::coverings::CosetTable;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub command: String,
    pub input: InputInfo,
    pub system: SystemSummary,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<CertificateReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub solve: Option<SolveSummary>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lift: Option<LiftSummary>,
    pub timings: Timings,
    pub exit_code: i32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputInfo {
    pub path: String,
    /// Hex SHA-256 of the input file bytes.
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemSummary {
    pub variables: Vec<String>,
    pub constants: Vec<String>,
    pub equations: Vec<String>,
    pub augmented_relators: Vec<String>,
    pub constant_dimension: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateReport {
    pub certificate: Certificate,
    /// Result of re-checking the certificate from its own evidence.
    pub verified: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveSummary {
    pub dimension: usize,
    pub seed: u64,
    pub tol: f64,
    pub restarts: usize,
    pub max_iter: usize,
    pub success: bool,
    pub residual: f64,
    pub best_restart: usize,
    pub iterations: usize,
    pub restarts_run: usize,
    pub assignment: MatrixFile,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LiftSummary {
    pub index: usize,
    pub subgroup: Vec<String>,
    pub table: CosetTable,
    pub lifted_equations: usize,
    /// The lifted system in the input grammar.
    pub lifted_system: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub solve: Option<SolveSummary>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub wreath_residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub permutations_identity: Option<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub total_ms: f64,
    pub phases: BTreeMap<String, f64>,
}
