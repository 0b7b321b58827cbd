//! Command implementations behind the `groupeq` binary.
//!
//! Each command returns a [`Report`] whose `exit_code` follows the stable
//! contract: 0 for a certificate or a successful solve, 2 for `Unknown` or
//! non-convergence. Errors map to exit code 1 in the binary.

mod corpus;
mod matrices;
mod parse;
mod report;

pub use corpus::{corpus_entry, corpus_names, CorpusEntry, CORPUS};
pub use matrices::{assignment_file, read_matrices, write_matrices, MatrixFile};
pub use parse::{parse_system, parse_words, print_system, FileMode, ParseError, ParseOptions, SystemFile};
pub use report::{
    CertificateReport, InputInfo, LiftSummary, Report, SolveSummary, SystemSummary, Timings, SCHEMA_VERSION,
};

use std::path::{Path, PathBuf};
use std::time::Instant;

use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::certify::{certify, verify_certificate, CertifyOptions};
use crate::coverings::{lift_system, todd_coxeter, CosetError};
use crate::system::{EquationSystem, SystemError};
use crate::unitary::{solve, verify_wreath, SolveOptions, SolveReport, UnitaryError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: ParseError },
    #[error("{0}")]
    Matrices(String),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Unitary(#[from] UnitaryError),
    #[error(transparent)]
    Coset(#[from] CosetError),
    #[error("{0}")]
    Usage(String),
}

/// A parsed input file with constant values resolved.
#[derive(Clone, Debug)]
pub struct Input {
    pub path: PathBuf,
    pub digest: String,
    pub file: SystemFile,
}

impl Input {
    pub fn system(&self) -> &EquationSystem {
        &self.file.system
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Read and parse a system file; a `constant_values` path is resolved
/// relative to the file's directory.
pub fn load_input(path: &Path, reduce: bool) -> Result<Input, CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    let text = String::from_utf8_lossy(&bytes);
    let mut file = parse_system(&text, ParseOptions { reduce })
        .map_err(|source| CliError::Parse { path: path.into(), source })?;
    if let Some(rel) = &file.constant_values {
        let full = path.parent().unwrap_or(Path::new(".")).join(rel);
        let mtext = std::fs::read_to_string(&full).map_err(|source| CliError::Io { path: full.clone(), source })?;
        let values = read_matrices(&mtext, file.system.constants()).map_err(CliError::Matrices)?;
        file.system = file.system.clone().with_values(values)?;
    }
    Ok(Input { path: path.into(), digest: sha256_hex(&bytes), file })
}

fn summary(s: &EquationSystem) -> SystemSummary {
    SystemSummary {
        variables: s.variables().to_vec(),
        constants: s.constants().to_vec(),
        equations: s.equations().iter().map(|w| s.render(w)).collect(),
        augmented_relators: s.equations().iter().map(|w| s.render(&w.augment())).collect(),
        constant_dimension: s.dimension(),
    }
}

struct Clock {
    start: Instant,
    timings: Timings,
}

impl Clock {
    fn new() -> Self {
        Clock { start: Instant::now(), timings: Timings::default() }
    }

    fn phase<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.timings.phases.insert(name.to_string(), t.elapsed().as_secs_f64() * 1e3);
        out
    }

    fn finish(mut self) -> Timings {
        self.timings.total_ms = self.start.elapsed().as_secs_f64() * 1e3;
        self.timings
    }
}

fn base_report(command: &str, input: &Input) -> Report {
    Report {
        schema_version: SCHEMA_VERSION,
        command: command.to_string(),
        input: InputInfo { path: input.path.display().to_string(), sha256: input.digest.clone() },
        system: summary(input.system()),
        certificate: None,
        solve: None,
        lift: None,
        timings: Timings::default(),
        exit_code: EXIT_OK,
    }
}

#[derive(Clone, Debug)]
pub struct CheckOptions {
    pub max_index: usize,
    pub coset_budget: usize,
}

impl Default for CheckOptions {
    fn default() -> Self {
        let d = CertifyOptions::default();
        CheckOptions { max_index: d.max_index, coset_budget: d.node_budget }
    }
}

/// Certify the augmented presentation of the input system.
pub fn cmd_check(input: &Input, opts: &CheckOptions) -> Report {
    let mut clock = Clock::new();
    let p = input.system().augmented_presentation();
    let copts = CertifyOptions {
        max_index: opts.max_index,
        node_budget: opts.coset_budget,
        asserted_aspherical: input.file.asserted_aspherical.clone(),
        ..CertifyOptions::default()
    };
    let certificate = clock.phase("certify", || certify(&p, &copts));
    let verified = clock.phase("verify", || verify_certificate(&p, &certificate));
    let mut report = base_report("check", input);
    report.exit_code = if certificate.is_unknown() { EXIT_UNKNOWN } else { EXIT_OK };
    report.certificate = Some(CertificateReport { certificate, verified });
    report.timings = clock.finish();
    report
}

#[derive(Clone, Debug)]
pub struct SolveCommandOptions {
    /// Matrix dimension; inferred from constant values when absent.
    pub m: Option<usize>,
    pub solver: SolveOptions,
}

impl Default for SolveCommandOptions {
    fn default() -> Self {
        SolveCommandOptions { m: None, solver: SolveOptions::default() }
    }
}

fn resolve_dimension(s: &EquationSystem, m: Option<usize>) -> Result<usize, CliError> {
    if !s.is_valued() {
        return Err(UnitaryError::Symbolic.into());
    }
    match (m, s.dimension()) {
        (Some(m), Some(d)) if m != d => Err(UnitaryError::Dimension { expected: m, found: d }.into()),
        (Some(m), _) | (None, Some(m)) => Ok(m),
        (None, None) => Err(CliError::Usage("no constant values; pass --m".into())),
    }
}

fn solve_summary(s: &EquationSystem, r: &SolveReport, m: usize, opts: &SolveOptions) -> SolveSummary {
    SolveSummary {
        dimension: m,
        seed: opts.seed,
        tol: opts.tol,
        restarts: opts.restarts,
        max_iter: opts.max_iter,
        success: r.success,
        residual: r.residual,
        best_restart: r.restart,
        iterations: r.iterations,
        restarts_run: r.restarts_run,
        assignment: assignment_file(s, &r.assignment),
    }
}

/// Solve the input system numerically in `U(m)`.
pub fn cmd_solve(input: &Input, opts: &SolveCommandOptions) -> Result<Report, CliError> {
    let mut clock = Clock::new();
    let s = input.system();
    let m = resolve_dimension(s, opts.m)?;
    let r = clock.phase("solve", || solve(s, m, opts.solver))?;
    let mut report = base_report("solve", input);
    report.exit_code = if r.success { EXIT_OK } else { EXIT_UNKNOWN };
    report.solve = Some(solve_summary(s, &r, m, &opts.solver));
    report.timings = clock.finish();
    Ok(report)
}

#[derive(Clone, Debug)]
pub struct LiftOptions {
    /// `;`-separated subgroup generators over the variables.
    pub subgroup: String,
    pub max_cosets: usize,
    /// Solve the lifted system and check it in the wreath product.
    pub solve: Option<SolveCommandOptions>,
}

impl Default for LiftOptions {
    fn default() -> Self {
        LiftOptions { subgroup: String::new(), max_cosets: 1000, solve: None }
    }
}

/// Enumerate the cosets of a subgroup, lift the system along the covering,
/// and optionally solve the lift and verify it in the wreath product.
pub fn cmd_lift(input: &Input, opts: &LiftOptions) -> Result<Report, CliError> {
    let mut clock = Clock::new();
    let s = input.system();
    let subgroup = parse_words(&opts.subgroup, s)
        .map_err(|source| CliError::Parse { path: PathBuf::from("--subgroup"), source })?;
    let p = s.augmented_presentation();
    let table = clock.phase("enumerate", || todd_coxeter(&p, &subgroup, opts.max_cosets))?;
    let lifted = clock.phase("lift", || lift_system(s, &table))?;
    let lifted_system = lifted.to_equation_system(s)?;
    let lifted_file = SystemFile {
        system: lifted_system.clone(),
        mode: FileMode::Equations,
        constant_values: input.file.constant_values.clone(),
        asserted_aspherical: None,
    };
    let mut summary = LiftSummary {
        index: table.index(),
        subgroup: subgroup.iter().map(|w| s.render(w)).collect(),
        table: table.clone(),
        lifted_equations: lifted.equations.len(),
        lifted_system: print_system(&lifted_file),
        solve: None,
        wreath_residual: None,
        permutations_identity: None,
    };
    let mut exit_code = EXIT_OK;
    if let Some(sopts) = &opts.solve {
        let m = resolve_dimension(s, sopts.m)?;
        let r = clock.phase("solve", || solve(&lifted_system, m, sopts.solver))?;
        let w = clock.phase("verify_wreath", || verify_wreath(s, &lifted, &r.assignment, &table))?;
        if !r.success {
            exit_code = EXIT_UNKNOWN;
        }
        summary.solve = Some(solve_summary(&lifted_system, &r, m, &sopts.solver));
        summary.wreath_residual = Some(w.residual);
        // verify_wreath fails outright on a non-identity second coordinate
        summary.permutations_identity = Some(true);
    }
    let mut report = base_report("lift", input);
    report.exit_code = exit_code;
    report.lift = Some(summary);
    report.timings = clock.finish();
    Ok(report)
}

/// One line per corpus entry.
pub fn cmd_corpus_list() -> String {
    CORPUS.iter().map(|e| format!("{:<12} {:<20} {}\n", e.name, e.expected, e.summary)).collect()
}

/// Text of a corpus entry, or an error naming the known entries.
pub fn cmd_corpus_show(name: &str) -> Result<&'static str, CliError> {
    corpus_entry(name)
        .map(|e| e.text)
        .ok_or_else(|| CliError::Usage(format!("unknown corpus entry `{name}`; known: {}", corpus_names().join(", "))))
}

/// Short human-readable rendering of a report.
pub fn render_text(report: &Report) -> String {
    let mut out = String::new();
    if let Some(c) = &report.certificate {
        out.push_str(&format!("certificate: {}\n", c.certificate.kind()));
        out.push_str(&format!(
            "evidence: {}\n",
            serde_json::to_string(&c.certificate).unwrap_or_default()
        ));
        out.push_str(&format!("verified: {}\n", c.verified));
    }
    if let Some(l) = &report.lift {
        out.push_str(&format!("index: {}\nlifted equations: {}\n", l.index, l.lifted_equations));
        out.push_str(&l.lifted_system);
    }
    let solves = report.solve.iter().chain(report.lift.iter().filter_map(|l| l.solve.as_ref()));
    for sv in solves {
        out.push_str(&format!(
            "solve: {} (residual {:.3e}, m = {}, restart {}, {} iterations)\n",
            if sv.success { "converged" } else { "not converged" },
            sv.residual,
            sv.dimension,
            sv.best_restart,
            sv.iterations
        ));
    }
    if let Some(l) = &report.lift {
        if let Some(r) = l.wreath_residual {
            out.push_str(&format!("wreath residual: {r:.3e}\n"));
        }
    }
    out
}
