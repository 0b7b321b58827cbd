//! Python bindings.

use groupeq::certify::{self, CertifyOptions};
use groupeq::cli::{corpus_entry, corpus_names, parse_system, print_system, FileMode, ParseOptions, SystemFile};
use groupeq::presentation::Presentation;
use groupeq::system::EquationSystem;
use groupeq::unitary::{self, Assignment, CMatrix, SolveOptions};
use groupeq::words::Word;
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Finite presentation; relators are lists of signed 1-based generator indices.
#[pyclass(name = "Presentation", module = "pygroupeq", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPresentation(Presentation);

#[pymethods]
impl PyPresentation {
    #[new]
    fn new(generators: usize, relators: Vec<Vec<i64>>) -> PyResult<Self> {
        if relators.iter().flatten().any(|&s| s == 0) {
            return Err(value_error("0 is not a generator index"));
        }
        let words = relators.iter().map(|r| Word::from_signed(r)).collect();
        Presentation::with_trivial(generators, words).map(PyPresentation).map_err(value_error)
    }

    #[getter]
    fn generators(&self) -> usize {
        self.0.generators()
    }

    #[getter]
    fn relators(&self) -> Vec<Vec<i64>> {
        self.0.relators().iter().map(|w| w.to_signed().expect("variable-only")).collect()
    }

    fn exponent_matrix(&self) -> Vec<Vec<i64>> {
        self.0.exponent_matrix().to_i64_rows()
    }

    fn is_d2_injective(&self) -> bool {
        self.0.is_d2_injective()
    }

    #[pyo3(signature = (max_index=5, node_budget=2_000_000, asserted_aspherical=None, skip_direct=false))]
    fn certify(
        &self,
        max_index: usize,
        node_budget: usize,
        asserted_aspherical: Option<String>,
        skip_direct: bool,
    ) -> PyCertificate {
        let opts = CertifyOptions { max_index, node_budget, asserted_aspherical, skip_direct, ..Default::default() };
        PyCertificate(certify::certify(&self.0, &opts))
    }

    fn __repr__(&self) -> String {
        let rels: Vec<String> = self.0.relators().iter().map(|w| w.to_string()).collect();
        format!("Presentation({} generators; {})", self.0.generators(), rels.join(", "))
    }
}

#[pyclass(name = "Certificate", module = "pygroupeq", frozen)]
struct PyCertificate(certify::Certificate);

#[pymethods]
impl PyCertificate {
    #[getter]
    fn kind(&self) -> &'static str {
        self.0.kind()
    }

    fn is_unknown(&self) -> bool {
        self.0.is_unknown()
    }

    /// Re-check the evidence against a presentation.
    fn verify(&self, p: &PyPresentation) -> bool {
        certify::verify_certificate(&p.0, &self.0)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("certificates serialize")
    }

    fn __repr__(&self) -> String {
        format!("Certificate({})", self.to_json())
    }
}

#[pyclass(name = "UnitaryMatrix", module = "pygroupeq", frozen, from_py_object)]
#[derive(Clone)]
struct PyUnitary(unitary::UnitaryMatrix);

#[pymethods]
impl PyUnitary {
    /// Rows of complex entries; rejected if not unitary to 1e-6.
    #[new]
    fn new(rows: Vec<Vec<Complex64>>) -> PyResult<Self> {
        let m = rows.len();
        if m == 0 || rows.iter().any(|r| r.len() != m) {
            return Err(value_error("expected a non-empty square matrix"));
        }
        let mat = CMatrix::from_fn(m, m, |i, j| rows[i][j]);
        unitary::UnitaryMatrix::new(mat).map(PyUnitary).map_err(value_error)
    }

    #[staticmethod]
    fn haar(m: usize, seed: u64) -> PyResult<Self> {
        if m == 0 {
            return Err(value_error("dimension must be positive"));
        }
        Ok(PyUnitary(unitary::haar_random(m, seed)))
    }

    #[staticmethod]
    fn identity(m: usize) -> Self {
        PyUnitary(unitary::UnitaryMatrix::identity(m))
    }

    #[staticmethod]
    fn diagonal(phases: Vec<f64>) -> Self {
        PyUnitary(unitary::UnitaryMatrix::diagonal(&phases))
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    fn adjoint(&self) -> Self {
        PyUnitary(self.0.adjoint())
    }

    fn drift(&self) -> f64 {
        self.0.drift()
    }

    fn to_list(&self) -> Vec<Vec<Complex64>> {
        let m = self.0.matrix();
        (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
    }

    fn __matmul__(&self, other: &PyUnitary) -> PyResult<Self> {
        if self.0.dim() != other.0.dim() {
            return Err(value_error("dimension mismatch"));
        }
        unitary::UnitaryMatrix::new(self.0.matrix() * other.0.matrix()).map(PyUnitary).map_err(value_error)
    }

    fn __repr__(&self) -> String {
        format!("UnitaryMatrix(dim={})", self.0.dim())
    }
}

#[pyclass(name = "SolveResult", module = "pygroupeq", frozen, get_all)]
struct PySolveResult {
    residual: f64,
    success: bool,
    restart: usize,
    iterations: usize,
    restarts_run: usize,
    assignment: Vec<PyUnitary>,
}

#[pymethods]
impl PySolveResult {
    fn __repr__(&self) -> String {
        format!("SolveResult(success={}, residual={:.3e})", self.success, self.residual)
    }
}

/// System of equations over a free product with constants.
#[pyclass(name = "EquationSystem", module = "pygroupeq", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySystem(SystemFile);

fn assignment(s: &EquationSystem, mats: &[PyUnitary]) -> PyResult<Assignment> {
    let m = mats.first().map(|u| u.0.dim()).or(s.dimension()).unwrap_or(1);
    Assignment::new(m, mats.iter().map(|u| u.0.clone()).collect()).map_err(value_error)
}

#[pymethods]
impl PySystem {
    /// Parse the text format used by the command-line tool.
    #[staticmethod]
    #[pyo3(signature = (text, reduce=false))]
    fn parse(text: &str, reduce: bool) -> PyResult<Self> {
        parse_system(text, ParseOptions { reduce }).map(PySystem).map_err(value_error)
    }

    /// Copy with unitary values for the constants, in declaration order.
    fn with_values(&self, values: Vec<PyUnitary>) -> PyResult<Self> {
        let mut file = self.0.clone();
        file.system = file.system.with_values(values.into_iter().map(|u| u.0).collect()).map_err(value_error)?;
        Ok(PySystem(file))
    }

    #[getter]
    fn variables(&self) -> Vec<String> {
        self.0.system.variables().to_vec()
    }

    #[getter]
    fn constants(&self) -> Vec<String> {
        self.0.system.constants().to_vec()
    }

    #[getter]
    fn equations(&self) -> Vec<String> {
        self.0.system.equations().iter().map(|w| self.0.system.render(w)).collect()
    }

    fn augmented_presentation(&self) -> PyPresentation {
        PyPresentation(self.0.system.augmented_presentation())
    }

    #[pyo3(signature = (max_index=5, node_budget=2_000_000))]
    fn certify(&self, max_index: usize, node_budget: usize) -> PyCertificate {
        let p = self.augmented_presentation();
        p.certify(max_index, node_budget, self.0.asserted_aspherical.clone(), false)
    }

    #[pyo3(signature = (m=None, seed=0, restarts=8, max_iter=5000, tol=1e-8))]
    fn solve(
        &self,
        m: Option<usize>,
        seed: u64,
        restarts: usize,
        max_iter: usize,
        tol: f64,
    ) -> PyResult<PySolveResult> {
        let s = &self.0.system;
        let m = m.or(s.dimension()).unwrap_or(1);
        let r = unitary::solve(s, m, SolveOptions { seed, restarts, max_iter, tol }).map_err(value_error)?;
        Ok(PySolveResult {
            residual: r.residual,
            success: r.success,
            restart: r.restart,
            iterations: r.iterations,
            restarts_run: r.restarts_run,
            assignment: r.assignment.matrices().iter().cloned().map(PyUnitary).collect(),
        })
    }

    /// Largest Frobenius norm of `w_j(X) − I` over the equations.
    fn residual(&self, values: Vec<PyUnitary>) -> PyResult<f64> {
        let a = assignment(&self.0.system, &values)?;
        unitary::residual(&self.0.system, &a).map_err(value_error)
    }

    fn to_text(&self) -> String {
        print_system(&self.0)
    }

    fn is_presentation(&self) -> bool {
        self.0.mode == FileMode::Presentation
    }

    fn __repr__(&self) -> String {
        format!("EquationSystem({})", self.equations().join("; "))
    }
}

#[pyfunction(name = "corpus_names")]
fn py_corpus_names() -> Vec<&'static str> {
    corpus_names()
}

#[pyfunction]
fn corpus_text(name: &str) -> PyResult<&'static str> {
    corpus_entry(name).map(|e| e.text).ok_or_else(|| value_error(format!("unknown corpus entry {name}")))
}

#[pymodule]
fn pygroupeq(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPresentation>()?;
    m.add_class::<PyCertificate>()?;
    m.add_class::<PyUnitary>()?;
    m.add_class::<PySolveResult>()?;
    m.add_class::<PySystem>()?;
    m.add_function(wrap_pyfunction!(py_corpus_names, m)?)?;
    m.add_function(wrap_pyfunction!(corpus_text, m)?)?;
    Ok(())
}
