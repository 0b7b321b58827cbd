//! Numerical witnesses in unitary groups.
//!
//! Word maps are evaluated on tuples of `U(m)` matrices and systems are solved
//! by Riemannian gradient descent on `Σ_j ‖w_j − I‖_F²`. A failure to
//! converge is reported, never read as non-solvability.

mod eval;
mod probe;
mod solve;
mod wreath;

pub use eval::{evaluate_word, gradient, loss, residual, Assignment};
pub use probe::{surjectivity_probe, ProbeReport, ProbeTrial};
pub use solve::{solve, SolveOptions, SolveReport};
pub use wreath::{verify_wreath, WreathElement, WreathReport};

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub type CMatrix = DMatrix<Complex64>;

/// Drift `‖U*U − I‖_F` above which a matrix is re-orthonormalised.
pub const UNITARITY_TOL: f64 = 1e-10;
/// Drift above which input is rejected as not unitary.
pub const INPUT_TOL: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UnitaryError {
    #[error("variable {0} has no value")]
    Unassigned(usize),
    #[error("constant {0} has no value")]
    UnassignedConstant(usize),
    #[error("constants have no values")]
    Symbolic,
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },
    #[error("matrix is not unitary (drift {0:.3e})")]
    NotUnitary(f64),
    #[error("matrix must be square, got {0}×{1}")]
    NotSquare(usize, usize),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("second coordinate of equation {equation} at coset {coset} is not the identity")]
    SecondCoordinate { equation: usize, coset: usize },
}

/// An `m × m` unitary matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix(CMatrix);

impl UnitaryMatrix {
    /// Accept a matrix within [`INPUT_TOL`] of unitary, re-orthonormalising if needed.
    pub fn new(m: CMatrix) -> Result<Self, UnitaryError> {
        if m.nrows() != m.ncols() {
            return Err(UnitaryError::NotSquare(m.nrows(), m.ncols()));
        }
        let d = drift(&m);
        if !d.is_finite() || d > INPUT_TOL {
            return Err(UnitaryError::NotUnitary(d));
        }
        let mut u = UnitaryMatrix(m);
        u.renormalize_if_needed();
        Ok(u)
    }

    pub fn identity(m: usize) -> Self {
        UnitaryMatrix(CMatrix::identity(m, m))
    }

    pub fn diagonal(phases: &[f64]) -> Self {
        let m = phases.len();
        UnitaryMatrix(CMatrix::from_fn(m, m, |i, j| {
            if i == j {
                Complex64::from_polar(1.0, phases[i])
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    /// `e^{iθ}·I`.
    pub fn scalar(m: usize, theta: f64) -> Self {
        UnitaryMatrix(CMatrix::identity(m, m) * Complex64::from_polar(1.0, theta))
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix {
        self.0
    }

    pub fn adjoint(&self) -> UnitaryMatrix {
        UnitaryMatrix(self.0.adjoint())
    }

    pub fn drift(&self) -> f64 {
        drift(&self.0)
    }

    pub(crate) fn renormalize_if_needed(&mut self) {
        if drift(&self.0) > UNITARITY_TOL {
            self.0 = orthonormalize(&self.0);
        }
    }

    /// `self · exp(Ω)` for skew-Hermitian `Ω`.
    pub fn retract(&self, omega: &CMatrix) -> UnitaryMatrix {
        let mut u = UnitaryMatrix(&self.0 * omega.clone().exp());
        u.renormalize_if_needed();
        u
    }
}

pub fn drift(m: &CMatrix) -> f64 {
    let n = m.nrows();
    (m.adjoint() * m - CMatrix::identity(n, n)).norm()
}

/// Nearest-in-spirit unitary: the Q factor of QR with the diagonal of R made positive.
pub fn orthonormalize(m: &CMatrix) -> CMatrix {
    let qr = m.clone().qr();
    let q = qr.q();
    let r = qr.r();
    let phases = CMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
        if i == j {
            let d = r[(i, i)];
            if d.norm() > 0.0 {
                d / d.norm()
            } else {
                Complex64::new(1.0, 0.0)
            }
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    q * phases
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of R's diagonal folded back into Q.
pub fn haar_random(m: usize, seed: u64) -> UnitaryMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    haar_with(m, &mut rng)
}

pub(crate) fn haar_with<R: rand::Rng>(m: usize, rng: &mut R) -> UnitaryMatrix {
    assert!(m >= 1, "dimension must be positive");
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let z = CMatrix::from_fn(m, m, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        Complex64::new(re * scale, im * scale)
    });
    UnitaryMatrix(orthonormalize(&z))
}

/// Skew-Hermitian part `(A − A*)/2`.
pub fn skew(a: &CMatrix) -> CMatrix {
    (a - a.adjoint()) * Complex64::new(0.5, 0.0)
}

/// Real inner product `Re tr(A* B)`.
pub fn inner(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

// Matrices travel as m×m arrays of [re, im] pairs.
impl Serialize for UnitaryMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        to_pairs(&self.0).serialize(s)
    }
}

impl<'de> Deserialize<'de> for UnitaryMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<[f64; 2]>>::deserialize(d)?;
        let m = from_pairs(&rows).map_err(serde::de::Error::custom)?;
        UnitaryMatrix::new(m).map_err(serde::de::Error::custom)
    }
}

pub fn to_pairs(m: &CMatrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

pub fn from_pairs(rows: &[Vec<[f64; 2]>]) -> Result<CMatrix, UnitaryError> {
    let r = rows.len();
    if let Some(bad) = rows.iter().find(|row| row.len() != r) {
        return Err(UnitaryError::NotSquare(r, bad.len()));
    }
    Ok(CMatrix::from_fn(r, r, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn haar_one_by_one_is_a_phase() {
        let u = haar_random(1, 7);
        assert!((u.matrix()[(0, 0)].norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn haar_is_deterministic_and_unitary() {
        let a = haar_random(4, 42);
        assert_eq!(a, haar_random(4, 42));
        assert_ne!(a, haar_random(4, 43));
        assert!(a.drift() < UNITARITY_TOL);
    }

    #[test]
    fn haar_second_moment_of_trace() {
        // E|tr U|² = 1 for Haar U(m), any m ≥ 1
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let samples = 10_000;
        let mean: f64 = (0..samples)
            .map(|_| haar_with(3, &mut rng).matrix().trace().norm_sqr())
            .sum::<f64>()
            / samples as f64;
        assert!((mean - 1.0).abs() < 0.05, "mean |tr U|² = {mean}");
    }

    #[test]
    fn rejects_non_unitary_input() {
        let m = CMatrix::identity(2, 2) * Complex64::new(2.0, 0.0);
        assert!(matches!(UnitaryMatrix::new(m), Err(UnitaryError::NotUnitary(_))));
        assert!(matches!(UnitaryMatrix::new(CMatrix::zeros(2, 3)), Err(UnitaryError::NotSquare(2, 3))));
    }

    #[test]
    fn small_drift_is_repaired() {
        let mut m = haar_random(3, 1).into_matrix();
        m[(0, 0)] += Complex64::new(1e-8, 0.0);
        let u = UnitaryMatrix::new(m).unwrap();
        assert!(u.drift() < UNITARITY_TOL);
    }

    #[test]
    fn retraction_stays_unitary() {
        let mut u = haar_random(3, 5);
        let omega = skew(haar_random(3, 6).matrix());
        for _ in 0..1000 {
            u = u.retract(&(omega.clone() * Complex64::new(0.37, 0.0)));
        }
        assert!(u.drift() <= UNITARITY_TOL);
    }

    #[test]
    fn serde_pairs() {
        let u = UnitaryMatrix::diagonal(&[0.3, -1.1]);
        let json = serde_json::to_string(&u).unwrap();
        let back: UnitaryMatrix = serde_json::from_str(&json).unwrap();
        assert!((back.matrix() - u.matrix()).norm() < 1e-15);
        assert!(serde_json::from_str::<UnitaryMatrix>("[[[2.0, 0.0]]]").is_err());
    }
}
