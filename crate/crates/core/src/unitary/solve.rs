use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{gradient, haar_with, inner, loss, residual, Assignment, CMatrix, UnitaryError};
use crate::system::EquationSystem;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub seed: u64,
    pub restarts: usize,
    pub max_iter: usize,
    pub tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions { seed: 0, restarts: 8, max_iter: 5000, tol: 1e-8 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SolveReport {
    pub assignment: Assignment,
    /// Max-norm residual of the best assignment.
    pub residual: f64,
    /// Whether `residual ≤ tol`.
    pub success: bool,
    /// Restart that produced the best assignment.
    pub restart: usize,
    /// Descent iterations used by that restart.
    pub iterations: usize,
    pub restarts_run: usize,
}

const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-18;

fn restart_seed(seed: u64, r: usize) -> u64 {
    seed ^ (r as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15)
}

fn step(a: &Assignment, dirs: &[CMatrix], t: f64) -> Assignment {
    let scale = Complex64::new(-t, 0.0);
    let mut next = a.clone();
    for (u, d) in next.matrices_mut().iter_mut().zip(dirs) {
        *u = u.retract(&(d * scale));
    }
    next
}

/// Riemannian descent from one starting point. Returns the final point and the
/// number of iterations taken.
fn descend(s: &EquationSystem, start: Assignment, opts: &SolveOptions) -> Result<(Assignment, usize), UnitaryError> {
    let mut a = start;
    let (mut f, mut g) = gradient(s, &a)?;
    let mut t = 0.1;
    let mut iterations = 0;
    while iterations < opts.max_iter {
        if f.sqrt() <= opts.tol {
            break;
        }
        let gnorm2: f64 = g.iter().map(|gi| inner(gi, gi)).sum();
        if gnorm2 < 1e-30 {
            break;
        }
        let (cand, fc) = loop {
            let cand = step(&a, &g, t);
            let fc = loss(s, &cand)?;
            if fc <= f - ARMIJO * t * gnorm2 || t < MIN_STEP {
                break (cand, fc);
            }
            t *= 0.5;
        };
        if fc > f {
            // line search exhausted without decrease
            break;
        }
        iterations += 1;
        let (f_new, g_new) = gradient(s, &cand)?;
        debug_assert!((f_new - fc).abs() <= 1e-9 * (1.0 + fc));
        // Barzilai–Borwein guess for the next trial step, s = −t·g, y = g_new − g
        let ss = t * t * gnorm2;
        let sy: f64 = g.iter().zip(&g_new).map(|(go, gn)| -t * inner(go, &(gn - go))).sum();
        t = if sy > 0.0 { (ss / sy).clamp(1e-8, 1e3) } else { (t * 2.0).min(1e3) };
        a = cand;
        f = f_new;
        g = g_new;
    }
    Ok((a, iterations))
}

/// Minimise `Σ_j ‖w_j − I‖_F²` over `U(m)^n` from Haar-random starts.
///
/// Restarts run in order and stop at the first success; otherwise the best
/// assignment by (residual, restart index) is returned with `success = false`.
pub fn solve(s: &EquationSystem, m: usize, opts: SolveOptions) -> Result<SolveReport, UnitaryError> {
    if m == 0 {
        return Err(UnitaryError::Precondition("dimension must be positive".into()));
    }
    if !s.is_valued() {
        return Err(UnitaryError::Symbolic);
    }
    if let Some(d) = s.dimension() {
        if d != m {
            return Err(UnitaryError::Dimension { expected: m, found: d });
        }
    }
    let mut best: Option<SolveReport> = None;
    let restarts = opts.restarts.max(1);
    for r in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(restart_seed(opts.seed, r));
        let start = (0..s.n_vars()).map(|_| haar_with(m, &mut rng)).collect();
        let (a, iterations) = descend(s, Assignment::new(m, start)?, &opts)?;
        let res = residual(s, &a)?;
        let success = res <= opts.tol;
        if best.as_ref().is_none_or(|b| res < b.residual) {
            best = Some(SolveReport {
                assignment: a,
                residual: res,
                success,
                restart: r,
                iterations,
                restarts_run: r + 1,
            });
        }
        if let Some(b) = best.as_mut() {
            b.restarts_run = r + 1;
        }
        if success {
            break;
        }
    }
    Ok(best.expect("at least one restart"))
}
