use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{haar_with, solve, SolveOptions, UnitaryError};
use crate::presentation::Presentation;
use crate::system::EquationSystem;
use crate::words::Letter;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeTrial {
    pub residual: f64,
    pub success: bool,
    pub iterations: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeReport {
    pub dimension: usize,
    pub tol: f64,
    pub trials: Vec<ProbeTrial>,
}

impl ProbeReport {
    pub fn successes(&self) -> usize {
        self.trials.iter().filter(|t| t.success).count()
    }

    pub fn max_residual(&self) -> f64 {
        self.trials.iter().map(|t| t.residual).fold(0.0, f64::max)
    }
}

/// Check numerically that `Z ↦ (r_1(Z), …, r_n(Z))` hits Haar-random targets
/// in `U(m)^n`. Requires a square exponent matrix with non-zero determinant.
/// `opts.seed` is ignored; each trial derives its own seeds from `seed`.
pub fn surjectivity_probe(
    p: &Presentation,
    m: usize,
    trials: usize,
    seed: u64,
    opts: SolveOptions,
) -> Result<ProbeReport, UnitaryError> {
    let (n, k) = (p.generators(), p.relator_count());
    if n != k {
        return Err(UnitaryError::Precondition(format!("exponent matrix is {k}×{n}, not square")));
    }
    if p.exponent_matrix().determinant().is_zero() {
        return Err(UnitaryError::Precondition("exponent matrix is singular".into()));
    }
    let variables: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let constants: Vec<String> = (1..=k).map(|j| format!("t{j}")).collect();
    let equations = p
        .relators()
        .iter()
        .enumerate()
        .map(|(j, r)| {
            let mut letters = r.letters().to_vec();
            letters.push(Letter::constant_inv(j));
            crate::words::Word::unreduced(letters)
        })
        .collect();
    let base = EquationSystem::new(variables, constants, equations)
        .map_err(|e| UnitaryError::Precondition(e.to_string()))?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(trials);
    for _ in 0..trials {
        let targets = (0..k).map(|_| haar_with(m, &mut rng)).collect();
        let s = base.clone().with_values(targets).map_err(|e| UnitaryError::Precondition(e.to_string()))?;
        let r = solve(&s, m, SolveOptions { seed: rng.random(), ..opts })?;
        out.push(ProbeTrial { residual: r.residual, success: r.success, iterations: r.iterations });
    }
    Ok(ProbeReport { dimension: m, tol: opts.tol, trials: out })
}
