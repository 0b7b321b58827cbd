use num_complex::Complex64;

use super::{skew, CMatrix, UnitaryError, UnitaryMatrix};
use crate::system::EquationSystem;
use crate::words::{Base, Word};

/// Values for the variables of a system, all of one dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct Assignment {
    dim: usize,
    matrices: Vec<UnitaryMatrix>,
}

impl Assignment {
    pub fn new(dim: usize, matrices: Vec<UnitaryMatrix>) -> Result<Self, UnitaryError> {
        if let Some(bad) = matrices.iter().find(|u| u.dim() != dim) {
            return Err(UnitaryError::Dimension { expected: dim, found: bad.dim() });
        }
        Ok(Assignment { dim, matrices })
    }

    pub fn identity(dim: usize, n: usize) -> Self {
        Assignment { dim, matrices: vec![UnitaryMatrix::identity(dim); n] }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn matrices(&self) -> &[UnitaryMatrix] {
        &self.matrices
    }

    pub fn get(&self, i: usize) -> Option<&UnitaryMatrix> {
        self.matrices.get(i)
    }

    pub(crate) fn matrices_mut(&mut self) -> &mut [UnitaryMatrix] {
        &mut self.matrices
    }
}

fn letter_matrices(
    w: &Word,
    a: &Assignment,
    constants: &[UnitaryMatrix],
) -> Result<Vec<CMatrix>, UnitaryError> {
    w.letters()
        .iter()
        .map(|l| {
            let u = match l.base {
                Base::Var(i) => a.get(i).ok_or(UnitaryError::Unassigned(i))?,
                Base::Const(c) => constants.get(c).ok_or(UnitaryError::UnassignedConstant(c))?,
            };
            if u.dim() != a.dim() {
                return Err(UnitaryError::Dimension { expected: a.dim(), found: u.dim() });
            }
            Ok(if l.inverse { u.matrix().adjoint() } else { u.matrix().clone() })
        })
        .collect()
}

/// The word map `w(X; G)`, with the identity for the empty word.
pub fn evaluate_word(w: &Word, a: &Assignment, constants: &[UnitaryMatrix]) -> Result<CMatrix, UnitaryError> {
    let mut acc = CMatrix::identity(a.dim(), a.dim());
    for m in letter_matrices(w, a, constants)? {
        acc *= m;
    }
    Ok(acc)
}

fn values(s: &EquationSystem) -> Result<&[UnitaryMatrix], UnitaryError> {
    if !s.is_valued() {
        return Err(UnitaryError::Symbolic);
    }
    Ok(s.values().unwrap_or(&[]))
}

/// `Σ_j ‖w_j(X) − I‖_F²`.
pub fn loss(s: &EquationSystem, a: &Assignment) -> Result<f64, UnitaryError> {
    let consts = values(s)?;
    let id = CMatrix::identity(a.dim(), a.dim());
    s.equations()
        .iter()
        .map(|w| Ok((evaluate_word(w, a, consts)? - &id).norm_squared()))
        .sum()
}

/// `max_j ‖w_j(X) − I‖_F`.
pub fn residual(s: &EquationSystem, a: &Assignment) -> Result<f64, UnitaryError> {
    let consts = values(s)?;
    let id = CMatrix::identity(a.dim(), a.dim());
    let mut worst = 0.0f64;
    for w in s.equations() {
        worst = worst.max((evaluate_word(w, a, consts)? - &id).norm());
    }
    Ok(worst)
}

/// Riemannian gradient of [`loss`] in the coordinates `X_i ← X_i·exp(Ω_i)`,
/// one skew-Hermitian matrix per variable, together with the loss itself.
pub fn gradient(s: &EquationSystem, a: &Assignment) -> Result<(f64, Vec<CMatrix>), UnitaryError> {
    let consts = values(s)?;
    let m = a.dim();
    let id = CMatrix::identity(m, m);
    let mut g = vec![CMatrix::zeros(m, m); a.len()];
    let mut total = 0.0;
    for w in s.equations() {
        let mats = letter_matrices(w, a, consts)?;
        let len = mats.len();
        // prefix[k] = M_0 ⋯ M_{k-1}, suffix[k] = M_{k+1} ⋯ M_{len-1}
        let mut prefix = Vec::with_capacity(len + 1);
        prefix.push(id.clone());
        for mk in &mats {
            let next = prefix.last().unwrap() * mk;
            prefix.push(next);
        }
        let mut suffix = vec![id.clone(); len];
        for k in (0..len.saturating_sub(1)).rev() {
            suffix[k] = &mats[k + 1] * &suffix[k + 1];
        }
        let e = &prefix[len] - &id;
        total += e.norm_squared();
        for (k, l) in w.letters().iter().enumerate() {
            let Base::Var(i) = l.base else { continue };
            let core = prefix[k].adjoint() * &e * suffix[k].adjoint();
            let x = a.matrices()[i].matrix();
            if l.inverse {
                g[i] -= core * x;
            } else {
                g[i] += x.adjoint() * core;
            }
        }
    }
    let two = Complex64::new(2.0, 0.0);
    Ok((total, g.iter().map(|gi| skew(gi) * two).collect()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unitary::{haar_random, inner};
    use crate::words::Letter;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    fn sample_system() -> EquationSystem {
        // x y g x' y y,  x x g'
        let w1 = Word::unreduced(vec![
            Letter::var(0),
            Letter::var(1),
            Letter::constant(0),
            Letter::var_inv(0),
            Letter::var(1),
            Letter::var(1),
        ]);
        let w2 = Word::unreduced(vec![Letter::var(0), Letter::var(0), Letter::constant_inv(0)]);
        EquationSystem::new(names(&["x", "y"]), names(&["g"]), vec![w1, w2])
            .unwrap()
            .with_values(vec![haar_random(3, 11)])
            .unwrap()
    }

    #[test]
    fn empty_word_is_identity() {
        let a = Assignment::new(2, vec![haar_random(2, 1)]).unwrap();
        assert_eq!(evaluate_word(&Word::empty(), &a, &[]).unwrap(), CMatrix::identity(2, 2));
    }

    #[test]
    fn symbolic_constants_are_rejected() {
        let w = Word::unreduced(vec![Letter::var(0), Letter::constant(0)]);
        let s = EquationSystem::new(names(&["x"]), names(&["g"]), vec![w]).unwrap();
        let a = Assignment::identity(2, 1);
        assert_eq!(residual(&s, &a), Err(UnitaryError::Symbolic));
    }

    #[test]
    fn inverse_letter_is_adjoint() {
        let x = haar_random(3, 4);
        let a = Assignment::new(3, vec![x]).unwrap();
        let w = Word::unreduced(vec![Letter::var(0), Letter::var_inv(0)]);
        let r = evaluate_word(&w, &a, &[]).unwrap();
        assert!((r - CMatrix::identity(3, 3)).norm() < 1e-13);
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let s = sample_system();
        let a = Assignment::new(3, vec![haar_random(3, 21), haar_random(3, 22)]).unwrap();
        let (l0, grad) = gradient(&s, &a).unwrap();
        assert!((l0 - loss(&s, &a).unwrap()).abs() < 1e-12);
        let dirs = [super::super::skew(haar_random(3, 31).matrix()), super::super::skew(haar_random(3, 32).matrix())];
        let h = 1e-6;
        let shifted = |t: f64| {
            let mats = a
                .matrices()
                .iter()
                .zip(&dirs)
                .map(|(u, d)| u.retract(&(d * Complex64::new(t, 0.0))))
                .collect();
            loss(&s, &Assignment::new(3, mats).unwrap()).unwrap()
        };
        let numeric = (shifted(h) - shifted(-h)) / (2.0 * h);
        let analytic: f64 = grad.iter().zip(&dirs).map(|(g, d)| inner(g, d)).sum();
        assert!((numeric - analytic).abs() < 1e-6 * (1.0 + analytic.abs()), "{numeric} vs {analytic}");
    }
}
