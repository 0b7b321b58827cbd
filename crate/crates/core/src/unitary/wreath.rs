use serde::{Deserialize, Serialize};

use super::{Assignment, CMatrix, UnitaryError};
use crate::coverings::{CosetTable, LiftedSystem};
use crate::system::EquationSystem;
use crate::words::Base;

/// An element `(f, σ)` of `(∏_{cosets} U(m)) ⋊ Sym(N)`, with `σ` acting on the right.
#[derive(Clone, Debug, PartialEq)]
pub struct WreathElement {
    pub components: Vec<CMatrix>,
    pub perm: Vec<usize>,
}

impl WreathElement {
    pub fn identity(m: usize, index: usize) -> Self {
        WreathElement { components: vec![CMatrix::identity(m, m); index], perm: (0..index).collect() }
    }

    /// `(f, σ)(g, τ) = (y ↦ f(y)·g(y·σ), στ)`.
    pub fn mul(&self, other: &WreathElement) -> WreathElement {
        let components = self
            .components
            .iter()
            .zip(&self.perm)
            .map(|(f, &ys)| f * &other.components[ys])
            .collect();
        let perm = self.perm.iter().map(|&ys| other.perm[ys]).collect();
        WreathElement { components, perm }
    }

    pub fn inverse(&self) -> WreathElement {
        let mut inv = vec![0; self.perm.len()];
        for (y, &ys) in self.perm.iter().enumerate() {
            inv[ys] = y;
        }
        let components = inv.iter().map(|&yi| self.components[yi].adjoint()).collect();
        WreathElement { components, perm: inv }
    }

    pub fn is_identity_permutation(&self) -> bool {
        self.perm.iter().enumerate().all(|(y, &ys)| y == ys)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WreathReport {
    /// `max_{j,y} ‖w_j(z)(y) − I‖_F`.
    pub residual: f64,
    /// Per original equation, the max over cosets.
    pub per_equation: Vec<f64>,
}

/// Evaluate the original equations at `z_i = ((u_{i,y})_y, x_i)` in the
/// semidirect product and measure how far each coset component is from `I`.
/// Fails if some second coordinate is not the identity permutation.
pub fn verify_wreath(
    s: &EquationSystem,
    l: &LiftedSystem,
    a: &Assignment,
    t: &CosetTable,
) -> Result<WreathReport, UnitaryError> {
    let big_n = t.index();
    if l.index != big_n || l.variables != s.n_vars() || t.generators() != s.n_vars() {
        return Err(UnitaryError::Precondition("lifted system does not match the system and table".into()));
    }
    if a.len() != l.unknown_count() {
        return Err(UnitaryError::Precondition(format!(
            "expected {} lifted unknowns, got {}",
            l.unknown_count(),
            a.len()
        )));
    }
    if !s.is_valued() {
        return Err(UnitaryError::Symbolic);
    }
    let consts = s.values().unwrap_or(&[]);
    let m = a.dim();
    let z: Vec<WreathElement> = (0..s.n_vars())
        .map(|i| WreathElement {
            components: (0..big_n).map(|y| a.matrices()[l.unknown_index(i, y)].matrix().clone()).collect(),
            perm: t.action(i).to_vec(),
        })
        .collect();
    let z_inv: Vec<WreathElement> = z.iter().map(WreathElement::inverse).collect();
    let mut consts_diag = Vec::with_capacity(consts.len());
    for g in consts {
        if g.dim() != m {
            return Err(UnitaryError::Dimension { expected: m, found: g.dim() });
        }
        let d = WreathElement { components: vec![g.matrix().clone(); big_n], perm: (0..big_n).collect() };
        let d_inv = d.inverse();
        consts_diag.push((d, d_inv));
    }

    let id = CMatrix::identity(m, m);
    let mut per_equation = Vec::with_capacity(s.equations().len());
    for (j, w) in s.equations().iter().enumerate() {
        let mut acc = WreathElement::identity(m, big_n);
        for l in w.letters() {
            let factor = match (l.base, l.inverse) {
                (Base::Var(i), false) => &z[i],
                (Base::Var(i), true) => &z_inv[i],
                (Base::Const(c), false) => &consts_diag[c].0,
                (Base::Const(c), true) => &consts_diag[c].1,
            };
            acc = acc.mul(factor);
        }
        if let Some(coset) = acc.perm.iter().enumerate().position(|(y, &ys)| y != ys) {
            return Err(UnitaryError::SecondCoordinate { equation: j, coset });
        }
        let worst = acc.components.iter().map(|c| (c - &id).norm()).fold(0.0, f64::max);
        per_equation.push(worst);
    }
    let residual = per_equation.iter().copied().fold(0.0, f64::max);
    Ok(WreathReport { residual, per_equation })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coverings::{lift_system, todd_coxeter};
    use crate::unitary::{haar_random, residual, solve, SolveOptions};
    use crate::words::{Letter, Word};

    fn interleaved(gs: Vec<crate::unitary::UnitaryMatrix>) -> EquationSystem {
        let r = gs.len();
        let mut letters = Vec::new();
        for c in 0..r {
            letters.push(Letter::var(0));
            letters.push(Letter::constant(c));
        }
        let consts = (1..=r).map(|c| format!("g{c}")).collect();
        EquationSystem::new(vec!["x".into()], consts, vec![Word::unreduced(letters)])
            .unwrap()
            .with_values(gs)
            .unwrap()
    }

    #[test]
    fn multiplication_is_associative_with_inverses() {
        let e = |seed: u64, perm: Vec<usize>| WreathElement {
            components: (0..3).map(|y| haar_random(2, seed + y).into_matrix()).collect(),
            perm,
        };
        let (a, b, c) = (e(1, vec![1, 2, 0]), e(10, vec![0, 2, 1]), e(20, vec![2, 1, 0]));
        let left = a.mul(&b).mul(&c);
        let right = a.mul(&b.mul(&c));
        assert_eq!(left.perm, right.perm);
        for (x, y) in left.components.iter().zip(&right.components) {
            assert!((x - y).norm() < 1e-12);
        }
        let one = a.mul(&a.inverse());
        assert!(one.is_identity_permutation());
        assert!(one.components.iter().all(|x| (x - CMatrix::identity(2, 2)).norm() < 1e-12));
    }

    #[test]
    fn index_one_matches_plain_residual() {
        let s = interleaved((0..3).map(|i| haar_random(2, 40 + i)).collect());
        let t = CosetTable::trivial(1);
        let l = lift_system(&s, &t).unwrap();
        let a = Assignment::new(2, vec![haar_random(2, 7)]).unwrap();
        let v = verify_wreath(&s, &l, &a, &t).unwrap();
        assert!((v.residual - residual(&s, &a).unwrap()).abs() <= 1e-12);
    }

    #[test]
    fn cyclic_four_lift_end_to_end() {
        let s = interleaved((0..4).map(|i| haar_random(2, 100 + i)).collect());
        let t = todd_coxeter(&s.augmented_presentation(), &[Word::from_signed(&[1, 1])], 10).unwrap();
        let l = lift_system(&s, &t).unwrap();
        let lifted = l.to_equation_system(&s).unwrap();
        let r = solve(&lifted, 2, SolveOptions { seed: 1, ..SolveOptions::default() }).unwrap();
        assert!(r.success, "lifted residual {}", r.residual);
        let v = verify_wreath(&s, &l, &r.assignment, &t).unwrap();
        assert!(v.residual <= 1e-7, "wreath residual {}", v.residual);
        assert_eq!(v.per_equation.len(), 1);
    }

    #[test]
    fn permuted_unknowns_fail() {
        // x g1 x g2 x g3 and y g4 over the three-coset covering of ⟨x, y | x³, y⟩;
        // exchanging the slots of u_{x,0} and u_{y,0} must break the witness
        let gs: Vec<_> = (0..4).map(|i| haar_random(2, 200 + i)).collect();
        let w1 = Word::unreduced(vec![
            Letter::var(0),
            Letter::constant(0),
            Letter::var(0),
            Letter::constant(1),
            Letter::var(0),
            Letter::constant(2),
        ]);
        let w2 = Word::unreduced(vec![Letter::var(1), Letter::constant(3)]);
        let consts = (1..=4).map(|c| format!("g{c}")).collect();
        let s = EquationSystem::new(vec!["x".into(), "y".into()], consts, vec![w1, w2])
            .unwrap()
            .with_values(gs)
            .unwrap();
        let t = todd_coxeter(&s.augmented_presentation(), &[], 10).unwrap();
        assert_eq!(t.index(), 3);
        let l = lift_system(&s, &t).unwrap();
        let lifted = l.to_equation_system(&s).unwrap();
        let r = solve(&lifted, 2, SolveOptions { seed: 2, ..SolveOptions::default() }).unwrap();
        assert!(r.success, "lifted residual {}", r.residual);
        assert!(verify_wreath(&s, &l, &r.assignment, &t).unwrap().residual <= 1e-7);
        let mut mats = r.assignment.matrices().to_vec();
        mats.swap(l.unknown_index(0, 0), l.unknown_index(1, 0));
        let bad = verify_wreath(&s, &l, &Assignment::new(2, mats).unwrap(), &t).unwrap();
        assert!(bad.residual > 1e-3, "permuted residual {}", bad.residual);
    }

    #[test]
    fn wrong_unknown_count_is_rejected() {
        let s = interleaved(vec![haar_random(2, 1)]);
        let t = CosetTable::trivial(1);
        let l = lift_system(&s, &t).unwrap();
        let a = Assignment::identity(2, 2);
        assert!(matches!(verify_wreath(&s, &l, &a, &t), Err(UnitaryError::Precondition(_))));
    }
}
