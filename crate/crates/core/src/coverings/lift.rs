//! The lifted system over a covering.
//!
//! A solution `z_i = ((u_{i,y})_y, x_i)` in `(∏_{π\Γ} U(m)) ⋊ Γ` turns each
//! equation `w_j` into one equation per coset `y₀`, obtained by tracing `w_j`
//! from `y₀`: `x_i` emits `u_{i,cur}` and moves `cur ← cur·x_i`; `x_i⁻¹`
//! first moves `cur ← cur·x_i⁻¹` and then emits `u_{i,cur}⁻¹`; a constant
//! emits itself and stays put.

use serde::{Deserialize, Serialize};

use super::{CosetError, CosetTable};
use crate::system::{EquationSystem, SystemError};
use crate::words::{Base, Letter, Word};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum LiftedLetter {
    Unknown { var: usize, coset: usize, inverse: bool },
    Constant { index: usize, inverse: bool },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftedEquation {
    /// Index `j` of the original equation.
    pub source: usize,
    /// Start coset `y₀`.
    pub start: usize,
    pub letters: Vec<LiftedLetter>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LiftedSystem {
    pub variables: usize,
    pub index: usize,
    /// Ordered by source equation, then start coset.
    pub equations: Vec<LiftedEquation>,
}

impl LiftedSystem {
    /// Position of `u_{var,coset}` among the `n·N` lifted unknowns.
    pub fn unknown_index(&self, var: usize, coset: usize) -> usize {
        var * self.index + coset
    }

    pub fn unknown_count(&self) -> usize {
        self.variables * self.index
    }

    /// Cosets visited by an equation, in order, and whether the trace closes up.
    pub fn trace(&self, eq: &LiftedEquation, t: &CosetTable) -> (Vec<usize>, bool) {
        let mut cur = eq.start;
        let mut visited = vec![cur];
        let mut consistent = true;
        for &l in &eq.letters {
            if let LiftedLetter::Unknown { var, coset, inverse } = l {
                if inverse {
                    cur = t.act(cur, Letter::var_inv(var));
                    consistent &= coset == cur;
                } else {
                    consistent &= coset == cur;
                    cur = t.act(cur, Letter::var(var));
                }
                visited.push(cur);
            }
        }
        (visited, consistent && cur == eq.start)
    }

    /// The lifted system as an ordinary system: unknown `u_{i,y}` becomes the
    /// variable `<name of x_i>_<y>`; constants and their values carry over.
    pub fn to_equation_system(&self, original: &EquationSystem) -> Result<EquationSystem, SystemError> {
        let mut variables = Vec::with_capacity(self.unknown_count());
        for name in original.variables() {
            for y in 0..self.index {
                variables.push(format!("{name}_{y}"));
            }
        }
        let equations = self
            .equations
            .iter()
            .map(|eq| {
                Word::unreduced(
                    eq.letters
                        .iter()
                        .map(|&l| match l {
                            LiftedLetter::Unknown { var, coset, inverse } => Letter {
                                base: Base::Var(self.unknown_index(var, coset)),
                                inverse,
                            },
                            LiftedLetter::Constant { index, inverse } => {
                                Letter { base: Base::Const(index), inverse }
                            }
                        })
                        .collect(),
                )
            })
            .collect();
        let sys = EquationSystem::new(variables, original.constants().to_vec(), equations)?;
        match original.values() {
            Some(v) => sys.with_values(v.to_vec()),
            None => Ok(sys),
        }
    }
}

/// Lift every equation of `s` along the covering `t`. Words are kept exactly
/// as traced; no cancellation is applied.
pub fn lift_system(s: &EquationSystem, t: &CosetTable) -> Result<LiftedSystem, CosetError> {
    if s.n_vars() != t.generators() {
        return Err(CosetError::SystemMismatch { system: s.n_vars(), table: t.generators() });
    }
    for (j, w) in s.equations().iter().enumerate() {
        if !t.acts_trivially(&w.augment()) {
            return Err(CosetError::EquationMismatch(j));
        }
    }
    let mut equations = Vec::with_capacity(s.equations().len() * t.index());
    for (j, w) in s.equations().iter().enumerate() {
        for start in 0..t.index() {
            let mut cur = start;
            let mut letters = Vec::with_capacity(w.len());
            for &l in w.letters() {
                match l.base {
                    Base::Var(var) if l.inverse => {
                        cur = t.act(cur, l);
                        letters.push(LiftedLetter::Unknown { var, coset: cur, inverse: true });
                    }
                    Base::Var(var) => {
                        letters.push(LiftedLetter::Unknown { var, coset: cur, inverse: false });
                        cur = t.act(cur, l);
                    }
                    Base::Const(index) => {
                        letters.push(LiftedLetter::Constant { index, inverse: l.inverse });
                    }
                }
            }
            debug_assert_eq!(cur, start);
            equations.push(LiftedEquation { source: j, start, letters });
        }
    }
    Ok(LiftedSystem { variables: s.n_vars(), index: t.index(), equations })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coverings::todd_coxeter;

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    /// x g1 x g2 ... x g_r
    fn interleaved(r: usize) -> EquationSystem {
        let mut letters = Vec::new();
        for c in 0..r {
            letters.push(Letter::var(0));
            letters.push(Letter::constant(c));
        }
        let consts = (1..=r).map(|c| format!("g{c}")).collect();
        EquationSystem::new(names(&["x"]), consts, vec![Word::unreduced(letters)]).unwrap()
    }

    fn u(coset: usize) -> LiftedLetter {
        LiftedLetter::Unknown { var: 0, coset, inverse: false }
    }

    fn g(index: usize) -> LiftedLetter {
        LiftedLetter::Constant { index, inverse: false }
    }

    #[test]
    fn index_one_reproduces_input() {
        let s = interleaved(3);
        let l = lift_system(&s, &CosetTable::trivial(1)).unwrap();
        assert_eq!(l.equations.len(), 1);
        assert_eq!(l.equations[0].letters, vec![u(0), g(0), u(0), g(1), u(0), g(2)]);
    }

    #[test]
    fn index_two_over_cyclic_four() {
        let s = interleaved(4);
        let t = todd_coxeter(&s.augmented_presentation(), &[Word::from_signed(&[1, 1])], 10).unwrap();
        let l = lift_system(&s, &t).unwrap();
        assert_eq!(l.equations.len(), 2);
        assert_eq!(l.equations[0].letters, vec![u(0), g(0), u(1), g(1), u(0), g(2), u(1), g(3)]);
        assert_eq!(l.equations[1].letters, vec![u(1), g(0), u(0), g(1), u(1), g(2), u(0), g(3)]);
        for eq in &l.equations {
            let (visited, closed) = l.trace(eq, &t);
            assert!(closed);
            assert_eq!(visited.first(), visited.last());
        }
        let sys = l.to_equation_system(&s).unwrap();
        assert_eq!(sys.variables(), &["x_0".to_string(), "x_1".to_string()]);
        assert_eq!(sys.render(&sys.equations()[1]), "x_1 g1 x_0 g2 x_1 g3 x_0 g4");
    }

    #[test]
    fn inverse_letters_retreat_first() {
        // x x' x x x augments to x³
        let w = Word::unreduced(vec![
            Letter::var(0),
            Letter::var_inv(0),
            Letter::var(0),
            Letter::var(0),
            Letter::var(0),
        ]);
        let s = EquationSystem::new(names(&["x"]), vec![], vec![w]).unwrap();
        let t = todd_coxeter(&s.augmented_presentation(), &[], 10).unwrap();
        let l = lift_system(&s, &t).unwrap();
        let first = &l.equations[0].letters;
        assert_eq!(first[0], u(0));
        assert_eq!(first[1], LiftedLetter::Unknown { var: 0, coset: 0, inverse: true });
        assert!(l.equations.iter().all(|eq| l.trace(eq, &t).1));
    }

    #[test]
    fn constants_only_equation_is_copied() {
        let w = Word::unreduced(vec![Letter::constant(0), Letter::constant(1)]);
        let s = EquationSystem::new(names(&["x"]), names(&["g1", "g2"]), vec![
            w,
            Word::unreduced(vec![Letter::var(0); 3]),
        ])
        .unwrap();
        let t = todd_coxeter(&s.augmented_presentation(), &[], 10).unwrap();
        assert_eq!(t.index(), 3);
        let l = lift_system(&s, &t).unwrap();
        let copies: Vec<_> = l.equations.iter().filter(|e| e.source == 0).collect();
        assert_eq!(copies.len(), 3);
        assert!(copies.iter().all(|e| e.letters == vec![g(0), g(1)]));
    }

    #[test]
    fn mismatched_table_is_rejected() {
        let s = interleaved(3);
        let t = CosetTable::from_permutations(2, vec![vec![1, 0]], vec![]).unwrap();
        assert_eq!(lift_system(&s, &t), Err(CosetError::EquationMismatch(0)));
        assert!(matches!(
            lift_system(&s, &CosetTable::trivial(2)),
            Err(CosetError::SystemMismatch { .. })
        ));
    }
}
