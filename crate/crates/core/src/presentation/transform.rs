use serde::{Deserialize, Serialize};

use super::{Presentation, PresentationError};
use crate::words::{Base, Letter, Word};

/// Presentation moves that do not change whether the associated class of
/// equation systems is solvable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TransformOp {
    /// Nielsen move on relators: `r_target ← r_target · r_source^{±1}`.
    MultiplyRelator { target: usize, source: usize, inverse: bool },
    /// Nielsen move on relators: exchange two relators.
    SwapRelators(usize, usize),
    /// Nielsen move on generators: substitute `x_target ↦ x_target · x_source^{±1}`.
    MultiplyGenerator { target: usize, source: usize, inverse: bool },
    /// Nielsen move on generators: substitute `x_target ↦ x_target⁻¹`.
    InvertGenerator(usize),
    /// New generator `x_n` with a relation in which it occurs exactly once.
    AddGenerator { relation: Word },
    InvertRelator(usize),
    /// `r_index ← by · r_index · by⁻¹`.
    ConjugateRelator { index: usize, by: Word },
}

pub(super) fn apply(p: &Presentation, op: &TransformOp) -> Result<Presentation, PresentationError> {
    let n = p.generators;
    let k = p.relators.len();
    let rel = |i: usize| {
        if i < k {
            Ok(i)
        } else {
            Err(PresentationError::RelatorOutOfRange { index: i, k })
        }
    };
    let gen = |i: usize| {
        if i < n {
            Ok(i)
        } else {
            Err(PresentationError::GeneratorIndexOutOfRange { index: i, n })
        }
    };
    let mut relators = p.relators.clone();
    let mut generators = n;

    match op {
        TransformOp::MultiplyRelator { target, source, inverse } => {
            let (t, s) = (rel(*target)?, rel(*source)?);
            if t == s {
                return Err(PresentationError::BadOperation(
                    "a relator cannot be multiplied by itself".into(),
                ));
            }
            let factor = if *inverse { relators[s].inverse() } else { relators[s].clone() };
            relators[t] = relators[t].mul(&factor);
        }
        TransformOp::SwapRelators(a, b) => {
            relators.swap(rel(*a)?, rel(*b)?);
        }
        TransformOp::MultiplyGenerator { target, source, inverse } => {
            let (t, s) = (gen(*target)?, gen(*source)?);
            if t == s {
                return Err(PresentationError::BadOperation(
                    "a generator cannot be multiplied by itself".into(),
                ));
            }
            let image = Word::reduce([
                Letter::var(t),
                Letter { base: Base::Var(s), inverse: *inverse },
            ]);
            relators = relators.iter().map(|r| substitute(r, t, &image)).collect();
        }
        TransformOp::InvertGenerator(i) => {
            let t = gen(*i)?;
            let image = Word::reduce([Letter::var_inv(t)]);
            relators = relators.iter().map(|r| substitute(r, t, &image)).collect();
        }
        TransformOp::AddGenerator { relation } => {
            if !relation.is_variable_only() {
                return Err(PresentationError::BadOperation("relation contains constants".into()));
            }
            if let Some(g) = relation.max_var().filter(|&g| g > n) {
                return Err(PresentationError::GeneratorOutOfRange { index: k, generator: g, n: n + 1 });
            }
            let occurrences = relation.letters().iter().filter(|l| l.base == Base::Var(n)).count();
            if occurrences != 1 {
                return Err(PresentationError::BadOperation(format!(
                    "new generator must occur exactly once in its relation, found {occurrences}"
                )));
            }
            generators += 1;
            relators.push(relation.reduced());
        }
        TransformOp::InvertRelator(i) => {
            let t = rel(*i)?;
            relators[t] = relators[t].inverse();
        }
        TransformOp::ConjugateRelator { index, by } => {
            let t = rel(*index)?;
            if !by.is_variable_only() {
                return Err(PresentationError::BadOperation("conjugator contains constants".into()));
            }
            if let Some(g) = by.max_var().filter(|&g| g >= n) {
                return Err(PresentationError::GeneratorIndexOutOfRange { index: g, n });
            }
            relators[t] = relators[t].conjugate(by);
        }
    }
    Presentation::with_trivial(generators, relators)
}

fn substitute(word: &Word, var: usize, image: &Word) -> Word {
    let image_inv = image.inverse();
    Word::reduce(word.letters().iter().flat_map(|&l| {
        let piece: Vec<Letter> = match l.base {
            Base::Var(v) if v == var => {
                if l.inverse {
                    image_inv.letters().to_vec()
                } else {
                    image.letters().to_vec()
                }
            }
            _ => vec![l],
        };
        piece
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentation::tests::{gersten, w};
    use proptest::prelude::*;

    fn x3() -> Presentation {
        Presentation::new(1, vec![w(&[1, 1, 1])]).unwrap()
    }

    #[test]
    fn invert_relator() {
        let q = x3().transform(&TransformOp::InvertRelator(0)).unwrap();
        assert_eq!(q.relators(), &[w(&[-1, -1, -1])]);
    }

    #[test]
    fn conjugate_relator() {
        let p = Presentation::new(2, vec![w(&[1, 2, -1, -2])]).unwrap();
        let q = p
            .transform(&TransformOp::ConjugateRelator { index: 0, by: w(&[1]) })
            .unwrap();
        // a·aba⁻¹b⁻¹·a⁻¹ is already reduced
        assert_eq!(q.relators(), &[w(&[1, 1, 2, -1, -2, -1])]);
        assert_eq!(q.exponent_matrix(), p.exponent_matrix());
    }

    #[test]
    fn add_generator() {
        let q = x3()
            .transform(&TransformOp::AddGenerator { relation: w(&[2, 1, 1]) })
            .unwrap();
        assert_eq!(q.generators(), 2);
        assert_eq!(q.relators(), &[w(&[1, 1, 1]), w(&[2, 1, 1])]);
        assert!(q.is_d2_injective());

        let twice = x3().transform(&TransformOp::AddGenerator { relation: w(&[2, 1, 2]) });
        assert!(matches!(twice, Err(PresentationError::BadOperation(_))));
        let absent = x3().transform(&TransformOp::AddGenerator { relation: w(&[1]) });
        assert!(absent.is_err());
    }

    #[test]
    fn malformed_parameters() {
        assert!(x3().transform(&TransformOp::InvertRelator(1)).is_err());
        assert!(x3().transform(&TransformOp::InvertGenerator(3)).is_err());
        let p = Presentation::new(2, vec![w(&[1]), w(&[2])]).unwrap();
        assert!(p
            .transform(&TransformOp::MultiplyRelator { target: 0, source: 0, inverse: false })
            .is_err());
    }

    #[test]
    fn input_is_left_unchanged() {
        let p = gersten();
        let before = p.clone();
        let _ = p.transform(&TransformOp::MultiplyGenerator { target: 0, source: 4, inverse: true });
        assert_eq!(p, before);
    }

    #[test]
    fn generator_substitution_is_a_column_operation() {
        let p = gersten();
        let q = p
            .transform(&TransformOp::MultiplyGenerator { target: 4, source: 0, inverse: false })
            .unwrap();
        // x_t -> x_t x_s adds column t into column s
        let a = p.exponent_matrix().to_i64_rows();
        let b = q.exponent_matrix().to_i64_rows();
        for (ra, rb) in a.iter().zip(&b) {
            assert_eq!(rb[0], ra[0] + ra[4]);
            assert_eq!(rb[1..], ra[1..]);
        }
    }

    pub(crate) fn arb_op(n: usize, k: usize) -> impl Strategy<Value = TransformOp> {
        let word = prop::collection::vec((1..=n as i64).prop_flat_map(|v| prop_oneof![Just(v), Just(-v)]), 0..5);
        prop_oneof![
            (0..k, 0..k, any::<bool>()).prop_map(|(target, source, inverse)| TransformOp::MultiplyRelator { target, source, inverse }),
            (0..k, 0..k).prop_map(|(a, b)| TransformOp::SwapRelators(a, b)),
            (0..n, 0..n, any::<bool>()).prop_map(|(target, source, inverse)| TransformOp::MultiplyGenerator { target, source, inverse }),
            (0..n).prop_map(TransformOp::InvertGenerator),
            (0..k).prop_map(TransformOp::InvertRelator),
            (0..k, word.clone()).prop_map(|(index, by)| TransformOp::ConjugateRelator { index, by: w(&by) }),
            (word.clone(), word, any::<bool>()).prop_map(move |(u, v, inv)| {
                let new = (n + 1) as i64;
                let mut letters = u;
                letters.push(if inv { -new } else { new });
                letters.extend(v);
                TransformOp::AddGenerator { relation: w(&letters) }
            }),
        ]
    }

    proptest! {
        #[test]
        fn conjugation_keeps_exponent_matrix(by in prop::collection::vec(prop_oneof![1i64..=5, -5i64..=-1], 0..6), index in 0usize..5) {
            let p = gersten();
            let q = p.transform(&TransformOp::ConjugateRelator { index, by: w(&by) }).unwrap();
            prop_assert_eq!(q.exponent_matrix(), p.exponent_matrix());
        }

        #[test]
        fn single_moves_keep_injectivity(op in arb_op(2, 2), rels in prop::collection::vec(prop::collection::vec(prop_oneof![1i64..=2, -2i64..=-1], 1..6), 2)) {
            let rels: Vec<Word> = rels.iter().map(|r| w(r)).filter(|r| !r.is_empty()).collect();
            prop_assume!(rels.len() == 2);
            let p = Presentation::new(2, rels).unwrap();
            if let Ok(q) = p.transform(&op) {
                prop_assert_eq!(q.is_d2_injective(), p.is_d2_injective());
            }
        }
    }
}
