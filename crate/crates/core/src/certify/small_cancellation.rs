use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::CertifyError;
use crate::presentation::Presentation;
use crate::words::Word;

/// Piece statistics of the symmetrised relator set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PieceReport {
    /// Longest piece found.
    pub max_piece: usize,
    /// Shortest cyclically reduced relator.
    pub min_relator_length: usize,
    /// Whether every relator is root-primitive.
    pub root_primitive: bool,
    /// Whether every piece `u` that is a prefix of `r` has `|u| < λ·|r|`.
    pub metric_condition: bool,
}

impl PieceReport {
    pub fn holds(&self) -> bool {
        self.root_primitive && self.metric_condition
    }
}

fn common_prefix(a: &[i64], b: &[i64]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x == y).count()
}

/// Enumerate pieces of the symmetrised closure of `p` (relators are first
/// cyclically reduced) and test the metric condition `C′(λ)`.
pub fn piece_report(p: &Presentation, lambda: Ratio<u64>) -> Result<PieceReport, CertifyError> {
    let mut cores = Vec::with_capacity(p.relator_count());
    for (j, r) in p.relators().iter().enumerate() {
        let (core, _) = r.reduced().cyclic_reduce();
        if core.is_empty() {
            return Err(CertifyError::EmptyRelator(j));
        }
        cores.push(core);
    }
    let root_primitive = cores.iter().all(|c| c.max_root().map(|(_, e)| e == 1).unwrap_or(false));

    let mut symmetrized: Vec<Vec<i64>> = Vec::new();
    for core in &cores {
        for w in [core.clone(), core.inverse()] {
            for k in 0..w.len() {
                symmetrized.push(w.rotate(k).to_signed().expect("variable-only relators"));
            }
        }
    }
    symmetrized.sort();
    symmetrized.dedup();

    let mut max_piece = 0;
    let mut metric_condition = true;
    for (idx, s) in symmetrized.iter().enumerate() {
        // in sorted order the longest common prefix is with a neighbour
        let before = idx.checked_sub(1).map_or(0, |b| common_prefix(s, &symmetrized[b]));
        let after = symmetrized.get(idx + 1).map_or(0, |a| common_prefix(s, a));
        let piece = before.max(after);
        max_piece = max_piece.max(piece);
        if (piece as u64) * lambda.denom() >= lambda.numer() * s.len() as u64 {
            metric_condition = false;
        }
    }
    let min_relator_length = cores.iter().map(Word::len).min().unwrap_or(0);
    Ok(PieceReport { max_piece, min_relator_length, root_primitive, metric_condition })
}

/// `C′(λ)` with every relator root-primitive.
pub fn small_cancellation_check(p: &Presentation, lambda: Ratio<u64>) -> Result<bool, CertifyError> {
    Ok(piece_report(p, lambda)?.holds())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sixth() -> Ratio<u64> {
        Ratio::new(1, 6)
    }

    #[test]
    fn commutator_fails() {
        let p = Presentation::new(2, vec![Word::from_signed(&[1, 2, -1, -2])]).unwrap();
        let r = piece_report(&p, sixth()).unwrap();
        assert_eq!(r.max_piece, 1);
        assert!(!r.holds());
    }

    #[test]
    fn proper_power_is_excluded() {
        let p = Presentation::new(1, vec![Word::from_signed(&[1, 1, 1])]).unwrap();
        assert!(!small_cancellation_check(&p, sixth()).unwrap());
    }

    #[test]
    fn empty_relator_is_an_error() {
        let p = Presentation::with_trivial(2, vec![Word::from_signed(&[1, 2, -2, -1])]).unwrap();
        assert_eq!(small_cancellation_check(&p, sixth()), Err(CertifyError::EmptyRelator(0)));
    }

    #[test]
    fn cyclic_conjugates_are_reduced_first() {
        // b (a a b a b b a a a b b b a b a) b'  has the same pieces as its core
        let core = [1, 1, 2, 1, 2, 2, 1, 1, 1, 2, 2, 2, 1, 2, 1];
        let mut padded = vec![2];
        padded.extend(core);
        padded.push(-2);
        let a = Presentation::new(2, vec![Word::from_signed(&core)]).unwrap();
        let b = Presentation::new(2, vec![Word::from_signed(&padded)]).unwrap();
        assert_eq!(piece_report(&a, sixth()).unwrap(), piece_report(&b, sixth()).unwrap());
    }
}
