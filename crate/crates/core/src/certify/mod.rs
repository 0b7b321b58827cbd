//! The certificate cascade.
//!
//! Each branch is a sufficient condition for the augmented presentation to
//! admit a covering with trivial second homology. Nothing here ever claims
//! non-solvability: when every branch fails the answer is [`Certificate::Unknown`].

mod small_cancellation;

pub use small_cancellation::{piece_report, small_cancellation_check, PieceReport};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coverings::{h2_trivial_covering, low_index_subgroups, CosetError, CosetTable, LowIndexOptions};
use crate::presentation::{IntegerMatrix, Presentation};
use crate::words::Word;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertifyError {
    #[error("relator {0} is trivial after cyclic reduction")]
    EmptyRelator(usize),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Certificate {
    /// The exponent matrix has full row rank.
    Direct { exponent_matrix: IntegerMatrix, rank: usize },
    /// One relator that is not a proper power.
    OneRelatorTorsionFree { relator: Word },
    /// One relator whose cyclic core is `root^exponent`, `exponent ≥ 2`.
    OneRelatorTorsion { relator: Word, root: Word, exponent: usize },
    SmallCancellation { lambda: Ratio<u64>, max_piece: usize, min_relator_length: usize },
    Covering { table: CosetTable },
    /// Asphericality taken on trust from an annotation.
    AssertedAspherical { citation: String },
    Unknown {
        exponent_rank: usize,
        /// Every covering of index up to this bound was examined.
        searched_index: usize,
        budget_exceeded: bool,
    },
}

impl Certificate {
    pub fn kind(&self) -> &'static str {
        match self {
            Certificate::Direct { .. } => "Direct",
            Certificate::OneRelatorTorsionFree { .. } => "OneRelatorTorsionFree",
            Certificate::OneRelatorTorsion { .. } => "OneRelatorTorsion",
            Certificate::SmallCancellation { .. } => "SmallCancellation",
            Certificate::Covering { .. } => "Covering",
            Certificate::AssertedAspherical { .. } => "AssertedAspherical",
            Certificate::Unknown { .. } => "Unknown",
        }
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, Certificate::Unknown { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifyOptions {
    pub max_index: usize,
    /// Search-node budget for each low-index enumeration.
    pub node_budget: usize,
    pub lambda: Ratio<u64>,
    /// Citation tag for an externally known asphericality result.
    pub asserted_aspherical: Option<String>,
    /// Skip branch (a); for exercising the later branches.
    pub skip_direct: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            max_index: 5,
            node_budget: 2_000_000,
            lambda: Ratio::new(1, 6),
            asserted_aspherical: None,
            skip_direct: false,
        }
    }
}

/// Cyclic core of a single nonempty relator and its maximal root.
fn one_relator_root(p: &Presentation) -> Option<(Word, Word, usize)> {
    if p.relator_count() != 1 {
        return None;
    }
    let relator = p.relators()[0].clone();
    let (core, _) = relator.reduced().cyclic_reduce();
    let (root, exponent) = core.max_root().ok()?;
    Some((relator, root, exponent))
}

/// Run the cascade: direct rank test, one-relator root structure, small
/// cancellation, low-index coverings, then asserted asphericality.
pub fn certify(p: &Presentation, opts: &CertifyOptions) -> Certificate {
    let exponent_matrix = p.exponent_matrix();
    let exponent_rank = exponent_matrix.rank();
    if !opts.skip_direct && exponent_rank == p.relator_count() {
        return Certificate::Direct { exponent_matrix, rank: exponent_rank };
    }
    if let Some((relator, root, exponent)) = one_relator_root(p) {
        return if exponent == 1 {
            Certificate::OneRelatorTorsionFree { relator }
        } else {
            Certificate::OneRelatorTorsion { relator, root, exponent }
        };
    }
    if let Ok(report) = piece_report(p, opts.lambda) {
        if report.holds() {
            return Certificate::SmallCancellation {
                lambda: opts.lambda,
                max_piece: report.max_piece,
                min_relator_length: report.min_relator_length,
            };
        }
    }

    // Deepen one index at a time so a budget failure at index b leaves every
    // index below b fully searched.
    let mut searched_index = 0;
    let mut budget_exceeded = false;
    for bound in 1..=opts.max_index {
        let search = LowIndexOptions { max_index: bound, node_budget: opts.node_budget };
        match low_index_subgroups(p, search) {
            Ok(tables) => {
                for t in tables.into_iter().filter(|t| t.index() == bound) {
                    if h2_trivial_covering(p, &t).unwrap_or(false) {
                        return Certificate::Covering { table: t };
                    }
                }
                searched_index = bound;
            }
            Err(CosetError::NodeBudgetExceeded(_)) => {
                budget_exceeded = true;
                break;
            }
            Err(_) => break,
        }
    }

    if let Some(citation) = opts.asserted_aspherical.as_ref().filter(|c| !c.trim().is_empty()) {
        return Certificate::AssertedAspherical { citation: citation.clone() };
    }
    Certificate::Unknown { exponent_rank, searched_index, budget_exceeded }
}

/// Re-check a certificate against `p` from its embedded evidence.
pub fn verify_certificate(p: &Presentation, c: &Certificate) -> bool {
    match c {
        Certificate::Direct { exponent_matrix, rank } => {
            *exponent_matrix == p.exponent_matrix() && p.is_d2_injective() && *rank == p.relator_count()
        }
        Certificate::OneRelatorTorsionFree { relator } => {
            matches!(one_relator_root(p), Some((r, _, 1)) if r == *relator)
        }
        Certificate::OneRelatorTorsion { relator, root, exponent } => {
            *exponent >= 2
                && root.max_root().map(|(_, e)| e == 1).unwrap_or(false)
                && one_relator_root(p).is_some_and(|(r, z, e)| r == *relator && z == *root && e == *exponent)
        }
        Certificate::SmallCancellation { lambda, max_piece, min_relator_length } => {
            piece_report(p, *lambda).is_ok_and(|r| {
                r.holds() && r.max_piece == *max_piece && r.min_relator_length == *min_relator_length
            })
        }
        Certificate::Covering { table } => h2_trivial_covering(p, table).unwrap_or(false),
        Certificate::AssertedAspherical { citation } => !citation.trim().is_empty(),
        Certificate::Unknown { .. } => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &[i64]) -> Word {
        Word::from_signed(s)
    }

    #[test]
    fn cyclic_group_is_direct() {
        let p = Presentation::new(1, vec![w(&[1, 1, 1])]).unwrap();
        let c = certify(&p, &CertifyOptions::default());
        assert_eq!(c.kind(), "Direct");
        assert!(verify_certificate(&p, &c));
    }

    #[test]
    fn square_of_a_product() {
        let p = Presentation::new(2, vec![w(&[1, 2, 1, 2])]).unwrap();
        assert_eq!(certify(&p, &CertifyOptions::default()).kind(), "Direct");
        let opts = CertifyOptions { skip_direct: true, ..CertifyOptions::default() };
        let c = certify(&p, &opts);
        assert_eq!(c, Certificate::OneRelatorTorsion { relator: w(&[1, 2, 1, 2]), root: w(&[1, 2]), exponent: 2 });
        assert!(verify_certificate(&p, &c));
    }

    #[test]
    fn commutator_is_torsion_free_one_relator() {
        let p = Presentation::new(2, vec![w(&[1, 2, -1, -2])]).unwrap();
        let c = certify(&p, &CertifyOptions::default());
        assert_eq!(c.kind(), "OneRelatorTorsionFree");
        assert!(verify_certificate(&p, &c));
    }

    #[test]
    fn asserted_asphericality() {
        // (b a b') a (b a b')' a' a',  a c a' c'
        let p = Presentation::new(3, vec![w(&[2, 1, -2, 1, 2, -1, -2, -1, -1]), w(&[1, 3, -1, -3])]).unwrap();
        let opts = CertifyOptions { max_index: 3, asserted_aspherical: Some("CCH81".into()), ..CertifyOptions::default() };
        let c = certify(&p, &opts);
        assert_eq!(c, Certificate::AssertedAspherical { citation: "CCH81".into() });
        let plain = certify(&p, &CertifyOptions { max_index: 3, ..CertifyOptions::default() });
        assert!(plain.is_unknown());
    }

    #[test]
    fn three_commutators_stay_unknown() {
        let p = Presentation::new(3, vec![w(&[1, 2, -1, -2]), w(&[2, 3, -2, -3]), w(&[3, 1, -3, -1])]).unwrap();
        let c = certify(&p, &CertifyOptions::default());
        assert!(matches!(c, Certificate::Unknown { searched_index: 5, budget_exceeded: false, .. }), "{c:?}");
    }

    #[test]
    fn covering_branch_finds_a_table() {
        // more relators than generators: no covering can have trivial H2
        let p = Presentation::with_trivial(1, vec![w(&[1, 1]), w(&[])]).unwrap();
        assert!(certify(&p, &CertifyOptions::default()).is_unknown());
        // skip_direct still finds the index-1 covering
        let q = Presentation::new(2, vec![w(&[1, 1, 1]), w(&[2, 2])]).unwrap();
        let opts = CertifyOptions { skip_direct: true, ..CertifyOptions::default() };
        let c = certify(&q, &opts);
        assert_eq!(c.kind(), "Covering");
        assert!(verify_certificate(&q, &c));
    }

    #[test]
    fn tampered_evidence_fails() {
        let p = Presentation::new(2, vec![w(&[1, 2, -1, -2])]).unwrap();
        let bad = Certificate::OneRelatorTorsion { relator: w(&[1, 2, -1, -2]), root: w(&[1, 2]), exponent: 2 };
        assert!(!verify_certificate(&p, &bad));
        let torus_cover = CosetTable::trivial(2);
        assert!(!verify_certificate(&p, &Certificate::Covering { table: torus_cover }));
    }

    #[test]
    fn serde_round_trip() {
        let p = Presentation::new(2, vec![w(&[1, 2, 1, 2])]).unwrap();
        let c = certify(&p, &CertifyOptions { skip_direct: true, ..CertifyOptions::default() });
        let json = serde_json::to_string(&c).unwrap();
        assert!(json.contains("\"kind\":\"OneRelatorTorsion\""));
        assert_eq!(serde_json::from_str::<Certificate>(&json).unwrap(), c);
    }
}
