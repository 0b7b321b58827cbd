//! Group presentations `⟨x_1..x_n | r_1..r_k⟩`, their abelianised second
//! boundary map, and the presentation moves that leave solvability unchanged.

mod matrix;
mod smith;
mod transform;

pub use matrix::IntegerMatrix;
pub use smith::{smith_normal_form, SmithDecomposition};
pub use transform::TransformOp;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::words::Word;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PresentationError {
    #[error("relator {index} mentions generator {generator} but only {n} generators exist")]
    GeneratorOutOfRange { index: usize, generator: usize, n: usize },
    #[error("relator {0} contains constants")]
    ConstantInRelator(usize),
    #[error("relator {0} is trivial; use Presentation::with_trivial to allow it")]
    TrivialRelator(usize),
    #[error("relator index {index} out of range ({k} relators)")]
    RelatorOutOfRange { index: usize, k: usize },
    #[error("generator index {index} out of range ({n} generators)")]
    GeneratorIndexOutOfRange { index: usize, n: usize },
    #[error("{0}")]
    BadOperation(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    generators: usize,
    relators: Vec<Word>,
}

impl Presentation {
    /// Relators are freely reduced; an empty one is rejected.
    pub fn new(generators: usize, relators: Vec<Word>) -> Result<Self, PresentationError> {
        let p = Self::with_trivial(generators, relators)?;
        if let Some(i) = p.relators.iter().position(Word::is_empty) {
            return Err(PresentationError::TrivialRelator(i));
        }
        Ok(p)
    }

    /// Like [`Presentation::new`], but relators that reduce to the identity are kept.
    pub fn with_trivial(generators: usize, relators: Vec<Word>) -> Result<Self, PresentationError> {
        let mut reduced = Vec::with_capacity(relators.len());
        for (index, r) in relators.into_iter().enumerate() {
            if !r.is_variable_only() {
                return Err(PresentationError::ConstantInRelator(index));
            }
            if let Some(g) = r.max_var().filter(|&g| g >= generators) {
                return Err(PresentationError::GeneratorOutOfRange { index, generator: g, n: generators });
            }
            reduced.push(r.reduced());
        }
        Ok(Presentation { generators, relators: reduced })
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn relator_count(&self) -> usize {
        self.relators.len()
    }

    pub fn has_trivial_relator(&self) -> bool {
        self.relators.iter().any(Word::is_empty)
    }

    /// k×n matrix of exponent sums: entry (j, i) is the exponent of x_i in r_j.
    pub fn exponent_matrix(&self) -> IntegerMatrix {
        let rows: Vec<Vec<i64>> = self
            .relators
            .iter()
            .map(|r| (0..self.generators).map(|i| r.exponent_sum(i)).collect())
            .collect();
        if rows.is_empty() {
            IntegerMatrix::zeros(0, self.generators)
        } else {
            IntegerMatrix::from_rows(&rows)
        }
    }

    pub fn smith(&self) -> SmithDecomposition {
        smith_normal_form(&self.exponent_matrix())
    }

    /// Whether the presentation complex has trivial second homology, i.e. the
    /// exponent matrix has rank k.
    pub fn is_d2_injective(&self) -> bool {
        let k = self.relators.len();
        if k > self.generators {
            return false;
        }
        self.smith().rank() == k
    }

    pub fn transform(&self, op: &TransformOp) -> Result<Presentation, PresentationError> {
        transform::apply(self, op)
    }
}
