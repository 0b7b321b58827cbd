//! Systems of equations with variables and constants.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::presentation::Presentation;
use crate::unitary::UnitaryMatrix;
use crate::words::{Alphabet, Base, Word, WordError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SystemError {
    #[error("invalid name `{0}`")]
    BadName(String),
    #[error("name `{0}` declared twice")]
    DuplicateName(String),
    #[error("equation {equation}: {source}")]
    Word { equation: usize, source: WordError },
    #[error("expected {expected} constant values, got {got}")]
    ValueCount { expected: usize, got: usize },
    #[error("constant values have mixed dimensions ({0} and {1})")]
    MixedDimensions(usize, usize),
    #[error("constants have no values")]
    Symbolic,
}

pub fn is_valid_name(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Equations `w_j = 1` over `F_n * G`. Constants optionally carry unitary values;
/// either all of them do or none.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquationSystem {
    variables: Vec<String>,
    constants: Vec<String>,
    values: Option<Vec<UnitaryMatrix>>,
    equations: Vec<Word>,
}

impl EquationSystem {
    pub fn new(
        variables: Vec<String>,
        constants: Vec<String>,
        equations: Vec<Word>,
    ) -> Result<Self, SystemError> {
        let mut seen = std::collections::HashSet::new();
        for name in variables.iter().chain(&constants) {
            if !is_valid_name(name) {
                return Err(SystemError::BadName(name.clone()));
            }
            if !seen.insert(name.as_str()) {
                return Err(SystemError::DuplicateName(name.clone()));
            }
        }
        let alphabet = Alphabet::new(variables.len(), constants.len());
        for (equation, w) in equations.iter().enumerate() {
            for &l in w.letters() {
                alphabet.check(l).map_err(|source| SystemError::Word { equation, source })?;
            }
        }
        Ok(EquationSystem { variables, constants, values: None, equations })
    }

    /// Attach unitary values for every constant, in declaration order.
    pub fn with_values(mut self, values: Vec<UnitaryMatrix>) -> Result<Self, SystemError> {
        if values.len() != self.constants.len() {
            return Err(SystemError::ValueCount { expected: self.constants.len(), got: values.len() });
        }
        if let Some(first) = values.first() {
            if let Some(bad) = values.iter().find(|v| v.dim() != first.dim()) {
                return Err(SystemError::MixedDimensions(first.dim(), bad.dim()));
            }
        }
        self.values = Some(values);
        Ok(self)
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn equations(&self) -> &[Word] {
        &self.equations
    }

    pub fn values(&self) -> Option<&[UnitaryMatrix]> {
        self.values.as_deref()
    }

    pub fn n_vars(&self) -> usize {
        self.variables.len()
    }

    /// Dimension `m` of the constant values, if any are present.
    pub fn dimension(&self) -> Option<usize> {
        self.values.as_ref().and_then(|v| v.first()).map(UnitaryMatrix::dim)
    }

    /// Whether every constant has a value (vacuously true with no constants).
    pub fn is_valued(&self) -> bool {
        self.constants.is_empty() || self.values.is_some()
    }

    /// The presentation `⟨x | ε(w_1), …, ε(w_k)⟩`.
    pub fn augmented_presentation(&self) -> Presentation {
        let relators = self.equations.iter().map(Word::augment).collect();
        Presentation::with_trivial(self.variables.len(), relators)
            .expect("equations were validated against the alphabet")
    }

    /// Freely reduce every equation.
    pub fn reduced(&self) -> EquationSystem {
        EquationSystem { equations: self.equations.iter().map(Word::reduced).collect(), ..self.clone() }
    }

    pub fn name_of(&self, base: Base) -> String {
        match base {
            Base::Var(i) => self.variables[i].clone(),
            Base::Const(c) => self.constants[c].clone(),
        }
    }

    /// Render with declared names; the empty word is `1`.
    pub fn render(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.display_with(|b| self.name_of(b)).to_string()
    }
}
