//! Finite coverings of the presentation complex.
//!
//! A covering of index `N` is encoded by a [`CosetTable`]: the right action of
//! the presented group on the right cosets `π\Γ`, one permutation per
//! generator, coset `0` being `π` itself.

mod chain;
mod lift;
mod low_index;
mod todd_coxeter;

pub use chain::{covering_d1, covering_d2, h2_trivial_covering};
pub use lift::{lift_system, LiftedEquation, LiftedLetter, LiftedSystem};
pub use low_index::{low_index_subgroups, LowIndexOptions};
pub use todd_coxeter::todd_coxeter;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::presentation::Presentation;
use crate::words::{Base, Letter, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CosetError {
    #[error("coset enumeration exceeded {0} cosets (index may be infinite)")]
    CosetBudgetExceeded(usize),
    #[error("low-index search exceeded its budget of {0} nodes")]
    NodeBudgetExceeded(usize),
    #[error("table acts with {table} generators, presentation has {presentation}")]
    GeneratorMismatch { table: usize, presentation: usize },
    #[error("action of generator {0} is not a permutation")]
    NotAPermutation(usize),
    #[error("action is not transitive")]
    NotTransitive,
    #[error("relator {0} does not act trivially")]
    RelatorActsNontrivially(usize),
    #[error("subgroup generator {0} does not fix coset 0")]
    SubgroupGeneratorMoves(usize),
    #[error("word {0} is not a word over the presentation's generators")]
    BadWord(usize),
    #[error("equation {0}: its augmentation does not act trivially on the cosets")]
    EquationMismatch(usize),
    #[error("system has {system} variables, table has {table} generators")]
    SystemMismatch { system: usize, table: usize },
    #[error("index must be at least 1")]
    ZeroIndex,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "TableRepr", into = "TableRepr")]
pub struct CosetTable {
    index: usize,
    /// `action[i][y] = y · x_i`
    action: Vec<Vec<usize>>,
    /// `inverse[i][y] = y · x_i⁻¹`
    inverse: Vec<Vec<usize>>,
    subgroup_generators: Vec<Word>,
}

#[derive(Serialize, Deserialize)]
struct TableRepr {
    index: usize,
    action: Vec<Vec<usize>>,
    subgroup_generators: Vec<Word>,
}

impl TryFrom<TableRepr> for CosetTable {
    type Error = CosetError;
    fn try_from(r: TableRepr) -> Result<Self, CosetError> {
        CosetTable::from_permutations(r.index, r.action, r.subgroup_generators)
    }
}

impl From<CosetTable> for TableRepr {
    fn from(t: CosetTable) -> Self {
        TableRepr { index: t.index, action: t.action, subgroup_generators: t.subgroup_generators }
    }
}

impl CosetTable {
    /// Build a table from explicit permutations, checking bijectivity and
    /// transitivity. Relator checks need a presentation; see [`CosetTable::validate`].
    pub fn from_permutations(
        index: usize,
        action: Vec<Vec<usize>>,
        subgroup_generators: Vec<Word>,
    ) -> Result<Self, CosetError> {
        if index == 0 {
            return Err(CosetError::ZeroIndex);
        }
        let mut inverse = Vec::with_capacity(action.len());
        for (i, perm) in action.iter().enumerate() {
            if perm.len() != index {
                return Err(CosetError::NotAPermutation(i));
            }
            let mut inv = vec![usize::MAX; index];
            for (y, &z) in perm.iter().enumerate() {
                if z >= index || inv[z] != usize::MAX {
                    return Err(CosetError::NotAPermutation(i));
                }
                inv[z] = y;
            }
            inverse.push(inv);
        }
        let table = CosetTable { index, action, inverse, subgroup_generators };
        if !table.is_transitive() {
            return Err(CosetError::NotTransitive);
        }
        for (s, w) in table.subgroup_generators.iter().enumerate() {
            if !table.accepts(w) {
                return Err(CosetError::BadWord(s));
            }
            if table.trace(0, w) != 0 {
                return Err(CosetError::SubgroupGeneratorMoves(s));
            }
        }
        Ok(table)
    }

    /// The one-coset table (π = Γ).
    pub fn trivial(generators: usize) -> Self {
        CosetTable {
            index: 1,
            action: vec![vec![0]; generators],
            inverse: vec![vec![0]; generators],
            subgroup_generators: Vec::new(),
        }
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn generators(&self) -> usize {
        self.action.len()
    }

    pub fn action(&self, generator: usize) -> &[usize] {
        &self.action[generator]
    }

    pub fn subgroup_generators(&self) -> &[Word] {
        &self.subgroup_generators
    }

    pub(crate) fn with_subgroup_generators(mut self, gens: Vec<Word>) -> Self {
        self.subgroup_generators = gens;
        self
    }

    fn accepts(&self, w: &Word) -> bool {
        w.is_variable_only() && w.max_var().is_none_or(|g| g < self.generators())
    }

    /// `y · letter`; panics on constants.
    pub fn act(&self, y: usize, letter: Letter) -> usize {
        match letter.base {
            Base::Var(i) if letter.inverse => self.inverse[i][y],
            Base::Var(i) => self.action[i][y],
            Base::Const(_) => panic!("constants do not act on cosets"),
        }
    }

    /// `y · w`, ignoring constants.
    pub fn trace(&self, y: usize, w: &Word) -> usize {
        w.letters()
            .iter()
            .filter(|l| l.is_var())
            .fold(y, |cur, &l| self.act(cur, l))
    }

    /// The permutation `y ↦ y · w`.
    pub fn permutation(&self, w: &Word) -> Vec<usize> {
        (0..self.index).map(|y| self.trace(y, w)).collect()
    }

    pub fn acts_trivially(&self, w: &Word) -> bool {
        (0..self.index).all(|y| self.trace(y, w) == y)
    }

    fn is_transitive(&self) -> bool {
        let mut seen = vec![false; self.index];
        seen[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(y) = queue.pop_front() {
            for perm in self.action.iter().chain(&self.inverse) {
                let z = perm[y];
                if !seen[z] {
                    seen[z] = true;
                    queue.push_back(z);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Check every invariant against a presentation.
    pub fn validate(&self, p: &Presentation) -> Result<(), CosetError> {
        if self.generators() != p.generators() {
            return Err(CosetError::GeneratorMismatch {
                table: self.generators(),
                presentation: p.generators(),
            });
        }
        let rebuilt = CosetTable::from_permutations(
            self.index,
            self.action.clone(),
            self.subgroup_generators.clone(),
        )?;
        debug_assert_eq!(&rebuilt, self);
        if let Some(j) = p.relators().iter().position(|r| !self.acts_trivially(r)) {
            return Err(CosetError::RelatorActsNontrivially(j));
        }
        Ok(())
    }

    /// Schreier generators of the stabiliser of coset 0, read off a
    /// breadth-first spanning tree. They generate π modulo the relators.
    pub fn schreier_generators(&self) -> Vec<Word> {
        let n = self.generators();
        let mut rep: Vec<Option<Word>> = vec![None; self.index];
        rep[0] = Some(Word::empty());
        let mut tree_edges = std::collections::HashSet::new();
        let mut queue = VecDeque::from([0]);
        while let Some(y) = queue.pop_front() {
            for i in 0..n {
                for letter in [Letter::var(i), Letter::var_inv(i)] {
                    let z = self.act(y, letter);
                    if rep[z].is_none() {
                        let path = rep[y].as_ref().unwrap().mul(&Word::reduce([letter]));
                        rep[z] = Some(path);
                        tree_edges.insert((y, i, letter.inverse));
                        queue.push_back(z);
                    }
                }
            }
        }
        let mut gens = Vec::new();
        for y in 0..self.index {
            for i in 0..n {
                let z = self.action[i][y];
                // the forward edge y -x_i-> z is in the tree either as (y,i,+) or (z,i,-)
                if tree_edges.contains(&(y, i, false)) || tree_edges.contains(&(z, i, true)) {
                    continue;
                }
                let s = rep[y]
                    .as_ref()
                    .unwrap()
                    .mul(&Word::reduce([Letter::var(i)]))
                    .mul(&rep[z].as_ref().unwrap().inverse());
                if !s.is_empty() {
                    gens.push(s);
                }
            }
        }
        gens
    }

    /// Relabel cosets so that they appear in first-visit order of a row-major
    /// scan (columns x_1, x_1⁻¹, x_2, ...) started at `root`.
    pub(crate) fn standardized_from(&self, root: usize) -> Vec<Vec<usize>> {
        let n = self.generators();
        let mut label = vec![usize::MAX; self.index];
        let mut order = vec![root];
        label[root] = 0;
        let mut k = 0;
        while k < order.len() {
            let y = order[k];
            for i in 0..n {
                for z in [self.action[i][y], self.inverse[i][y]] {
                    if label[z] == usize::MAX {
                        label[z] = order.len();
                        order.push(z);
                    }
                }
            }
            k += 1;
        }
        let mut action = vec![vec![0; self.index]; n];
        for (i, perm) in self.action.iter().enumerate() {
            for y in 0..self.index {
                action[i][label[y]] = label[perm[y]];
            }
        }
        action
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_permutations_rejects_bad_input() {
        assert_eq!(
            CosetTable::from_permutations(2, vec![vec![0, 0]], vec![]),
            Err(CosetError::NotAPermutation(0))
        );
        assert_eq!(
            CosetTable::from_permutations(2, vec![vec![0, 1]], vec![]),
            Err(CosetError::NotTransitive)
        );
        assert_eq!(
            CosetTable::from_permutations(2, vec![vec![1, 0]], vec![Word::from_signed(&[1])]),
            Err(CosetError::SubgroupGeneratorMoves(0))
        );
        assert_eq!(CosetTable::from_permutations(0, vec![], vec![]), Err(CosetError::ZeroIndex));
    }

    #[test]
    fn serde_round_trip_revalidates() {
        let t = CosetTable::from_permutations(3, vec![vec![1, 2, 0]], vec![]).unwrap();
        let json = serde_json::to_string(&t).unwrap();
        let back: CosetTable = serde_json::from_str(&json).unwrap();
        assert_eq!(back, t);
        let broken = json.replace("[1,2,0]", "[1,1,0]");
        assert!(serde_json::from_str::<CosetTable>(&broken).is_err());
    }

    #[test]
    fn schreier_generators_fix_the_base_coset() {
        let t = CosetTable::from_permutations(
            3,
            vec![vec![1, 2, 0], vec![0, 2, 1]],
            vec![],
        )
        .unwrap();
        let gens = t.schreier_generators();
        // index 3 in F_2: rank 3·(2-1)+1 = 4
        assert_eq!(gens.len(), 4);
        assert!(gens.iter().all(|g| t.trace(0, g) == 0));
    }
}
