//! Low-index subgroups by backtracking over partial coset tables.
//!
//! Tables are grown in standard form: the first undefined entry in row-major
//! order is filled either with an existing coset or with the next new one, and
//! relator scans propagate forced entries. A complete table is kept only if no
//! other base point gives a lexicographically smaller standard form, so each
//! conjugacy class of subgroups (each covering up to isomorphism) appears once.

use super::{CosetError, CosetTable};
use crate::presentation::Presentation;
use crate::words::Base;

const UNDEF: usize = usize::MAX;

#[derive(Clone, Copy, Debug)]
pub struct LowIndexOptions {
    pub max_index: usize,
    /// Maximum number of search nodes before giving up.
    pub node_budget: usize,
}

impl LowIndexOptions {
    pub fn new(max_index: usize) -> Self {
        LowIndexOptions { max_index, node_budget: 2_000_000 }
    }
}

#[derive(Clone)]
struct Partial {
    cosets: usize,
    table: Vec<Vec<usize>>,
}

struct Search<'a> {
    cols: usize,
    relators: &'a [Vec<usize>],
    max_index: usize,
    nodes: usize,
    budget: usize,
    found: Vec<Vec<Vec<usize>>>,
}

impl Search<'_> {
    fn run(&mut self, mut state: Partial) -> Result<(), CosetError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(CosetError::NodeBudgetExceeded(self.budget));
        }
        if !self.propagate(&mut state) {
            return Ok(());
        }
        let hole = (0..state.cosets)
            .flat_map(|c| (0..self.cols).map(move |x| (c, x)))
            .find(|&(c, x)| state.table[c][x] == UNDEF);
        let Some((c, x)) = hole else {
            self.accept(&state);
            return Ok(());
        };
        for d in 0..state.cosets {
            if state.table[d][x ^ 1] == UNDEF {
                let mut next = state.clone();
                next.table[c][x] = d;
                next.table[d][x ^ 1] = c;
                self.run(next)?;
            }
        }
        if state.cosets < self.max_index {
            let d = state.cosets;
            let mut next = state;
            next.cosets += 1;
            next.table[c][x] = d;
            next.table[d][x ^ 1] = c;
            self.run(next)?;
        }
        Ok(())
    }

    /// Scan every relator at every coset, filling forced entries. Returns
    /// false on a contradiction.
    fn propagate(&self, state: &mut Partial) -> bool {
        loop {
            let mut changed = false;
            for c in 0..state.cosets {
                for r in self.relators {
                    match scan(&mut state.table, c, r) {
                        Scan::Conflict => return false,
                        Scan::Deduced => changed = true,
                        Scan::Open => {}
                    }
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn accept(&mut self, state: &Partial) {
        let n = self.cols / 2;
        let action: Vec<Vec<usize>> = (0..n)
            .map(|i| (0..state.cosets).map(|c| state.table[c][2 * i]).collect())
            .collect();
        let table = CosetTable::from_permutations(state.cosets, action.clone(), Vec::new())
            .expect("complete consistent table");
        let own = flatten(&action, state.cosets);
        for root in 1..state.cosets {
            if flatten(&table.standardized_from(root), state.cosets) < own {
                return;
            }
        }
        self.found.push(action);
    }
}

// Row-major reading (coset by coset) so comparison matches the standard-form order.
fn flatten(action: &[Vec<usize>], cosets: usize) -> Vec<usize> {
    (0..cosets).flat_map(|c| action.iter().map(move |perm| perm[c])).collect()
}

enum Scan {
    Open,
    Deduced,
    Conflict,
}

fn scan(table: &mut [Vec<usize>], c: usize, w: &[usize]) -> Scan {
    if w.is_empty() {
        return Scan::Open;
    }
    let mut f = c;
    let mut i = 0usize;
    while i < w.len() && table[f][w[i]] != UNDEF {
        f = table[f][w[i]];
        i += 1;
    }
    if i == w.len() {
        return if f == c { Scan::Open } else { Scan::Conflict };
    }
    let mut b = c;
    let mut j = w.len();
    while j > i && table[b][w[j - 1] ^ 1] != UNDEF {
        b = table[b][w[j - 1] ^ 1];
        j -= 1;
    }
    if j == i {
        return if f == b { Scan::Open } else { Scan::Conflict };
    }
    if j == i + 1 {
        let x = w[i];
        // table[f][x] is undefined; the inverse slot at b must be free too
        if table[b][x ^ 1] != UNDEF {
            return Scan::Conflict;
        }
        table[f][x] = b;
        table[b][x ^ 1] = f;
        return Scan::Deduced;
    }
    Scan::Open
}

/// All transitive actions of the presented group on at most `max_index`
/// points, one per conjugacy class of subgroups, sorted by index and then by
/// standard form. The index-1 table is always first. Each table carries
/// Schreier generators of its base-point stabiliser.
pub fn low_index_subgroups(p: &Presentation, opts: LowIndexOptions) -> Result<Vec<CosetTable>, CosetError> {
    if opts.max_index == 0 {
        return Err(CosetError::ZeroIndex);
    }
    let n = p.generators();
    let cols = 2 * n;
    let relators: Vec<Vec<usize>> = p
        .relators()
        .iter()
        .map(|r| {
            r.letters()
                .iter()
                .map(|l| match l.base {
                    Base::Var(i) => 2 * i + usize::from(l.inverse),
                    Base::Const(_) => unreachable!("presentations are variable-only"),
                })
                .collect()
        })
        .collect();
    let mut search = Search {
        cols,
        relators: &relators,
        max_index: opts.max_index,
        nodes: 0,
        budget: opts.node_budget,
        found: Vec::new(),
    };
    let root = Partial { cosets: 1, table: vec![vec![UNDEF; cols]; opts.max_index] };
    search.run(root)?;

    let mut found = search.found;
    found.sort_by(|a, b| {
        let (na, nb) = (a.first().map_or(1, Vec::len), b.first().map_or(1, Vec::len));
        na.cmp(&nb).then_with(|| flatten(a, na).cmp(&flatten(b, nb)))
    });
    let tables = found
        .into_iter()
        .map(|action| {
            let index = action.first().map_or(1, Vec::len);
            let t = CosetTable::from_permutations(index, action, Vec::new())?;
            let gens = t.schreier_generators();
            let t = t.with_subgroup_generators(gens);
            t.validate(p)?;
            Ok(t)
        })
        .collect::<Result<Vec<_>, CosetError>>()?;
    Ok(tables)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coverings::todd_coxeter;
    use crate::words::Word;

    fn w(s: &[i64]) -> Word {
        Word::from_signed(s)
    }

    fn indices(p: &Presentation, max: usize) -> Vec<usize> {
        low_index_subgroups(p, LowIndexOptions::new(max))
            .unwrap()
            .iter()
            .map(CosetTable::index)
            .collect()
    }

    #[test]
    fn cyclic_groups() {
        let c3 = Presentation::new(1, vec![w(&[1, 1, 1])]).unwrap();
        assert_eq!(indices(&c3, 3), vec![1, 3]);
        let c4 = Presentation::new(1, vec![w(&[1, 1, 1, 1])]).unwrap();
        assert_eq!(indices(&c4, 4), vec![1, 2, 4]);
    }

    #[test]
    fn index_one_only() {
        let p = Presentation::new(2, vec![w(&[1, 2, -1, -2])]).unwrap();
        let tables = low_index_subgroups(&p, LowIndexOptions::new(1)).unwrap();
        assert_eq!(tables.len(), 1);
        assert_eq!(tables[0].index(), 1);
    }

    #[test]
    fn s3_has_four_conjugacy_classes() {
        // subgroups of S3 up to conjugacy: S3, A3, ⟨(12)⟩, 1 with indices 1, 2, 3, 6
        let p = Presentation::new(2, vec![w(&[1, 1]), w(&[2, 2, 2]), w(&[1, 2, 1, 2])]).unwrap();
        assert_eq!(indices(&p, 6), vec![1, 2, 3, 6]);
    }

    #[test]
    fn free_group_rank_two_counts() {
        // conjugacy classes of subgroups of F_2 of index 1, 2, 3: 1, 3, 7
        let p = Presentation::new(2, vec![]).unwrap();
        let idx = indices(&p, 3);
        let count = |k| idx.iter().filter(|&&i| i == k).count();
        assert_eq!((count(1), count(2), count(3)), (1, 3, 7));
    }

    #[test]
    fn z_squared_subgroups_of_index_two() {
        // Z² has three subgroups of index 2, all normal
        let p = Presentation::new(2, vec![w(&[1, 2, -1, -2])]).unwrap();
        let idx = indices(&p, 2);
        assert_eq!(idx, vec![1, 2, 2, 2]);
    }

    #[test]
    fn schreier_generators_reproduce_the_table() {
        let p = Presentation::new(2, vec![w(&[1, 1]), w(&[2, 2, 2]), w(&[1, 2, 1, 2])]).unwrap();
        for t in low_index_subgroups(&p, LowIndexOptions::new(6)).unwrap() {
            let again = todd_coxeter(&p, t.subgroup_generators(), 200).unwrap();
            assert_eq!(again.index(), t.index());
        }
    }

    #[test]
    fn budget_is_enforced() {
        let p = Presentation::new(3, vec![]).unwrap();
        let opts = LowIndexOptions { max_index: 5, node_budget: 10 };
        assert_eq!(low_index_subgroups(&p, opts), Err(CosetError::NodeBudgetExceeded(10)));
    }
}
