//! HLT coset enumeration with coincidence processing.

use super::{CosetError, CosetTable};
use crate::presentation::Presentation;
use crate::words::{Base, Word};

const UNDEF: usize = usize::MAX;

/// Column of a letter: `2i` for `x_i`, `2i + 1` for `x_i⁻¹`.
fn columns(w: &Word) -> Vec<usize> {
    w.letters()
        .iter()
        .map(|l| match l.base {
            Base::Var(i) => 2 * i + usize::from(l.inverse),
            Base::Const(_) => unreachable!("checked by caller"),
        })
        .collect()
}

struct Enumerator {
    cols: usize,
    table: Vec<Vec<usize>>,
    parent: Vec<usize>,
    max_cosets: usize,
}

impl Enumerator {
    fn new(cols: usize, max_cosets: usize) -> Self {
        Enumerator { cols, table: vec![vec![UNDEF; cols]], parent: vec![0], max_cosets }
    }

    fn live(&self, c: usize) -> bool {
        self.parent[c] == c
    }

    fn rep(&mut self, c: usize) -> usize {
        let mut root = c;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut k = c;
        while self.parent[k] != root {
            let next = self.parent[k];
            self.parent[k] = root;
            k = next;
        }
        root
    }

    fn define(&mut self, c: usize, x: usize) -> Result<(), CosetError> {
        let d = self.table.len();
        if d >= self.max_cosets {
            return Err(CosetError::CosetBudgetExceeded(self.max_cosets));
        }
        self.table.push(vec![UNDEF; self.cols]);
        self.parent.push(d);
        self.table[c][x] = d;
        self.table[d][x ^ 1] = c;
        Ok(())
    }

    fn scan_and_fill(&mut self, c: usize, w: &[usize]) -> Result<(), CosetError> {
        if w.is_empty() {
            return Ok(());
        }
        let (mut f, mut b) = (c, c);
        let mut i: isize = 0;
        let mut j: isize = w.len() as isize - 1;
        loop {
            while i <= j && self.table[f][w[i as usize]] != UNDEF {
                f = self.table[f][w[i as usize]];
                i += 1;
            }
            if i > j {
                if f != b {
                    self.coincidence(f, b);
                }
                return Ok(());
            }
            while j >= i && self.table[b][w[j as usize] ^ 1] != UNDEF {
                b = self.table[b][w[j as usize] ^ 1];
                j -= 1;
            }
            if j < i {
                self.coincidence(f, b);
                return Ok(());
            }
            if i == j {
                // deduction
                let x = w[i as usize];
                self.table[f][x] = b;
                self.table[b][x ^ 1] = f;
                return Ok(());
            }
            self.define(f, w[i as usize])?;
        }
    }

    fn merge(&mut self, k: usize, l: usize, queue: &mut Vec<usize>) {
        let (a, b) = (self.rep(k), self.rep(l));
        if a != b {
            let (keep, drop) = (a.min(b), a.max(b));
            self.parent[drop] = keep;
            queue.push(drop);
        }
    }

    fn coincidence(&mut self, a: usize, b: usize) {
        let mut queue = Vec::new();
        self.merge(a, b, &mut queue);
        let mut qi = 0;
        while qi < queue.len() {
            let g = queue[qi];
            qi += 1;
            for x in 0..self.cols {
                let d = self.table[g][x];
                if d == UNDEF {
                    continue;
                }
                self.table[d][x ^ 1] = UNDEF;
                let mu = self.rep(g);
                let nu = self.rep(d);
                if self.table[mu][x] != UNDEF {
                    let t = self.table[mu][x];
                    self.merge(nu, t, &mut queue);
                } else if self.table[nu][x ^ 1] != UNDEF {
                    let t = self.table[nu][x ^ 1];
                    self.merge(mu, t, &mut queue);
                } else {
                    self.table[mu][x] = nu;
                    self.table[nu][x ^ 1] = mu;
                }
            }
        }
    }
}

/// Enumerate the right cosets of `π = ⟨subgroup_generators⟩` in the group
/// presented by `p`. Deterministic: cosets are defined in HLT order and the
/// finished table is relabelled into standard form.
pub fn todd_coxeter(
    p: &Presentation,
    subgroup_generators: &[Word],
    max_cosets: usize,
) -> Result<CosetTable, CosetError> {
    let n = p.generators();
    for (s, w) in subgroup_generators.iter().enumerate() {
        if !w.is_variable_only() || w.max_var().is_some_and(|g| g >= n) {
            return Err(CosetError::BadWord(s));
        }
    }
    if max_cosets == 0 {
        return Err(CosetError::CosetBudgetExceeded(0));
    }
    let cols = 2 * n;
    let relators: Vec<Vec<usize>> = p.relators().iter().map(columns).collect();
    let subgroup: Vec<Vec<usize>> = subgroup_generators.iter().map(|w| columns(&w.reduced())).collect();

    let mut e = Enumerator::new(cols, max_cosets);
    for w in &subgroup {
        e.scan_and_fill(0, w)?;
    }
    let mut c = 0;
    while c < e.table.len() {
        for r in &relators {
            if !e.live(c) {
                break;
            }
            e.scan_and_fill(c, r)?;
        }
        if e.live(c) {
            for x in 0..cols {
                if e.table[c][x] == UNDEF {
                    e.define(c, x)?;
                }
            }
        }
        c += 1;
    }

    let live: Vec<usize> = (0..e.table.len()).filter(|&c| e.live(c)).collect();
    let mut renumber = vec![UNDEF; e.table.len()];
    for (k, &c) in live.iter().enumerate() {
        renumber[c] = k;
    }
    let mut action = vec![Vec::with_capacity(live.len()); n];
    for &c in &live {
        for (i, perm) in action.iter_mut().enumerate() {
            let target = e.table[c][2 * i];
            perm.push(if target == UNDEF { UNDEF } else { renumber[e.rep(target)] });
        }
    }

    let raw = CosetTable::from_permutations(live.len(), action, Vec::new())?;
    let standard = CosetTable::from_permutations(live.len(), raw.standardized_from(0), Vec::new())?;
    let table = standard.with_subgroup_generators(subgroup_generators.iter().map(Word::reduced).collect());
    table.validate(p)?;
    for (s, w) in table.subgroup_generators().iter().enumerate() {
        if table.trace(0, w) != 0 {
            return Err(CosetError::SubgroupGeneratorMoves(s));
        }
    }
    Ok(table)
}
