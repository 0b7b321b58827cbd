//! Cellular chain complex of a finite covering.
//!
//! Matrices act on row vectors: a 2-chain `c` has boundary `c · d2`, and
//! `d2 · d1 = 0`. Rows of `d2` are 2-cells `(j, y)` (relator `j` lifted at
//! coset `y`), columns are 1-cells `(i, y)`, both laid out as `j·N + y`.

use num_bigint::BigInt;

use super::{CosetError, CosetTable};
use crate::presentation::{IntegerMatrix, Presentation};

/// Lifted second boundary map: the `(j, i)` block is the image of the Fox
/// derivative `∂r_j/∂x_i` under the coset permutation representation.
pub fn covering_d2(p: &Presentation, t: &CosetTable) -> Result<IntegerMatrix, CosetError> {
    t.validate(p)?;
    let (n, k, big_n) = (p.generators(), p.relator_count(), t.index());
    let mut d2 = IntegerMatrix::zeros(k * big_n, n * big_n);
    for (j, r) in p.relators().iter().enumerate() {
        for i in 0..n {
            let fox = r.fox_derivative(i).expect("relators are variable-only");
            for (gamma, c) in fox.terms() {
                let c = BigInt::from(c);
                for y in 0..big_n {
                    let z = t.trace(y, gamma);
                    d2[(j * big_n + y, i * big_n + z)] += &c;
                }
            }
        }
    }
    Ok(d2)
}

/// Lifted first boundary map, `(n·N) × N`: the edge `(i, y)` runs from `y` to `y·x_i`.
pub fn covering_d1(p: &Presentation, t: &CosetTable) -> Result<IntegerMatrix, CosetError> {
    t.validate(p)?;
    let (n, big_n) = (p.generators(), t.index());
    let mut d1 = IntegerMatrix::zeros(n * big_n, big_n);
    for i in 0..n {
        for y in 0..big_n {
            let row = i * big_n + y;
            d1[(row, t.action(i)[y])] += BigInt::from(1);
            d1[(row, y)] -= BigInt::from(1);
        }
    }
    Ok(d1)
}

/// Whether the covering has trivial second homology: `d2` has full row rank.
pub fn h2_trivial_covering(p: &Presentation, t: &CosetTable) -> Result<bool, CosetError> {
    let k = p.relator_count();
    if k > p.generators() {
        // rank ≤ n·N < k·N
        t.validate(p)?;
        return Ok(false);
    }
    let d2 = covering_d2(p, t)?;
    Ok(d2.rank() == d2.rows())
}
