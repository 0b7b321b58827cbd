//! Matrix files: a JSON object mapping names to `m × m` arrays of `[re, im]` pairs.

use std::collections::BTreeMap;

use crate::system::EquationSystem;
use crate::unitary::{from_pairs, to_pairs, Assignment, UnitaryMatrix};

pub type MatrixFile = BTreeMap<String, Vec<Vec<[f64; 2]>>>;

/// Parse a matrix file and order its entries by `names`. Every name must be
/// present, no others may be, and all matrices must share one dimension.
pub fn read_matrices(text: &str, names: &[String]) -> Result<Vec<UnitaryMatrix>, String> {
    let file: MatrixFile = serde_json::from_str(text).map_err(|e| format!("matrix file: {e}"))?;
    if let Some(extra) = file.keys().find(|k| !names.contains(k)) {
        return Err(format!("matrix file: `{extra}` is not a declared constant"));
    }
    let mut out = Vec::with_capacity(names.len());
    let mut dim = None;
    for name in names {
        let rows = file.get(name).ok_or_else(|| format!("matrix file: no value for `{name}`"))?;
        let m = from_pairs(rows).map_err(|e| format!("matrix file: `{name}`: {e}"))?;
        if m.nrows() == 0 {
            return Err(format!("matrix file: `{name}` is empty"));
        }
        if *dim.get_or_insert(m.nrows()) != m.nrows() {
            return Err(format!(
                "matrix file: `{name}` is {0}×{0} but earlier values are {1}×{1}",
                m.nrows(),
                dim.unwrap_or(0)
            ));
        }
        out.push(UnitaryMatrix::new(m).map_err(|e| format!("matrix file: `{name}`: {e}"))?);
    }
    Ok(out)
}

pub fn write_matrices<'a>(entries: impl IntoIterator<Item = (&'a str, &'a UnitaryMatrix)>) -> MatrixFile {
    entries.into_iter().map(|(k, v)| (k.to_string(), to_pairs(v.matrix()))).collect()
}

/// An assignment keyed by variable name.
pub fn assignment_file(s: &EquationSystem, a: &Assignment) -> MatrixFile {
    write_matrices(s.variables().iter().map(String::as_str).zip(a.matrices()))
}
