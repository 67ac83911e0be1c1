//! Null-form pattern checker for Seifert matrices.
//!
//! A `2g × 2g` integer matrix is in *null form* when, partitioned into
//! `2 × 2` blocks:
//!
//! * every diagonal block is `[[0, ε], [1-ε, 0]]` with `ε ∈ {0, 1}`,
//! * every block above the diagonal has zero first column,
//! * every block below the diagonal has zero first row,
//!
//! with all remaining entries unconstrained. Only the pattern is checked;
//! deciding whether a matrix can be *reduced* to this form is out of scope
//! (the reduction moves are not pinned down anywhere usable).
//!
//! [`validate_intersection`] separately reports whether
//! `det(V - Vᵀ) = ±1`, a necessary condition for `V` to be the Seifert
//! matrix of a genus-`g` surface basis. It never gates the pattern check:
//! null-form matrices with arbitrary unconstrained entries need not
//! satisfy it.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum SeifertError {
    OddSize { size: usize },
    NotSquare { rows: usize, cols: usize },
    Parse { line: usize, message: String },
}

impl fmt::Display for SeifertError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeifertError::OddSize { size } => {
                write!(f, "matrix size {size} must be even and >= 2")
            }
            SeifertError::NotSquare { rows, cols } => {
                write!(f, "matrix is {rows}x{cols}, not square")
            }
            SeifertError::Parse { line, message } => {
                write!(f, "matrix parse error at line {line}: {message}")
            }
        }
    }
}

impl core::error::Error for SeifertError {}

/// A square integer matrix of even size `2g`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SeifertMatrix {
    entries: Vec<Vec<i64>>,
}

impl SeifertMatrix {
    pub fn new(entries: Vec<Vec<i64>>) -> Result<Self, SeifertError> {
        let rows = entries.len();
        for row in &entries {
            if row.len() != rows {
                return Err(SeifertError::NotSquare {
                    rows,
                    cols: row.len(),
                });
            }
        }
        if rows < 2 || !rows.is_multiple_of(2) {
            return Err(SeifertError::OddSize { size: rows });
        }
        Ok(Self { entries })
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn genus(&self) -> usize {
        self.size() / 2
    }

    pub fn entries(&self) -> &[Vec<i64>] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> i64 {
        self.entries[row][col]
    }

    /// Parses one row per line, whitespace-separated integers.
    pub fn parse(text: &str) -> Result<Self, SeifertError> {
        let mut entries: Vec<Vec<i64>> = Vec::new();
        for (line_no, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let row: Result<Vec<i64>, _> = line.split_whitespace().map(|t| t.parse()).collect();
            let row = row.map_err(|_| SeifertError::Parse {
                line: line_no + 1,
                message: alloc::format!("bad integer in `{line}`"),
            })?;
            entries.push(row);
        }
        if entries.is_empty() {
            return Err(SeifertError::Parse {
                line: 0,
                message: String::from("empty matrix"),
            });
        }
        Self::new(entries)
    }
}

impl fmt::Display for SeifertMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            for (pos, v) in row.iter().enumerate() {
                if pos > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{v}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Outcome of the pattern check; `diagnostic` names the first violating
/// block when the check fails.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct NullFormReport {
    pub is_null_form: bool,
    pub diagnostic: Option<String>,
}

/// Checks the block pattern described in the module docs.
pub fn is_null_form(matrix: &SeifertMatrix) -> NullFormReport {
    let g = matrix.genus();
    for bi in 0..g {
        for bj in 0..g {
            let (r, c) = (2 * bi, 2 * bj);
            let block = [
                [matrix.get(r, c), matrix.get(r, c + 1)],
                [matrix.get(r + 1, c), matrix.get(r + 1, c + 1)],
            ];
            let fail = |why: String| NullFormReport {
                is_null_form: false,
                diagnostic: Some(alloc::format!(
                    "block ({},{}) (rows {}-{}, cols {}-{}): {why}",
                    bi + 1,
                    bj + 1,
                    r + 1,
                    r + 2,
                    c + 1,
                    c + 2
                )),
            };
            if bi == bj {
                let eps = block[0][1];
                if block[0][0] != 0 {
                    return fail(alloc::format!("entry ({},{}) must be 0", r + 1, c + 1));
                }
                if block[1][1] != 0 {
                    return fail(alloc::format!("entry ({},{}) must be 0", r + 2, c + 2));
                }
                if eps != 0 && eps != 1 {
                    return fail(alloc::format!("ε = {eps} must be 0 or 1"));
                }
                if block[1][0] != 1 - eps {
                    return fail(alloc::format!(
                        "entry ({},{}) must be 1-ε = {}",
                        r + 2,
                        c + 1,
                        1 - eps
                    ));
                }
            } else if bi < bj {
                // above the diagonal: zero first column
                if block[0][0] != 0 || block[1][0] != 0 {
                    return fail(String::from("first column must be zero"));
                }
            } else {
                // below the diagonal: zero first row
                if block[0][0] != 0 || block[0][1] != 0 {
                    return fail(String::from("first row must be zero"));
                }
            }
        }
    }
    NullFormReport {
        is_null_form: true,
        diagnostic: None,
    }
}

/// The all-zero instance: block-diagonal with `g` copies of
/// `[[0,0],[1,0]]` (every ε and every unconstrained entry equal to zero).
pub fn zero_null_form(g: usize) -> SeifertMatrix {
    assert!(g >= 1);
    let size = 2 * g;
    let mut entries = alloc::vec![alloc::vec![0i64; size]; size];
    for b in 0..g {
        entries[2 * b + 1][2 * b] = 1;
    }
    SeifertMatrix { entries }
}

/// Informational check that `det(V - Vᵀ) = ±1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntersectionReport {
    pub det: i128,
    pub unimodular: bool,
}

/// Fraction-free (Bareiss) integer determinant.
fn determinant(entries: &[Vec<i128>]) -> i128 {
    let n = entries.len();
    let mut m: Vec<Vec<i128>> = entries.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n {
        if m[k][k] == 0 {
            let Some(swap) = ((k + 1)..n).find(|&r| m[r][k] != 0) else {
                return 0;
            };
            m.swap(k, swap);
            sign = -sign;
        }
        for i in (k + 1)..n {
            for j in (k + 1)..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    sign * m[n - 1][n - 1]
}

/// Reports `det(V - Vᵀ)`; `±1` is necessary for a genuine Seifert matrix.
/// Never gates [`is_null_form`].
#[allow(clippy::needless_range_loop)]
pub fn validate_intersection(matrix: &SeifertMatrix) -> IntersectionReport {
    let n = matrix.size();
    let mut skew = alloc::vec![alloc::vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            skew[i][j] = (matrix.get(i, j) - matrix.get(j, i)) as i128;
        }
    }
    let det = determinant(&skew);
    IntersectionReport {
        det,
        unimodular: det == 1 || det == -1,
    }
}
