//! Smith normal form over the integers.
//!
//! Euclidean reduction with a minimal-absolute-value pivot and rounded
//! quotients. The transforms are accumulated alongside the reduction so that
//! `U · M · V = S` holds exactly on return.

use serde::{Deserialize, Serialize};

use super::matrix::IntMatrix;
use super::AbGroupError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    /// The diagonal entries of `S`, including trailing zeros, up to `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<i64> {
        (0..self.s.nrows().min(self.s.ncols())).map(|i| self.s[(i, i)]).collect()
    }

    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        self.diagonal().iter().take_while(|&&d| d != 0).count()
    }
}

/// Computes `U, S, V` with `U · m · V = S`, `U` and `V` unimodular, `S`
/// diagonal with nonnegative entries each dividing the next.
///
/// ```
/// use pervchow::abgroup::{smith_normal_form, IntMatrix};
///
/// let m = IntMatrix::from_nested(vec![vec![2, 4], vec![6, 8]]).unwrap();
/// let snf = smith_normal_form(&m).unwrap();
/// assert_eq!(snf.diagonal(), vec![2, 4]);
/// assert_eq!(snf.u.mul(&m).unwrap().mul(&snf.v).unwrap(), snf.s);
/// ```
pub fn smith_normal_form(m: &IntMatrix) -> Result<SmithForm, AbGroupError> {
    let (rows, cols) = (m.nrows(), m.ncols());
    let mut s = Wide::from(m);
    let mut u = Wide::identity(rows);
    let mut v = Wide::identity(cols);

    for t in 0..rows.min(cols) {
        loop {
            let Some((pr, pc)) = min_pivot(&s, t) else {
                return finish(&u, &s, &v);
            };
            s.swap_rows(t, pr);
            u.swap_rows(t, pr);
            s.swap_cols(t, pc);
            v.swap_cols(t, pc);

            let pivot = s.at(t, t);
            let mut dirty = false;
            for i in t + 1..rows {
                let q = nearest_quotient(s.at(i, t), pivot);
                if q != 0 {
                    s.add_row_multiple(i, t, -q)?;
                    u.add_row_multiple(i, t, -q)?;
                }
                dirty |= s.at(i, t) != 0;
            }
            for j in t + 1..cols {
                let q = nearest_quotient(s.at(t, j), pivot);
                if q != 0 {
                    s.add_col_multiple(j, t, -q)?;
                    v.add_col_multiple(j, t, -q)?;
                }
                dirty |= s.at(t, j) != 0;
            }
            if dirty {
                continue;
            }

            // Row and column are clear; enforce divisibility of the remainder.
            let offender = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| s.at(i, j) % pivot != 0));
            match offender {
                Some(i) => {
                    s.add_row_multiple(t, i, 1)?;
                    u.add_row_multiple(t, i, 1)?;
                }
                None => break,
            }
        }
        if s.at(t, t) < 0 {
            s.add_row_multiple(t, t, -2)?;
            u.add_row_multiple(t, t, -2)?;
        }
    }
    finish(&u, &s, &v)
}

/// Working storage in `i128`: the transforms can grow well past the size
/// of the input before the reduction settles.
struct Wide {
    rows: usize,
    cols: usize,
    data: Vec<i128>,
}

impl Wide {
    fn from(m: &IntMatrix) -> Self {
        Wide { rows: m.nrows(), cols: m.ncols(), data: m.to_rows().into_iter().flatten().map(i128::from).collect() }
    }

    fn identity(n: usize) -> Self {
        Wide::from(&IntMatrix::identity(n))
    }

    fn at(&self, i: usize, j: usize) -> i128 {
        self.data[i * self.cols + j]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    fn add_row_multiple(&mut self, target: usize, source: usize, factor: i128) -> Result<(), AbGroupError> {
        for j in 0..self.cols {
            let x = self.at(source, j).checked_mul(factor).and_then(|x| x.checked_add(self.at(target, j)));
            self.data[target * self.cols + j] = x.ok_or(AbGroupError::Overflow)?;
        }
        Ok(())
    }

    fn add_col_multiple(&mut self, target: usize, source: usize, factor: i128) -> Result<(), AbGroupError> {
        for i in 0..self.rows {
            let x = self.at(i, source).checked_mul(factor).and_then(|x| x.checked_add(self.at(i, target)));
            self.data[i * self.cols + target] = x.ok_or(AbGroupError::Overflow)?;
        }
        Ok(())
    }

    fn narrow(&self) -> Result<IntMatrix, AbGroupError> {
        let data = self
            .data
            .chunks(self.cols.max(1))
            .map(|r| r.iter().map(|&x| i64::try_from(x).map_err(|_| AbGroupError::Overflow)).collect())
            .collect::<Result<Vec<Vec<i64>>, _>>()?;
        if self.cols == 0 {
            return Ok(IntMatrix::zeros(self.rows, 0));
        }
        IntMatrix::from_rows(data, self.cols)
    }
}

/// `a / b` rounded to the nearest integer, so the remainder is at most `|b| / 2`.
fn nearest_quotient(a: i128, b: i128) -> i128 {
    let q = a.div_euclid(b);
    let r = a.rem_euclid(b);
    if 2 * r > b.abs() {
        q + b.signum()
    } else {
        q
    }
}

fn finish(u: &Wide, s: &Wide, v: &Wide) -> Result<SmithForm, AbGroupError> {
    Ok(SmithForm { u: u.narrow()?, s: s.narrow()?, v: v.narrow()? })
}

fn min_pivot(s: &Wide, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, u128)> = None;
    for i in t..s.rows {
        for j in t..s.cols {
            let a = s.at(i, j).unsigned_abs();
            if a != 0 && best.map_or(true, |(_, _, b)| a < b) {
                best = Some((i, j, a));
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}
