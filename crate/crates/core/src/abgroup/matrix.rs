use std::fmt;

use serde::{Deserialize, Serialize};

use super::AbGroupError;

/// Dense row-major integer matrix with overflow-checked arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

pub(crate) fn checked(v: Option<i64>) -> Result<i64, AbGroupError> {
    v.ok_or(AbGroupError::Overflow)
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    /// Builds a matrix from rows. An empty row list gives a `0 × cols` matrix.
    pub fn from_rows(rows: Vec<Vec<i64>>, cols: usize) -> Result<Self, AbGroupError> {
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(AbGroupError::Ragged { row: i, len: row.len(), expected: cols });
            }
            data.extend(row);
        }
        Ok(IntMatrix { rows: nrows, cols, data })
    }

    /// Like [`from_rows`](Self::from_rows) but takes the column count from the
    /// first row.
    pub fn from_nested(rows: Vec<Vec<i64>>) -> Result<Self, AbGroupError> {
        let cols = rows.first().map_or(0, Vec::len);
        Self::from_rows(rows, cols)
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
    }

    pub fn column(entries: &[i64]) -> Self {
        IntMatrix { rows: entries.len(), cols: 1, data: entries.to_vec() }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix, AbGroupError> {
        if self.cols != rhs.rows {
            return Err(AbGroupError::Shape {
                op: "mul",
                left: (self.rows, self.cols),
                right: (rhs.rows, rhs.cols),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = 0i64;
                for k in 0..self.cols {
                    acc = checked(acc.checked_add(checked(self[(i, k)].checked_mul(rhs[(k, j)]))?))?;
                }
                out[(i, j)] = acc;
            }
        }
        Ok(out)
    }

    /// `self · v` for a column vector given as a slice.
    pub fn apply(&self, v: &[i64]) -> Result<Vec<i64>, AbGroupError> {
        Ok(self.mul(&IntMatrix::column(v))?.data)
    }

    /// Stacks `self` on top of `other`.
    pub fn vstack(&self, other: &IntMatrix) -> Result<IntMatrix, AbGroupError> {
        if self.cols != other.cols {
            return Err(AbGroupError::Shape {
                op: "vstack",
                left: (self.rows, self.cols),
                right: (other.rows, other.cols),
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(IntMatrix { rows: self.rows + other.rows, cols: self.cols, data })
    }

    /// Places `other` to the right of `self`.
    pub fn hstack(&self, other: &IntMatrix) -> Result<IntMatrix, AbGroupError> {
        self.transpose().vstack(&other.transpose()).map(|m| m.transpose())
    }

    pub fn neg(&self) -> Result<IntMatrix, AbGroupError> {
        let data = self.data.iter().map(|v| checked(v.checked_neg())).collect::<Result<_, _>>()?;
        Ok(IntMatrix { rows: self.rows, cols: self.cols, data })
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<i64, AbGroupError> {
        if self.rows != self.cols {
            return Err(AbGroupError::Shape { op: "det", left: (self.rows, self.cols), right: (self.rows, self.cols) });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(1);
        }
        let mut a: Vec<Vec<i128>> = self.to_rows().into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&i| a[i][k] != 0) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = a[i][j]
                        .checked_mul(a[k][k])
                        .and_then(|x| x.checked_sub(a[i][k].checked_mul(a[k][j])?))
                        .ok_or(AbGroupError::Overflow)?;
                    a[i][j] = num / prev;
                }
            }
            prev = a[k][k];
        }
        i64::try_from(sign * a[n - 1][n - 1]).map_err(|_| AbGroupError::Overflow)
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = i64;
    fn index(&self, (i, j): (usize, usize)) -> &i64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut i64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for (k, v) in self.row(i).iter().enumerate() {
                if k > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

impl Serialize for IntMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for IntMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<i64>>::deserialize(deserializer)?;
        IntMatrix::from_nested(rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_and_stacking() {
        let a = IntMatrix::from_nested(vec![vec![1, 2], vec![3, 4]]).unwrap();
        let b = IntMatrix::from_nested(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(a.mul(&b).unwrap().to_rows(), vec![vec![2, 1], vec![4, 3]]);
        assert_eq!(a.vstack(&b).unwrap().nrows(), 4);
        assert_eq!(a.hstack(&b).unwrap().row(1), &[3, 4, 1, 0]);
        assert!(a.mul(&IntMatrix::zeros(3, 1)).is_err());
    }

    #[test]
    fn determinants() {
        let a = IntMatrix::from_nested(vec![vec![2, 4], vec![6, 8]]).unwrap();
        assert_eq!(a.det().unwrap(), -8);
        let p = IntMatrix::from_nested(vec![vec![0, 1, 0], vec![0, 0, 1], vec![1, 0, 0]]).unwrap();
        assert_eq!(p.det().unwrap(), 1);
        let s = IntMatrix::from_nested(vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 1, 7]]).unwrap();
        assert_eq!(s.det().unwrap(), 0);
        assert_eq!(IntMatrix::identity(0).det().unwrap(), 1);
    }

    #[test]
    fn overflow_is_reported() {
        let a = IntMatrix::diagonal(&[i64::MAX]);
        let b = IntMatrix::diagonal(&[2]);
        assert_eq!(a.mul(&b), Err(AbGroupError::Overflow));
    }

    #[test]
    fn ragged_rows_rejected() {
        assert!(IntMatrix::from_nested(vec![vec![1, 2], vec![3]]).is_err());
        assert_eq!(IntMatrix::from_rows(vec![], 3).unwrap().ncols(), 3);
    }
}
