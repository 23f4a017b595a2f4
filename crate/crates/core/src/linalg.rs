//! Dense matrices over an [`ExactField`] with row reduction, rank and kernel.

use std::fmt;

use num_traits::Zero;

use crate::field::{ExactField, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(field: &ExactField, n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds from rows; all rows must have the same length.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_ints(field: &ExactField, rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| field.from_int(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul(&self, field: &ExactField, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = field.add(out.get(i, j), &field.mul(a, b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn apply(&self, field: &ExactField, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Scalar::zero(), |acc, (a, b)| field.add(&acc, &field.mul(a, b)))
            })
            .collect()
    }

    pub fn add(&self, field: &ExactField, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| field.add(a, b))
                .collect(),
        }
    }

    pub fn sub(&self, field: &ExactField, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| field.sub(a, b))
                .collect(),
        }
    }

    /// Stacks `blocks` horizontally; all must share the row count `rows`.
    pub fn hconcat(rows: usize, blocks: &[&Matrix]) -> Matrix {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows);
            for r in 0..rows {
                for c in 0..b.cols {
                    out.set(r, off + c, b.get(r, c).clone());
                }
            }
            off += b.cols;
        }
        out
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&mut self, field: &ExactField) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            if p != row {
                for c in 0..self.cols {
                    self.data.swap(p * self.cols + c, row * self.cols + c);
                }
            }
            let inv = field.inv(self.get(row, col)).expect("nonzero pivot");
            for c in col..self.cols {
                let v = field.mul(self.get(row, c), &inv);
                self.set(row, c, v);
            }
            for r in 0..self.rows {
                if r == row || self.get(r, col).is_zero() {
                    continue;
                }
                let factor = self.get(r, col).clone();
                for c in col..self.cols {
                    let v = field.sub(self.get(r, c), &field.mul(&factor, self.get(row, c)));
                    self.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self, field: &ExactField) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        self.clone().rref(field).len()
    }

    /// Basis of `{x : self * x = 0}`, one vector per free column.
    pub fn kernel(&self, field: &ExactField) -> Vec<Vec<Scalar>> {
        let mut m = self.clone();
        let pivots = m.rref(field);
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![Scalar::zero(); self.cols];
            v[free] = field.one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = field.neg(m.get(r, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Whether the matrix is square and invertible.
    pub fn is_invertible(&self, field: &ExactField) -> bool {
        self.rows == self.cols && self.rank(field) == self.rows
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", row.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_kernel_over_rationals() {
        let q = ExactField::Rationals;
        let m = Matrix::from_ints(&q, &[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(&q), 2);
        let ker = m.kernel(&q);
        assert_eq!(ker.len(), 1);
        assert!(m.apply(&q, &ker[0]).iter().all(Zero::is_zero));
    }

    #[test]
    fn rank_depends_on_characteristic() {
        let m_q = Matrix::from_ints(&ExactField::Rationals, &[&[1, 1], &[1, -1]]);
        assert_eq!(m_q.rank(&ExactField::Rationals), 2);
        let f2 = ExactField::prime(2).unwrap();
        let m_2 = Matrix::from_ints(&f2, &[&[1, 1], &[1, -1]]);
        assert_eq!(m_2.rank(&f2), 1);
    }

    #[test]
    fn empty_shapes() {
        let q = ExactField::Rationals;
        assert_eq!(Matrix::zeros(0, 3).rank(&q), 0);
        assert_eq!(Matrix::zeros(0, 3).kernel(&q).len(), 3);
        assert_eq!(Matrix::zeros(2, 0).kernel(&q).len(), 0);
    }
}
