use serde::{Deserialize, Serialize};

use super::field::Field;
use crate::error::{Error, Result};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Matrix<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Matrix { rows, cols, data: vec![value; rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidArgument("ragged matrix rows".into()));
        }
        let n = rows.len();
        Ok(Matrix { rows: n, cols, data: rows.into_iter().flatten().collect() })
    }

    /// `rows x cols` matrix with the given row-major data.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::InvalidArgument(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.cols + j] = value;
    }

    #[inline]
    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut T {
        &mut self.data[i * self.cols + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    #[inline]
    pub fn row_mut(&mut self, i: usize) -> &mut [T] {
        &mut self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Mutable row `i` and shared row `j`, `i != j`.
    pub fn row_pair(&mut self, i: usize, j: usize) -> (&mut [T], &[T]) {
        assert_ne!(i, j);
        let c = self.cols;
        if i < j {
            let (lo, hi) = self.data.split_at_mut(j * c);
            (&mut lo[i * c..(i + 1) * c], &hi[..c])
        } else {
            let (lo, hi) = self.data.split_at_mut(i * c);
            (&mut hi[..c], &lo[j * c..(j + 1) * c])
        }
    }

    pub fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(i * self.cols + c, j * self.cols + c);
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<T>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn map<U, G: FnMut(&T) -> U>(&self, f: G) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    /// Rows `r0..r1`.
    pub fn row_block(&self, r0: usize, r1: usize) -> Self {
        Matrix { rows: r1 - r0, cols: self.cols, data: self.data[r0 * self.cols..r1 * self.cols].to_vec() }
    }

    /// Columns `c0..c1`.
    pub fn col_block(&self, c0: usize, c1: usize) -> Self {
        let mut data = Vec::with_capacity(self.rows * (c1 - c0));
        for i in 0..self.rows {
            data.extend_from_slice(&self.row(i)[c0..c1]);
        }
        Matrix { rows: self.rows, cols: c1 - c0, data }
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }
}

impl<T: Clone> Matrix<T> {
    pub fn zeros<F: Field<Elem = T>>(f: &F, rows: usize, cols: usize) -> Self {
        Matrix::filled(rows, cols, f.zero())
    }

    pub fn identity<F: Field<Elem = T>>(f: &F, n: usize) -> Self {
        let mut m = Matrix::zeros(f, n, n);
        for i in 0..n {
            m.set(i, i, f.one());
        }
        m
    }

    pub fn is_zero_in<F: Field<Elem = T>>(&self, f: &F) -> bool {
        self.data.iter().all(|x| f.is_zero(x))
    }

    pub fn mul_in<F: Field<Elem = T>>(&self, f: &F, other: &Matrix<T>) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::InvalidArgument(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            let orow = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for (k, a) in self.row(i).iter().enumerate() {
                if f.is_zero(a) {
                    continue;
                }
                for (o, b) in orow.iter_mut().zip(other.row(k)) {
                    f.add_mul_assign(o, a, b);
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn vec_mul_in<F: Field<Elem = T>>(&self, f: &F, v: &[T]) -> Vec<T> {
        let mut out = vec![f.zero(); self.cols];
        for (i, a) in v.iter().enumerate() {
            if f.is_zero(a) {
                continue;
            }
            for (o, b) in out.iter_mut().zip(self.row(i)) {
                f.add_mul_assign(o, a, b);
            }
        }
        out
    }

    pub fn trace_in<F: Field<Elem = T>>(&self, f: &F) -> T {
        (0..self.rows.min(self.cols)).fold(f.zero(), |acc, i| f.add(&acc, self.get(i, i)))
    }
}

/// Sparse matrix stored as sorted `(column, value)` lists per row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SparseMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<Vec<(usize, T)>>,
}

impl<T: Clone> SparseMatrix<T> {
    pub fn new(cols: usize) -> Self {
        SparseMatrix { rows: 0, cols, entries: Vec::new() }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Appends a row given as `(column, value)` pairs; sorts and merges
    /// repeated columns, drops zeros.
    pub fn push_row<F: Field<Elem = T>>(&mut self, f: &F, mut row: Vec<(usize, T)>) {
        row.sort_by_key(|e| e.0);
        let mut merged: Vec<(usize, T)> = Vec::with_capacity(row.len());
        for (c, v) in row {
            assert!(c < self.cols, "column {c} out of range");
            match merged.last_mut() {
                Some(last) if last.0 == c => last.1 = f.add(&last.1, &v),
                _ => merged.push((c, v)),
            }
        }
        merged.retain(|(_, v)| !f.is_zero(v));
        self.entries.push(merged);
        self.rows += 1;
    }

    pub fn row(&self, i: usize) -> &[(usize, T)] {
        &self.entries[i]
    }

    pub fn nnz(&self) -> usize {
        self.entries.iter().map(Vec::len).sum()
    }

    pub fn density(&self) -> f64 {
        if self.rows == 0 || self.cols == 0 {
            return 0.0;
        }
        self.nnz() as f64 / (self.rows * self.cols) as f64
    }

    pub fn to_dense<F: Field<Elem = T>>(&self, f: &F) -> Matrix<T> {
        let mut m = Matrix::zeros(f, self.rows, self.cols);
        for (i, row) in self.entries.iter().enumerate() {
            for (c, v) in row {
                m.set(i, *c, v.clone());
            }
        }
        m
    }

    pub fn from_dense<F: Field<Elem = T>>(f: &F, m: &Matrix<T>) -> Self {
        let mut s = SparseMatrix::new(m.cols());
        for i in 0..m.rows() {
            let row = m.row(i).iter().enumerate().filter(|(_, v)| !f.is_zero(v)).map(|(c, v)| (c, v.clone())).collect();
            s.entries.push(row);
            s.rows += 1;
        }
        s
    }

    pub fn map<U, G: FnMut(&T) -> U>(&self, mut f: G) -> SparseMatrix<U> {
        SparseMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|r| r.iter().map(|(c, v)| (*c, f(v))).collect()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::field::Rationals;
    use num_rational::BigRational;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn sparse_dense_round_trip() {
        let f = Rationals;
        let mut s = SparseMatrix::new(4);
        s.push_row(&f, vec![(3, q(2)), (0, q(1)), (3, q(-2))]);
        s.push_row(&f, vec![]);
        s.push_row(&f, vec![(1, q(5)), (2, q(7))]);
        assert_eq!(s.row(0), &[(0, q(1))]);
        let d = s.to_dense(&f);
        assert_eq!(SparseMatrix::from_dense(&f, &d), s);
        assert_eq!(s.nnz(), 3);
    }

    #[test]
    fn products() {
        let f = Rationals;
        let a = Matrix::from_rows(vec![vec![q(1), q(2)], vec![q(3), q(4)]]).unwrap();
        let i = Matrix::identity(&f, 2);
        assert_eq!(a.mul_in(&f, &i).unwrap(), a);
        assert_eq!(a.vec_mul_in(&f, &[q(1), q(1)]), vec![q(4), q(6)]);
        assert_eq!(a.transpose().get(0, 1), &q(3));
        assert_eq!(a.trace_in(&f), q(5));
        assert!(Matrix::from_rows(vec![vec![q(1)], vec![]]).is_err());
    }
}
