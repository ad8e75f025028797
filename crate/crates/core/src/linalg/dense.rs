//! Gauss-Jordan elimination, kernels and Hessenberg characteristic
//! polynomials over any [`Field`].

use super::field::Field;
use super::matrix::{Matrix, SparseMatrix};

/// Reduced row-echelon form with its pivot columns and a transformation
/// `T` such that `T * M = form`.
#[derive(Debug, Clone, PartialEq)]
pub struct Echelon<T> {
    pub form: Matrix<T>,
    pub pivots: Vec<usize>,
    pub transform: Matrix<T>,
}

impl<T> Echelon<T> {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// In-place RREF, searching for pivots only among the first `limit`
/// columns. Returns the pivot columns; rows past the rank are zero in
/// those columns.
pub fn rref_limited<F: Field>(f: &F, m: &mut Matrix<F::Elem>, limit: usize) -> Vec<usize> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..limit.min(cols) {
        if r == rows {
            break;
        }
        let Some(i) = (r..rows).find(|&i| !f.is_zero(m.get(i, c))) else {
            continue;
        };
        m.swap_rows(i, r);
        let inv = f.inv(m.get(r, c)).expect("nonzero pivot");
        for x in &mut m.row_mut(r)[c..] {
            *x = f.mul(x, &inv);
        }
        for i in 0..rows {
            if i == r || f.is_zero(m.get(i, c)) {
                continue;
            }
            let (target, pivot_row) = m.row_pair(i, r);
            let factor = target[c].clone();
            for (t, p) in target[c..].iter_mut().zip(&pivot_row[c..]) {
                f.sub_mul_assign(t, &factor, p);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rref<F: Field>(f: &F, m: &mut Matrix<F::Elem>) -> Vec<usize> {
    let cols = m.cols();
    rref_limited(f, m, cols)
}

/// RREF plus the transformation record, from elimination on `[M | I]`.
pub fn echelonize<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Echelon<F::Elem> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut aug = Matrix::zeros(f, rows, cols + rows);
    for i in 0..rows {
        aug.row_mut(i)[..cols].clone_from_slice(m.row(i));
        aug.set(i, cols + i, f.one());
    }
    let pivots = rref_limited(f, &mut aug, cols);
    Echelon { form: aug.col_block(0, cols), pivots, transform: aug.col_block(cols, cols + rows) }
}

pub fn rank<F: Field>(f: &F, m: &Matrix<F::Elem>) -> usize {
    rref(f, &mut m.clone()).len()
}

/// Kernel basis of a matrix already in RREF with the given pivots; one
/// row per free column, normalised to 1 there.
pub fn kernel_from_rref<F: Field>(f: &F, form: &Matrix<F::Elem>, pivots: &[usize]) -> Matrix<F::Elem> {
    let cols = form.cols();
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    let free: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
    let mut basis = Matrix::zeros(f, free.len(), cols);
    for (b, &fc) in free.iter().enumerate() {
        basis.set(b, fc, f.one());
        for (r, &pc) in pivots.iter().enumerate() {
            let v = form.get(r, fc);
            if !f.is_zero(v) {
                basis.set(b, pc, f.neg(v));
            }
        }
    }
    basis
}

/// Basis of the right kernel `{x : M x = 0}`, one vector per row.
pub fn kernel_basis<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Matrix<F::Elem> {
    let mut form = m.clone();
    let pivots = rref(f, &mut form);
    kernel_from_rref(f, &form, &pivots)
}

/// Reduces a sparse matrix to RREF, dropping to dense storage once the
/// active rows exceed `crossover` fill. Returns the nonzero rows (as a
/// dense matrix) and their pivots.
pub fn sparse_rref<F: Field>(f: &F, m: &SparseMatrix<F::Elem>, crossover: f64) -> (Matrix<F::Elem>, Vec<usize>) {
    let cols = m.cols();
    // Sparse forward phase: pivot rows are kept fully reduced against each
    // other (columns of earlier pivots never reappear).
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; cols];
    let mut pivot_rows: Vec<Vec<(usize, F::Elem)>> = Vec::new();
    let mut fill = 0usize;
    let mut pending = (0..m.rows()).rev().collect::<Vec<_>>();
    let mut dense_rest: Vec<Vec<(usize, F::Elem)>> = Vec::new();
    while let Some(ri) = pending.pop() {
        let mut row: Vec<(usize, F::Elem)> = m.row(ri).to_vec();
        row = reduce_sparse(f, row, &pivot_of_col, &pivot_rows);
        let Some((lead, lv)) = row.first().cloned() else {
            continue;
        };
        let inv = f.inv(&lv).unwrap();
        for e in &mut row {
            e.1 = f.mul(&e.1, &inv);
        }
        // back-substitute into existing pivot rows
        for pr in pivot_rows.iter_mut() {
            if let Ok(pos) = pr.binary_search_by_key(&lead, |e| e.0) {
                let factor = pr[pos].1.clone();
                *pr = axpy_sparse(f, pr, &row, &factor);
            }
        }
        fill += row.len();
        pivot_of_col[lead] = Some(pivot_rows.len());
        pivot_rows.push(row);
        if pivot_rows.len() > 32 && fill as f64 > crossover * (pivot_rows.len() * cols) as f64 {
            dense_rest = pending.iter().rev().map(|&i| m.row(i).to_vec()).collect();
            break;
        }
    }
    let mut dense = Matrix::zeros(f, pivot_rows.len() + dense_rest.len(), cols);
    for (i, row) in pivot_rows.iter().chain(dense_rest.iter()).enumerate() {
        for (c, v) in row {
            dense.set(i, *c, v.clone());
        }
    }
    let pivots = rref(f, &mut dense);
    let rank = pivots.len();
    (dense.row_block(0, rank), pivots)
}

fn reduce_sparse<F: Field>(
    f: &F,
    mut row: Vec<(usize, F::Elem)>,
    pivot_of_col: &[Option<usize>],
    pivot_rows: &[Vec<(usize, F::Elem)>],
) -> Vec<(usize, F::Elem)> {
    // Pivot rows are mutually reduced, so one pass over the original
    // support plus the fill it introduces suffices; iterate until stable.
    loop {
        let hit = row.iter().find_map(|(c, v)| pivot_of_col[*c].map(|p| (p, v.clone())));
        match hit {
            None => return row,
            Some((p, v)) => row = axpy_sparse(f, &row, &pivot_rows[p], &v),
        }
    }
}

/// `a - factor * b` for sorted sparse rows.
fn axpy_sparse<F: Field>(f: &F, a: &[(usize, F::Elem)], b: &[(usize, F::Elem)], factor: &F::Elem) -> Vec<(usize, F::Elem)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, f.neg(&f.mul(factor, &b[j].1))));
            j += 1;
        } else {
            let mut v = a[i].1.clone();
            f.sub_mul_assign(&mut v, factor, &b[j].1);
            if !f.is_zero(&v) {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Characteristic polynomial `det(X I - M)` via reduction to upper
/// Hessenberg form; coefficients from the leading 1 downward.
pub fn charpoly_hessenberg<F: Field>(f: &F, m: &Matrix<F::Elem>) -> Vec<F::Elem> {
    assert!(m.is_square(), "charpoly of a non-square matrix");
    let n = m.rows();
    let mut h = m.clone();
    for j in 0..n.saturating_sub(2) {
        let Some(i) = (j + 1..n).find(|&i| !f.is_zero(h.get(i, j))) else {
            continue;
        };
        if i != j + 1 {
            h.swap_rows(i, j + 1);
            for r in 0..n {
                let row = h.row_mut(r);
                row.swap(i, j + 1);
            }
        }
        let inv = f.inv(h.get(j + 1, j)).unwrap();
        // H <- L H L^{-1}: all row operations, then the column update
        let mut us: Vec<(usize, F::Elem)> = Vec::new();
        for r in j + 2..n {
            if f.is_zero(h.get(r, j)) {
                continue;
            }
            let u = f.mul(h.get(r, j), &inv);
            let (target, pivot) = h.row_pair(r, j + 1);
            for (t, p) in target[j..].iter_mut().zip(&pivot[j..]) {
                f.sub_mul_assign(t, &u, p);
            }
            us.push((r, u));
        }
        if us.is_empty() {
            continue;
        }
        for row in 0..n {
            let line = h.row_mut(row);
            let mut acc = line[j + 1].clone();
            for (r, u) in &us {
                if !f.is_zero(&line[*r]) {
                    f.add_mul_assign(&mut acc, u, &line[*r]);
                }
            }
            line[j + 1] = acc;
        }
    }
    // p_m = (X - h_mm) p_{m-1} - sum_i (h_{m-i,m} prod h_{j,j-1}) p_{m-i-1},
    // polynomials stored low-to-high.
    let mut polys: Vec<Vec<F::Elem>> = vec![vec![f.one()]];
    for mm in 0..n {
        let prev = &polys[mm];
        let mut next = vec![f.zero(); mm + 2];
        for (d, c) in prev.iter().enumerate() {
            next[d + 1] = f.add(&next[d + 1], c);
            f.sub_mul_assign(&mut next[d], h.get(mm, mm), c);
        }
        let mut t = f.one();
        for i in 1..=mm {
            t = f.mul(&t, h.get(mm - i + 1, mm - i));
            let coef = f.mul(&t, h.get(mm - i, mm));
            if f.is_zero(&coef) {
                continue;
            }
            for (d, c) in polys[mm - i].iter().enumerate() {
                f.sub_mul_assign(&mut next[d], &coef, c);
            }
        }
        polys.push(next);
    }
    let mut out = polys.pop().unwrap();
    out.reverse();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::field::{PrimeField, Rationals};
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn qm(rows: &[&[i64]]) -> Matrix<BigRational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn echelon_examples() {
        let f = Rationals;
        let id = Matrix::identity(&f, 3);
        let e = echelonize(&f, &id);
        assert_eq!(e.form, id);
        assert_eq!(e.pivots, vec![0, 1, 2]);

        let z = Matrix::zeros(&f, 2, 3);
        let e = echelonize(&f, &z);
        assert_eq!(e.form, z);
        assert!(e.pivots.is_empty());

        let m = qm(&[&[2, 4], &[1, 2]]);
        let e = echelonize(&f, &m);
        assert_eq!(e.form, qm(&[&[1, 2], &[0, 0]]));
        assert_eq!(e.pivots, vec![0]);
        assert_eq!(e.transform.mul_in(&f, &m).unwrap(), e.form);
    }

    #[test]
    fn kernel_examples() {
        let f = Rationals;
        assert_eq!(kernel_basis(&f, &Matrix::identity(&f, 4)).rows(), 0);
        assert_eq!(kernel_basis(&f, &Matrix::zeros(&f, 2, 3)).rows(), 3);
        let m = qm(&[&[1, 1, 0]]);
        let k = kernel_basis(&f, &m);
        assert_eq!(k.rows(), 2);
        assert!(m.mul_in(&f, &k.transpose()).unwrap().is_zero_in(&f));
    }

    #[test]
    fn sparse_and_dense_rref_agree() {
        let f = PrimeField::new(1_000_003).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..30 {
            let (rows, cols) = (rng.gen_range(1..60), rng.gen_range(1..60));
            let mut s = SparseMatrix::new(cols);
            for _ in 0..rows {
                let nnz = rng.gen_range(0..4);
                let row = (0..nnz).map(|_| (rng.gen_range(0..cols), f.from_i64(rng.gen_range(-3..4)))).collect();
                s.push_row(&f, row);
            }
            let mut dense = s.to_dense(&f);
            let pivots = rref(&f, &mut dense);
            let crossover = if trial % 2 == 0 { 0.3 } else { 0.0 };
            let (form, sp) = sparse_rref(&f, &s, crossover);
            assert_eq!(sp, pivots);
            assert_eq!(form, dense.row_block(0, pivots.len()));
        }
    }

    #[test]
    fn hessenberg_small() {
        let f = Rationals;
        let m = qm(&[&[1, 0], &[0, 2]]);
        assert_eq!(charpoly_hessenberg(&f, &m), vec![q(1), q(-3), q(2)]);
        let companion = qm(&[&[0, 0, 7], &[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(charpoly_hessenberg(&f, &companion), vec![q(1), q(0), q(0), q(-7)]);
        let nil = qm(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        assert_eq!(charpoly_hessenberg(&f, &nil), vec![q(1), q(0), q(0), q(0)]);
    }
}
