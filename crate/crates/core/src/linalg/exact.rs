//! Exact linear algebra over `Z` and `Q`: fraction-free echelon forms and
//! characteristic polynomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::dense::{charpoly_hessenberg, kernel_from_rref, Echelon};
use super::field::{Field, PrimeField, Rationals};
use super::matrix::Matrix;
use super::modular::{prime_at, CrtVector};
use crate::error::{Error, Result};

/// Above this size integer charpolys go multi-modular.
const BERKOWITZ_MAX_DIM: usize = 8;

/// Give up after this many consecutive primes rejected by a per-prime pass.
const MAX_BAD_PRIMES: usize = 24;

/// Monic characteristic polynomial `X^n + a_1 X^{n-1} + ... + a_n`,
/// stored as `[1, a_1, ..., a_n]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharPoly {
    coeffs: Vec<BigRational>,
}

impl CharPoly {
    pub fn from_rationals(coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.first().map_or(true, |c| !c.is_one()) {
            return Err(Error::NotMonic);
        }
        Ok(CharPoly { coeffs })
    }

    pub fn from_integers(coeffs: Vec<BigInt>) -> Result<Self> {
        Self::from_rationals(coeffs.into_iter().map(BigRational::from_integer).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(BigRational::is_integer)
    }

    pub fn integer_coeffs(&self) -> Result<Vec<BigInt>> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if c.is_integer() {
                    Ok(c.to_integer())
                } else {
                    Err(Error::NonIntegral(format!("coefficient a_{i} = {c}")))
                }
            })
            .collect()
    }

    pub fn mul(&self, other: &CharPoly) -> CharPoly {
        let mut out = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        CharPoly { coeffs: out }
    }

    /// `-a_1`.
    pub fn trace(&self) -> BigRational {
        self.coeffs.get(1).map_or_else(BigRational::zero, |a| -a)
    }
}

/// Fraction-free row echelon form (Bareiss) searching pivots among the
/// first `limit` columns; returns the pivot columns.
pub fn bareiss_echelon(m: &mut Matrix<BigInt>, limit: usize) -> Vec<usize> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..limit.min(cols) {
        if r == rows {
            break;
        }
        let Some(i) = (r..rows).find(|&i| !m.get(i, c).is_zero()) else {
            continue;
        };
        m.swap_rows(i, r);
        for i in r + 1..rows {
            let (target, pivot) = m.row_pair(i, r);
            let lead = target[c].clone();
            for j in c + 1..cols {
                let v = &pivot[c] * &target[j] - &lead * &pivot[j];
                debug_assert!((&v % &prev).is_zero());
                target[j] = v / &prev;
            }
            target[c] = BigInt::zero();
        }
        prev = m.get(r, c).clone();
        pivots.push(c);
        r += 1;
    }
    pivots
}

fn clear_row_denominators(row: &[BigRational]) -> Vec<BigInt> {
    let d = row.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    row.iter().map(|x| (x * BigRational::from_integer(d.clone())).to_integer()).collect()
}

/// Exact RREF over `Q`: Bareiss on the row-integralised `[M | I]`, then
/// back substitution.
pub fn echelonize(m: &Matrix<BigRational>) -> Echelon<BigRational> {
    let (rows, cols) = (m.rows(), m.cols());
    let mut aug = Matrix::filled(rows, cols + rows, BigInt::zero());
    for i in 0..rows {
        let mut row: Vec<BigRational> = m.row(i).to_vec();
        row.extend((0..rows).map(|j| BigRational::from_integer(BigInt::from((i == j) as i64))));
        aug.row_mut(i).clone_from_slice(&clear_row_denominators(&row));
    }
    let pivots = bareiss_echelon(&mut aug, cols);
    let f = Rationals;
    let mut q = aug.map(|x| BigRational::from_integer(x.clone()));
    for (r, &c) in pivots.iter().enumerate().rev() {
        let inv = q.get(r, c).recip();
        for x in q.row_mut(r).iter_mut() {
            *x *= &inv;
        }
        for i in 0..r {
            if q.get(i, c).is_zero() {
                continue;
            }
            let (target, pivot) = q.row_pair(i, r);
            let factor = target[c].clone();
            for (t, p) in target.iter_mut().zip(pivot) {
                f.sub_mul_assign(t, &factor, p);
            }
        }
    }
    Echelon { form: q.col_block(0, cols), pivots, transform: q.col_block(cols, cols + rows) }
}

/// Right kernel over `Q`, one basis vector per row.
pub fn kernel_basis(m: &Matrix<BigRational>) -> Matrix<BigRational> {
    let e = echelonize(m);
    kernel_from_rref(&Rationals, &e.form, &e.pivots)
}

pub fn rank(m: &Matrix<BigRational>) -> usize {
    echelonize(m).rank()
}

/// Division-free characteristic polynomial (Berkowitz), `[1, a_1, ..]`.
pub fn charpoly_berkowitz(m: &Matrix<BigInt>) -> Vec<BigInt> {
    assert!(m.is_square(), "charpoly of a non-square matrix");
    let n = m.rows();
    let mut poly = vec![BigInt::one()];
    for r in 0..n {
        // leading (r+1)x(r+1) block: A = m[..r][..r], C = m[..r][r],
        // R = m[r][..r], a = m[r][r]
        let mut toeplitz = vec![BigInt::one(), -m.get(r, r).clone()];
        let mut v: Vec<BigInt> = (0..r).map(|i| m.get(i, r).clone()).collect();
        for _ in 0..r {
            let rc: BigInt = (0..r).map(|j| m.get(r, j) * &v[j]).sum();
            toeplitz.push(-rc);
            v = (0..r).map(|i| (0..r).map(|j| m.get(i, j) * &v[j]).sum()).collect();
        }
        let mut next = vec![BigInt::zero(); r + 2];
        for (i, out) in next.iter_mut().enumerate() {
            for j in 0..=i.min(r) {
                if i - j < toeplitz.len() {
                    *out += &toeplitz[i - j] * &poly[j];
                }
            }
        }
        poly = next;
    }
    poly
}

/// Bound on `|a_i|` for every coefficient of the charpoly of `m`, from
/// Hadamard's inequality on principal minors: `e_i(row norms)`.
pub fn hadamard_charpoly_bound(m: &Matrix<BigInt>) -> BigInt {
    let n = m.rows();
    let norms: Vec<BigInt> = (0..n)
        .map(|i| {
            let s: BigInt = m.row(i).iter().map(|x| x * x).sum();
            let r = s.sqrt();
            if &r * &r == s {
                r
            } else {
                r + 1
            }
        })
        .collect();
    let mut e = vec![BigInt::zero(); n + 1];
    e[0] = BigInt::one();
    for (k, r) in norms.iter().enumerate() {
        for i in (1..=k + 1).rev() {
            let add = &e[i - 1] * r;
            e[i] += add;
        }
    }
    e.into_iter().max().unwrap()
}

/// Multi-modular driver. `per_prime(q)` returns `[1, a_1, ..., a_n] mod q`
/// as canonical residues, or `None` for a prime it cannot use. Primes are
/// added until their product exceeds `2 * bound`; the symmetric lift is
/// returned.
pub fn multimodular_charpoly<G>(n: usize, bound: &BigInt, per_prime: G) -> Result<Vec<BigInt>>
where
    G: Fn(&PrimeField) -> Option<Vec<u64>> + Sync,
{
    let target = bound * 2u32;
    let mut acc = CrtVector::new(n + 1);
    let mut next = 0usize;
    let mut bad_run = 0usize;
    let batch = rayon::current_num_threads().max(1);
    while acc.modulus() <= &target {
        let primes: Vec<u64> = (next..next + batch).map(prime_at).collect();
        next += batch;
        let results: Vec<Option<Vec<u64>>> = primes
            .par_iter()
            .map(|&q| per_prime(&PrimeField::new(q).unwrap()))
            .collect();
        for (q, res) in primes.into_iter().zip(results) {
            if acc.modulus() > &target {
                break;
            }
            match res {
                Some(v) => {
                    if v.len() != n + 1 || v[0] != 1 {
                        return Err(Error::Consistency(format!("per-prime charpoly malformed mod {q}")));
                    }
                    acc.push(&v, q);
                    bad_run = 0;
                }
                None => {
                    bad_run += 1;
                    if bad_run > MAX_BAD_PRIMES {
                        return Err(Error::Consistency(format!("{bad_run} consecutive unusable primes")));
                    }
                }
            }
        }
    }
    Ok(acc.symmetric())
}

/// Exact charpoly of an integer matrix.
pub fn charpoly_integer(m: &Matrix<BigInt>) -> Result<Vec<BigInt>> {
    if !m.is_square() {
        return Err(Error::InvalidArgument(format!("{}x{} matrix is not square", m.rows(), m.cols())));
    }
    if m.rows() <= BERKOWITZ_MAX_DIM {
        return Ok(charpoly_berkowitz(m));
    }
    charpoly_multimodular(m)
}

/// Hessenberg modulo word primes, CRT up to the Hadamard bound.
pub fn charpoly_multimodular(m: &Matrix<BigInt>) -> Result<Vec<BigInt>> {
    let bound = hadamard_charpoly_bound(m);
    multimodular_charpoly(m.rows(), &bound, |f| {
        let mq = m.map(|x| f.from_bigint(x));
        Some(charpoly_hessenberg(f, &mq).iter().map(|&c| f.to_u64(c)).collect())
    })
}

/// Exact charpoly over `Q`, through the integer matrix `D M`.
pub fn charpoly(m: &Matrix<BigRational>) -> Result<CharPoly> {
    let d = m.entries().iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled = m.map(|x| (x * BigRational::from_integer(d.clone())).to_integer());
    let coeffs = charpoly_integer(&scaled)?;
    let mut dpow = BigInt::one();
    let mut out = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        out.push(BigRational::new(c, dpow.clone()));
        dpow *= &d;
    }
    CharPoly::from_rationals(out)
}

/// Largest absolute value among the entries.
pub fn max_abs(m: &Matrix<BigInt>) -> BigInt {
    m.entries().iter().map(|x| x.abs()).max().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn zm(rows: &[&[i64]]) -> Matrix<BigInt> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn charpoly_examples() {
        assert_eq!(charpoly_integer(&zm(&[&[1, 0], &[0, 2]])).unwrap(), ints(&[1, -3, 2]));
        let companion = zm(&[&[0, 0, 7], &[1, 0, 0], &[0, 1, 0]]);
        assert_eq!(charpoly_berkowitz(&companion), ints(&[1, 0, 0, -7]));
        assert_eq!(charpoly_multimodular(&companion).unwrap(), ints(&[1, 0, 0, -7]));
        let nil = zm(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        assert_eq!(charpoly_multimodular(&nil).unwrap(), ints(&[1, 0, 0, 0]));
        assert_eq!(charpoly_berkowitz(&Matrix::filled(0, 0, BigInt::zero())), ints(&[1]));
    }

    #[test]
    fn rational_charpoly_scales_back() {
        let half = BigRational::new(1.into(), 2.into());
        let m = Matrix::from_rows(vec![
            vec![half.clone(), BigRational::zero()],
            vec![BigRational::zero(), BigRational::from_integer(3.into())],
        ])
        .unwrap();
        let cp = charpoly(&m).unwrap();
        assert_eq!(cp.coeffs()[1], BigRational::new((-7).into(), 2.into()));
        assert_eq!(cp.coeffs()[2], BigRational::new(3.into(), 2.into()));
        assert!(!cp.is_integral());
    }

    #[test]
    fn bareiss_rref_matches_field_rref() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let (r, c) = (rng.gen_range(1..7), rng.gen_range(1..7));
            let rank_cap = rng.gen_range(1..=r.min(c));
            // product of random r x rank_cap and rank_cap x c factors
            let a: Vec<Vec<i64>> = (0..r).map(|_| (0..rank_cap).map(|_| rng.gen_range(-4..5)).collect()).collect();
            let b: Vec<Vec<i64>> = (0..rank_cap).map(|_| (0..c).map(|_| rng.gen_range(-4..5)).collect()).collect();
            let m = Matrix::from_rows(
                (0..r)
                    .map(|i| {
                        (0..c)
                            .map(|j| BigRational::new((0..rank_cap).map(|k| a[i][k] * b[k][j]).sum::<i64>().into(), BigInt::from(rng.gen_range(1..4))))
                            .collect()
                    })
                    .collect(),
            )
            .unwrap();
            let e = echelonize(&m);
            let mut g = m.clone();
            let pivots = super::super::dense::rref(&Rationals, &mut g);
            assert_eq!(e.pivots, pivots);
            assert_eq!(e.form, g);
            assert_eq!(e.transform.mul_in(&Rationals, &m).unwrap(), e.form);
            let k = kernel_basis(&m);
            assert_eq!(k.rows() + e.rank(), c);
            assert!(m.mul_in(&Rationals, &k.transpose()).unwrap().is_zero_in(&Rationals));
        }
    }
}
