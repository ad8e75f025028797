//! Chinese remaindering, rational reconstruction and the word-prime pool.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::ntheory::{inv_mod, is_prime};

/// `count` primes below `2^62`, descending, skipping any in `avoid`.
pub fn word_primes(count: usize, avoid: &[u64]) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let mut c = (1u64 << 62) - 1;
    while out.len() < count {
        if is_prime(c) && !avoid.contains(&c) {
            out.push(c);
        }
        c -= 2;
    }
    out
}

/// Lazily extended, process-wide list of word primes.
pub fn prime_at(index: usize) -> u64 {
    use std::sync::{OnceLock, RwLock};
    static POOL: OnceLock<RwLock<Vec<u64>>> = OnceLock::new();
    let pool = POOL.get_or_init(|| RwLock::new(Vec::new()));
    if let Some(&p) = pool.read().unwrap().get(index) {
        return p;
    }
    let mut w = pool.write().unwrap();
    if w.len() <= index {
        *w = word_primes((index + 1).max(2 * w.len()).max(64), &[]);
    }
    w[index]
}

/// Incremental CRT accumulator for a vector of residues.
#[derive(Debug, Clone)]
pub struct CrtVector {
    values: Vec<BigInt>,
    modulus: BigInt,
}

impl CrtVector {
    pub fn new(len: usize) -> Self {
        CrtVector { values: vec![BigInt::zero(); len], modulus: BigInt::one() }
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    /// Folds in residues modulo a new prime `q` coprime to the current
    /// modulus.
    pub fn push(&mut self, residues: &[u64], q: u64) {
        assert_eq!(residues.len(), self.values.len());
        let qb = BigInt::from(q);
        let m_mod_q: u64 = (&self.modulus % &qb).try_into().unwrap();
        let inv = inv_mod(m_mod_q as i64, q as i64).expect("CRT moduli must be coprime") as u64;
        for (v, &r) in self.values.iter_mut().zip(residues) {
            let cur: u64 = (&*v % &qb).try_into().unwrap();
            let diff = (r as u128 + q as u128 - cur as u128) % q as u128;
            let t = (diff * inv as u128 % q as u128) as u64;
            if t != 0 {
                *v += &self.modulus * t;
            }
        }
        self.modulus *= q;
    }

    /// Residues in `[0, M)`.
    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    /// Residues lifted to `(-M/2, M/2]`.
    pub fn symmetric(&self) -> Vec<BigInt> {
        let half = &self.modulus >> 1;
        self.values.iter().map(|v| if v > &half { v - &self.modulus } else { v.clone() }).collect()
    }
}

/// CRT of two congruences with coprime moduli.
pub fn crt_pair(r1: &BigInt, m1: &BigInt, r2: &BigInt, m2: &BigInt) -> Result<(BigInt, BigInt)> {
    let g = m1.extended_gcd(m2);
    if !g.gcd.is_one() {
        return Err(Error::Precondition(format!("moduli {m1} and {m2} are not coprime")));
    }
    let m = m1 * m2;
    let r = (r1 + m1 * ((r2 - r1) * &g.x).mod_floor(m2)).mod_floor(&m);
    Ok((r, m))
}

/// The unique `a/b` with `|a|, b <= bound` and `a = residue * b (mod modulus)`,
/// or `None`. Requires `2 bound^2 < modulus`.
pub fn rational_reconstruction(residue: &BigInt, modulus: &BigInt, bound: &BigInt) -> Result<Option<BigRational>> {
    if !bound.is_positive() || BigInt::from(2) * bound * bound >= *modulus {
        return Err(Error::Precondition(format!("2 * {bound}^2 must be below the modulus {modulus}")));
    }
    let r = residue.mod_floor(modulus);
    let (mut r0, mut r1) = (modulus.clone(), r);
    let (mut s0, mut s1) = (BigInt::zero(), BigInt::one());
    while &r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r2);
        let s2 = &s0 - &q * &s1;
        s0 = std::mem::replace(&mut s1, s2);
    }
    if s1.is_zero() || s1.abs() > *bound || !r1.gcd(&s1).is_one() {
        return Ok(None);
    }
    let (num, den) = if s1.is_negative() { (-r1, -s1) } else { (r1, s1) };
    debug_assert!(((&num - residue * &den).mod_floor(modulus)).is_zero());
    Ok(Some(BigRational::new(num, den)))
}

/// `floor(sqrt(modulus / 2))`, the largest admissible reconstruction bound.
pub fn reconstruction_bound(modulus: &BigInt) -> BigInt {
    let mut b = (modulus >> 1usize).sqrt();
    while BigInt::from(2) * &b * &b >= *modulus {
        b -= 1;
    }
    b
}
