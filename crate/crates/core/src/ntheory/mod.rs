//! Arithmetic kernel: valuations, residues, multiplicative functions and
//! Hurwitz class numbers.

mod hurwitz;
mod quadratic;
mod residue;

pub use hurwitz::{
    class_weights, hurwitz_class_number, primitive_class_number, ClassWeights, HurwitzTable,
};
pub use quadratic::{count_quadratic_solutions, count_quadratic_solutions_naive};
pub use residue::Residue;

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A p-adic valuation: an exact rational, or `+inf` for zero.
///
/// The derived ordering puts every finite value below `Infinite`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Valuation {
    Finite(BigRational),
    Infinite,
}

impl Valuation {
    pub fn from_int(v: i64) -> Self {
        Valuation::Finite(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Valuation::Finite(_))
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinite => None,
        }
    }

    /// Parses the textual form produced by `Display` (`"inf"`, `"3"`, `"-1/2"`).
    pub fn parse(s: &str) -> Option<Self> {
        let s = s.trim();
        if s == "inf" {
            return Some(Valuation::Infinite);
        }
        parse_rational(s).map(Valuation::Finite)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{}", v),
            Valuation::Infinite => write!(f, "inf"),
        }
    }
}

impl Serialize for Valuation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Valuation {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Valuation::parse(&s).ok_or_else(|| serde::de::Error::custom(format!("bad valuation {s:?}")))
    }
}

/// Parses `"a"` or `"a/b"` into a reduced rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(BigRational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
    }
}

/// Deterministic Miller-Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &SMALL {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn inv_mod(a: i64, m: i64) -> Option<i64> {
    let e = Integer::extended_gcd(&a.rem_euclid(m), &m);
    if e.gcd != 1 {
        return None;
    }
    Some(e.x.rem_euclid(m))
}

/// Prime factorisation by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n <= 1 {
        return out;
    }
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while *n % p == 0 {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    push(3, &mut n);
    let mut p = 5;
    while p * p <= n {
        push(p, &mut n);
        push(p + 2, &mut n);
        p += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// Positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factorize(n) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

pub fn is_perfect_square(n: u64) -> bool {
    let r = isqrt(n);
    r * r == n
}

fn check_level(n: u64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidLevel(n.to_string()));
    }
    Ok(())
}

/// Index of Gamma0(N) in SL2(Z): `N * prod_{p | N} (1 + 1/p)`.
pub fn psi_index(level: u64) -> Result<u64> {
    check_level(level)?;
    Ok(factorize(level)
        .into_iter()
        .map(|(p, e)| p.pow(e - 1) * (p + 1))
        .product())
}

pub fn euler_phi(n: u64) -> Result<u64> {
    check_level(n)?;
    Ok(factorize(n)
        .into_iter()
        .map(|(p, e)| p.pow(e - 1) * (p - 1))
        .product())
}

/// Sum of the divisors of `n` that are coprime to `level`.
pub fn sigma1_coprime(n: u64, level: u64) -> Result<u64> {
    check_level(n)?;
    check_level(level)?;
    Ok(divisors(n)
        .into_iter()
        .filter(|d| d.gcd(&level) == 1)
        .sum())
}

/// Kronecker symbol `(a / p)` for a prime `p`.
pub fn kronecker_prime(a: i64, p: u64) -> i64 {
    if p == 2 {
        return match a.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

/// `p`-adic valuation of a nonzero integer.
pub fn valuation_int(x: &BigInt, p: u64) -> Option<u64> {
    if x.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut x = x.abs();
    let mut v = 0;
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        x = q;
        v += 1;
    }
}

pub fn valuation_u64(mut x: u64, p: u64) -> Option<u64> {
    if x == 0 {
        return None;
    }
    let mut v = 0;
    while x % p == 0 {
        x /= p;
        v += 1;
    }
    Some(v)
}

/// Exact exponent of `p` in the rational `x`; `+inf` when `x = 0`.
pub fn padic_valuation(x: &BigRational, p: u64) -> Result<Valuation> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    if x.is_zero() {
        return Ok(Valuation::Infinite);
    }
    let vn = valuation_int(x.numer(), p).unwrap() as i64;
    let vd = valuation_int(x.denom(), p).unwrap() as i64;
    Ok(Valuation::from_int(vn - vd))
}

/// Valuation of a residue class modulo `p^m`, read off the least
/// nonnegative representative. Returns `Infinite` for the zero class,
/// which only certifies `v >= m`.
pub fn residue_valuation(r: &Residue, p: u64) -> Result<Valuation> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    if r.value().is_zero() {
        return Ok(Valuation::Infinite);
    }
    Ok(Valuation::from_int(valuation_int(r.value(), p).unwrap() as i64))
}

/// `v(xy) = v(x) + v(y)`, absorbing `+inf`.
pub fn valuation_add(a: &Valuation, b: &Valuation) -> Valuation {
    match (a, b) {
        (Valuation::Finite(x), Valuation::Finite(y)) => Valuation::Finite(x + y),
        _ => Valuation::Infinite,
    }
}

#[cfg(test)]
pub(crate) fn rational_from_i64(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}
