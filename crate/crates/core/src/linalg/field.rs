use std::fmt::Debug;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ntheory::is_prime;

/// Scalar field for the generic elimination routines.
pub trait Field: Send + Sync {
    type Elem: Clone + PartialEq + Send + Sync + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;
    fn from_i64(&self, a: i64) -> Self::Elem;
    fn from_bigint(&self, a: &BigInt) -> Self::Elem;
    /// `None` when the denominator is not invertible.
    fn from_rational(&self, a: &BigRational) -> Option<Self::Elem>;

    /// `acc -= b * c`
    #[inline]
    fn sub_mul_assign(&self, acc: &mut Self::Elem, b: &Self::Elem, c: &Self::Elem) {
        *acc = self.sub(acc, &self.mul(b, c));
    }

    /// `acc += b * c`
    #[inline]
    fn add_mul_assign(&self, acc: &mut Self::Elem, b: &Self::Elem, c: &Self::Elem) {
        *acc = self.add(acc, &self.mul(b, c));
    }
}

/// `Z/pZ` for an odd prime `p < 2^62`, elements kept in Montgomery form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
    /// `-p^{-1} mod 2^64`
    pinv: u64,
    /// `2^128 mod p`
    r2: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || p >= (1 << 62) || !is_prime(p) {
            return Err(Error::NotPrime(format!("{p} (need an odd prime below 2^62)")));
        }
        let mut inv = p;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(p.wrapping_mul(inv)));
        }
        let r = ((1u128 << 64) % p as u128) as u64;
        let r2 = ((r as u128 * r as u128) % p as u128) as u64;
        Ok(PrimeField { p, pinv: inv.wrapping_neg(), r2 })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    #[inline]
    fn redc(&self, t: u128) -> u64 {
        let m = (t as u64).wrapping_mul(self.pinv);
        let u = ((t + m as u128 * self.p as u128) >> 64) as u64;
        if u >= self.p {
            u - self.p
        } else {
            u
        }
    }

    /// Element from a canonical residue.
    #[inline]
    pub fn from_u64(&self, a: u64) -> u64 {
        self.redc((a % self.p) as u128 * self.r2 as u128)
    }

    /// Canonical residue in `[0, p)`.
    #[inline]
    pub fn to_u64(&self, a: u64) -> u64 {
        self.redc(a as u128)
    }

    fn pow(&self, a: u64, mut e: u64) -> u64 {
        let mut acc = self.one();
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            b = self.mul(&b, &b);
            e >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u64;

    #[inline]
    fn zero(&self) -> u64 {
        0
    }
    #[inline]
    fn one(&self) -> u64 {
        self.from_u64(1)
    }
    #[inline]
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    #[inline]
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    #[inline]
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    #[inline]
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        self.redc(*a as u128 * *b as u128)
    }
    #[inline]
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> Option<u64> {
        if *a == 0 {
            return None;
        }
        Some(self.pow(*a, self.p - 2))
    }
    fn from_i64(&self, a: i64) -> u64 {
        self.from_u64((a as i128).rem_euclid(self.p as i128) as u64)
    }
    fn from_bigint(&self, a: &BigInt) -> u64 {
        self.from_u64(a.mod_floor(&BigInt::from(self.p)).to_u64().unwrap())
    }
    fn from_rational(&self, a: &BigRational) -> Option<u64> {
        let d = self.from_bigint(a.denom());
        self.inv(&d).map(|d| self.mul(&self.from_bigint(a.numer()), &d))
    }
}

/// The field of rationals, exact.
#[derive(Debug, Clone, Copy, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::from_integer(1.into())
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> Option<BigRational> {
        (!a.is_zero()).then(|| a.recip())
    }
    fn from_i64(&self, a: i64) -> BigRational {
        BigRational::from_integer(a.into())
    }
    fn from_bigint(&self, a: &BigInt) -> BigRational {
        BigRational::from_integer(a.clone())
    }
    fn from_rational(&self, a: &BigRational) -> Option<BigRational> {
        Some(a.clone())
    }
    fn sub_mul_assign(&self, acc: &mut BigRational, b: &BigRational, c: &BigRational) {
        if !b.is_zero() && !c.is_zero() {
            *acc -= b * c;
        }
    }
    fn add_mul_assign(&self, acc: &mut BigRational, b: &BigRational, c: &BigRational) {
        if !b.is_zero() && !c.is_zero() {
            *acc += b * c;
        }
    }
}
