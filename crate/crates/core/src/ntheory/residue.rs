use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An element of `Z/MZ`, stored as its least nonnegative representative.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Residue {
    value: BigInt,
    modulus: BigInt,
}

impl Residue {
    pub fn new(value: BigInt, modulus: BigInt) -> Result<Self> {
        if modulus <= BigInt::one() {
            return Err(Error::InvalidArgument(format!("modulus {modulus} must exceed 1")));
        }
        Ok(Residue { value: value.mod_floor(&modulus), modulus })
    }

    pub fn from_i64(value: i64, modulus: &BigInt) -> Result<Self> {
        Residue::new(BigInt::from(value), modulus.clone())
    }

    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    fn same_ring(&self, other: &Residue) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::InvalidArgument(format!(
                "residues modulo {} and {} cannot be combined",
                self.modulus, other.modulus
            )));
        }
        Ok(())
    }

    fn wrap(&self, v: BigInt) -> Residue {
        Residue { value: v.mod_floor(&self.modulus), modulus: self.modulus.clone() }
    }

    pub fn add(&self, other: &Residue) -> Result<Residue> {
        self.same_ring(other)?;
        Ok(self.wrap(&self.value + &other.value))
    }

    pub fn sub(&self, other: &Residue) -> Result<Residue> {
        self.same_ring(other)?;
        Ok(self.wrap(&self.value - &other.value))
    }

    pub fn mul(&self, other: &Residue) -> Result<Residue> {
        self.same_ring(other)?;
        Ok(self.wrap(&self.value * &other.value))
    }

    pub fn neg(&self) -> Residue {
        self.wrap(-&self.value)
    }

    pub fn scale(&self, k: &BigInt) -> Residue {
        self.wrap(&self.value * k)
    }

    pub fn inverse(&self) -> Option<Residue> {
        let e = self.value.extended_gcd(&self.modulus);
        if !e.gcd.is_one() {
            return None;
        }
        Some(self.wrap(e.x))
    }

    /// Symmetric representative in `(-M/2, M/2]`.
    pub fn centered(&self) -> BigInt {
        let half = &self.modulus >> 1;
        if self.value > half {
            &self.value - &self.modulus
        } else {
            self.value.clone()
        }
    }
}

impl fmt::Display for Residue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.value, self.modulus)
    }
}
