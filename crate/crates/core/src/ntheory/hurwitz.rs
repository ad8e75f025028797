//! Weighted class numbers of positive-definite binary quadratic forms.
//!
//! Values are kept in twelfths so that the weights `1/2` (forms equivalent
//! to a multiple of `x^2 + y^2`) and `1/3` (multiples of `x^2 + xy + y^2`)
//! stay integral.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;

use super::isqrt;
use crate::error::{Error, Result};

/// Class weights of discriminant `-D`, scaled by 12.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ClassWeights {
    /// `12 * H(D)`: every reduced form counts.
    pub hurwitz12: i64,
    /// `12 * h_w(-D)`: primitive reduced forms only.
    pub primitive12: i64,
}

fn form_weight12(a: u64, b: u64, c: u64) -> i64 {
    if a == c && b == 0 {
        6
    } else if a == b && b == c {
        4
    } else {
        12
    }
}

/// Number of distinct reduced forms `(a, +-b, c)` for `b >= 0`.
fn sign_multiplicity(a: u64, b: u64, c: u64) -> i64 {
    if b == 0 || b == a || a == c {
        1
    } else {
        2
    }
}

/// Enumerates reduced forms of discriminant `-d` directly.
pub fn class_weights(d: u64) -> ClassWeights {
    if d == 0 {
        return ClassWeights { hurwitz12: -1, primitive12: 0 };
    }
    if d % 4 == 1 || d % 4 == 2 {
        return ClassWeights::default();
    }
    let mut out = ClassWeights::default();
    let mut b = d % 2;
    while 3 * b * b <= d {
        let m = (b * b + d) / 4;
        let hi = isqrt(m);
        for a in b.max(1)..=hi {
            if m % a != 0 {
                continue;
            }
            let c = m / a;
            let w = form_weight12(a, b, c) * sign_multiplicity(a, b, c);
            out.hurwitz12 += w;
            if a.gcd(&b).gcd(&c) == 1 {
                out.primitive12 += w;
            }
        }
        b += 2;
    }
    out
}

fn dense_table(bound: u64) -> Vec<ClassWeights> {
    let mut table = vec![ClassWeights::default(); bound as usize + 1];
    table[0].hurwitz12 = -1;
    let mut a = 1u64;
    while 3 * a * a <= bound {
        for b in 0..=a {
            let gab = a.gcd(&b);
            let mut c = a;
            loop {
                let disc = 4 * a * c - b * b;
                if disc > bound {
                    break;
                }
                let w = form_weight12(a, b, c) * sign_multiplicity(a, b, c);
                let slot = &mut table[disc as usize];
                slot.hurwitz12 += w;
                if gab.gcd(&c) == 1 {
                    slot.primitive12 += w;
                }
                c += 1;
            }
        }
        a += 1;
    }
    table
}

/// Memoised class weights: a dense prefix filled by bulk enumeration plus a
/// sparse map for isolated larger discriminants. Safe for concurrent readers;
/// inserts are idempotent.
#[derive(Debug, Default)]
pub struct HurwitzTable {
    dense: RwLock<Arc<Vec<ClassWeights>>>,
    sparse: RwLock<HashMap<u64, ClassWeights>>,
}

impl HurwitzTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// The process-wide table used by the trace formula.
    pub fn global() -> &'static HurwitzTable {
        static TABLE: OnceLock<HurwitzTable> = OnceLock::new();
        TABLE.get_or_init(HurwitzTable::new)
    }

    pub fn dense_bound(&self) -> Option<u64> {
        let dense = self.dense.read().unwrap();
        if dense.is_empty() {
            None
        } else {
            Some(dense.len() as u64 - 1)
        }
    }

    /// Fills the dense prefix for every `D <= bound`.
    pub fn ensure_dense(&self, bound: u64) {
        if self.dense_bound().is_some_and(|b| b >= bound) {
            return;
        }
        let fresh = Arc::new(dense_table(bound));
        let mut slot = self.dense.write().unwrap();
        if slot.len() < fresh.len() {
            *slot = fresh;
        }
    }

    /// Installs a previously exported prefix (checked against the first
    /// entries of a fresh enumeration).
    pub fn import_dense(&self, hurwitz12: &[i64], primitive12: &[i64]) -> Result<()> {
        if hurwitz12.len() != primitive12.len() || hurwitz12.is_empty() {
            return Err(Error::InvalidArgument("malformed class-number table".into()));
        }
        let probe = (hurwitz12.len() as u64 - 1).min(200);
        for d in 0..=probe {
            let w = class_weights(d);
            if w.hurwitz12 != hurwitz12[d as usize] || w.primitive12 != primitive12[d as usize] {
                return Err(Error::Consistency(format!("class-number table disagrees at D = {d}")));
            }
        }
        let table: Vec<ClassWeights> = hurwitz12
            .iter()
            .zip(primitive12)
            .map(|(&h, &p)| ClassWeights { hurwitz12: h, primitive12: p })
            .collect();
        let mut slot = self.dense.write().unwrap();
        if slot.len() < table.len() {
            *slot = Arc::new(table);
        }
        Ok(())
    }

    /// Flat arrays `(12 H(D), 12 h_w(-D))` for `D` in the dense prefix.
    pub fn export_dense(&self) -> (Vec<i64>, Vec<i64>) {
        let dense = self.dense.read().unwrap();
        (
            dense.iter().map(|w| w.hurwitz12).collect(),
            dense.iter().map(|w| w.primitive12).collect(),
        )
    }

    pub fn get(&self, d: u64) -> ClassWeights {
        {
            let dense = self.dense.read().unwrap();
            if (d as usize) < dense.len() {
                return dense[d as usize];
            }
        }
        if let Some(w) = self.sparse.read().unwrap().get(&d) {
            return *w;
        }
        let w = class_weights(d);
        *self.sparse.write().unwrap().entry(d).or_insert(w)
    }
}

fn twelfths(x: i64) -> BigRational {
    BigRational::new(BigInt::from(x), BigInt::from(12))
}

/// Hurwitz class number `H(D)`, with `H(0) = -1/12`.
pub fn hurwitz_class_number(d: i64) -> Result<BigRational> {
    if d < 0 {
        return Err(Error::Negative(d.to_string()));
    }
    Ok(twelfths(HurwitzTable::global().get(d as u64).hurwitz12))
}

/// Weighted count of primitive reduced forms of discriminant `-D`.
pub fn primitive_class_number(d: i64) -> Result<BigRational> {
    if d < 0 {
        return Err(Error::Negative(d.to_string()));
    }
    Ok(twelfths(HurwitzTable::global().get(d as u64).primitive12))
}
