use std::collections::HashMap;

use num_integer::Integer;

use crate::ntheory::inv_mod;

/// A cusp `u/v` in lowest terms with `v >= 0` (and `1/0` for infinity).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Cusp {
    pub u: i64,
    pub v: i64,
}

impl Cusp {
    pub fn new(u: i64, v: i64) -> Self {
        assert!(u != 0 || v != 0, "0/0 is not a cusp");
        let g = u.gcd(&v);
        let (mut u, mut v) = (u / g, v / g);
        if v < 0 || (v == 0 && u < 0) {
            u = -u;
            v = -v;
        }
        Cusp { u, v }
    }

    pub fn negate(self) -> Self {
        Cusp::new(-self.u, self.v)
    }

    fn s(self) -> i64 {
        if self.v <= 1 {
            if self.v == 0 {
                1
            } else {
                0
            }
        } else {
            inv_mod(self.u, self.v).unwrap()
        }
    }
}

/// `Gamma0(N)`-equivalence: `u1/v1 ~ u2/v2` iff `s1 v2 = s2 v1` modulo
/// `gcd(v1 v2, N)` where `s_j u_j = 1 (mod v_j)`.
pub fn cusps_equivalent(a: Cusp, b: Cusp, level: u64) -> bool {
    if a == b {
        return true;
    }
    let n = level as i128;
    let g = ((a.v as i128 * b.v as i128).gcd(&n)).max(1);
    let lhs = a.s() as i128 * b.v as i128 - b.s() as i128 * a.v as i128;
    lhs.rem_euclid(g) == 0
}

/// Cusp classes discovered so far, with cached lookups.
#[derive(Debug, Clone)]
pub struct CuspClasses {
    level: u64,
    reps: Vec<Cusp>,
    cache: HashMap<Cusp, usize>,
}

impl CuspClasses {
    pub fn new(level: u64) -> Self {
        CuspClasses { level, reps: Vec::new(), cache: HashMap::new() }
    }

    pub fn class_of(&mut self, c: Cusp) -> usize {
        if let Some(&i) = self.cache.get(&c) {
            return i;
        }
        let level = self.level;
        let i = match self.reps.iter().position(|&r| cusps_equivalent(r, c, level)) {
            Some(i) => i,
            None => {
                self.reps.push(c);
                self.reps.len() - 1
            }
        };
        self.cache.insert(c, i);
        i
    }

    pub fn representatives(&self) -> &[Cusp] {
        &self.reps
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::traceformula::nu_infinity;

    fn all_classes(level: u64) -> CuspClasses {
        let mut classes = CuspClasses::new(level);
        let n = level as i64;
        classes.class_of(Cusp::new(1, 0));
        for v in 1..=2 * n {
            for u in -n..=n {
                if u.gcd(&v) == 1 {
                    classes.class_of(Cusp::new(u, v));
                }
            }
        }
        classes
    }

    #[test]
    fn class_count_is_nu_infinity() {
        for n in 1..=60u64 {
            assert_eq!(all_classes(n).len() as u64, nu_infinity(n), "N = {n}");
        }
    }

    #[test]
    fn equivalence_is_symmetric_and_transitive() {
        for n in [12u64, 18, 25, 30] {
            let cusps: Vec<Cusp> =
                (1..=n as i64).flat_map(|v| (0..v.max(1) * 2).filter(move |u| u.gcd(&v) == 1).map(move |u| Cusp::new(u, v))).collect();
            for &a in &cusps {
                for &b in &cusps {
                    assert_eq!(cusps_equivalent(a, b, n), cusps_equivalent(b, a, n));
                }
            }
            for &a in cusps.iter().take(12) {
                for &b in cusps.iter().take(20) {
                    for &c in cusps.iter().take(20) {
                        if cusps_equivalent(a, b, n) && cusps_equivalent(b, c, n) {
                            assert!(cusps_equivalent(a, c, n));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn translates_are_equivalent() {
        // u/v and (u + v t)/v, and g(u/v) for g in Gamma0(N)
        let n = 20u64;
        for v in 1..15i64 {
            for u in 0..v {
                if u.gcd(&v) != 1 {
                    continue;
                }
                let c = Cusp::new(u, v);
                assert!(cusps_equivalent(c, Cusp::new(u + 3 * v, v), n));
                let (a, b, cc, d) = (1i64, 2i64, 20i64, 41i64);
                assert_eq!(a * d - b * cc, 1);
                assert!(cusps_equivalent(c, Cusp::new(a * u + b * v, cc * u + d * v), n));
            }
        }
    }
}
