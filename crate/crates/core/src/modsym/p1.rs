use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest level for which the `N x N` lookup table is built.
pub const MAX_P1_LEVEL: u64 = 4096;

/// A point `(c:d)` of `P^1(Z/N)`, in canonical form: the lexicographically
/// smallest representative over all unit multiples.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProjectivePoint {
    pub c: u64,
    pub d: u64,
}

/// Enumeration of `P^1(Z/N)` with constant-time index lookup.
#[derive(Debug, Clone)]
pub struct P1List {
    level: u64,
    points: Vec<ProjectivePoint>,
    index: Vec<u32>,
}

const NONE: u32 = u32::MAX;

impl P1List {
    pub fn new(level: u64) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidLevel("0".into()));
        }
        if level > MAX_P1_LEVEL {
            return Err(Error::ResourceCap { what: "P1 level", value: level as u128, cap: MAX_P1_LEVEL as u128 });
        }
        let n = level as usize;
        if n == 1 {
            return Ok(P1List { level, points: vec![ProjectivePoint { c: 0, d: 0 }], index: vec![0] });
        }
        let units: Vec<usize> = (1..n).filter(|u| u.gcd(&n) == 1).collect();
        let mut index = vec![NONE; n * n];
        let mut points = Vec::new();
        for c in 0..n {
            for d in 0..n {
                if index[c * n + d] != NONE || c.gcd(&d).gcd(&n) != 1 {
                    continue;
                }
                let id = points.len() as u32;
                points.push(ProjectivePoint { c: c as u64, d: d as u64 });
                for &u in &units {
                    index[(u * c % n) * n + u * d % n] = id;
                }
            }
        }
        Ok(P1List { level, points, index })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        &self.points
    }

    pub fn point(&self, i: usize) -> ProjectivePoint {
        self.points[i]
    }

    /// Index of `(c:d)` for arbitrary integers, `None` if `gcd(c, d, N) > 1`.
    #[inline]
    pub fn index_of(&self, c: i64, d: i64) -> Option<usize> {
        let n = self.level as i64;
        let (c, d) = (c.rem_euclid(n) as usize, d.rem_euclid(n) as usize);
        let id = self.index[c * self.level as usize + d];
        (id != NONE).then_some(id as usize)
    }

    /// Index of `(c:d) * [[a, b], [e, f]] = (ca + de : cb + df)`.
    #[inline]
    pub fn act(&self, i: usize, m: [i64; 4]) -> Option<usize> {
        let p = self.points[i];
        let n = self.level as i128;
        let (c, d) = (p.c as i128, p.d as i128);
        let u = (c * m[0] as i128 + d * m[2] as i128).rem_euclid(n);
        let v = (c * m[1] as i128 + d * m[3] as i128).rem_euclid(n);
        self.index_of(u as i64, v as i64)
    }
}

/// Canonical representative of `(c:d)` in `P^1(Z/N)`.
pub fn p1_normalize(c: i64, d: i64, level: u64) -> Result<ProjectivePoint> {
    if level == 0 {
        return Err(Error::InvalidLevel("0".into()));
    }
    let n = level as i64;
    let (c, d) = (c.rem_euclid(n), d.rem_euclid(n));
    if level == 1 {
        return Ok(ProjectivePoint { c: 0, d: 0 });
    }
    if c.gcd(&d).gcd(&n) != 1 {
        return Err(Error::NotCoprime { n: format!("({c}, {d})"), level: level.to_string() });
    }
    let best = (1..n)
        .filter(|u| u.gcd(&n) == 1)
        .map(|u| ((u * c) % n, (u * d) % n))
        .min()
        .unwrap();
    Ok(ProjectivePoint { c: best.0 as u64, d: best.1 as u64 })
}

/// All points of `P^1(Z/N)`, `psi(N)` of them.
pub fn p1_list(level: u64) -> Result<Vec<ProjectivePoint>> {
    Ok(P1List::new(level)?.points)
}

/// Integers `(c', d') = (c, d) mod N` with `gcd(c', d') = 1`, completed to
/// `[[a, b], [c', d']]` in `SL_2(Z)`.
pub fn lift_to_sl2(p: ProjectivePoint, level: u64) -> [i64; 4] {
    let n = level as i64;
    let c = if p.c == 0 { n } else { p.c as i64 };
    let mut d = p.d as i64;
    while c.gcd(&d) != 1 {
        d += n;
    }
    let e = d.extended_gcd(&c);
    debug_assert_eq!(e.gcd, 1);
    // a d - b c = 1 with a = x, b = -y where x d + y c = 1
    [e.x, -e.y, c, d]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ntheory::psi_index;

    #[test]
    fn examples() {
        assert_eq!(p1_list(1).unwrap().len(), 1);
        let two = p1_list(2).unwrap();
        assert_eq!(two.len(), 3);
        let mut expected = vec![
            ProjectivePoint { c: 1, d: 0 },
            ProjectivePoint { c: 0, d: 1 },
            ProjectivePoint { c: 1, d: 1 },
        ];
        expected.sort();
        let mut got = two.clone();
        got.sort();
        assert_eq!(got, expected);
        assert_eq!(p1_normalize(2, 3, 5).unwrap(), p1_normalize(4, 6, 5).unwrap());
        assert!(p1_normalize(2, 4, 6).is_err());
    }

    #[test]
    fn size_is_psi_and_canonical_forms_are_fixed() {
        for n in 1..=120u64 {
            let list = P1List::new(n).unwrap();
            assert_eq!(list.len() as u64, psi_index(n).unwrap(), "N = {n}");
            for (i, p) in list.points().iter().enumerate() {
                assert_eq!(p1_normalize(p.c as i64, p.d as i64, n).unwrap(), *p);
                assert_eq!(list.index_of(p.c as i64, p.d as i64), Some(i));
            }
        }
    }

    #[test]
    fn lifts_are_in_sl2() {
        for n in [1u64, 2, 6, 11, 12, 30, 78] {
            for p in p1_list(n).unwrap() {
                let [a, b, c, d] = lift_to_sl2(p, n);
                assert_eq!(a * d - b * c, 1);
                let list = P1List::new(n).unwrap();
                assert_eq!(list.index_of(c, d), list.index_of(p.c as i64, p.d as i64));
            }
        }
    }
}
