use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ntheory::{is_prime, valuation_int, Valuation};

/// One edge of a Newton polygon. Roots of valuation `+inf` (the factor
/// `X^m` of a polynomial with vanishing trailing coefficients) are kept as
/// an edge of infinite slope.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub slope: Valuation,
    pub length: u64,
}

/// Lower convex hull of `(i, v(a_i))` for `X^d + a_1 X^{d-1} + ... + a_d`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolygon {
    pub p: u64,
    pub degree: usize,
    /// Hull vertices in increasing `i`, from `(0, 0)` to the last nonzero
    /// coefficient.
    pub vertices: Vec<(u64, BigRational)>,
    pub segments: Vec<Segment>,
}

impl NewtonPolygon {
    /// Number of roots of valuation exactly `slope`.
    pub fn roots_with_slope(&self, slope: &Valuation) -> u64 {
        self.segments.iter().filter(|s| &s.slope == slope).map(|s| s.length).sum()
    }
}

/// Newton polygon of a monic polynomial, coefficients in descending order
/// starting with the leading 1.
pub fn newton_polygon(coeffs: &[BigInt], p: u64) -> Result<NewtonPolygon> {
    if coeffs.first().map_or(true, |c| !c.is_one()) {
        return Err(Error::NotMonic);
    }
    let vals: Vec<Valuation> = coeffs
        .iter()
        .map(|c| match valuation_int(c, p) {
            Some(v) => Valuation::from_int(v as i64),
            None => Valuation::Infinite,
        })
        .collect();
    newton_polygon_of_valuations(&vals, p)
}

/// Newton polygon from the valuations `v(a_0) = 0, v(a_1), ..., v(a_d)`.
pub fn newton_polygon_of_valuations(vals: &[Valuation], p: u64) -> Result<NewtonPolygon> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    match vals.first() {
        Some(Valuation::Finite(v)) if v.is_zero() => {}
        _ => return Err(Error::NotMonic),
    }
    let degree = vals.len() - 1;
    let points: Vec<(u64, BigRational)> = vals
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.finite().map(|v| (i as u64, v.clone())))
        .collect();
    // lower hull, collinear points dropped
    let mut hull: Vec<(u64, BigRational)> = Vec::new();
    for pt in points {
        while hull.len() >= 2 {
            let (x1, y1) = &hull[hull.len() - 2];
            let (x2, y2) = &hull[hull.len() - 1];
            // keep (x2, y2) only if it lies strictly below the chord
            let lhs = (y2 - y1) * BigRational::from_integer(BigInt::from(pt.0 - x1));
            let rhs = (&pt.1 - y1) * BigRational::from_integer(BigInt::from(x2 - x1));
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut segments: Vec<Segment> = hull
        .windows(2)
        .map(|w| {
            let len = w[1].0 - w[0].0;
            Segment { slope: Valuation::Finite((&w[1].1 - &w[0].1) / BigRational::from_integer(len.into())), length: len }
        })
        .collect();
    let last = hull.last().map_or(0, |v| v.0);
    if (last as usize) < degree {
        segments.push(Segment { slope: Valuation::Infinite, length: degree as u64 - last });
    }
    Ok(NewtonPolygon { p, degree, vertices: hull, segments })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> Vec<BigInt> {
        c.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn q(n: i64, d: i64) -> Valuation {
        Valuation::Finite(BigRational::new(n.into(), d.into()))
    }

    #[test]
    fn examples() {
        let np = newton_polygon(&poly(&[1, -59]), 59).unwrap();
        assert_eq!(np.segments, vec![Segment { slope: q(1, 1), length: 1 }]);
        let big = BigInt::from(5).pow(15);
        let np = newton_polygon(&[BigInt::one(), BigInt::from(-5), big], 5).unwrap();
        assert_eq!(np.segments, vec![Segment { slope: q(1, 1), length: 1 }, Segment { slope: q(14, 1), length: 1 }]);
        let np = newton_polygon(&poly(&[1, 0, 5]), 5).unwrap();
        assert_eq!(np.segments, vec![Segment { slope: q(1, 2), length: 2 }]);
        assert!(matches!(newton_polygon(&poly(&[2, 1]), 5), Err(Error::NotMonic)));
    }

    #[test]
    fn collinear_points_merge_and_zero_roots_are_infinite() {
        // (X - 5)^3 = X^3 - 15 X^2 + 75 X - 125
        let np = newton_polygon(&poly(&[1, -15, 75, -125]), 5).unwrap();
        assert_eq!(np.segments, vec![Segment { slope: q(1, 1), length: 3 }]);
        assert_eq!(np.vertices.len(), 2);
        let np = newton_polygon(&poly(&[1, 3, 0, 0]), 3).unwrap();
        assert_eq!(np.segments, vec![Segment { slope: q(1, 1), length: 1 }, Segment { slope: Valuation::Infinite, length: 2 }]);
        assert_eq!(np.roots_with_slope(&Valuation::Infinite), 2);
    }
}
