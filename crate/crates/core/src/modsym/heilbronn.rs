use crate::error::{Error, Result};
use crate::ntheory::is_prime;

/// `round(a / b)`, halves away from zero.
fn round_div(a: i64, b: i64) -> i64 {
    let (q, r) = (a / b, a % b);
    if 2 * r.abs() >= b.abs() {
        q + if (a < 0) == (b < 0) { 1 } else { -1 }
    } else {
        q
    }
}

/// Cremona's Heilbronn matrices of determinant `l`, each as
/// `[a, b, c, d]` for `[[a, b], [c, d]]`, built from nearest-integer
/// continued fractions of `r / l`.
pub fn heilbronn_matrices(l: u64) -> Result<Vec<[i64; 4]>> {
    if !is_prime(l) {
        return Err(Error::NotPrime(l.to_string()));
    }
    if l == 2 {
        return Ok(vec![[1, 0, 0, 2], [2, 0, 0, 1], [2, 1, 0, 1], [1, 0, 1, 2]]);
    }
    let p = l as i64;
    let mut out = vec![[1, 0, 0, p]];
    let half = (p - 1) / 2;
    for r in -half..=half {
        let (mut x1, mut x2, mut y1, mut y2) = (p, -r, 0i64, 1i64);
        let (mut a, mut b) = (-p, r);
        out.push([x1, x2, y1, y2]);
        while b != 0 {
            let q = round_div(a, b);
            let c = a - b * q;
            a = -b;
            b = c;
            let x3 = q * x2 - x1;
            x1 = x2;
            x2 = x3;
            let y3 = q * y2 - y1;
            y1 = y2;
            y2 = y3;
            out.push([x1, x2, y1, y2]);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::Ratio;

    #[test]
    fn determinants() {
        for l in [2u64, 3, 5, 7, 11, 13, 59, 101] {
            for m in heilbronn_matrices(l).unwrap() {
                assert_eq!(m[0] * m[3] - m[1] * m[2], l as i64, "l = {l}, {m:?}");
            }
        }
        assert!(heilbronn_matrices(9).is_err());
    }

    #[test]
    fn two_is_explicit() {
        let h = heilbronn_matrices(2).unwrap();
        assert_eq!(h.len(), 4);
        assert!(h.contains(&[1, 0, 0, 2]) && h.contains(&[2, 0, 0, 1]));
    }

    /// Length of the nearest-integer continued fraction expansion of
    /// `r / p`, counted on exact rationals.
    fn expansion_length(r: i64, p: i64) -> usize {
        let mut x = Ratio::new(r, p);
        let mut steps = 0;
        while *x.numer() != 0 {
            let y = x.recip();
            let q = y.round();
            x = y - q;
            steps += 1;
        }
        steps
    }

    #[test]
    fn count_matches_recount() {
        for l in [3u64, 5, 7, 11, 13, 29] {
            let p = l as i64;
            let half = (p - 1) / 2;
            let expected: usize = 1 + (-half..=half).map(|r| 1 + expansion_length(r, p)).sum::<usize>();
            assert_eq!(heilbronn_matrices(l).unwrap().len(), expected, "l = {l}");
        }
    }

    #[test]
    fn rounding() {
        assert_eq!(round_div(5, 2), 3);
        assert_eq!(round_div(-5, 2), -3);
        assert_eq!(round_div(-7, 3), -2);
        assert_eq!(round_div(7, -2), -4);
        assert_eq!(round_div(-1, 5), 0);
    }
}
