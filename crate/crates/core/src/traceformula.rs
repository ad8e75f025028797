//! Traces of Hecke operators `T_n` on `S_k(Gamma0(N))` for `gcd(n, N) = 1`,
//! dimension formulas, and recovery of leading characteristic-polynomial
//! coefficients of `T_p` from traces of `T_{p^j}`.
//!
//! The trace is assembled as `A1 - A2 - A3 + A4` (identity, elliptic,
//! hyperbolic and weight-2 correction terms). Every term is carried scaled
//! by 12 so the class-number weights `1/2`, `1/3` stay integral; the final
//! division by 12 is checked.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ntheory::{
    count_quadratic_solutions, divisors, euler_phi, is_perfect_square, is_prime, isqrt,
    kronecker_prime, prime_divisors, psi_index, residue_valuation, sigma1_coprime, valuation_int,
    HurwitzTable, Residue, Valuation,
};

/// Discriminants up to this bound are served from a bulk-enumerated table.
const DENSE_HURWITZ_LIMIT: u64 = 1 << 21;

/// A space of cusp forms `S_k(Gamma0(N))`, optionally paired with a prime
/// `p` not dividing `N` (for questions about level `Np`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SpaceSpec {
    level: u64,
    weight: u32,
    prime: Option<u64>,
}

impl SpaceSpec {
    pub fn new(level: u64, weight: u32) -> Result<Self> {
        if level == 0 {
            return Err(Error::InvalidLevel(level.to_string()));
        }
        if weight < 2 || weight % 2 == 1 {
            return Err(Error::InvalidWeight(weight.to_string()));
        }
        Ok(SpaceSpec { level, weight, prime: None })
    }

    pub fn with_prime(self, p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        if self.level % p == 0 {
            return Err(Error::PrimeDividesLevel { p, level: self.level });
        }
        Ok(SpaceSpec { prime: Some(p), ..self })
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn prime(&self) -> Option<u64> {
        self.prime
    }
}

/// Result of a trace computation: an exact integer or a residue class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceValue {
    Exact(BigInt),
    Modular(Residue),
}

impl TraceValue {
    pub fn as_exact(&self) -> Option<&BigInt> {
        match self {
            TraceValue::Exact(v) => Some(v),
            TraceValue::Modular(_) => None,
        }
    }

    pub fn as_residue(&self) -> Option<&Residue> {
        match self {
            TraceValue::Modular(r) => Some(r),
            TraceValue::Exact(_) => None,
        }
    }
}

/// Commutative ring the trace is assembled in: `Z`, or `Z/MZ`.
trait Ring: Sync {
    type E: Clone + Send;
    fn zero(&self) -> Self::E;
    fn from_i64(&self, x: i64) -> Self::E;
    fn from_big(&self, x: &BigInt) -> Self::E;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul_i64(&self, a: &Self::E, k: i64) -> Self::E;

    fn pow(&self, base: u64, exp: u64) -> Self::E {
        let mut acc = self.from_i64(1);
        let mut b = self.from_big(&BigInt::from(base));
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        acc
    }
}

struct Integers;

impl Ring for Integers {
    type E = BigInt;
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn from_i64(&self, x: i64) -> BigInt {
        BigInt::from(x)
    }
    fn from_big(&self, x: &BigInt) -> BigInt {
        x.clone()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn mul_i64(&self, a: &BigInt, k: i64) -> BigInt {
        a * k
    }
    fn pow(&self, base: u64, exp: u64) -> BigInt {
        num_traits::pow::pow(BigInt::from(base), exp as usize)
    }
}

/// `Z/MZ` with `M < 2^62`, so sums of two residues never overflow.
struct SmallModulus(u64);

impl SmallModulus {
    fn reduce_i128(&self, x: i128) -> u64 {
        x.rem_euclid(self.0 as i128) as u64
    }
}

impl Ring for SmallModulus {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn from_i64(&self, x: i64) -> u64 {
        self.reduce_i128(x as i128)
    }
    fn from_big(&self, x: &BigInt) -> u64 {
        x.mod_floor(&BigInt::from(self.0)).to_u64().unwrap()
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.0 {
            s - self.0
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.0 - b
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.0 as u128) as u64
    }
    fn mul_i64(&self, a: &u64, k: i64) -> u64 {
        self.reduce_i128((*a as i128 * k as i128) % self.0 as i128)
    }
}

struct BigModulus(BigInt);

impl Ring for BigModulus {
    type E = BigInt;
    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn from_i64(&self, x: i64) -> BigInt {
        BigInt::from(x).mod_floor(&self.0)
    }
    fn from_big(&self, x: &BigInt) -> BigInt {
        x.mod_floor(&self.0)
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a + b).mod_floor(&self.0)
    }
    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a - b).mod_floor(&self.0)
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        (a * b).mod_floor(&self.0)
    }
    fn mul_i64(&self, a: &BigInt, k: i64) -> BigInt {
        (a * k).mod_floor(&self.0)
    }
    fn pow(&self, base: u64, exp: u64) -> BigInt {
        BigInt::from(base).modpow(&BigInt::from(exp), &self.0)
    }
}

fn check_weight(k: u32) -> Result<()> {
    if k < 2 || k % 2 == 1 {
        return Err(Error::InvalidWeight(k.to_string()));
    }
    Ok(())
}

fn chebyshev_in<R: Ring>(ring: &R, k: u32, t: i64, n: u64) -> R::E {
    let steps = (k - 2) as usize;
    let mut prev = ring.from_i64(1);
    if steps == 0 {
        return prev;
    }
    let mut cur = ring.from_i64(t);
    let n = n as i64;
    for _ in 1..steps {
        let next = ring.sub(&ring.mul_i64(&cur, t), &ring.mul_i64(&prev, n));
        prev = cur;
        cur = next;
    }
    cur
}

/// `P_k(t, n) = (r^{k-1} - s^{k-1}) / (r - s)` for the roots `r, s` of
/// `X^2 - tX + n`, evaluated by the recursion `U_j = t U_{j-1} - n U_{j-2}`.
pub fn chebyshev_pk(k: u32, t: i64, n: u64, modulus: Option<&BigInt>) -> Result<TraceValue> {
    check_weight(k)?;
    if (t as i128) * (t as i128) >= 4 * n as i128 {
        return Err(Error::Degenerate { t, n });
    }
    match modulus {
        None => Ok(TraceValue::Exact(chebyshev_in(&Integers, k, t, n))),
        Some(m) => {
            let ring = BigModulus(m.clone());
            let v = chebyshev_in(&ring, k, t, n);
            Ok(TraceValue::Modular(Residue::new(v, m.clone())?))
        }
    }
}

/// Number of elliptic points of order 2 on `X0(N)`.
pub fn nu2(level: u64) -> u64 {
    if level % 4 == 0 {
        return 0;
    }
    prime_divisors(level)
        .into_iter()
        .map(|p| (1 + kronecker_prime(-4, p)) as u64)
        .product()
}

/// Number of elliptic points of order 3 on `X0(N)`.
pub fn nu3(level: u64) -> u64 {
    if level % 9 == 0 {
        return 0;
    }
    prime_divisors(level)
        .into_iter()
        .map(|p| (1 + kronecker_prime(-3, p)) as u64)
        .product()
}

/// Number of cusps of `X0(N)`.
pub fn nu_infinity(level: u64) -> u64 {
    divisors(level)
        .into_iter()
        .map(|d| euler_phi(d.gcd(&(level / d))).unwrap())
        .sum()
}

/// Genus of `X0(N)`.
pub fn genus(level: u64) -> Result<u64> {
    let psi = psi_index(level)? as i64;
    let twelve_g =
        12 + psi - 3 * nu2(level) as i64 - 4 * nu3(level) as i64 - 6 * nu_infinity(level) as i64;
    debug_assert_eq!(twelve_g % 12, 0);
    Ok((twelve_g / 12) as u64)
}

/// `dim S_k(Gamma0(N))` from the genus and elliptic-point data.
pub fn dim_cusp_forms(space: &SpaceSpec) -> Result<u64> {
    let level = space.level;
    let k = space.weight as i64;
    check_weight(space.weight)?;
    let g = genus(level)? as i64;
    if k == 2 {
        return Ok(g as u64);
    }
    let dim = (k - 1) * (g - 1)
        + (k / 2 - 1) * nu_infinity(level) as i64
        + nu2(level) as i64 * (k / 4)
        + nu3(level) as i64 * (k / 3);
    Ok(dim as u64)
}

/// Dimension of the `p`-new subspace of `S_k(Gamma0(Np))`.
pub fn p_new_dimension(space: &SpaceSpec) -> Result<u64> {
    let p = space
        .prime
        .ok_or_else(|| Error::InvalidArgument("space has no auxiliary prime".into()))?;
    let base = dim_cusp_forms(space)?;
    let full = dim_cusp_forms(&SpaceSpec::new(space.level * p, space.weight)?)?;
    full.checked_sub(2 * base).ok_or_else(|| {
        Error::Consistency(format!("dim S_k(Np) = {full} < 2 dim S_k(N) = {}", 2 * base))
    })
}

/// Level-`N` weight of the elliptic class `(t, f)`:
/// `psi(N)/psi(N/g) * #{x mod N : x^2 - t x + n = 0 mod N g} `, `g = gcd(f, N)`.
fn elliptic_multiplicity(t: i64, f: u64, n: u64, level: u64) -> i64 {
    if level == 1 {
        return 1;
    }
    let g = f.gcd(&level);
    let ratio = psi_index(level).unwrap() / psi_index(level / g).unwrap();
    let sols = count_quadratic_solutions(t, n as i64, level * g);
    debug_assert_eq!(sols % g, 0);
    (ratio * (sols / g)) as i64
}

/// `sum_f 6 h_w((4n - t^2)/f^2) mu(t, f)`, i.e. twelve times half the
/// inner elliptic sum.
fn elliptic_inner(table: &HurwitzTable, t: i64, n: u64, level: u64) -> i64 {
    let d0 = 4 * n - (t * t) as u64;
    if level == 1 {
        return table.get(d0).hurwitz12 / 2;
    }
    let mut acc = 0i64;
    for f in 1..=isqrt(d0) {
        if d0 % (f * f) != 0 {
            continue;
        }
        let d = d0 / (f * f);
        if d % 4 == 1 || d % 4 == 2 {
            continue;
        }
        let hw = table.get(d).primitive12;
        if hw == 0 {
            continue;
        }
        acc += hw / 2 * elliptic_multiplicity(t, f, n, level);
    }
    acc
}

fn hyperbolic_weight(d: u64, n: u64, level: u64) -> u64 {
    let diff = (n / d).abs_diff(d);
    divisors(level)
        .into_iter()
        .filter_map(|c| {
            let g = c.gcd(&(level / c));
            (diff % g == 0).then(|| euler_phi(g).unwrap())
        })
        .sum()
}

/// Twelve times the trace, in the given ring.
fn twelve_trace<R: Ring>(ring: &R, space: &SpaceSpec, n: u64) -> R::E {
    let level = space.level;
    let k = space.weight;
    let psi = psi_index(level).unwrap();
    let table = HurwitzTable::global();
    if 4 * n <= DENSE_HURWITZ_LIMIT {
        table.ensure_dense(4 * n);
    }

    let mut total = ring.zero();
    if is_perfect_square(n) {
        let identity = ring.mul_i64(&ring.pow(n, (k / 2 - 1) as u64), ((k - 1) as u64 * psi) as i64);
        total = ring.add(&total, &identity);
    }

    let tmax = isqrt(4 * n - 1) as i64;
    let elliptic = (0..=tmax)
        .into_par_iter()
        .map(|t| {
            let inner = elliptic_inner(table, t, n, level);
            if inner == 0 {
                return ring.zero();
            }
            let mult = if t == 0 { inner } else { 2 * inner };
            ring.mul_i64(&chebyshev_in(ring, k, t, n), mult)
        })
        .reduce(|| ring.zero(), |a, b| ring.add(&a, &b));
    total = ring.sub(&total, &elliptic);

    for d in divisors(n) {
        if d * d > n {
            break;
        }
        let w = hyperbolic_weight(d, n, level) as i64;
        let scale = if d * d == n { 6 * w } else { 12 * w };
        let term = ring.mul_i64(&ring.pow(d, (k - 1) as u64), scale);
        total = ring.sub(&total, &term);
    }

    if k == 2 {
        let s = sigma1_coprime(n, level).unwrap() as i64;
        total = ring.add(&total, &ring.from_i64(12 * s));
    }
    total
}

fn check_trace_args(space: &SpaceSpec, n: u64) -> Result<()> {
    check_weight(space.weight)?;
    if n == 0 {
        return Err(Error::InvalidArgument("n must be positive".into()));
    }
    if n.gcd(&space.level) != 1 {
        return Err(Error::NotCoprime { n: n.to_string(), level: space.level.to_string() });
    }
    if n > (1u64 << 40) {
        return Err(Error::ResourceCap { what: "n", value: n as u128, cap: 1 << 40 });
    }
    Ok(())
}

/// Exact `Tr T_n` on `S_k(Gamma0(N))`.
pub fn trace_exact(space: &SpaceSpec, n: u64) -> Result<BigInt> {
    check_trace_args(space, n)?;
    let twelve = twelve_trace(&Integers, space, n);
    let (q, r) = twelve.div_rem(&BigInt::from(12));
    if !r.is_zero() {
        return Err(Error::NonIntegral(format!(
            "12 Tr T_{n} = {twelve} on S_{}(Gamma0({}))",
            space.weight, space.level
        )));
    }
    Ok(q)
}

/// `Tr T_n mod M`, computed in `Z/144M` and divided by 12 at the end.
pub fn trace_mod(space: &SpaceSpec, n: u64, modulus: &BigInt) -> Result<Residue> {
    check_trace_args(space, n)?;
    if *modulus <= BigInt::one() {
        return Err(Error::InvalidArgument(format!("modulus {modulus} must exceed 1")));
    }
    let wide = modulus * 144u32;
    let twelve = match wide.to_u64().filter(|&m| m < (1u64 << 62)) {
        Some(m) => BigInt::from(twelve_trace(&SmallModulus(m), space, n)),
        None => twelve_trace(&BigModulus(wide.clone()), space, n),
    };
    let (q, r) = twelve.div_rem(&BigInt::from(12));
    if !r.is_zero() {
        return Err(Error::NonIntegral(format!("12 Tr T_{n} = {twelve} mod {wide}")));
    }
    Residue::new(q, modulus.clone())
}

/// `Tr T_n`, exact or modulo `modulus`.
pub fn trace_tn(space: &SpaceSpec, n: u64, modulus: Option<&BigInt>) -> Result<TraceValue> {
    match modulus {
        None => trace_exact(space, n).map(TraceValue::Exact),
        Some(m) => trace_mod(space, n, m).map(TraceValue::Modular),
    }
}

/// Valuation information for one coefficient of a prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ValuationBound {
    Exact(Valuation),
    /// The residue vanishes modulo `p^m`; only `v >= m` is known.
    AtLeast(u64),
}

/// Leading coefficients `a_1..a_m` of a monic characteristic polynomial
/// `X^dim + sum a_i X^{dim - i}`, exact or reduced modulo a prime power.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientPrefix {
    pub dim: u64,
    pub coeffs: Vec<BigInt>,
    pub modulus: Option<BigInt>,
}

impl CoefficientPrefix {
    /// Valuation of `a_i` (1-based).
    pub fn valuation(&self, i: usize, p: u64) -> Result<ValuationBound> {
        let a = self
            .coeffs
            .get(i.wrapping_sub(1))
            .ok_or_else(|| Error::InvalidArgument(format!("coefficient a_{i} not in prefix")))?;
        match &self.modulus {
            None => {
                let v = valuation_int(a, p).map_or(Valuation::Infinite, |v| Valuation::from_int(v as i64));
                Ok(ValuationBound::Exact(v))
            }
            Some(m) => {
                let r = Residue::new(a.clone(), m.clone())?;
                match residue_valuation(&r, p)? {
                    Valuation::Infinite => {
                        Ok(ValuationBound::AtLeast(valuation_int(m, p).unwrap_or(0)))
                    }
                    v => Ok(ValuationBound::Exact(v)),
                }
            }
        }
    }
}

/// Power sums `Tr(T_p^i)`, `i = 1..=traces.len()-1`, from `Tr T_{p^j}`
/// (`traces[0] = dim`), expanding `T_p^i` in the `T_{p^j}` basis through
/// `T_p T_{p^j} = T_{p^{j+1}} + p^{k-1} T_{p^{j-1}}`.
pub fn power_sums_from_hecke_traces(
    traces: &[BigInt],
    p: u64,
    k: u32,
    modulus: Option<&BigInt>,
) -> Vec<BigInt> {
    let reduce = |x: BigInt| match modulus {
        Some(m) => x.mod_floor(m),
        None => x,
    };
    let pk1 = reduce(num_traits::pow::pow(BigInt::from(p), (k - 1) as usize));
    let depth = traces.len().saturating_sub(1);
    // coeffs[j] = coefficient of T_{p^j} in T_p^i
    let mut coeffs = vec![BigInt::one()];
    let mut sums = Vec::with_capacity(depth);
    for _ in 1..=depth {
        let mut next = vec![BigInt::zero(); coeffs.len() + 1];
        for (j, c) in coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            next[j + 1] += c;
            if j >= 1 {
                next[j - 1] += reduce(c * &pk1);
            }
        }
        coeffs = next.into_iter().map(reduce).collect();
        let s: BigInt = coeffs.iter().zip(traces).map(|(c, t)| c * t).sum();
        sums.push(reduce(s));
    }
    sums
}

/// Newton's identities over `Z`: `i a_i = -sum_{j=1..i} q_j a_{i-j}`.
pub fn newton_coefficients(power_sums: &[BigInt]) -> Result<Vec<BigInt>> {
    let mut a = vec![BigInt::one()];
    for i in 1..=power_sums.len() {
        let s: BigInt = (1..=i).map(|j| &power_sums[j - 1] * &a[i - j]).sum();
        let (q, r) = (-s).div_rem(&BigInt::from(i));
        if !r.is_zero() {
            return Err(Error::NonIntegral(format!("a_{i} from power sums")));
        }
        a.push(q);
    }
    a.remove(0);
    Ok(a)
}

/// Newton's identities modulo `modulus`; each `i` must be invertible.
pub fn newton_coefficients_mod(power_sums: &[BigInt], modulus: &BigInt) -> Result<Vec<BigInt>> {
    let mut a = vec![BigInt::one()];
    for i in 1..=power_sums.len() {
        let s: BigInt = (1..=i).map(|j| &power_sums[j - 1] * &a[i - j]).sum();
        let inv = Residue::new(BigInt::from(i), modulus.clone())?
            .inverse()
            .ok_or_else(|| Error::Precondition(format!("{i} is not invertible modulo {modulus}")))?;
        a.push((-s * inv.value()).mod_floor(modulus));
    }
    a.remove(0);
    Ok(a)
}

/// Leading `depth` coefficients of the characteristic polynomial of `T_p`
/// on `S_k(Gamma0(N))`, exactly or modulo a power of `p`.
pub fn charpoly_prefix(
    space: &SpaceSpec,
    p: u64,
    depth: usize,
    modulus: Option<&BigInt>,
) -> Result<CoefficientPrefix> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.to_string()));
    }
    if space.level % p == 0 {
        return Err(Error::PrimeDividesLevel { p, level: space.level });
    }
    let dim = dim_cusp_forms(space)?;
    if depth as u64 > dim {
        return Err(Error::InvalidArgument(format!("depth {depth} exceeds dimension {dim}")));
    }
    if let Some(m) = modulus {
        let mut rest = m.clone();
        let bp = BigInt::from(p);
        while rest > BigInt::one() && (&rest % &bp).is_zero() {
            rest /= &bp;
        }
        if !rest.is_one() || m <= &BigInt::one() {
            return Err(Error::InvalidArgument(format!("modulus {m} is not a power of {p}")));
        }
        if depth as u64 >= p {
            return Err(Error::Precondition(format!(
                "depth {depth} >= p = {p}: 1..depth are not all units"
            )));
        }
    }
    let mut traces = vec![BigInt::from(dim)];
    let mut pj = 1u64;
    for _ in 1..=depth {
        pj = pj
            .checked_mul(p)
            .ok_or(Error::ResourceCap { what: "p^depth", value: u128::MAX, cap: u64::MAX as u128 })?;
        let t = match modulus {
            None => trace_exact(space, pj)?,
            Some(m) => trace_mod(space, pj, m)?.value().clone(),
        };
        traces.push(t);
    }
    let sums = power_sums_from_hecke_traces(&traces, p, space.weight, modulus);
    let coeffs = match modulus {
        None => newton_coefficients(&sums)?,
        Some(m) => newton_coefficients_mod(&sums, m)?,
    };
    Ok(CoefficientPrefix { dim, coeffs, modulus: modulus.cloned() })
}

/// Number of decimal digits of `|x|` and its leading `count` digits.
pub fn leading_digits(x: &BigInt, count: usize) -> (usize, String) {
    let s = x.abs().to_string();
    (s.len(), s.chars().take(count).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn space(level: u64, k: u32) -> SpaceSpec {
        SpaceSpec::new(level, k).unwrap()
    }

    /// Coefficients of `q prod (1 - q^j)^24` up to `q^bound`.
    fn delta_coefficients(bound: usize) -> Vec<i128> {
        let mut series = vec![0i128; bound + 1];
        series[0] = 1;
        for j in 1..=bound {
            for _ in 0..24 {
                for i in (j..=bound).rev() {
                    series[i] -= series[i - j];
                }
            }
        }
        let mut out = vec![0i128; bound + 1];
        for i in 1..=bound {
            out[i] = series[i - 1];
        }
        out
    }

    #[test]
    fn chebyshev_examples() {
        let k2 = chebyshev_pk(2, 3, 5, None).unwrap();
        assert_eq!(k2, TraceValue::Exact(BigInt::from(1)));
        let k4 = chebyshev_pk(4, 3, 5, None).unwrap();
        assert_eq!(k4, TraceValue::Exact(BigInt::from(9 - 5)));
        let k12 = chebyshev_pk(12, 1, 1, None).unwrap();
        assert_eq!(k12, TraceValue::Exact(BigInt::from(-1)));
        assert!(matches!(chebyshev_pk(12, 2, 1, None), Err(Error::Degenerate { .. })));
        assert!(chebyshev_pk(5, 0, 1, None).is_err());
        let m = BigInt::from(7);
        let r = chebyshev_pk(12, 1, 1, Some(&m)).unwrap();
        assert_eq!(r.as_residue().unwrap().value(), &BigInt::from(6));
    }

    #[test]
    fn chebyshev_root_bound() {
        for k in (2..=24u32).step_by(2) {
            for n in 1..30u64 {
                let tmax = isqrt(4 * n - 1) as i64;
                for t in -tmax..=tmax {
                    let v = chebyshev_in(&Integers, k, t, n);
                    let bound = BigInt::from(k - 1)
                        * num_traits::pow::pow(BigInt::from(n), ((k - 2) / 2) as usize);
                    assert!(v.abs() <= bound, "k={k} t={t} n={n}");
                }
            }
        }
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(dim_cusp_forms(&space(1, 16)).unwrap(), 1);
        assert_eq!(dim_cusp_forms(&space(1, 12)).unwrap(), 1);
        assert_eq!(dim_cusp_forms(&space(1, 3438)).unwrap(), 286);
        assert_eq!(dim_cusp_forms(&space(59, 16)).unwrap(), 74);
        assert_eq!(genus(59).unwrap(), 5);
        assert_eq!(genus(11).unwrap(), 1);
        assert_eq!(nu_infinity(59), 2);
        assert_eq!(dim_cusp_forms(&space(14, 6)).unwrap(), 8);
        assert!(SpaceSpec::new(1, 3).is_err());
        assert!(SpaceSpec::new(0, 4).is_err());
    }

    #[test]
    fn p_new_examples() {
        let s = space(1, 16).with_prime(59).unwrap();
        assert_eq!(p_new_dimension(&s).unwrap(), 72);
        let s = space(1, 12).with_prime(59).unwrap();
        let full = dim_cusp_forms(&space(59, 12)).unwrap();
        assert_eq!(p_new_dimension(&s).unwrap(), full - 2);
        let s = space(1, 12).with_prime(2).unwrap();
        assert_eq!(p_new_dimension(&s).unwrap(), dim_cusp_forms(&space(2, 12)).unwrap() - 2);
        assert!(space(5, 6).with_prime(5).is_err());
    }

    #[test]
    fn trace_examples() {
        assert_eq!(trace_exact(&space(1, 16), 1).unwrap(), BigInt::from(1));
        assert_eq!(trace_exact(&space(1, 12), 2).unwrap(), BigInt::from(-24));
        assert!(matches!(trace_exact(&space(6, 4), 4), Err(Error::NotCoprime { .. })));
    }

    #[test]
    fn trace_one_is_dimension() {
        for level in 1..=30 {
            for k in (2..=24).step_by(2) {
                let s = space(level, k);
                assert_eq!(
                    trace_exact(&s, 1).unwrap(),
                    BigInt::from(dim_cusp_forms(&s).unwrap()),
                    "N={level} k={k}"
                );
            }
        }
    }

    #[test]
    fn delta_expansion_matches_weight_12_traces() {
        let tau = delta_coefficients(100);
        for n in 1..=100u64 {
            assert_eq!(trace_exact(&space(1, 12), n).unwrap(), BigInt::from(tau[n as usize]), "n={n}");
        }
    }

    #[test]
    fn exact_and_modular_agree() {
        let moduli = [BigInt::from(7), BigInt::from(59 * 59 * 59), BigInt::from(1_000_003), BigInt::from(1u128 << 70)];
        for level in [1u64, 3, 7, 11, 12, 20] {
            for k in [2u32, 4, 12, 26] {
                for n in [1u64, 2, 5, 9, 25, 49, 31] {
                    if n.gcd(&level) != 1 {
                        continue;
                    }
                    let s = space(level, k);
                    let exact = trace_exact(&s, n).unwrap();
                    for m in &moduli {
                        assert_eq!(trace_mod(&s, n, m).unwrap().value(), &exact.mod_floor(m));
                    }
                }
            }
        }
    }

    #[test]
    fn one_dimensional_eigenvalues_are_multiplicative() {
        for k in [12u32, 16, 18, 20, 22] {
            let s = space(1, k);
            for (m, n) in [(2u64, 3u64), (3, 5), (4, 9), (2, 7), (5, 8)] {
                let lhs = trace_exact(&s, m * n).unwrap();
                let rhs = trace_exact(&s, m).unwrap() * trace_exact(&s, n).unwrap();
                assert_eq!(lhs, rhs, "k={k} m={m} n={n}");
            }
        }
    }

    #[test]
    fn newton_synthetic() {
        let a = newton_coefficients(&[BigInt::from(3), BigInt::from(5)]).unwrap();
        assert_eq!(a, vec![BigInt::from(-3), BigInt::from(2)]);
        let m = BigInt::from(125);
        let a = newton_coefficients_mod(&[BigInt::from(3), BigInt::from(5)], &m).unwrap();
        assert_eq!(a, vec![BigInt::from(122), BigInt::from(2)]);
    }

    #[test]
    fn weight_12_prefix() {
        let p = charpoly_prefix(&space(1, 12), 2, 1, None).unwrap();
        assert_eq!(p.coeffs, vec![BigInt::from(24)]);
        assert!(charpoly_prefix(&space(1, 12), 2, 2, None).is_err());
        let m = BigInt::from(8);
        assert!(charpoly_prefix(&space(1, 24), 2, 2, Some(&m)).is_err());
    }
}
