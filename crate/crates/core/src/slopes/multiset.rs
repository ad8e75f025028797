use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::polygon::{newton_polygon, NewtonPolygon};
use crate::error::{Error, Result};
use crate::ntheory::{parse_rational, Valuation};
use crate::modsym::{check_caps, check_charpoly_bits, hecke_charpoly_on_cuspforms, ModSymCaps, ModularSymbols, Sign};
use crate::traceformula::{charpoly_prefix, dim_cusp_forms, p_new_dimension, SpaceSpec};

/// Slopes with multiplicities. Serialized as an object keyed by the
/// slope's rational text, e.g. `{"1": 1, "14": 1, "7": 72}`.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SlopeMultiset {
    pub p: u64,
    counts: BTreeMap<BigRational, u64>,
}

impl SlopeMultiset {
    pub fn new(p: u64) -> Self {
        SlopeMultiset { p, counts: BTreeMap::new() }
    }

    pub fn from_pairs(p: u64, pairs: impl IntoIterator<Item = (BigRational, u64)>) -> Self {
        let mut m = SlopeMultiset::new(p);
        for (s, c) in pairs {
            m.add(s, c);
        }
        m
    }

    pub fn add(&mut self, slope: BigRational, count: u64) {
        if count > 0 {
            *self.counts.entry(slope).or_insert(0) += count;
        }
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BigRational, u64)> {
        self.counts.iter().map(|(s, &c)| (s, c))
    }

    pub fn slopes(&self) -> impl Iterator<Item = &BigRational> {
        self.counts.keys()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }
}

impl fmt::Display for SlopeMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (s, c)) in self.counts.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}:{c}")?;
        }
        write!(f, "}}")
    }
}

#[derive(Serialize, Deserialize)]
struct SlopeMultisetRepr {
    p: u64,
    slopes: BTreeMap<String, u64>,
}

impl Serialize for SlopeMultiset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SlopeMultisetRepr { p: self.p, slopes: self.counts.iter().map(|(k, &v)| (k.to_string(), v)).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SlopeMultiset {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = SlopeMultisetRepr::deserialize(d)?;
        let mut m = SlopeMultiset::new(r.p);
        for (k, v) in r.slopes {
            let s = parse_rational(&k).ok_or_else(|| serde::de::Error::custom(format!("bad slope {k:?}")))?;
            if v == 0 {
                return Err(serde::de::Error::custom(format!("zero multiplicity for slope {k}")));
            }
            m.add(s, v);
        }
        Ok(m)
    }
}

/// `d(k, alpha)`: number of slopes equal to `alpha`.
pub fn d_of_alpha(ms: &SlopeMultiset, alpha: &BigRational) -> u64 {
    ms.counts.get(alpha).copied().unwrap_or(0)
}

/// Backend that produced a `T_p` characteristic polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Engine {
    TraceFormula,
    ModularSymbols,
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::TraceFormula => "trace formula",
            Engine::ModularSymbols => "modular symbols",
        })
    }
}

/// Limits used when routing a space to an engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EngineCaps {
    pub modsym: ModSymCaps,
    /// Largest `p^d` for which the trace formula recovers the whole
    /// `d`-dimensional charpoly from `Tr T_{p^j}`.
    pub max_trace_index: u64,
}

impl Default for EngineCaps {
    fn default() -> Self {
        EngineCaps { modsym: ModSymCaps::default(), max_trace_index: 1 << 40 }
    }
}

/// Picks the engine for the `T_p` charpoly on `S_k(Gamma0(N))`.
pub fn select_engine(space: &SpaceSpec, p: u64, caps: &EngineCaps) -> Result<Engine> {
    let dim = dim_cusp_forms(space)?;
    if dim <= 1 {
        return Ok(Engine::TraceFormula);
    }
    let modsym = check_caps(space, &caps.modsym)
        .and_then(|_| check_charpoly_bits(dim as usize, p, space.weight(), &caps.modsym).map(|_| ()));
    if modsym.is_ok() {
        return Ok(Engine::ModularSymbols);
    }
    let small_index = (dim as u32) < 64 && p.checked_pow(dim as u32).is_some_and(|q| q <= caps.max_trace_index);
    if small_index {
        return Ok(Engine::TraceFormula);
    }
    Err(Error::NoEngine(format!(
        "T_{p} on S_{}(Gamma0({})): dimension {dim}, {}; the trace formula only yields a coefficient prefix here",
        space.weight(),
        space.level(),
        modsym.unwrap_err()
    )))
}

/// Characteristic polynomial of `T_p` on `S_k(Gamma0(N))`, descending
/// coefficients, with the engine that produced it.
pub fn tp_charpoly(space: &SpaceSpec, p: u64, caps: &EngineCaps) -> Result<(Vec<BigInt>, Engine)> {
    let engine = select_engine(space, p, caps)?;
    let coeffs = match engine {
        Engine::TraceFormula => {
            let dim = dim_cusp_forms(space)? as usize;
            let prefix = charpoly_prefix(space, p, dim, None)?;
            std::iter::once(BigInt::from(1)).chain(prefix.coeffs).collect()
        }
        Engine::ModularSymbols => {
            let ms = ModularSymbols::with_caps(space.clone(), Sign::Plus, caps.modsym)?;
            let cp = hecke_charpoly_on_cuspforms(&ms, p)?;
            cp.integer_coeffs()?
        }
    };
    Ok((coeffs, engine))
}

/// `U_p` slopes on `S_k(Gamma0(Np))` together with how they were obtained.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeReport {
    pub level: u64,
    pub p: u64,
    pub weight: u32,
    pub engine: Engine,
    pub tp_polygon: NewtonPolygon,
    pub old_dim: u64,
    pub new_dim: u64,
    pub multiset: SlopeMultiset,
}

/// `U_p` slopes from a `T_p` polygon: an eigenvalue `a` of `T_p` lifts to
/// the two roots of `X^2 - a X + p^{k-1}`; p-new forms have slope
/// `(k-2)/2`.
pub fn slopes_from_tp_polygon(tp: &NewtonPolygon, k: u32, new_dim: u64) -> SlopeMultiset {
    let mut ms = SlopeMultiset::new(tp.p);
    let kk = BigRational::from_integer(BigInt::from(k - 1));
    let half = &kk / BigRational::from_integer(2.into());
    for seg in &tp.segments {
        match &seg.slope {
            Valuation::Finite(s) if s < &half => {
                ms.add(s.clone(), seg.length);
                ms.add(&kk - s, seg.length);
            }
            _ => ms.add(half.clone(), 2 * seg.length),
        }
    }
    ms.add(BigRational::from_integer(BigInt::from(k - 2)) / BigRational::from_integer(2.into()), new_dim);
    ms
}

/// `U_p` slopes on `S_k(Gamma0(Np))` without forming the level-`Np`
/// characteristic polynomial.
pub fn up_slope_multiset(level: u64, p: u64, k: u32, caps: &EngineCaps) -> Result<SlopeReport> {
    let space = SpaceSpec::new(level, k)?.with_prime(p)?;
    let (coeffs, engine) = tp_charpoly(&space, p, caps)?;
    slope_report_from_tp_charpoly(level, p, k, &coeffs, engine)
}

/// As [`up_slope_multiset`], from an already computed `T_p` charpoly.
pub fn slope_report_from_tp_charpoly(
    level: u64,
    p: u64,
    k: u32,
    coeffs: &[BigInt],
    engine: Engine,
) -> Result<SlopeReport> {
    let space = SpaceSpec::new(level, k)?.with_prime(p)?;
    let dim = dim_cusp_forms(&space)?;
    if coeffs.len() as u64 != dim + 1 {
        return Err(Error::Consistency(format!("charpoly of degree {} on a space of dimension {dim}", coeffs.len() - 1)));
    }
    let tp_polygon = newton_polygon(coeffs, p)?;
    let new_dim = p_new_dimension(&space)?;
    let multiset = slopes_from_tp_polygon(&tp_polygon, k, new_dim);
    let full = dim_cusp_forms(&SpaceSpec::new(level * p, k)?)?;
    if multiset.total() != full {
        return Err(Error::Consistency(format!("{} slopes for a space of dimension {full}", multiset.total())));
    }
    Ok(SlopeReport { level, p, weight: k, engine, tp_polygon, old_dim: 2 * dim, new_dim, multiset })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn level_one_weight_16_at_59() {
        let rep = up_slope_multiset(1, 59, 16, &EngineCaps::default()).unwrap();
        assert_eq!(rep.engine, Engine::TraceFormula);
        assert_eq!(rep.multiset, SlopeMultiset::from_pairs(59, [(r(1), 1), (r(14), 1), (r(7), 72)]));
        assert_eq!(d_of_alpha(&rep.multiset, &r(1)), 1);
        assert_eq!(d_of_alpha(&rep.multiset, &r(2)), 0);
    }

    #[test]
    fn empty_space_has_only_new_part() {
        let rep = up_slope_multiset(1, 5, 2, &EngineCaps::default()).unwrap();
        assert_eq!(rep.old_dim, 0);
        assert_eq!(rep.multiset.total(), rep.new_dim);
        assert!(rep.multiset.is_empty());
        let rep = up_slope_multiset(1, 11, 2, &EngineCaps::default()).unwrap();
        assert_eq!(rep.multiset, SlopeMultiset::from_pairs(11, [(r(0), 1)]));
    }

    #[test]
    fn routing() {
        let caps = EngineCaps::default();
        assert!(matches!(up_slope_multiset(5, 5, 6, &caps), Err(Error::PrimeDividesLevel { .. })));
        assert!(matches!(select_engine(&SpaceSpec::new(1, 3438).unwrap(), 59, &caps), Err(Error::NoEngine(_))));
        assert_eq!(select_engine(&SpaceSpec::new(14, 6).unwrap(), 5, &caps).unwrap(), Engine::ModularSymbols);
    }

    #[test]
    fn serde_round_trip() {
        let m = SlopeMultiset::from_pairs(5, [(r(1), 2), (BigRational::new(5.into(), 2.into()), 4)]);
        let js = serde_json::to_string(&m).unwrap();
        assert_eq!(js, r#"{"p":5,"slopes":{"1":2,"5/2":4}}"#);
        assert_eq!(serde_json::from_str::<SlopeMultiset>(&js).unwrap(), m);
        assert_eq!(m.to_string(), "{1:2, 5/2:4}");
    }
}
