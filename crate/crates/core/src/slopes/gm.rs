use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::multiset::{d_of_alpha, up_slope_multiset, EngineCaps, SlopeMultiset, SlopeReport};
use crate::error::{Error, Result};
use crate::ntheory::{is_prime, valuation_int, Valuation};
use crate::ENGINE_VERSION;

mod rational_text {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        crate::ntheory::parse_rational(&s).ok_or_else(|| serde::de::Error::custom(format!("bad rational {s:?}")))
    }
}

/// A pair of weights to compare at a fixed prime and level.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GMInstance {
    pub p: u64,
    pub level: u64,
    pub k1: u32,
    pub k2: u32,
    #[serde(with = "rational_text")]
    pub alpha_min: BigRational,
    #[serde(with = "rational_text")]
    pub alpha_max: BigRational,
}

impl GMInstance {
    /// Instance over the default range `alpha in [0, 1]`.
    pub fn new(p: u64, level: u64, k1: u32, k2: u32) -> Result<Self> {
        let inst = GMInstance { p, level, k1, k2, alpha_min: BigRational::zero(), alpha_max: BigRational::one() };
        inst.validate()?;
        Ok(inst)
    }

    pub fn with_range(mut self, lo: BigRational, hi: BigRational) -> Result<Self> {
        if lo > hi {
            return Err(Error::InvalidArgument(format!("empty alpha range [{lo}, {hi}]")));
        }
        self.alpha_min = lo;
        self.alpha_max = hi;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.p) {
            return Err(Error::NotPrime(self.p.to_string()));
        }
        if self.level == 0 {
            return Err(Error::InvalidLevel("0".into()));
        }
        if self.level % self.p == 0 {
            return Err(Error::PrimeDividesLevel { p: self.p, level: self.level });
        }
        for k in [self.k1, self.k2] {
            if k < 2 || k % 2 == 1 {
                return Err(Error::InvalidWeight(k.to_string()));
            }
        }
        Ok(())
    }

    fn contains(&self, alpha: &BigRational) -> bool {
        &self.alpha_min <= alpha && alpha <= &self.alpha_max
    }
}

/// Whether the conjecture asserts `d(k1, alpha) = d(k2, alpha)`: both
/// weights are at least `2 alpha + 2` and `k1 = k2 mod p^n (p - 1)` for
/// some integer `n >= alpha`.
pub fn gm_predicts_equal(inst: &GMInstance, alpha: &BigRational) -> bool {
    let two = BigRational::from_integer(2.into());
    let floor = &two * alpha + &two;
    let big = |k: u32| BigRational::from_integer(k.into()) >= floor;
    if !big(inst.k1) || !big(inst.k2) {
        return false;
    }
    let diff = BigInt::from(inst.k1) - BigInt::from(inst.k2);
    if diff.is_zero() {
        return true;
    }
    if !diff.is_multiple_of(&BigInt::from(inst.p - 1)) {
        return false;
    }
    let v = valuation_int(&diff, inst.p).unwrap();
    BigRational::from_integer(v.into()) >= *alpha
}

/// `d(k1, alpha)` and `d(k2, alpha)` at one compared slope.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    #[serde(with = "rational_text")]
    pub alpha: BigRational,
    pub d1: u64,
    pub d2: u64,
}

/// Evidence of a `d(k1, alpha) != d(k2, alpha)` at a predicted-equal slope.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectEvidence {
    pub low: SlopeMultiset,
    pub high: SlopeMultiset,
    #[serde(with = "rational_text")]
    pub alpha: BigRational,
    pub d1: u64,
    pub d2: u64,
}

/// Evidence for the two-case argument from the leading `T_p` coefficients
/// at weight `k2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DichotomyEvidence {
    pub v_a1: Valuation,
    pub v_a2: Valuation,
    pub low: SlopeMultiset,
    pub cases: Vec<CaseRecord>,
}

/// One branch of the case split and how it contradicts the prediction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseRecord {
    pub case: String,
    pub hypothesis: String,
    pub conclusion: String,
    #[serde(with = "rational_text")]
    pub alpha: BigRational,
    pub d_low: u64,
    pub d_high_bound: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    Direct(DirectEvidence),
    Dichotomy(DichotomyEvidence),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationCertificate {
    pub engine_version: String,
    pub instance: GMInstance,
    pub evidence: Evidence,
    /// Hex SHA-256 of the canonical JSON of the other three fields.
    pub digest: String,
}

#[derive(Serialize)]
struct CertificateBody<'a> {
    engine_version: &'a str,
    instance: &'a GMInstance,
    evidence: &'a Evidence,
}

impl ViolationCertificate {
    fn sealed(instance: GMInstance, evidence: Evidence) -> Result<Self> {
        let mut cert =
            ViolationCertificate { engine_version: ENGINE_VERSION.to_string(), instance, evidence, digest: String::new() };
        cert.digest = cert.body_digest()?;
        Ok(cert)
    }

    /// Recomputes the digest from the certificate body.
    pub fn body_digest(&self) -> Result<String> {
        let body = CertificateBody { engine_version: &self.engine_version, instance: &self.instance, evidence: &self.evidence };
        Ok(sha256_hex(canonical_json(&body)?.as_bytes()))
    }

    /// Replaces the digest after an edit of the body.
    pub fn reseal(&mut self) -> Result<()> {
        self.digest = self.body_digest()?;
        Ok(())
    }

    pub fn kind(&self) -> &'static str {
        match self.evidence {
            Evidence::Direct(_) => "direct",
            Evidence::Dichotomy(_) => "dichotomy",
        }
    }

    pub fn to_canonical_json(&self) -> Result<String> {
        canonical_json(self)
    }
}

/// JSON with object keys in sorted order and no insignificant whitespace.
pub fn canonical_json<T: Serialize>(value: &T) -> Result<String> {
    // serde_json::Map is ordered by key unless `preserve_order` is enabled
    let v = serde_json::to_value(value).map_err(|e| Error::InvalidArgument(e.to_string()))?;
    serde_json::to_string(&v).map_err(|e| Error::InvalidArgument(e.to_string()))
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum GmOutcome {
    Consistent { compared: Vec<Comparison> },
    Violation { compared: Vec<Comparison>, certificate: ViolationCertificate },
}

fn compared_alphas(inst: &GMInstance, low: &SlopeMultiset, high: &SlopeMultiset, extra: &[BigRational]) -> Vec<BigRational> {
    let mut alphas: Vec<BigRational> = low
        .slopes()
        .chain(high.slopes())
        .chain(extra.iter())
        .filter(|a| inst.contains(a) && gm_predicts_equal(inst, a))
        .cloned()
        .collect();
    alphas.sort();
    alphas.dedup();
    alphas
}

/// Compares two already-computed multisets at every slope in range that
/// either contains (plus `extra`), where the conjecture predicts equality.
pub fn gm_compare_multisets(
    inst: &GMInstance,
    low: &SlopeMultiset,
    high: &SlopeMultiset,
    extra: &[BigRational],
) -> Result<GmOutcome> {
    inst.validate()?;
    let compared: Vec<Comparison> = compared_alphas(inst, low, high, extra)
        .into_iter()
        .map(|alpha| Comparison { d1: d_of_alpha(low, &alpha), d2: d_of_alpha(high, &alpha), alpha })
        .collect();
    match compared.iter().find(|c| c.d1 != c.d2) {
        None => Ok(GmOutcome::Consistent { compared }),
        Some(w) => {
            let certificate = ViolationCertificate::sealed(
                inst.clone(),
                Evidence::Direct(DirectEvidence {
                    low: low.clone(),
                    high: high.clone(),
                    alpha: w.alpha.clone(),
                    d1: w.d1,
                    d2: w.d2,
                }),
            )?;
            Ok(GmOutcome::Violation { compared, certificate })
        }
    }
}

/// Computes both slope multisets (concurrently) and compares them.
pub fn gm_compare(inst: &GMInstance, extra: &[BigRational], caps: &EngineCaps) -> Result<(SlopeReport, SlopeReport, GmOutcome)> {
    inst.validate()?;
    let (a, b) = rayon::join(
        || up_slope_multiset(inst.level, inst.p, inst.k1, caps),
        || up_slope_multiset(inst.level, inst.p, inst.k2, caps),
    );
    let (a, b) = (a?, b?);
    let outcome = gm_compare_multisets(inst, &a.multiset, &b.multiset, extra)?;
    Ok((a, b, outcome))
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(v.into())
}

fn below(v: &Valuation, bound: i64) -> bool {
    matches!(v, Valuation::Finite(x) if *x < int(bound))
}

/// The case split for weight `k2`, given `v(a_1)`, `v(a_2)` of the `T_p`
/// charpoly there and the full low-weight multiset at `k1`.
///
/// Case A, `v(a_i) >= i` for all `i`: the polygon contains the slope-1
/// edge through `(2, v(a_2))` when `v(a_2) = 2`, so `d(k2, 1) >= 2`.
/// Case B, some `v(a_i) < i`: the first edge has slope `< 1`, giving a
/// slope in `[0, 1)` at weight `k2`. Each closes if the low weight
/// disagrees with it.
fn dichotomy_cases(inst: &GMInstance, v_a1: &Valuation, v_a2: &Valuation, low: &SlopeMultiset) -> Result<Vec<CaseRecord>> {
    let one = int(1);
    let zero = int(0);
    if !gm_predicts_equal(inst, &one) || !gm_predicts_equal(inst, &zero) {
        return Err(Error::Inconclusive(format!(
            "weights {} and {} are not predicted to agree on [0, 1] at p = {}",
            inst.k1, inst.k2, inst.p
        )));
    }
    if inst.k2 < 4 {
        return Err(Error::Inconclusive("slope 1 needs k2 - 1 > 2".into()));
    }
    let low_below_one: u64 = low.iter().filter(|(s, _)| **s >= zero && **s < one).map(|(_, c)| c).sum();
    let d_low_one = d_of_alpha(low, &one);
    let mut cases = Vec::new();
    let forced_b = below(v_a1, 1) || below(v_a2, 2);
    if !forced_b {
        if *v_a2 != Valuation::from_int(2) {
            return Err(Error::Inconclusive(format!(
                "v(a_2) = {v_a2}: case A only gives a slope-1 edge of length >= 0"
            )));
        }
        if d_low_one >= 2 {
            return Err(Error::Inconclusive(format!("d({}, 1) = {d_low_one} does not contradict d({}, 1) >= 2", inst.k1, inst.k2)));
        }
        cases.push(CaseRecord {
            case: "A".into(),
            hypothesis: "v(a_i) >= i for all i".into(),
            conclusion: format!("d({}, 1) >= 2 > d({}, 1) = {d_low_one}", inst.k2, inst.k1),
            alpha: one.clone(),
            d_low: d_low_one,
            d_high_bound: ">= 2".into(),
        });
    }
    if low_below_one > 0 {
        return Err(Error::Inconclusive(format!(
            "weight {} has {low_below_one} slopes in [0, 1); case B is not contradicted",
            inst.k1
        )));
    }
    cases.push(CaseRecord {
        case: "B".into(),
        hypothesis: "v(a_i) < i for some i".into(),
        conclusion: format!("some alpha in [0, 1) has d({}, alpha) >= 1 > d({}, alpha) = 0", inst.k2, inst.k1),
        alpha: zero,
        d_low: 0,
        d_high_bound: ">= 1 at some alpha in [0, 1)".into(),
    });
    Ok(cases)
}

/// Dichotomy certificate from the two leading valuations at weight `k2`.
pub fn theorem1_certificate(
    inst: &GMInstance,
    v_a1: Valuation,
    v_a2: Valuation,
    low: SlopeMultiset,
) -> Result<ViolationCertificate> {
    inst.validate()?;
    if low.p != inst.p {
        return Err(Error::InvalidArgument(format!("multiset is {}-adic, instance is {}-adic", low.p, inst.p)));
    }
    let cases = dichotomy_cases(inst, &v_a1, &v_a2, &low)?;
    ViolationCertificate::sealed(inst.clone(), Evidence::Dichotomy(DichotomyEvidence { v_a1, v_a2, low, cases }))
}

/// Re-derives the violation from the certificate's evidence alone.
pub fn verify_certificate(cert: &ViolationCertificate) -> Result<()> {
    if cert.body_digest()? != cert.digest {
        return Err(Error::Consistency("digest does not match the certificate body".into()));
    }
    let inst = &cert.instance;
    inst.validate()?;
    match &cert.evidence {
        Evidence::Direct(e) => {
            if e.low.p != inst.p || e.high.p != inst.p {
                return Err(Error::Consistency("multiset prime differs from the instance".into()));
            }
            if !inst.contains(&e.alpha) || !gm_predicts_equal(inst, &e.alpha) {
                return Err(Error::Consistency(format!("alpha = {} is not a predicted-equal slope", e.alpha)));
            }
            let (d1, d2) = (d_of_alpha(&e.low, &e.alpha), d_of_alpha(&e.high, &e.alpha));
            if (d1, d2) != (e.d1, e.d2) {
                return Err(Error::Consistency(format!("recorded d = ({}, {}), multisets give ({d1}, {d2})", e.d1, e.d2)));
            }
            if d1 == d2 {
                return Err(Error::Consistency(format!("d({}, {}) = d({}, {}) = {d1}", inst.k1, e.alpha, inst.k2, e.alpha)));
            }
            Ok(())
        }
        Evidence::Dichotomy(e) => {
            if e.low.p != inst.p {
                return Err(Error::Consistency("multiset prime differs from the instance".into()));
            }
            let cases = dichotomy_cases(inst, &e.v_a1, &e.v_a2, &e.low).map_err(|err| Error::Consistency(err.to_string()))?;
            if cases != e.cases {
                return Err(Error::Consistency("recorded case analysis does not match the evidence".into()));
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64) -> BigRational {
        int(n)
    }

    fn low16() -> SlopeMultiset {
        SlopeMultiset::from_pairs(59, [(r(1), 1), (r(14), 1), (r(7), 72)])
    }

    #[test]
    fn predicts_equal_examples() {
        let t1 = GMInstance::new(59, 1, 16, 3438).unwrap();
        assert!(gm_predicts_equal(&t1, &r(1)));
        let t2 = GMInstance::new(5, 14, 6, 26).unwrap();
        assert!(gm_predicts_equal(&t2, &r(1)));
        assert!(!gm_predicts_equal(&t2, &r(2)));
        assert!(gm_predicts_equal(&t2, &BigRational::new(1.into(), 2.into())));
        // 2 alpha + 2 > 6
        assert!(!gm_predicts_equal(&GMInstance::new(5, 14, 6, 6).unwrap(), &BigRational::new(5.into(), 2.into())));
        assert!(gm_predicts_equal(&GMInstance::new(5, 14, 6, 6).unwrap(), &r(2)));
        assert!(!gm_predicts_equal(&GMInstance::new(5, 14, 6, 12).unwrap(), &r(0)));
    }

    #[test]
    fn dichotomy() {
        let inst = GMInstance::new(59, 1, 16, 3438).unwrap();
        let cert = theorem1_certificate(&inst, Valuation::from_int(1), Valuation::from_int(2), low16()).unwrap();
        assert_eq!(cert.kind(), "dichotomy");
        verify_certificate(&cert).unwrap();
        let err = theorem1_certificate(&inst, Valuation::from_int(2), Valuation::from_int(3), low16());
        assert!(matches!(err, Err(Error::Inconclusive(_))));
        // a slope below 1 at the low weight leaves case B open
        let mut low = low16();
        low.add(BigRational::new(1.into(), 2.into()), 2);
        assert!(matches!(
            theorem1_certificate(&inst, Valuation::from_int(1), Valuation::from_int(2), low),
            Err(Error::Inconclusive(_))
        ));
    }

    #[test]
    fn direct_and_consistent() {
        let inst = GMInstance::new(5, 14, 6, 26).unwrap();
        let low = SlopeMultiset::from_pairs(5, [(r(1), 1), (r(4), 1), (r(2), 4)]);
        let high = SlopeMultiset::from_pairs(5, [(r(1), 2), (r(24), 2), (r(12), 20)]);
        let GmOutcome::Violation { certificate, .. } = gm_compare_multisets(&inst, &low, &high, &[]).unwrap() else {
            panic!("expected a violation");
        };
        verify_certificate(&certificate).unwrap();
        let same = GMInstance::new(5, 14, 6, 6).unwrap();
        assert!(matches!(gm_compare_multisets(&same, &low, &low, &[]).unwrap(), GmOutcome::Consistent { .. }));
    }

    #[test]
    fn canonical_json_is_sorted_and_stable() {
        let inst = GMInstance::new(59, 1, 16, 3438).unwrap();
        let cert = theorem1_certificate(&inst, Valuation::from_int(1), Valuation::from_int(2), low16()).unwrap();
        let a = cert.to_canonical_json().unwrap();
        let back: ViolationCertificate = serde_json::from_str(&a).unwrap();
        assert_eq!(back, cert);
        assert_eq!(back.to_canonical_json().unwrap(), a);
        let top: serde_json::Value = serde_json::from_str(&a).unwrap();
        let keys: Vec<&String> = top.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["digest", "engine_version", "evidence", "instance"]);
        assert!(a.starts_with(r#"{"digest":"#));
        assert_eq!(cert.digest.len(), 64);
        let mut edited = cert.clone();
        edited.engine_version.push('x');
        assert!(verify_certificate(&edited).is_err());
        edited.reseal().unwrap();
        verify_certificate(&edited).unwrap();
    }
}
