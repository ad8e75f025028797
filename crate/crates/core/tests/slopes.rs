use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::RngSeed;
use serde_json::Value;
use slopecert_core::ntheory::{valuation_int, Valuation};
use slopecert_core::slopes::{
    d_of_alpha, gm_compare, gm_predicts_equal, newton_polygon, theorem1_certificate, up_slope_multiset,
    verify_certificate, EngineCaps, GMInstance, GmOutcome, SlopeMultiset, ViolationCertificate,
};
use slopecert_core::traceformula::{dim_cusp_forms, SpaceSpec};

fn r(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

fn poly_mul(f: &[BigInt], g: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        for (j, b) in g.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

fn slope_lengths(coeffs: &[BigInt], p: u64) -> BTreeMap<Valuation, u64> {
    let mut m = BTreeMap::new();
    for s in newton_polygon(coeffs, p).unwrap().segments {
        *m.entry(s.slope).or_insert(0) += s.length;
    }
    m
}

/// Monic polynomial with coefficients `u_i p^{e_i}`.
fn monic(p: u64, units: &[i64], exps: &[u32]) -> Vec<BigInt> {
    std::iter::once(BigInt::one())
        .chain(units.iter().zip(exps).map(|(&u, &e)| BigInt::from(u) * BigInt::from(p).pow(e)))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, rng_seed: RngSeed::Fixed(5959), ..ProptestConfig::default() })]

    #[test]
    fn polygon_of_product_merges_segments(
        pi in 0usize..3,
        fu in prop::collection::vec(-40i64..40, 1..6),
        fe in prop::collection::vec(0u32..6, 6),
        gu in prop::collection::vec(-40i64..40, 1..6),
        ge in prop::collection::vec(0u32..6, 6),
    ) {
        let p = [2u64, 5, 59][pi];
        let f = monic(p, &fu, &fe[..fu.len()]);
        let g = monic(p, &gu, &ge[..gu.len()]);
        let mut expected = slope_lengths(&f, p);
        for (s, l) in slope_lengths(&g, p) {
            *expected.entry(s).or_insert(0) += l;
        }
        prop_assert_eq!(slope_lengths(&poly_mul(&f, &g), p), expected);
    }

    #[test]
    fn slope_sum_is_valuation_of_constant_term(
        pi in 0usize..3,
        units in prop::collection::vec(-30i64..30, 1..8),
        exps in prop::collection::vec(0u32..8, 8),
        last in 1i64..30,
    ) {
        let p = [2u64, 5, 59][pi];
        let mut f = monic(p, &units, &exps[..units.len()]);
        *f.last_mut().unwrap() = BigInt::from(last) * BigInt::from(p).pow(exps[7]);
        let np = newton_polygon(&f, p).unwrap();
        let total: BigRational = np.segments.iter()
            .map(|s| s.slope.finite().unwrap().clone() * BigRational::from_integer(s.length.into()))
            .sum();
        prop_assert_eq!(total, r(valuation_int(f.last().unwrap(), p).unwrap() as i64));
        prop_assert_eq!(np.segments.iter().map(|s| s.length).sum::<u64>() as usize, f.len() - 1);
    }

    #[test]
    fn prediction_is_monotone_in_alpha(k1 in 1u32..40, k2 in 1u32..200, num in 0i64..12, den in 1i64..4, pi in 0usize..3) {
        let p = [2u64, 5, 59][pi];
        let Ok(inst) = GMInstance::new(p, 1, 2 * k1, 2 * k2) else { return Ok(()); };
        let alpha = BigRational::new(num.into(), den.into());
        if gm_predicts_equal(&inst, &alpha) {
            for n2 in 0..=num {
                let smaller = BigRational::new(n2.into(), den.into());
                prop_assert!(gm_predicts_equal(&inst, &smaller));
            }
        }
    }
}

#[test]
fn multiset_invariants() {
    let caps = EngineCaps::default();
    for (n, p, k) in [(1u64, 59u64, 16u32), (14, 5, 6), (11, 3, 4), (23, 2, 6), (1, 5, 24), (37, 7, 2), (26, 5, 8)] {
        let rep = up_slope_multiset(n, p, k, &caps).unwrap();
        let ms = &rep.multiset;
        assert_eq!(ms.total(), dim_cusp_forms(&SpaceSpec::new(n * p, k).unwrap()).unwrap());
        let sum: u64 = ms.slopes().map(|s| d_of_alpha(ms, s)).sum();
        assert_eq!(sum, ms.total());
        // remove the new part and check s -> k - 1 - s symmetry
        let new_slope = BigRational::new(BigInt::from(k - 2), 2.into());
        let mut old = BTreeMap::new();
        for (s, c) in ms.iter() {
            let c = if *s == new_slope { c - rep.new_dim } else { c };
            if c > 0 {
                old.insert(s.clone(), c);
            }
        }
        for (s, c) in &old {
            assert_eq!(old.get(&(r(k as i64 - 1) - s)), Some(c), "N = {n}, p = {p}, k = {k}");
        }
        assert_eq!(old.values().sum::<u64>(), rep.old_dim);
    }
}

#[test]
fn level_14_has_slope_one_in_weight_6() {
    let rep = up_slope_multiset(14, 5, 6, &EngineCaps::default()).unwrap();
    assert!(d_of_alpha(&rep.multiset, &r(1)) > 0);
}

#[test]
fn compare_weights_6_and_26() {
    let caps = EngineCaps::default();
    let inst = GMInstance::new(5, 14, 6, 26).unwrap();
    let (low, high, outcome) = gm_compare(&inst, &[], &caps).unwrap();
    let GmOutcome::Violation { certificate, .. } = outcome else { panic!("N = 14 should violate") };
    verify_certificate(&certificate).unwrap();
    assert_eq!(d_of_alpha(&high.multiset, &r(1)), 2 * d_of_alpha(&low.multiset, &r(1)));
    let inst = GMInstance::new(5, 1, 6, 26).unwrap();
    let (_, _, outcome) = gm_compare(&inst, &[r(1)], &caps).unwrap();
    assert!(matches!(outcome, GmOutcome::Consistent { .. }));
    let same = GMInstance::new(5, 14, 6, 6).unwrap();
    assert!(matches!(gm_compare(&same, &[], &caps).unwrap().2, GmOutcome::Consistent { .. }));
}

fn theorem1_cert() -> ViolationCertificate {
    let inst = GMInstance::new(59, 1, 16, 3438).unwrap();
    let low = SlopeMultiset::from_pairs(59, [(r(1), 1), (r(14), 1), (r(7), 72)]);
    theorem1_certificate(&inst, Valuation::from_int(1), Valuation::from_int(2), low).unwrap()
}

fn direct_cert() -> ViolationCertificate {
    let inst = GMInstance::new(5, 14, 6, 26).unwrap();
    match gm_compare(&inst, &[], &EngineCaps::default()).unwrap().2 {
        GmOutcome::Violation { certificate, .. } => certificate,
        GmOutcome::Consistent { .. } => panic!("expected a violation"),
    }
}

/// Every leaf of a JSON tree, as a pointer path.
fn leaves(v: &Value, path: String, out: &mut Vec<String>) {
    match v {
        Value::Object(m) => m.iter().for_each(|(k, x)| leaves(x, format!("{path}/{k}"), out)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, x)| leaves(x, format!("{path}/{i}"), out)),
        _ => out.push(path),
    }
}

fn tampered(v: &Value) -> Value {
    match v {
        Value::Number(n) => Value::from(n.as_u64().map_or(7, |x| x + 1)),
        Value::String(s) if s.parse::<i64>().is_ok() => Value::from((s.parse::<i64>().unwrap() + 1).to_string()),
        Value::String(s) => Value::from(format!("{s}!")),
        Value::Bool(b) => Value::from(!b),
        _ => Value::from(1),
    }
}

#[test]
fn replay_accepts_originals_and_rejects_single_field_tampers() {
    for cert in [theorem1_cert(), direct_cert()] {
        verify_certificate(&cert).unwrap();
        let original: Value = serde_json::from_str(&cert.to_canonical_json().unwrap()).unwrap();
        let mut paths = Vec::new();
        leaves(&original, String::new(), &mut paths);
        assert!(paths.len() > 10);
        for path in paths {
            let mut v = original.clone();
            let leaf = v.pointer_mut(&path).unwrap();
            *leaf = tampered(leaf);
            let accepted = serde_json::from_value::<ViolationCertificate>(v)
                .map(|c| verify_certificate(&c).is_ok())
                .unwrap_or(false);
            assert!(!accepted, "tamper at {path} was accepted");
        }
    }
}

#[test]
fn replay_rejects_resealed_evidence_edits() {
    use slopecert_core::slopes::Evidence;
    let mut cert = theorem1_cert();
    if let Evidence::Dichotomy(e) = &mut cert.evidence {
        e.v_a2 = Valuation::from_int(3);
    }
    cert.reseal().unwrap();
    assert!(verify_certificate(&cert).is_err());

    let mut cert = direct_cert();
    if let Evidence::Direct(e) = &mut cert.evidence {
        e.d2 = e.d1;
    }
    cert.reseal().unwrap();
    assert!(verify_certificate(&cert).is_err());

    let mut cert = direct_cert();
    if let Evidence::Direct(e) = &mut cert.evidence {
        e.high = e.low.clone();
        e.d2 = e.d1;
    }
    cert.reseal().unwrap();
    assert!(verify_certificate(&cert).is_err());

    let mut cert = direct_cert();
    cert.instance.k2 = 30;
    cert.reseal().unwrap();
    assert!(verify_certificate(&cert).is_err());
}
