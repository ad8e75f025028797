use std::fmt::Write as _;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use slopecert_core::ntheory::{isqrt, parse_rational, HurwitzTable, Valuation};
use slopecert_core::slopes::{
    d_of_alpha, gm_compare_multisets, slope_report_from_tp_charpoly, theorem1_certificate, tp_charpoly,
    verify_certificate, Engine, EngineCaps, GMInstance, GmOutcome, SlopeReport, ViolationCertificate,
};
use slopecert_core::traceformula::{
    charpoly_prefix, dim_cusp_forms, leading_digits, trace_exact, trace_mod, SpaceSpec, ValuationBound,
};
use slopecert_core::Error as CoreError;

use crate::cache::{write_atomic, Cache};
use crate::error::{io_error, CliError, CliResult};

/// Levels below 84 (prime to 5) where weight 6 has a slope-1 form at p = 5.
pub const THEOREM2_LEVELS: [u64; 14] = [14, 28, 34, 37, 38, 42, 53, 56, 68, 69, 71, 74, 76, 83];
/// Largest level covered by [`THEOREM2_LEVELS`].
pub const THEOREM2_CHECKED_UP_TO: u64 = 83;

/// Largest class-number prefix written to the cache.
const MAX_CACHED_HURWITZ: usize = 1 << 20;

pub struct Context {
    pub cache: Cache,
    pub caps: EngineCaps,
    pub max_trace_terms: u64,
}

/// Structured results plus a human rendering. `failure` carries the
/// exit status for commands that still print a report when they fail.
pub struct Outcome {
    pub command: &'static str,
    pub params: Value,
    pub results: Value,
    pub table: String,
    pub failure: Option<CliError>,
}

fn str_list(xs: &[BigInt]) -> Vec<String> {
    xs.iter().map(|x| x.to_string()).collect()
}

fn check_trace_cost(ctx: &Context, n: u64) -> CliResult<()> {
    let terms = 2 * isqrt(n) + 1;
    if terms > ctx.max_trace_terms {
        return Err(CoreError::ResourceCap { what: "trace t-sum length", value: terms as u128, cap: ctx.max_trace_terms as u128 }.into());
    }
    Ok(())
}

#[derive(Serialize, Deserialize)]
struct HurwitzPayload {
    hurwitz12: Vec<i64>,
    primitive12: Vec<i64>,
}

fn hurwitz_key() -> Value {
    json!({ "table": "dense" })
}

fn load_hurwitz(ctx: &Context) {
    if let Some(t) = ctx.cache.get::<HurwitzPayload>("hurwitz", &hurwitz_key()) {
        let _ = HurwitzTable::global().import_dense(&t.hurwitz12, &t.primitive12);
    }
}

fn store_hurwitz(ctx: &Context) {
    if !ctx.cache.is_enabled() {
        return;
    }
    let table = HurwitzTable::global();
    let Some(bound) = table.dense_bound() else { return };
    let stored = ctx.cache.get::<HurwitzPayload>("hurwitz", &hurwitz_key()).map_or(0, |t| t.hurwitz12.len());
    if bound as usize + 1 > stored && bound as usize + 1 <= MAX_CACHED_HURWITZ {
        let (hurwitz12, primitive12) = table.export_dense();
        ctx.cache.put("hurwitz", &hurwitz_key(), &HurwitzPayload { hurwitz12, primitive12 });
    }
}

pub fn trace(ctx: &Context, level: u64, k: u32, n: u64, modulus: Option<&str>) -> CliResult<Outcome> {
    let space = SpaceSpec::new(level, k)?;
    if n == 0 {
        return Err(CliError::Usage("n must be positive".into()));
    }
    let modulus = match modulus {
        None => None,
        Some(m) => {
            let m: BigInt = m.trim().parse().map_err(|_| CliError::Usage(format!("--mod {m:?} is not an integer")))?;
            if m <= BigInt::zero() {
                return Err(CliError::Usage("--mod must be positive".into()));
            }
            Some(m)
        }
    };
    check_trace_cost(ctx, n)?;
    let key = json!({ "N": level, "k": k, "n": n, "mod": modulus.as_ref().map(|m| m.to_string()) });
    let value: BigInt = match ctx.cache.get::<String>("trace", &key).and_then(|s| s.parse().ok()) {
        Some(v) => v,
        None => {
            load_hurwitz(ctx);
            let v = match &modulus {
                None => trace_exact(&space, n)?,
                Some(m) => trace_mod(&space, n, m)?.value().clone(),
            };
            ctx.cache.put("trace", &key, &v.to_string());
            store_hurwitz(ctx);
            v
        }
    };
    let params = json!({ "N": level, "k": k, "n": n, "mod": modulus.as_ref().map(|m| m.to_string()) });
    let (digits, lead) = leading_digits(&value, 6);
    let leading = if lead.len() > 1 { format!("{}.{}", &lead[..1], &lead[1..]) } else { lead.clone() };
    let mut results = json!({ "value": value.to_string() });
    let mut table = String::new();
    match &modulus {
        None => {
            results["digits"] = json!(digits);
            results["leading_digits"] = json!(leading);
            results["sign"] = json!(if value < BigInt::zero() { -1 } else if value.is_zero() { 0 } else { 1 });
            let _ = writeln!(table, "Tr T_{n} on S_{k}(Gamma0({level})) = {value}");
            if digits > 12 {
                let _ = writeln!(table, "digits: {digits}, leading: {leading}");
            }
        }
        Some(m) => {
            results["modulus"] = json!(m.to_string());
            let _ = writeln!(table, "Tr T_{n} on S_{k}(Gamma0({level})) = {value} mod {m}");
        }
    }
    Ok(Outcome { command: "trace", params, results, table, failure: None })
}

#[derive(Serialize, Deserialize)]
struct CachedCharpoly {
    engine: Engine,
    coeffs: Vec<String>,
}

pub fn slope_report(ctx: &Context, level: u64, p: u64, k: u32) -> CliResult<SlopeReport> {
    let space = SpaceSpec::new(level, k)?.with_prime(p)?;
    let key = json!({ "N": level, "k": k, "p": p });
    let cached = ctx.cache.get::<CachedCharpoly>("tp_charpoly", &key).and_then(|c| {
        let coeffs: Option<Vec<BigInt>> = c.coeffs.iter().map(|s| s.parse().ok()).collect();
        coeffs.map(|v| (v, c.engine))
    });
    let (coeffs, engine) = match cached {
        Some(hit) => hit,
        None => {
            let (coeffs, engine) = tp_charpoly(&space, p, &ctx.caps)?;
            ctx.cache.put("tp_charpoly", &key, &CachedCharpoly { engine, coeffs: str_list(&coeffs) });
            (coeffs, engine)
        }
    };
    Ok(slope_report_from_tp_charpoly(level, p, k, &coeffs, engine)?)
}

fn report_json(rep: &SlopeReport) -> Value {
    json!({
        "engine": rep.engine,
        "old_dim": rep.old_dim,
        "new_dim": rep.new_dim,
        "total": rep.multiset.total(),
        "slopes": rep.multiset,
        "tp_newton_polygon": rep.tp_polygon.segments,
    })
}

pub fn slopes(ctx: &Context, p: u64, level: u64, k: u32) -> CliResult<Outcome> {
    let rep = slope_report(ctx, level, p, k)?;
    let mut table = format!("U_{p} slopes on S_{k}(Gamma0({})), {} forms ({} engine)\n", level * p, rep.multiset.total(), rep.engine);
    let _ = writeln!(table, "{:>10}  {:>12}", "slope", "multiplicity");
    for (s, c) in rep.multiset.iter() {
        let _ = writeln!(table, "{:>10}  {:>12}", s.to_string(), c);
    }
    Ok(Outcome {
        command: "slopes",
        params: json!({ "p": p, "N": level, "k": k }),
        results: report_json(&rep),
        table,
        failure: None,
    })
}

fn parse_alpha(s: &str) -> CliResult<BigRational> {
    parse_rational(s).ok_or_else(|| CliError::Usage(format!("{s:?} is not a rational number")))
}

fn write_certificate(path: &Path, cert: &ViolationCertificate) -> CliResult<()> {
    let text = cert.to_canonical_json()?;
    write_atomic(path, format!("{text}\n").as_bytes()).map_err(io_error(path))
}

#[allow(clippy::too_many_arguments)]
pub fn compare(
    ctx: &Context,
    p: u64,
    level: u64,
    k1: u32,
    k2: u32,
    alphas: &[String],
    alpha_min: &str,
    alpha_max: &str,
    out: Option<&Path>,
) -> CliResult<Outcome> {
    let extra: Vec<BigRational> = alphas.iter().map(|a| parse_alpha(a)).collect::<CliResult<_>>()?;
    let inst = GMInstance::new(p, level, k1, k2)?.with_range(parse_alpha(alpha_min)?, parse_alpha(alpha_max)?)?;
    let (a, b) = rayon::join(|| slope_report(ctx, level, p, k1), || slope_report(ctx, level, p, k2));
    let (a, b) = (a?, b?);
    let outcome = gm_compare_multisets(&inst, &a.multiset, &b.multiset, &extra)?;
    let mut table = String::new();
    let compared = match &outcome {
        GmOutcome::Consistent { compared } | GmOutcome::Violation { compared, .. } => compared,
    };
    let _ = writeln!(table, "{:>8}  {:>8}  {:>8}", "alpha", format!("d({k1})"), format!("d({k2})"));
    for c in compared {
        let _ = writeln!(table, "{:>8}  {:>8}  {:>8}", c.alpha.to_string(), c.d1, c.d2);
    }
    let mut results = json!({ "low": report_json(&a), "high": report_json(&b), "outcome": outcome });
    match &outcome {
        GmOutcome::Violation { certificate, .. } => {
            let _ = writeln!(table, "violation ({}), certificate {}", certificate.kind(), certificate.digest);
            if let Some(path) = out {
                write_certificate(path, certificate)?;
                results["certificate_path"] = json!(path.display().to_string());
            }
        }
        GmOutcome::Consistent { .. } => {
            let _ = writeln!(table, "consistent at every compared slope");
        }
    }
    let params = json!({
        "p": p, "N": level, "k1": k1, "k2": k2,
        "alpha": extra.iter().map(|a| a.to_string()).collect::<Vec<_>>(),
        "alpha_min": inst.alpha_min.to_string(), "alpha_max": inst.alpha_max.to_string(),
    });
    Ok(Outcome { command: "compare", params, results, table, failure: None })
}

fn describe(v: &ValuationBound) -> String {
    match v {
        ValuationBound::Exact(v) => v.to_string(),
        ValuationBound::AtLeast(m) => format!(">= {m}"),
    }
}

fn at_least(v: &ValuationBound, i: u64) -> bool {
    match v {
        ValuationBound::Exact(Valuation::Infinite) => true,
        ValuationBound::Exact(Valuation::Finite(x)) => *x >= BigRational::from_integer(i.into()),
        ValuationBound::AtLeast(m) => *m >= i,
    }
}

pub fn theorem1(ctx: &Context, depth: usize, out: &Path) -> CliResult<Outcome> {
    const P: u64 = 59;
    const K_LOW: u32 = 16;
    const K_HIGH: u32 = 3438;
    if !(2..P as usize).contains(&depth) {
        return Err(CliError::Usage(format!("--depth must lie in 2..{P}")));
    }
    let top = P.checked_pow(depth as u32).ok_or_else(|| CoreError::ResourceCap {
        what: "59^depth",
        value: u128::MAX,
        cap: u64::MAX as u128,
    })?;
    check_trace_cost(ctx, top)?;
    let space = SpaceSpec::new(1, K_HIGH)?;
    let modulus = BigInt::from(P).pow(depth as u32 + 1);
    load_hurwitz(ctx);
    let prefix = charpoly_prefix(&space, P, depth, Some(&modulus))?;
    store_hurwitz(ctx);
    let vals: Vec<ValuationBound> = (1..=depth).map(|i| prefix.valuation(i, P)).collect::<Result<_, _>>()?;
    let mut failures = Vec::new();
    let exact = |i: usize, want: i64, failures: &mut Vec<String>| match &vals[i - 1] {
        ValuationBound::Exact(v) if *v == Valuation::from_int(want) => Some(v.clone()),
        other => {
            failures.push(format!("v(a_{i}) = {}, expected {want}", describe(other)));
            None
        }
    };
    let v1 = exact(1, 1, &mut failures);
    let v2 = exact(2, 2, &mut failures);

    let low = slope_report(ctx, 1, P, K_LOW)?;
    let one = BigRational::one();
    let d_low_one = d_of_alpha(&low.multiset, &one);
    let below_one: u64 = low.multiset.iter().filter(|(s, _)| **s >= BigRational::zero() && **s < one).map(|(_, c)| c).sum();
    if d_low_one != 1 {
        failures.push(format!("d({K_LOW}, 1) = {d_low_one}, expected 1"));
    }
    if below_one != 0 {
        failures.push(format!("weight {K_LOW} has {below_one} slopes in [0, 1), expected 0"));
    }

    let mut results = json!({
        "dimension": dim_cusp_forms(&space)?,
        "modulus": format!("{P}^{}", depth + 1),
        "coefficients": (1..=depth).map(|i| json!({
            "i": i,
            "residue": prefix.coeffs[i - 1].to_string(),
            "valuation": describe(&vals[i - 1]),
            "at_least_i": at_least(&vals[i - 1], i as u64),
        })).collect::<Vec<_>>(),
        "low_weight": report_json(&low),
        "d_low_1": d_low_one,
        "low_slopes_below_1": below_one,
    });
    let mut table = format!("T_{P} on S_{K_HIGH}(Gamma0(1)), dimension {}, mod {P}^{}\n", dim_cusp_forms(&space)?, depth + 1);
    for (i, v) in vals.iter().enumerate() {
        let i = i + 1;
        let mark = if i > 2 { format!("   v(a_{i}) >= {i}: {}", at_least(v, i as u64)) } else { String::new() };
        let shown = match v {
            ValuationBound::Exact(x) => format!("= {x}"),
            ValuationBound::AtLeast(m) => format!(">= {m}"),
        };
        let _ = writeln!(table, "  v(a_{i}) {shown}{mark}");
    }
    let _ = writeln!(table, "weight {K_LOW} slopes: {}", low.multiset);

    let mut failure = None;
    if let (Some(v1), Some(v2), true) = (v1, v2, failures.is_empty()) {
        let inst = GMInstance::new(P, 1, K_LOW, K_HIGH)?;
        let cert = theorem1_certificate(&inst, v1, v2, low.multiset.clone())?;
        verify_certificate(&cert)?;
        write_certificate(out, &cert)?;
        results["certificate"] = json!({ "path": out.display().to_string(), "digest": cert.digest, "kind": cert.kind(), "verified": true });
        let _ = writeln!(table, "dichotomy certificate {} written to {}", cert.digest, out.display());
    } else {
        results["failures"] = json!(failures);
        let _ = writeln!(table, "NOT REPRODUCED: {}", failures.join("; "));
        failure = Some(CliError::Reproduction(failures.join("; ")));
    }
    Ok(Outcome { command: "theorem1", params: json!({ "depth": depth, "p": P, "k1": K_LOW, "k2": K_HIGH, "N": 1 }), results, table, failure })
}

pub fn theorem2(ctx: &Context, nmax: u64, out_dir: Option<&Path>) -> CliResult<Outcome> {
    const P: u64 = 5;
    if nmax == 0 {
        return Err(CliError::Usage("--nmax must be positive".into()));
    }
    let one = BigRational::one();
    let levels: Vec<u64> = (1..=nmax).filter(|n| n % P != 0).collect();
    let low: Vec<SlopeReport> = levels.par_iter().map(|&n| slope_report(ctx, n, P, 6)).collect::<CliResult<_>>()?;
    let members: Vec<usize> = (0..levels.len()).filter(|&i| d_of_alpha(&low[i].multiset, &one) > 0).collect();
    let high: Vec<SlopeReport> =
        members.par_iter().map(|&i| slope_report(ctx, levels[i], P, 26)).collect::<CliResult<_>>()?;

    let mut rows = Vec::new();
    let mut certificates = Vec::new();
    let mut failures = Vec::new();
    let mut table = format!("{:>4}  {:>7}  {:>8}\n", "N", "d(6,1)", "d(26,1)");
    let mut hi = high.iter();
    for (i, &n) in levels.iter().enumerate() {
        let d6 = d_of_alpha(&low[i].multiset, &one);
        let expected = THEOREM2_LEVELS.contains(&n);
        if n <= THEOREM2_CHECKED_UP_TO && expected != (d6 > 0) {
            failures.push(format!("N = {n}: d(6,1) = {d6}, expected {}", if expected { "> 0" } else { "0" }));
        }
        if d6 == 0 {
            rows.push(json!({ "N": n, "d6": d6, "d26": null }));
            continue;
        }
        let h = hi.next().unwrap();
        let d26 = d_of_alpha(&h.multiset, &one);
        if d26 != 2 * d6 {
            failures.push(format!("N = {n}: d(26,1) = {d26}, expected 2 d(6,1) = {}", 2 * d6));
        }
        let _ = writeln!(table, "{n:>4}  {d6:>7}  {d26:>8}");
        rows.push(json!({ "N": n, "d6": d6, "d26": d26 }));
        let inst = GMInstance::new(P, n, 6, 26)?;
        match gm_compare_multisets(&inst, &low[i].multiset, &h.multiset, &[one.clone()])? {
            GmOutcome::Violation { certificate, .. } => {
                verify_certificate(&certificate)?;
                if let Some(dir) = out_dir {
                    write_certificate(&dir.join(format!("theorem2_N{n}.cert.json")), &certificate)?;
                }
                certificates.push(certificate);
            }
            GmOutcome::Consistent { .. } => failures.push(format!("N = {n}: no violation found")),
        }
    }
    let found: Vec<u64> = rows.iter().filter(|r| r["d6"].as_u64() > Some(0)).map(|r| r["N"].as_u64().unwrap()).collect();
    let _ = writeln!(table, "levels with d(6,1) > 0: {found:?}");
    let _ = writeln!(table, "{} certificates", certificates.len());
    let results = json!({
        "rows": rows,
        "violating_levels": found,
        "expected_levels": THEOREM2_LEVELS.iter().filter(|&&n| n <= nmax).collect::<Vec<_>>(),
        "certificates": certificates,
        "set_match": failures.is_empty(),
        "failures": failures,
    });
    let failure = if failures.is_empty() {
        None
    } else {
        let _ = writeln!(table, "NOT REPRODUCED:\n  {}", failures.join("\n  "));
        Some(CliError::Reproduction(failures.join("; ")))
    };
    Ok(Outcome { command: "theorem2", params: json!({ "nmax": nmax, "p": P, "k1": 6, "k2": 26 }), results, table, failure })
}

pub fn verify(path: &Path) -> CliResult<Outcome> {
    let text = std::fs::read_to_string(path).map_err(io_error(path))?;
    let cert: ViolationCertificate =
        serde_json::from_str(&text).map_err(|source| CliError::Malformed { path: path.display().to_string(), source })?;
    let params = json!({ "certificate": path.display().to_string() });
    match verify_certificate(&cert) {
        Ok(()) => Ok(Outcome {
            command: "verify",
            params,
            results: json!({ "accepted": true, "kind": cert.kind(), "digest": cert.digest }),
            table: format!("accepted: {} certificate {}\n", cert.kind(), cert.digest),
            failure: None,
        }),
        Err(e) => Ok(Outcome {
            command: "verify",
            params,
            results: json!({ "accepted": false, "kind": cert.kind(), "reason": e.to_string() }),
            table: format!("rejected: {e}\n"),
            failure: Some(CliError::Rejected(e.to_string())),
        }),
    }
}
