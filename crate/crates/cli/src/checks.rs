use serde_json::{json, Value};

use incidence::algebra::{
    degree_of_shifted_square, is_prime, minpoly_two_cos, prime_degree_lower_bound,
    shifted_square_is_rational, totient, Rational, Scalar,
};
use incidence::configurations::extended_gon_config;
use incidence::patterns::{pattern_hk, Pattern};
use incidence::projective::{gon_identities, verify_integer_embedding_k6, GonMode};

use crate::{parse_range, pretty, Check, Failure, Outcome, VerifyArgs};

const IDENTITY_TOL: f64 = 1e-9;

fn range_or(flag: &Option<String>, default: (u64, u64)) -> Result<(u64, u64), Failure> {
    flag.as_deref()
        .map_or(Ok(default), |s| parse_range(s).map_err(Failure::usage))
}

fn exact_mode(k: usize) -> GonMode {
    if matches!(k, 3 | 4 | 6) {
        GonMode::Exact
    } else {
        GonMode::Float
    }
}

fn k6() -> Result<(bool, Value), Failure> {
    let (report, _) = verify_integer_embedding_k6().map_err(Failure::failed)?;
    Ok((
        report.passed,
        serde_json::to_value(&report).expect("report serializes"),
    ))
}

fn cross_ratio(args: &VerifyArgs) -> Result<(bool, Value), Failure> {
    let (lo, hi) = range_or(&args.k, (5, 24))?;
    let mut rows = Vec::new();
    let mut pass = true;
    for k in lo..=hi {
        let id = gon_identities(k as usize, GonMode::Float).map_err(Failure::usage)?;
        let ratio_err = (id.side_over_radius - id.two_cos).abs();
        let cross_err = (id.cross_ratio.to_f64() - (1.0 + id.two_cos)).abs();
        let ok = ratio_err < IDENTITY_TOL && cross_err < IDENTITY_TOL;
        pass &= ok;
        rows.push(
            json!({"k": k, "ratio_error": ratio_err, "cross_ratio_error": cross_err, "pass": ok}),
        );
    }
    let exact = gon_identities(6, GonMode::Exact).map_err(Failure::failed)?;
    let exact_ok = exact.cross_ratio == Scalar::integer(2);
    pass &= exact_ok;
    let v = json!({
        "tolerance": IDENTITY_TOL,
        "rows": rows,
        "hexagon_exact_cross_ratio": exact.cross_ratio.compact(),
        "hexagon_exact_pass": exact_ok,
    });
    Ok((pass, v))
}

fn degrees(args: &VerifyArgs) -> Result<(bool, Value), Failure> {
    let (lo, hi) = range_or(&args.n, (3, 60))?;
    if lo < 3 {
        return Err(Failure::usage("--n must start at 3 or more"));
    }
    let mut pass = true;
    let mut lehmer = Vec::new();
    for n in lo..=hi {
        let deg = minpoly_two_cos(n)
            .map_err(Failure::failed)?
            .degree()
            .unwrap_or(0) as u64;
        let want = totient(n).map_err(Failure::failed)? / 2;
        pass &= deg == want;
        lehmer.push(json!({"n": n, "degree": deg, "half_totient": want}));
    }
    let mut primes = Vec::new();
    for p in (lo.max(5)..=hi).filter(|&p| is_prime(p)) {
        let deg = degree_of_shifted_square(p).map_err(Failure::failed)?;
        let bound = prime_degree_lower_bound(p);
        let ok = Rational::from_integer((deg as i64).into()) >= bound;
        pass &= ok;
        primes.push(json!({"p": p, "degree": deg, "lower_bound": bound.to_string(), "pass": ok}));
    }
    Ok((pass, json!({"lehmer": lehmer, "prime_bounds": primes})))
}

fn niven(args: &VerifyArgs) -> Result<(bool, Value), Failure> {
    let kmax = args.kmax.unwrap_or(200);
    if kmax < 3 {
        return Err(Failure::usage("--kmax must be at least 3"));
    }
    let expected = |k: u64| match k {
        3 => Some(0),
        4 => Some(1),
        6 => Some(4),
        _ => None,
    };
    let mut rational = Vec::new();
    let mut pass = true;
    for k in 3..=kmax {
        let got = shifted_square_is_rational(k).map_err(Failure::failed)?;
        let want = expected(k).map(|v: i64| Rational::from_integer(v.into()));
        pass &= got == want;
        if let Some(r) = got {
            rational.push(json!({"k": k, "value": r.to_string()}));
        }
    }
    Ok((pass, json!({"kmax": kmax, "rational": rational})))
}

fn realization(args: &VerifyArgs) -> Result<(bool, Value), Failure> {
    let (lo, hi) = range_or(&args.k, (3, 16))?;
    let mut rows = Vec::new();
    let mut pass = true;
    for k in lo..=hi {
        let k = k as usize;
        let c = extended_gon_config(k, exact_mode(k)).map_err(Failure::usage)?;
        let geometric = Pattern::from_configuration(&c, "geometric").map_err(Failure::failed)?;
        let abstract_ = pattern_hk(k).map_err(Failure::usage)?;
        let ok = geometric.labelled_edges() == abstract_.labelled_edges()
            && geometric.points == abstract_.points
            && geometric.lines == abstract_.lines;
        pass &= ok;
        rows.push(json!({"k": k, "mode": exact_mode(k).to_string(), "edges": geometric.edges.len(), "pass": ok}));
    }
    Ok((pass, json!({"rows": rows})))
}

pub(crate) fn cmd_verify(args: VerifyArgs) -> Outcome {
    let (name, (pass, details)) = match args.check {
        Check::K6Embedding => ("k6-embedding", k6()?),
        Check::CrossRatio => ("cross-ratio", cross_ratio(&args)?),
        Check::Degrees => ("degrees", degrees(&args)?),
        Check::NivenRange => ("niven-range", niven(&args)?),
        Check::Realization => ("realization", realization(&args)?),
    };
    let params = json!({"k": args.k, "n": args.n, "kmax": args.kmax});
    println!(
        "{}",
        pretty(&json!({"check": name, "params": params, "pass": pass, "details": details}))
    );
    Ok(if pass { 0 } else { 1 })
}
