use std::io::Write;

use clap::Args;
use serde::Serialize;

use rankin_core::automorphic::{parse_character, parse_rep, write_satake_table, AutomorphicRep};
use rankin_core::characters::{primitive_characters_mod, DirichletCharacter};
use rankin_core::Complex64;
use rankin_core::prime_counting::sw_experiment;
use rankin_core::rankin_selberg::{conductor_q, euler_product_eval, rs_stream, RSPair};
use rankin_core::verify::{run_verification, VerifyConfig, SUITES};

use crate::{CliError, Common, Format};

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Splits `left,right` without building anything.
fn split_pair(spec: &str) -> Result<(&str, &str), CliError> {
    spec.split_once(',')
        .filter(|(l, r)| !l.trim().is_empty() && !r.trim().is_empty())
        .ok_or_else(|| usage(format!("expected a pair <left>,<right>, got {spec:?}")))
}

fn build_pair(spec: &str, limit: u64) -> Result<RSPair, CliError> {
    let (l, r) = split_pair(spec)?;
    Ok(RSPair::new(parse_rep(l, limit)?, parse_rep(r, limit)?))
}

/// Comma-separated list; the empty string is the empty list.
fn parse_list<T: std::str::FromStr>(raw: &str, what: &str) -> Result<Vec<T>, CliError> {
    raw.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|_| usage(format!("bad {what} {s:?}"))))
        .collect()
}

fn finish(mut out: Box<dyn Write>) -> Result<(), CliError> {
    out.flush()?;
    Ok(())
}

#[derive(Debug, Args)]
pub struct CoeffsArgs {
    /// `<left>,<right>`: trivial, delta, chi:<q>:<index> or a table file.
    #[arg(long)]
    pair: String,
    /// Twist the right-hand object by the character `q:index`.
    #[arg(long)]
    twist_chi: Option<String>,
    #[arg(long)]
    limit: usize,
}

#[derive(Serialize)]
struct CoefficientRow {
    n: usize,
    lambda: Complex64,
    biglambda: Complex64,
}

pub fn coeffs(args: &CoeffsArgs, common: &Common) -> Result<(), CliError> {
    if args.limit == 0 {
        return Err(usage("--limit must be at least 1"));
    }
    split_pair(&args.pair)?;
    let twist = args.twist_chi.as_deref().map(parse_character).transpose()?;
    let mut pair = build_pair(&args.pair, args.limit as u64)?;
    if let Some(chi) = &twist {
        pair = RSPair::new(pair.left().clone(), pair.right().twist(chi, 0.0));
    }
    let stream = rs_stream(&pair, args.limit)?;
    let mut out = common.sink()?;
    match common.format_or(Format::Csv) {
        Format::Csv => stream.write_csv(&mut out)?,
        Format::Json => {
            let rows: Vec<CoefficientRow> = (1..=stream.limit())
                .map(|n| CoefficientRow { n, lambda: stream.lambda(n), biglambda: stream.biglambda(n) })
                .collect();
            serde_json::to_writer_pretty(&mut out, &serde_json::json!({ "pair": stream.label(), "rows": rows }))?;
            writeln!(out)?;
        }
    }
    finish(out)
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Coefficient range of the stream-based suites.
    #[arg(long, default_value_t = 10_000)]
    limit: usize,
    /// Comma-separated suite names; all suites when absent.
    #[arg(long)]
    only: Option<String>,
    /// Replace the default pairs (repeatable).
    #[arg(long = "pair")]
    pairs: Vec<String>,
    /// Seed of the randomized suites.
    #[arg(long)]
    seed: Option<u64>,
}

pub fn verify(args: &VerifyArgs, common: &Common) -> Result<(), CliError> {
    if args.limit < 2 {
        return Err(usage("--limit must be at least 2"));
    }
    let only = args.only.as_deref().map(|s| parse_list::<String>(s, "suite")).transpose()?;
    if let Some(names) = &only {
        if let Some(bad) = names.iter().find(|n| !SUITES.contains(&n.as_str())) {
            return Err(usage(format!("unknown suite {bad:?}; known: {}", SUITES.join(", "))));
        }
    }
    for p in &args.pairs {
        split_pair(p)?;
    }

    let mut config = VerifyConfig::with_default_pairs(args.limit)?;
    if !args.pairs.is_empty() {
        config.pairs = args
            .pairs
            .iter()
            .map(|p| build_pair(p, args.limit as u64))
            .collect::<Result<_, _>>()?;
    }
    config.only = only;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(tol) = common.tol {
        config.tol = tol;
    }
    let report = run_verification(&config)?;

    let mut out = common.sink()?;
    match common.format_or(Format::Json) {
        Format::Json => {
            let body = serde_json::json!({
                "limit": report.limit,
                "passed": report.passed(),
                "suites": report.suites,
            });
            serde_json::to_writer_pretty(&mut out, &body)?;
            writeln!(out)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            for s in &report.suites {
                w.serialize(s)?;
            }
            w.flush()?;
        }
    }
    finish(out)?;
    for s in &report.suites {
        eprintln!("{} {}: margin {:e}", if s.passed { "PASS" } else { "FAIL" }, s.name, s.worst_margin);
    }
    if report.passed() {
        Ok(())
    } else {
        Err(CliError::VerificationFailed)
    }
}

#[derive(Debug, Args)]
pub struct SwArgs {
    #[arg(long, default_value = "delta,delta")]
    pair: String,
    /// Modulus of the progressions.
    #[arg(long)]
    q: u64,
    /// Comma-separated cutoffs.
    #[arg(long, default_value = "1e4,1e5,1e6")]
    x: String,
    /// Exponent `A` of the `q <= (log x)^A` range check.
    #[arg(long, default_value_t = 2.0)]
    exponent: f64,
}

pub fn sw(args: &SwArgs, common: &Common) -> Result<(), CliError> {
    if args.q == 0 {
        return Err(usage("--q must be at least 1"));
    }
    let xs: Vec<f64> = parse_list(&args.x, "cutoff")?;
    if xs.is_empty() {
        return Err(usage("--x needs at least one cutoff"));
    }
    if let Some(bad) = xs.iter().find(|x| !(x.is_finite() && **x >= 1.0)) {
        return Err(usage(format!("cutoffs must be finite and >= 1, got {bad}")));
    }
    if !(args.exponent.is_finite() && args.exponent > 0.0) {
        return Err(usage("--exponent must be positive"));
    }
    split_pair(&args.pair)?;
    let x_max = xs.iter().copied().fold(0.0, f64::max);
    let pair = build_pair(&args.pair, x_max.ceil() as u64)?;
    let experiment = sw_experiment(&pair, &xs, args.q, args.exponent)?;

    let mut out = common.sink()?;
    match common.format_or(Format::Csv) {
        Format::Csv => {
            experiment.write_csv(&mut out)?;
            eprintln!("{}", serde_json::to_string_pretty(&experiment.summary_json())?);
        }
        Format::Json => {
            let body = serde_json::json!({ "summary": experiment.summary_json(), "rows": experiment.reports });
            serde_json::to_writer_pretty(&mut out, &body)?;
            writeln!(out)?;
        }
    }
    finish(out)
}

#[derive(Debug, Args)]
pub struct SiegelArgs {
    #[arg(long, default_value = "delta,delta")]
    pair: String,
    /// Comma-separated conductors of quadratic characters (may be empty).
    #[arg(long, conflicts_with = "max_conductor")]
    conductors: Option<String>,
    /// Every conductor up to this bound that carries a quadratic character.
    #[arg(long)]
    max_conductor: Option<u64>,
    /// Scale in `sigma = 1 + 1 / log(C(chi) x0)`.
    #[arg(long, default_value_t = 10.0)]
    x0: f64,
    /// Euler product over primes up to this bound.
    #[arg(long, default_value_t = 10_000)]
    primes: u64,
}

#[derive(Debug, Serialize)]
struct SiegelRow {
    conductor: u64,
    character: String,
    even: bool,
    analytic_conductor: f64,
    sigma: f64,
    abs_l: f64,
    q: f64,
}

const SIEGEL_NOTE: &str = "demo: |L(sigma, pi x (pi' (x) chi))| from the Euler product on the convergent side, \
                           sigma = 1 + 1/log(C(chi) x0); says nothing about sigma < 1";

fn quadratic_primitive(d: u64) -> Result<Vec<DirichletCharacter>, CliError> {
    Ok(primitive_characters_mod(d)?.into_iter().filter(|c| c.order() == 2).collect())
}

pub fn siegel_trend(args: &SiegelArgs, common: &Common) -> Result<(), CliError> {
    if !(args.x0.is_finite() && args.x0 >= 1.0) {
        return Err(usage("--x0 must be finite and >= 1"));
    }
    if args.primes < 2 {
        return Err(usage("--primes must be at least 2"));
    }
    let mut characters = Vec::new();
    match (&args.conductors, args.max_conductor) {
        (Some(list), None) => {
            for d in parse_list::<u64>(list, "conductor")? {
                if d == 0 {
                    return Err(usage("conductors must be positive"));
                }
                let found = quadratic_primitive(d)?;
                if found.is_empty() {
                    return Err(usage(format!("no primitive quadratic character has conductor {d}")));
                }
                characters.extend(found.into_iter().map(|c| (d, c)));
            }
        }
        (None, Some(max)) => {
            for d in 1..=max {
                characters.extend(quadratic_primitive(d)?.into_iter().map(|c| (d, c)));
            }
        }
        _ => return Err(usage("give --conductors or --max-conductor")),
    }
    split_pair(&args.pair)?;
    let pair = build_pair(&args.pair, args.primes)?;

    let mut rows = Vec::with_capacity(characters.len());
    for (d, chi) in characters {
        let c_chi = AutomorphicRep::character(chi.clone()).analytic_conductor(0.0)?;
        let sigma = 1.0 + 1.0 / (c_chi * args.x0).ln();
        let twisted = RSPair::new(pair.left().clone(), pair.right().twist(&chi, 0.0));
        let l = euler_product_eval(&twisted, Complex64::new(sigma, 0.0), args.primes)?;
        rows.push(SiegelRow {
            conductor: d,
            character: format!("chi:{}:{}", chi.modulus(), chi.index()),
            even: chi.is_even(),
            analytic_conductor: c_chi,
            sigma,
            abs_l: l.norm(),
            q: conductor_q(pair.left(), pair.right(), &chi)?,
        });
    }

    let mut out = common.sink()?;
    match common.format_or(Format::Csv) {
        Format::Csv => {
            writeln!(out, "# {SIEGEL_NOTE}")?;
            writeln!(out, "# pair: {pair}, x0 = {}, primes <= {}", args.x0, args.primes)?;
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(&mut out);
            w.write_record(["conductor", "character", "even", "analytic_conductor", "sigma", "abs_l", "q"])?;
            for r in &rows {
                w.serialize(r)?;
            }
            w.flush()?;
        }
        Format::Json => {
            let body = serde_json::json!({
                "note": SIEGEL_NOTE,
                "pair": pair.to_string(),
                "x0": args.x0,
                "primes": args.primes,
                "rows": rows,
            });
            serde_json::to_writer_pretty(&mut out, &body)?;
            writeln!(out)?;
        }
    }
    finish(out)
}

#[derive(Debug, Args)]
pub struct SatakeArgs {
    /// trivial, delta, chi:<q>:<index> or a table file.
    #[arg(long)]
    rep: String,
    /// Last prime bound to export.
    #[arg(long)]
    limit: u64,
}

pub fn satake(args: &SatakeArgs, common: &Common) -> Result<(), CliError> {
    if common.format == Some(Format::Json) {
        return Err(usage("satake writes the table format only"));
    }
    if args.limit < 2 {
        return Err(usage("--limit must be at least 2"));
    }
    let rep = parse_rep(&args.rep, args.limit)?;
    let mut out = common.sink()?;
    write_satake_table(&rep, args.limit, &mut out)?;
    finish(out)
}
