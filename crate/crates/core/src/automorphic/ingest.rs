//! Line-oriented Satake table files.
//!
//! ```text
//! # anything after '#' is ignored
//! name delta            (optional)
//! degree 2
//! conductor 1
//! archimedean 5.5 6.5   (optional; complex entries as re+imj)
//! 2 a_1 a_2
//! 3 a_1 a_2
//! ...
//! ```
//!
//! Rows must list every prime from 2 up to the last one, in order, each with
//! exactly `degree` entries. Ramified rows pad with `0`.

use std::io::Write;

use num_complex::Complex64;

use super::AutomorphicRep;
use crate::arith::is_prime;
use crate::error::{Error, Result};

/// Generic GL(n) local data read from a table.
#[derive(Debug, Clone, PartialEq)]
pub struct SatakeTable {
    pub name: String,
    pub degree: usize,
    pub conductor: u64,
    pub archimedean: Option<Vec<Complex64>>,
    pub primes: Vec<u64>,
    /// Row-major, `degree` values per prime.
    pub params: Vec<Complex64>,
    /// Largest prime covered; every prime up to it has a row.
    pub limit: u64,
}

impl SatakeTable {
    /// Parameters at `p`.
    pub fn parameters(&self, p: u64) -> Result<&[Complex64]> {
        if p > self.limit {
            return Err(Error::InsufficientData { prime: p, limit: self.limit });
        }
        let i = self
            .primes
            .binary_search(&p)
            .map_err(|_| Error::Domain(format!("{p} is not prime")))?;
        Ok(&self.params[i * self.degree..(i + 1) * self.degree])
    }
}

/// Parses `re`, `imj`, `re+imj` or `re-imj`; exponents such as `1e-3` are
/// fine in either part.
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let bad = || Error::Domain(format!("cannot parse {s:?} as a complex number"));
    let s = s.trim();
    let Some(body) = s.strip_suffix(['j', 'i']) else {
        return s.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(i) => (body[..i].parse::<f64>().map_err(|_| bad())?, &body[i..]),
        None => (0.0, body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        v => v.parse::<f64>().map_err(|_| bad())?,
    };
    Ok(Complex64::new(re, im))
}

fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{:e}", z.re)
    } else if z.im.is_sign_negative() {
        format!("{:e}-{:e}j", z.re, -z.im)
    } else {
        format!("{:e}+{:e}j", z.re, z.im)
    }
}

/// Parses a table from text.
pub fn read_satake_table(text: &str) -> Result<SatakeTable> {
    let mut name = String::from("table");
    let mut degree: Option<usize> = None;
    let mut conductor: Option<u64> = None;
    let mut archimedean = None;
    let mut primes = Vec::new();
    let mut params = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let err = |message: String| Error::Parse { line: line_no, message };
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut fields = line.split_whitespace();
        let head = fields.next().unwrap_or_default();
        let rest: Vec<&str> = fields.collect();
        match head {
            "name" => name = rest.join(" "),
            "degree" => {
                let n = rest
                    .first()
                    .and_then(|v| v.parse::<usize>().ok())
                    .filter(|&n| n >= 1 && rest.len() == 1)
                    .ok_or_else(|| err("degree must be one positive integer".into()))?;
                degree = Some(n);
            }
            "conductor" => {
                let n = rest
                    .first()
                    .and_then(|v| v.parse::<u64>().ok())
                    .filter(|&n| n >= 1 && rest.len() == 1)
                    .ok_or_else(|| err("conductor must be one positive integer".into()))?;
                conductor = Some(n);
            }
            "archimedean" => {
                let mu = rest
                    .iter()
                    .map(|v| parse_complex(v))
                    .collect::<Result<Vec<_>>>()
                    .map_err(|e| err(e.to_string()))?;
                archimedean = Some(mu);
            }
            _ => {
                let n = degree.ok_or_else(|| err("parameter row before the degree header".into()))?;
                let p: u64 = head.parse().map_err(|_| err(format!("unknown header {head:?}")))?;
                if !is_prime(p) {
                    return Err(err(format!("{p} is not prime")));
                }
                let expected = primes.last().map_or(2, |&last| next_prime(last));
                if p != expected {
                    return Err(err(format!("expected a row for p = {expected}, found {p}")));
                }
                if rest.len() != n {
                    return Err(err(format!("p = {p} has {} entries, degree is {n}", rest.len())));
                }
                for v in rest {
                    params.push(parse_complex(v).map_err(|e| err(e.to_string()))?);
                }
                primes.push(p);
            }
        }
    }

    let degree = degree.ok_or_else(|| Error::Parse { line: 0, message: "missing degree header".into() })?;
    let conductor =
        conductor.ok_or_else(|| Error::Parse { line: 0, message: "missing conductor header".into() })?;
    if let Some(mu) = &archimedean {
        if mu.len() != degree {
            return Err(Error::Parse {
                line: 0,
                message: format!("{} archimedean parameters for degree {degree}", mu.len()),
            });
        }
    }
    let limit = primes.last().copied().unwrap_or(1);
    Ok(SatakeTable {
        name,
        degree,
        conductor,
        archimedean,
        primes,
        params,
        limit,
    })
}

fn next_prime(p: u64) -> u64 {
    (p + 1..).find(|&m| is_prime(m)).expect("primes are unbounded")
}

/// Writes the local data of `rep` at every prime `<= limit` in the table
/// format. Numbers use the shortest round-trip representation.
pub fn write_satake_table<W: Write>(rep: &AutomorphicRep, limit: u64, mut out: W) -> Result<()> {
    writeln!(out, "# local parameters of {rep} for p <= {limit}")?;
    writeln!(out, "name {rep}")?;
    writeln!(out, "degree {}", rep.degree())?;
    writeln!(out, "conductor {}", rep.conductor())?;
    if let Ok(a) = rep.archimedean() {
        let mu: Vec<String> = a.mu.iter().map(|&z| format_complex(z)).collect();
        writeln!(out, "archimedean {}", mu.join(" "))?;
    }
    if limit >= 2 {
        for p in crate::arith::sieve_primes(limit)? {
            let sp = rep.satake_at(p)?;
            let row: Vec<String> = sp.values.iter().map(|&z| format_complex(z)).collect();
            writeln!(out, "{p} {}", row.join(" "))?;
        }
    }
    Ok(())
}
