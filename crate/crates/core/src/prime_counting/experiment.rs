use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use super::{check_class, terms_up_to, MainTermAggregate, SWReport};
use crate::arith::gcd;
use crate::error::{Error, Result};
use crate::rankin_selberg::RSPair;

/// Per-`x` maximum of the normalized error over the coprime classes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SWSummary {
    pub x: f64,
    pub max_normalized_error: f64,
    pub worst_class: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SWExperiment {
    pub pair: String,
    pub q: u64,
    /// The exponent `A` of the `q <= (log x)^A` check.
    pub exponent: f64,
    /// Whether `q <= (log max x)^A`.
    pub modulus_in_range: bool,
    /// Characters mod `q` whose twist carries a main term.
    pub main_term_characters: Vec<String>,
    /// One row per `(x, a)`, `x` ascending.
    pub reports: Vec<SWReport>,
    pub summary: Vec<SWSummary>,
    /// Max normalized error at the largest `x` is below that at the smallest.
    pub decreasing: bool,
}

impl SWExperiment {
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "x,q,a,re_psi,im_psi,re_main,im_main,abs_error,normalized_error")?;
        for r in &self.reports {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                r.x,
                r.q,
                r.a,
                r.psi.re,
                r.psi.im,
                r.main_term.re,
                r.main_term.im,
                r.error.norm(),
                r.normalized_error
            )?;
        }
        Ok(())
    }

    /// The summary without the per-class rows.
    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "pair": self.pair,
            "q": self.q,
            "exponent": self.exponent,
            "modulus_in_range": self.modulus_in_range,
            "main_term_characters": self.main_term_characters,
            "per_x": self.summary,
            "decreasing": self.decreasing,
        })
    }
}

/// `SWReport`s for every `x` in the grid and every class `a` coprime to `q`.
///
/// The coefficients are generated once, up to the largest `x`, and swept in
/// order with one accumulator per residue class.
pub fn sw_experiment(pair: &RSPair, x_grid: &[f64], q: u64, exponent: f64) -> Result<SWExperiment> {
    check_class(q, 1)?;
    if x_grid.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
        return Err(Error::Domain("x values must be finite and positive".into()));
    }
    let mut grid = x_grid.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let x_max = grid.last().copied().unwrap_or(0.0);
    let terms = terms_up_to(pair, x_max)?;
    let aggregate = MainTermAggregate::new(pair, q)?;
    let classes: Vec<u64> = (0..q).filter(|&a| gcd(a, q) == 1).collect();

    let mut acc = vec![Complex64::new(0.0, 0.0); q as usize];
    let mut next = 0;
    let mut reports = Vec::with_capacity(grid.len() * classes.len());
    let mut summary = Vec::with_capacity(grid.len());
    for &x in &grid {
        while next < terms.len() && terms[next].0 as f64 <= x {
            acc[(terms[next].0 % q) as usize] += terms[next].1;
            next += 1;
        }
        let mut worst = SWSummary {
            x,
            max_normalized_error: 0.0,
            worst_class: classes[0],
        };
        for &a in &classes {
            let report = SWReport::new(x, q, a, acc[a as usize], aggregate.at(x, a));
            if report.normalized_error > worst.max_normalized_error {
                worst.max_normalized_error = report.normalized_error;
                worst.worst_class = a;
            }
            reports.push(report);
        }
        summary.push(worst);
    }
    let decreasing = match (summary.first(), summary.last()) {
        (Some(first), Some(last)) if summary.len() > 1 => last.max_normalized_error < first.max_normalized_error,
        _ => false,
    };
    Ok(SWExperiment {
        pair: pair.to_string(),
        q: aggregate.modulus(),
        exponent,
        modulus_in_range: x_max > 1.0 && (q as f64) <= x_max.ln().powf(exponent),
        main_term_characters: aggregate.characters(),
        reports,
        summary,
        decreasing,
    })
}
