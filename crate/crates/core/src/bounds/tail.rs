//! Tail reports: exact tails by full enumeration, Monte Carlo tails with
//! exact Clopper-Pearson bounds, and comparison against the closed-form
//! bound families.
//!
//! Monte Carlo centering is split-sample: the mean is estimated on the
//! first half of the trials and tail indicators are counted on the second,
//! independent half, so plugging the estimated mean into the threshold
//! cannot bias the tail. Trials are indexed RNG streams, making reports
//! byte-identical for any worker count.

use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{BoundSpec, Sidedness};
use crate::error::{Error, Result};
use crate::functionals::DiscreteFunctional;
use crate::measures::BooleanMeasure;
use crate::stats::clopper_pearson;

/// Confidence level for the Monte Carlo tail bounds.
pub const CONFIDENCE: f64 = 0.99;

/// Cap for exact tail enumeration.
pub const EXACT_TAIL_CAP: usize = 20;

/// Per-threshold tail record. For exact reports the confidence columns
/// collapse onto the tail value.
#[derive(Debug, Clone, Serialize)]
pub struct TailRow {
    pub a: f64,
    pub one_sided: f64,
    pub one_lo: f64,
    pub one_hi: f64,
    pub two_sided: f64,
    pub two_lo: f64,
    pub two_hi: f64,
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TailKind {
    Exact,
    MonteCarlo {
        trials: u64,
        centering_trials: u64,
        tail_trials: u64,
        seed: u64,
        mean_standard_error: f64,
    },
}

/// A tail table with its provenance: functional name, rescaling factor,
/// centering, and (for Monte Carlo) trial counts and seed.
#[derive(Debug, Clone, Serialize)]
pub struct TailReport {
    pub functional: String,
    /// The Lipschitz rescaling `c` applied before tails were taken.
    pub rescaling: f64,
    pub mean: f64,
    pub kind: TailKind,
    pub rows: Vec<TailRow>,
}

impl TailReport {
    pub fn thresholds(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.a).collect()
    }

    /// The upper confidence limit (or exact value) for the requested side.
    pub fn upper_limit(&self, row: &TailRow, side: Sidedness) -> f64 {
        match (&self.kind, side) {
            (TailKind::Exact, Sidedness::OneSided) => row.one_sided,
            (TailKind::Exact, Sidedness::TwoSided) => row.two_sided,
            (TailKind::MonteCarlo { .. }, Sidedness::OneSided) => row.one_hi,
            (TailKind::MonteCarlo { .. }, Sidedness::TwoSided) => row.two_hi,
        }
    }
}

/// Exact one- and two-sided tails of `f - Ef` over an explicit measure.
/// Tails use the closed inequality (`>= a`), which every bound family
/// dominates by continuity.
pub fn exact_tail(
    m: &BooleanMeasure,
    f: &DiscreteFunctional,
    a_grid: &[f64],
) -> Result<TailReport> {
    if m.n() > EXACT_TAIL_CAP {
        return Err(Error::CapExceeded {
            n: m.n(),
            cap: EXACT_TAIL_CAP,
        });
    }
    if f.arity() != m.n() {
        return Err(Error::DimensionMismatch {
            expected: m.n(),
            got: f.arity(),
        });
    }
    let support = m.support();
    let values: Vec<(f64, f64)> = support
        .iter()
        .map(|&mask| (f.eval_mask(mask), m.mass(mask)))
        .collect();
    let mean: f64 = values.iter().map(|(v, w)| v * w).sum();
    let rows = a_grid
        .iter()
        .map(|&a| {
            let one: f64 = values
                .iter()
                .filter(|(v, _)| v - mean >= a)
                .map(|(_, w)| w)
                .sum();
            let two: f64 = values
                .iter()
                .filter(|(v, _)| (v - mean).abs() >= a)
                .map(|(_, w)| w)
                .sum();
            TailRow {
                a,
                one_sided: one,
                one_lo: one,
                one_hi: one,
                two_sided: two,
                two_lo: two,
                two_hi: two,
            }
        })
        .collect();
    Ok(TailReport {
        functional: f.name().to_string(),
        rescaling: f.lipschitz(),
        mean,
        kind: TailKind::Exact,
        rows,
    })
}

/// Monte Carlo tail estimation from per-trial values.
///
/// `value_of_trial(t)` must draw trial `t` using its own RNG stream (the
/// harness derives it from the master seed and `t`), so the report is
/// independent of scheduling. The first `trials/2` trials center the
/// estimate; the rest feed the tail counts with exact 99% Clopper-Pearson
/// intervals.
pub fn estimate_tail<V>(
    functional_name: &str,
    rescaling: f64,
    value_of_trial: V,
    a_grid: &[f64],
    trials: u64,
    seed: u64,
) -> Result<TailReport>
where
    V: Fn(u64) -> Result<f64> + Sync,
{
    if trials < 100 {
        return Err(Error::InvalidParameter(format!(
            "estimate_tail needs at least 100 trials, got {trials}"
        )));
    }
    let values: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|t| value_of_trial(t))
        .collect::<Result<Vec<f64>>>()?;
    let centering = (trials / 2) as usize;
    let head = &values[..centering];
    let tail_values = &values[centering..];
    let mean: f64 = head.iter().sum::<f64>() / centering as f64;
    let var: f64 = head.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
        / (centering as f64 - 1.0);
    let mean_se = (var / centering as f64).sqrt();
    let m2 = tail_values.len() as u64;
    let rows = a_grid
        .iter()
        .map(|&a| {
            let one = tail_values.iter().filter(|&&v| v - mean >= a).count() as u64;
            let two = tail_values.iter().filter(|&&v| (v - mean).abs() >= a).count() as u64;
            let (one_lo, one_hi) = clopper_pearson(one, m2, CONFIDENCE)?;
            let (two_lo, two_hi) = clopper_pearson(two, m2, CONFIDENCE)?;
            Ok(TailRow {
                a,
                one_sided: one as f64 / m2 as f64,
                one_lo,
                one_hi,
                two_sided: two as f64 / m2 as f64,
                two_lo,
                two_hi,
            })
        })
        .collect::<Result<Vec<TailRow>>>()?;
    Ok(TailReport {
        functional: functional_name.to_string(),
        rescaling,
        mean,
        kind: TailKind::MonteCarlo {
            trials,
            centering_trials: centering as u64,
            tail_trials: m2,
            seed,
            mean_standard_error: mean_se,
        },
        rows,
    })
}

/// Per-threshold verdicts of a report against a list of bounds.
#[derive(Debug, Clone, Serialize)]
pub struct ComparisonRow {
    pub a: f64,
    pub bound_values: Vec<f64>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub families: Vec<String>,
    pub rows: Vec<ComparisonRow>,
    pub overall_pass: bool,
}

/// Compare a tail report against bound families: a threshold passes when
/// every bound value is at least the (exact or upper-confidence) tail for
/// that bound's sidedness; the run passes when every threshold does.
pub fn compare(report: &TailReport, bounds: &[BoundSpec]) -> Result<Comparison> {
    let mut rows = Vec::with_capacity(report.rows.len());
    let mut overall = true;
    for row in &report.rows {
        let mut values = Vec::with_capacity(bounds.len());
        let mut pass = true;
        for bound in bounds {
            let b = bound.eval(row.a)?;
            let tail = report.upper_limit(row, bound.sidedness());
            if b < tail {
                pass = false;
            }
            values.push(b);
        }
        overall &= pass;
        rows.push(ComparisonRow {
            a: row.a,
            bound_values: values,
            pass,
        });
    }
    Ok(Comparison {
        families: bounds.iter().map(|b| b.family_name().to_string()).collect(),
        rows,
        overall_pass: overall,
    })
}

/// Plot-ready CSV: `a, empirical, ci_lo, ci_hi, bound_<family>..., pass`.
/// The empirical columns report the one-sided tail unless every bound is
/// two-sided.
pub fn to_csv(report: &TailReport, bounds: &[BoundSpec], comparison: &Comparison) -> String {
    let side = if !bounds.is_empty()
        && bounds.iter().all(|b| b.sidedness() == Sidedness::TwoSided)
    {
        Sidedness::TwoSided
    } else {
        Sidedness::OneSided
    };
    let mut out = String::from("a,empirical,ci_lo,ci_hi");
    for b in bounds {
        out.push_str(",bound_");
        out.push_str(b.family_name());
    }
    out.push_str(",pass\n");
    for (row, cmp) in report.rows.iter().zip(&comparison.rows) {
        let (emp, lo, hi) = match side {
            Sidedness::OneSided => (row.one_sided, row.one_lo, row.one_hi),
            Sidedness::TwoSided => (row.two_sided, row.two_lo, row.two_hi),
        };
        out.push_str(&format!("{},{},{},{}", row.a, emp, lo, hi));
        for v in &cmp.bound_values {
            out.push_str(&format!(",{v}"));
        }
        out.push_str(if cmp.pass { ",pass\n" } else { ",fail\n" });
    }
    out
}

/// The full JSON report: tail table, bounds, comparison, provenance.
pub fn to_json(
    report: &TailReport,
    bounds: &[BoundSpec],
    comparison: &Comparison,
) -> serde_json::Value {
    serde_json::json!({
        "report": report,
        "bounds": bounds,
        "comparison": comparison,
    })
}
