//! Zeros of the Gaussian power series `h(z) = sum_n X_n z^n` in the unit
//! disk, sampled by truncation.
//!
//! The zero set restricted to `|z| <= rho < 1` is determinantal with the
//! Bergman kernel and mean count `rho^2 / (1 - rho^2)`. A degree-D
//! truncation changes that restriction with probability controlled by
//! [`truncation_error_bound`], which the default degree keeps far below
//! Monte Carlo resolution.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::continuous::PointConfiguration;
use crate::error::{Error, Result};
use crate::numeric::{aberth_roots, eval_poly_and_derivative};

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerSeriesSpec {
    /// Zeros are observed in the disk of this radius; must be <= 0.95.
    pub disk_radius: f64,
    /// Truncation degree D; the series keeps coefficients X_0..X_D.
    pub truncation_degree: usize,
    /// Leading coefficients below this magnitude trigger degree reduction;
    /// roots within it of the boundary are classified after polishing.
    pub root_tolerance: f64,
}

impl PowerSeriesSpec {
    pub fn new(disk_radius: f64, truncation_degree: usize, root_tolerance: f64) -> Result<Self> {
        let spec = PowerSeriesSpec {
            disk_radius,
            truncation_degree,
            root_tolerance,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Default degree `max(200, ceil(12/(1-rho)))`, chosen so the
    /// truncation bias is negligible against Monte Carlo noise.
    pub fn with_default_degree(disk_radius: f64) -> Result<Self> {
        let degree = 200.0f64.max((12.0 / (1.0 - disk_radius)).ceil()) as usize;
        Self::new(disk_radius, degree, 1e-9)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.disk_radius > 0.0 && self.disk_radius <= 0.95) {
            return Err(Error::InvalidParameter(format!(
                "disk_radius {} must lie in (0, 0.95]",
                self.disk_radius
            )));
        }
        let min_degree = (2.0 / (1.0 - self.disk_radius)).ceil() as usize;
        if self.truncation_degree < min_degree {
            return Err(Error::InvalidParameter(format!(
                "truncation_degree {} below the minimum {min_degree} for rho = {}",
                self.truncation_degree, self.disk_radius
            )));
        }
        if !(self.root_tolerance > 0.0 && self.root_tolerance < 1e-2) {
            return Err(Error::InvalidParameter(format!(
                "root_tolerance {} must lie in (0, 1e-2)",
                self.root_tolerance
            )));
        }
        Ok(())
    }
}

/// Draw the coefficients, solve for the roots of the truncation, polish
/// each root with one Newton step, and keep roots inside the disk.
pub fn sample_power_series_zeros<R: Rng>(
    spec: &PowerSeriesSpec,
    rng: &mut R,
) -> Result<PointConfiguration> {
    spec.validate()?;
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let coeffs: Vec<Complex64> = (0..=spec.truncation_degree)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re * scale, im * scale)
        })
        .collect();
    zeros_in_disk(&coeffs, spec)
}

/// Roots of the given truncation inside the disk. Leading coefficients
/// below the tolerance reduce the degree; an all-tiny draw is rejected.
pub fn zeros_in_disk(
    coefficients: &[Complex64],
    spec: &PowerSeriesSpec,
) -> Result<PointConfiguration> {
    let mut coeffs = coefficients.to_vec();
    while coeffs.len() > 1 && coeffs.last().expect("nonempty").norm() < spec.root_tolerance {
        coeffs.pop();
    }
    if coeffs.iter().all(|c| c.norm() < spec.root_tolerance) {
        return Err(Error::DegenerateCoefficients);
    }
    if coeffs.len() == 1 {
        return Ok(PointConfiguration::empty());
    }
    let roots = aberth_roots(&coeffs)?;
    let keep = spec.disk_radius + spec.root_tolerance;
    let mut points: Vec<Complex64> = Vec::new();
    for root in roots {
        if root.norm() > keep {
            continue;
        }
        // one Newton step; boundary roots are classified by the polished value
        let (p, dp) = eval_poly_and_derivative(&coeffs, root);
        let polished = if dp.norm() > 0.0 { root - p / dp } else { root };
        if polished.norm() <= spec.disk_radius {
            points.push(polished);
        }
    }
    points.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).expect("finite roots"));
    Ok(PointConfiguration::new(points))
}

/// Upper bound on the probability that the discarded tail
/// `sum_{n > D} X_n z^n` exceeds `root_tolerance` in sup-norm on the disk.
///
/// Splitting the budget geometrically with ratio `theta = (1+rho)/2` and
/// using the exact CN(0,1) tail `P(|X| > t) = exp(-t^2)` gives
/// `sum_{m >= 0} exp(-(c (theta/rho)^m)^2)` with
/// `c = tol (1-theta) / rho^{D+1}`; each term dominates the rest, so the
/// series is summed until it stops moving. Monotone decreasing in D.
pub fn truncation_error_bound(spec: &PowerSeriesSpec) -> Result<f64> {
    spec.validate()?;
    let rho = spec.disk_radius;
    let theta = (1.0 + rho) / 2.0;
    let log_c = spec.root_tolerance.ln() + (1.0 - theta).ln()
        - (spec.truncation_degree as f64 + 1.0) * rho.ln();
    let log_growth = theta.ln() - rho.ln(); // > 0
    let mut bound = 0.0f64;
    for m in 0..10_000 {
        let log_t = log_c + m as f64 * log_growth;
        // exp(-t^2); for log_t past ~350 the term underflows regardless
        if log_t > 350.0 {
            break;
        }
        let t = log_t.exp();
        let term = (-t * t).exp();
        bound += term;
        if term < 1e-300 || term < bound * 1e-18 {
            break;
        }
    }
    Ok(bound.min(1.0))
}
