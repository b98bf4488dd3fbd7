//! Statistical tests and interval estimates used by the verification
//! harness: chi-square goodness of fit, exact (Clopper-Pearson) binomial
//! confidence bounds, and the Kuiper test for circular uniformity.

use statrs::distribution::{Beta, ChiSquared, ContinuousCDF};

use crate::error::{Error, Result};

/// Result of a chi-square goodness-of-fit test.
#[derive(Debug, Clone)]
pub struct GofResult {
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub p_value: f64,
}

/// Pearson chi-square test of observed counts against a discrete pmf.
///
/// Cells with expected count below `min_expected` (after scaling by the
/// total draw count) are pooled into a single remainder cell to keep the
/// chi-square approximation honest.
pub fn chi_square_gof(observed: &[u64], probabilities: &[f64], min_expected: f64) -> Result<GofResult> {
    if observed.len() != probabilities.len() {
        return Err(Error::DimensionMismatch {
            expected: probabilities.len(),
            got: observed.len(),
        });
    }
    let total: u64 = observed.iter().sum();
    if total == 0 {
        return Err(Error::InvalidParameter("no observations".into()));
    }
    let nf = total as f64;
    let mut stat = 0.0;
    let mut cells = 0usize;
    let mut pooled_obs = 0.0;
    let mut pooled_exp = 0.0;
    for (&o, &p) in observed.iter().zip(probabilities) {
        let expected = nf * p;
        if expected < min_expected {
            pooled_obs += o as f64;
            pooled_exp += expected;
            continue;
        }
        let d = o as f64 - expected;
        stat += d * d / expected;
        cells += 1;
    }
    if pooled_exp > 0.0 {
        let d = pooled_obs - pooled_exp;
        stat += d * d / pooled_exp;
        cells += 1;
    }
    if cells < 2 {
        return Err(Error::InvalidParameter(
            "chi-square needs at least two cells with positive expectation".into(),
        ));
    }
    let df = cells - 1;
    let dist = ChiSquared::new(df as f64)
        .map_err(|e| Error::InvalidParameter(format!("chi-square df: {e}")))?;
    let p_value = 1.0 - dist.cdf(stat);
    Ok(GofResult {
        statistic: stat,
        degrees_of_freedom: df,
        p_value,
    })
}

/// Two-sided Clopper-Pearson interval for a binomial proportion at the
/// given confidence level (e.g. 0.99).
pub fn clopper_pearson(successes: u64, trials: u64, confidence: f64) -> Result<(f64, f64)> {
    if trials == 0 {
        return Err(Error::InvalidParameter("clopper_pearson needs trials > 0".into()));
    }
    if successes > trials {
        return Err(Error::InvalidParameter("successes exceed trials".into()));
    }
    if !(0.0 < confidence && confidence < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "confidence {confidence} outside (0,1)"
        )));
    }
    let alpha = 1.0 - confidence;
    let x = successes as f64;
    let n = trials as f64;
    let lo = if successes == 0 {
        0.0
    } else {
        let b = Beta::new(x, n - x + 1.0)
            .map_err(|e| Error::InvalidParameter(format!("beta: {e}")))?;
        b.inverse_cdf(alpha / 2.0)
    };
    let hi = if successes == trials {
        1.0
    } else {
        let b = Beta::new(x + 1.0, n - x)
            .map_err(|e| Error::InvalidParameter(format!("beta: {e}")))?;
        b.inverse_cdf(1.0 - alpha / 2.0)
    };
    Ok((lo, hi))
}

/// Kuiper test of a sample of angles (radians) against the uniform law on
/// the circle. Returns `(statistic V, p_value)` using the standard
/// asymptotic tail series.
pub fn kuiper_uniform(angles: &[f64]) -> Result<(f64, f64)> {
    let m = angles.len();
    if m < 5 {
        return Err(Error::InvalidParameter("kuiper test needs at least 5 points".into()));
    }
    let tau = std::f64::consts::TAU;
    let mut u: Vec<f64> = angles
        .iter()
        .map(|a| {
            let mut x = a % tau;
            if x < 0.0 {
                x += tau;
            }
            x / tau
        })
        .collect();
    u.sort_by(f64::total_cmp);
    let nf = m as f64;
    let mut d_plus = f64::NEG_INFINITY;
    let mut d_minus = f64::NEG_INFINITY;
    for (i, &x) in u.iter().enumerate() {
        d_plus = d_plus.max((i as f64 + 1.0) / nf - x);
        d_minus = d_minus.max(x - i as f64 / nf);
    }
    let v = d_plus + d_minus;
    let lambda = (nf.sqrt() + 0.155 + 0.24 / nf.sqrt()) * v;
    let mut p = 0.0;
    for j in 1..=100 {
        let jf = j as f64;
        let a = 4.0 * jf * jf * lambda * lambda - 1.0;
        let term = 2.0 * a * (-2.0 * jf * jf * lambda * lambda).exp();
        p += term;
        if term.abs() < 1e-12 * (1.0 + p.abs()) {
            break;
        }
    }
    Ok((v, p.clamp(0.0, 1.0)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chi_square_uniform_counts() {
        // mild fluctuation around uniform should not be rejected
        let obs = [28u64, 31, 40, 35];
        let ps = [0.25; 4];
        let r = chi_square_gof(&obs, &ps, 5.0).unwrap();
        assert_eq!(r.degrees_of_freedom, 3);
        assert!((r.statistic - 2.417_910_447_761_194).abs() < 1e-9);
        assert!(r.p_value > 0.05);
    }

    #[test]
    fn chi_square_detects_bias() {
        let obs = [1000u64, 10, 10, 10];
        let ps = [0.25; 4];
        let r = chi_square_gof(&obs, &ps, 5.0).unwrap();
        assert!(r.p_value < 1e-6);
    }

    #[test]
    fn clopper_pearson_zero_and_full() {
        let (lo, hi) = clopper_pearson(0, 1000, 0.99).unwrap();
        assert_eq!(lo, 0.0);
        // 1 - (alpha/2)^(1/n)
        let expect = 1.0 - (0.005f64).powf(1.0 / 1000.0);
        assert!((hi - expect).abs() < 1e-6, "{hi} vs {expect}");

        let (lo, hi) = clopper_pearson(1000, 1000, 0.99).unwrap();
        assert_eq!(hi, 1.0);
        assert!((lo - (0.005f64).powf(1.0 / 1000.0)).abs() < 1e-6);
    }

    #[test]
    fn clopper_pearson_covers_point_estimate() {
        let (lo, hi) = clopper_pearson(300, 1000, 0.99).unwrap();
        assert!(lo < 0.3 && 0.3 < hi);
        assert!(hi - lo < 0.1);
    }

    #[test]
    fn kuiper_accepts_uniform_grid() {
        let angles: Vec<f64> = (0..500)
            .map(|i| std::f64::consts::TAU * (i as f64 + 0.5) / 500.0)
            .collect();
        let (_v, p) = kuiper_uniform(&angles).unwrap();
        assert!(p > 0.999, "p = {p}");
    }

    #[test]
    fn kuiper_rejects_clumped_sample() {
        let angles: Vec<f64> = (0..500).map(|i| 0.3 + 1e-3 * (i as f64 / 500.0)).collect();
        let (_v, p) = kuiper_uniform(&angles).unwrap();
        assert!(p < 1e-6, "p = {p}");
    }
}
