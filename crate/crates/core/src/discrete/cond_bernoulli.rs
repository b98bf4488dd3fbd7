//! Bernoullis conditioned on their sum, sampled exactly by sequential
//! conditioning through elementary symmetric polynomials.
//!
//! With weights `lambda_j`, the target law on rank-k configurations is
//! `mu(x) ~ prod_j lambda_j^{x_j}`. Walking the coordinates left to right,
//! the inclusion probability given `r` remaining ones is
//! `lambda_j * e_{r-1}(suffix) / e_r(lambda_j..)`. The suffix table switches
//! to log space when the weight spread would overflow the linear
//! recurrence.

use rand::Rng;

use crate::error::{Error, Result};
use crate::measures::{BooleanMeasure, Configuration};
use crate::numeric::log_add_exp;

/// Weight-spread ratio beyond which the DP runs in log space.
const LOG_SPACE_RATIO: f64 = 1e6;

/// Draw one configuration with exactly `k` ones from the conditioned
/// Bernoulli law with the given positive weights.
pub fn sample_conditioned_bernoulli<R: Rng>(
    lambda: &[f64],
    k: usize,
    rng: &mut R,
) -> Result<Configuration> {
    let n = lambda.len();
    validate_weights(lambda)?;
    if k > n {
        return Err(Error::InvalidParameter(format!(
            "k = {k} out of range for n = {n}"
        )));
    }
    let probs = InclusionTable::new(lambda, k);
    let mut bits = vec![false; n];
    let mut taken = 0usize;
    for j in 0..n {
        let remaining = k - taken;
        let slots_left = n - j;
        if remaining == 0 {
            break;
        }
        let p = if remaining == slots_left {
            1.0
        } else {
            probs.inclusion(j, remaining)
        };
        if rng.random::<f64>() < p {
            bits[j] = true;
            taken += 1;
        }
    }
    debug_assert_eq!(taken, k);
    Ok(Configuration::new(bits))
}

/// The exact conditioned-Bernoulli law as a measure on `{0,1}^n`
/// (equals the product measure with `p_j = lambda_j/(1+lambda_j)`
/// conditioned on `N = k`).
pub fn conditioned_bernoulli_exact(lambda: &[f64], k: usize) -> Result<BooleanMeasure> {
    let n = lambda.len();
    validate_weights(lambda)?;
    if k > n {
        return Err(Error::InvalidParameter(format!(
            "k = {k} out of range for n = {n}"
        )));
    }
    let mut weights = vec![0.0; 1usize << n];
    // normalize in log space by the largest rank-k atom: the k largest weights
    let mut logs: Vec<f64> = lambda.iter().map(|l| l.ln()).collect();
    logs.sort_by(|a, b| b.total_cmp(a));
    let max_log: f64 = logs[..k].iter().sum();
    for (mask, w) in weights.iter_mut().enumerate() {
        if (mask as u64).count_ones() as usize != k {
            continue;
        }
        let mut log_w = -max_log;
        for (j, &l) in lambda.iter().enumerate() {
            if mask >> j & 1 == 1 {
                log_w += l.ln();
            }
        }
        *w = log_w.exp();
    }
    BooleanMeasure::from_unnormalized(n, weights)
}

fn validate_weights(lambda: &[f64]) -> Result<()> {
    if lambda.is_empty() {
        return Err(Error::InvalidParameter("empty weight vector".into()));
    }
    for (j, &l) in lambda.iter().enumerate() {
        if !(l > 0.0) || !l.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "weight lambda_{} = {l} must be positive and finite",
                j + 1
            )));
        }
    }
    Ok(())
}

/// Suffix elementary-symmetric table, linear or log-space.
struct InclusionTable {
    lambda: Vec<f64>,
    /// `table[j][m]`: e_m of the suffix starting at coordinate j,
    /// in plain or log units.
    table: Vec<Vec<f64>>,
    log_space: bool,
}

impl InclusionTable {
    fn new(lambda: &[f64], k: usize) -> Self {
        let max = lambda.iter().cloned().fold(f64::MIN, f64::max);
        let min = lambda.iter().cloned().fold(f64::MAX, f64::min);
        let log_space = max / min > LOG_SPACE_RATIO;
        let n = lambda.len();
        let mut table = vec![vec![0.0; k + 1]; n + 1];
        if log_space {
            for row in table.iter_mut() {
                for cell in row.iter_mut() {
                    *cell = f64::NEG_INFINITY;
                }
                row[0] = 0.0;
            }
            for j in (0..n).rev() {
                let lw = lambda[j].ln();
                for m in 0..=k {
                    table[j][m] = if m == 0 {
                        0.0
                    } else {
                        log_add_exp(table[j + 1][m], lw + table[j + 1][m - 1])
                    };
                }
            }
        } else {
            for row in table.iter_mut() {
                row[0] = 1.0;
            }
            for j in (0..n).rev() {
                for m in 1..=k {
                    table[j][m] = table[j + 1][m] + lambda[j] * table[j + 1][m - 1];
                }
            }
        }
        InclusionTable {
            lambda: lambda.to_vec(),
            table,
            log_space,
        }
    }

    /// P(include coordinate j | r ones still needed among j..n).
    fn inclusion(&self, j: usize, r: usize) -> f64 {
        if self.log_space {
            (self.lambda[j].ln() + self.table[j + 1][r - 1] - self.table[j][r]).exp()
        } else {
            self.lambda[j] * self.table[j + 1][r - 1] / self.table[j][r]
        }
    }
}
