//! The Ginibre ensemble at finite size.
//!
//! A `k x k` matrix of independent standard complex Gaussian entries
//! (variance 1) has its eigenvalues spread over the disk of radius
//! `sqrt(k)` with density `1/pi` per unit area in the bulk, so the
//! observed restriction to a disk of radius `r <= sqrt(k)` approximates
//! the translation-invariant Ginibre process in matrix coordinates with no
//! rescaling: the mean point count in a region is its area over pi.

use ndarray::Array2;
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::continuous::PointConfiguration;
use crate::error::{Error, Result};
use crate::numeric::complex_matrix_eigenvalues;

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GinibreSpec {
    /// Size of the Gaussian matrix.
    pub matrix_size: usize,
    /// Eigenvalues are kept when their modulus is at most this radius.
    pub observation_radius: f64,
}

impl GinibreSpec {
    pub fn new(matrix_size: usize, observation_radius: f64) -> Result<Self> {
        let spec = GinibreSpec {
            matrix_size,
            observation_radius,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.matrix_size == 0 {
            return Err(Error::InvalidParameter("matrix_size must be >= 1".into()));
        }
        if !(self.observation_radius >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "observation_radius {} must be nonnegative",
                self.observation_radius
            )));
        }
        if self.observation_radius > (self.matrix_size as f64).sqrt() {
            return Err(Error::InvalidParameter(format!(
                "observation radius {} beyond the bulk radius sqrt(k) = {}",
                self.observation_radius,
                (self.matrix_size as f64).sqrt()
            )));
        }
        Ok(())
    }

    /// Edge-effect warning when observing beyond half the bulk radius.
    pub fn bulk_warning(&self) -> Option<String> {
        let half_bulk = (self.matrix_size as f64).sqrt() / 2.0;
        (self.observation_radius > half_bulk).then(|| {
            format!(
                "observation radius {} exceeds sqrt(k)/2 = {half_bulk:.3}; edge effects may bias the intensity",
                self.observation_radius
            )
        })
    }
}

/// Draw the eigenvalues of one Gaussian matrix and keep those in the
/// observation disk. Points come out sorted by (re, im) so equal seeds give
/// byte-identical configurations.
pub fn sample_ginibre<R: Rng>(spec: &GinibreSpec, rng: &mut R) -> Result<PointConfiguration> {
    spec.validate()?;
    let k = spec.matrix_size;
    let mut g = Array2::<Complex64>::zeros((k, k));
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    for v in g.iter_mut() {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        *v = Complex64::new(re * scale, im * scale);
    }
    let eigen = complex_matrix_eigenvalues(&g)?;
    let mut points: Vec<Complex64> = eigen
        .into_iter()
        .filter(|z| z.norm() <= spec.observation_radius)
        .collect();
    points.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).expect("finite eigenvalues"));
    Ok(PointConfiguration::new(points))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;

    #[test]
    fn single_entry_matrix_is_one_gaussian_point() {
        let spec = GinibreSpec::new(1, 1.0).unwrap();
        let mut rng = SeededRng::new(1).rng();
        let mut total = 0usize;
        let trials = 2000;
        let mut sum_sq = 0.0;
        for _ in 0..trials {
            let c = sample_ginibre(&spec, &mut rng).unwrap();
            total += c.len();
            for p in c.points() {
                sum_sq += p.norm_sqr();
            }
        }
        // P(|z| <= 1) = 1 - e^{-1} for CN(0,1)
        let frac = total as f64 / trials as f64;
        assert!((frac - (1.0 - (-1.0f64).exp())).abs() < 0.05, "frac = {frac}");
        assert!(sum_sq > 0.0);
    }

    #[test]
    fn zero_radius_gives_empty_configuration() {
        let spec = GinibreSpec::new(8, 0.0).unwrap();
        let mut rng = SeededRng::new(2).rng();
        assert!(sample_ginibre(&spec, &mut rng).unwrap().is_empty());
    }

    #[test]
    fn point_count_never_exceeds_k() {
        let spec = GinibreSpec::new(6, (6.0f64).sqrt()).unwrap();
        let mut rng = SeededRng::new(3).rng();
        for _ in 0..50 {
            assert!(sample_ginibre(&spec, &mut rng).unwrap().len() <= 6);
        }
    }

    #[test]
    fn mean_count_tracks_disk_area_at_moderate_size() {
        // k = 36, r = 2: mean count should be near r^2 = 4
        let spec = GinibreSpec::new(36, 2.0).unwrap();
        let trials = 400;
        let total: usize = (0..trials)
            .map(|t| {
                let mut rng = SeededRng::with_stream(40, t).rng();
                sample_ginibre(&spec, &mut rng).unwrap().len()
            })
            .sum();
        let mean = total as f64 / trials as f64;
        assert!((mean - 4.0).abs() < 0.4, "mean = {mean}");
    }

    #[test]
    fn determinism_and_bulk_warning() {
        let spec = GinibreSpec::new(16, 3.0).unwrap();
        assert!(spec.bulk_warning().is_some());
        let a = sample_ginibre(&spec, &mut SeededRng::new(9).rng()).unwrap();
        let b = sample_ginibre(&spec, &mut SeededRng::new(9).rng()).unwrap();
        assert_eq!(a, b);
        assert!(GinibreSpec::new(16, 5.0).is_err());
    }
}
