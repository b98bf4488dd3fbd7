//! Lipschitz functionals of configurations and point sets, each carrying
//! its declared Lipschitz constant, plus a flip-scan verifier.
//!
//! The harness rescales every functional to Lipschitz constant 1 before
//! comparing against the concentration bounds (`f/c`), and reports state
//! the rescaling, so declared constants only need to be valid, not tight.
//! [`verify_lipschitz`] refutes wrong declarations with an explicit flip
//! pair; it never infers constants.

use std::sync::Arc;

use rand::Rng;

use crate::continuous::PointConfiguration;
use crate::dependence::{CheckVerdict, Violation, Witness};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::measures::Configuration;

/// Cap for exhaustive flip scans.
pub const EXHAUSTIVE_CAP: usize = 22;

type MaskEval = Arc<dyn Fn(usize) -> f64 + Send + Sync>;

/// A real function of `{0,1}^n` with a declared Lipschitz constant for the
/// Hamming distance.
#[derive(Clone)]
pub struct DiscreteFunctional {
    name: String,
    arity: usize,
    lipschitz: f64,
    eval_mask: MaskEval,
}

impl std::fmt::Debug for DiscreteFunctional {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("DiscreteFunctional")
            .field("name", &self.name)
            .field("arity", &self.arity)
            .field("lipschitz", &self.lipschitz)
            .finish()
    }
}

impl DiscreteFunctional {
    pub fn new(
        name: impl Into<String>,
        arity: usize,
        lipschitz: f64,
        eval_mask: impl Fn(usize) -> f64 + Send + Sync + 'static,
    ) -> Self {
        DiscreteFunctional {
            name: name.into(),
            arity,
            lipschitz,
            eval_mask: Arc::new(eval_mask),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    /// Evaluate on a mask (coordinate j at bit j).
    pub fn eval_mask(&self, mask: usize) -> f64 {
        (self.eval_mask)(mask)
    }

    pub fn evaluate(&self, c: &Configuration) -> Result<f64> {
        if c.len() != self.arity {
            return Err(Error::DimensionMismatch {
                expected: self.arity,
                got: c.len(),
            });
        }
        Ok(self.eval_mask(c.mask()))
    }

    /// The Lipschitz-1 rescaling `f / c`.
    pub fn rescaled(&self) -> DiscreteFunctional {
        if self.lipschitz == 1.0 {
            return self.clone();
        }
        let c = self.lipschitz;
        let inner = self.eval_mask.clone();
        DiscreteFunctional {
            name: format!("{}/{}", self.name, c),
            arity: self.arity,
            lipschitz: 1.0,
            eval_mask: Arc::new(move |mask| inner(mask) / c),
        }
    }

    /// Declare a different constant (used to exercise the refuter).
    pub fn with_declared_lipschitz(&self, c: f64) -> DiscreteFunctional {
        let mut out = self.clone();
        out.lipschitz = c;
        out
    }
}

/// A real function of finite point configurations with a declared
/// Lipschitz constant for the total-variation distance.
#[derive(Clone)]
pub struct PointFunctional {
    name: String,
    lipschitz: f64,
    #[allow(clippy::type_complexity)]
    eval: Arc<dyn Fn(&PointConfiguration) -> Result<f64> + Send + Sync>,
}

impl std::fmt::Debug for PointFunctional {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PointFunctional")
            .field("name", &self.name)
            .field("lipschitz", &self.lipschitz)
            .finish()
    }
}

impl PointFunctional {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn evaluate(&self, c: &PointConfiguration) -> Result<f64> {
        (self.eval)(c)
    }

    /// The Lipschitz-1 rescaling `f / c`.
    pub fn rescaled(&self) -> PointFunctional {
        if self.lipschitz == 1.0 {
            return self.clone();
        }
        let c = self.lipschitz;
        let inner = self.eval.clone();
        PointFunctional {
            name: format!("{}/{}", self.name, c),
            lipschitz: 1.0,
            eval: Arc::new(move |cfg| Ok(inner(cfg)? / c)),
        }
    }
}

/// Half the number of odd-degree vertices in the selected edge subset.
/// Flipping one edge changes two vertex parities, so the constant is 1.
pub fn half_odd_degree(g: &Graph) -> DiscreteFunctional {
    let g = g.clone();
    let arity = g.edge_count();
    DiscreteFunctional::new("half_odd_degree", arity, 1.0, move |mask| {
        let odd = g
            .degrees_for_mask(mask)
            .into_iter()
            .filter(|d| d % 2 == 1)
            .count();
        odd as f64 / 2.0
    })
}

/// Number of degree-1 vertices. One edge flip moves two vertices across
/// the degree-1 boundary in the worst case: constant 2.
pub fn leaf_count(g: &Graph) -> DiscreteFunctional {
    let g = g.clone();
    let arity = g.edge_count();
    DiscreteFunctional::new("leaf_count", arity, 2.0, move |mask| {
        g.degrees_for_mask(mask)
            .into_iter()
            .filter(|&d| d == 1)
            .count() as f64
    })
}

/// Signed coordinate sum with coefficients in {-1, 0, 1}.
pub fn indicator_sum(coeffs: &[i8]) -> Result<DiscreteFunctional> {
    for &c in coeffs {
        if !(-1..=1).contains(&c) {
            return Err(Error::InvalidParameter(format!(
                "indicator_sum coefficient {c} outside {{-1,0,1}}"
            )));
        }
    }
    let coeffs = coeffs.to_vec();
    let arity = coeffs.len();
    Ok(DiscreteFunctional::new(
        "indicator_sum",
        arity,
        1.0,
        move |mask| {
            coeffs
                .iter()
                .enumerate()
                .map(|(j, &c)| if mask >> j & 1 == 1 { c as f64 } else { 0.0 })
                .sum()
        },
    ))
}

/// Distance notion for [`lonely_points`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Euclidean,
    /// Poincare-disk distance; only valid for points with |z| < 1.
    Hyperbolic,
}

/// Count the points with no other configuration point within the given
/// distance. The only built-in constant is 6, the planar packing bound for
/// the Euclidean metric at radius 1; any other radius or metric needs
/// [`lonely_points_with_constant`].
pub fn lonely_points(radius: f64, metric: Metric) -> Result<PointFunctional> {
    if metric == Metric::Euclidean && radius == 1.0 {
        lonely_points_with_constant(radius, metric, 6.0)
    } else {
        Err(Error::MissingLipschitzConstant)
    }
}

/// [`lonely_points`] with a caller-supplied Lipschitz constant.
pub fn lonely_points_with_constant(
    radius: f64,
    metric: Metric,
    lipschitz: f64,
) -> Result<PointFunctional> {
    if !(radius > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "lonely_points radius {radius} must be positive"
        )));
    }
    if !(lipschitz > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "Lipschitz constant {lipschitz} must be positive"
        )));
    }
    let name = match metric {
        Metric::Euclidean => "lonely_points",
        Metric::Hyperbolic => "lonely_points_hyperbolic",
    };
    Ok(PointFunctional {
        name: name.into(),
        lipschitz,
        eval: Arc::new(move |cfg| {
            let pts = cfg.points();
            if metric == Metric::Hyperbolic {
                for p in pts {
                    if p.norm() >= 1.0 {
                        return Err(Error::OutsideUnitDisk { modulus: p.norm() });
                    }
                }
            }
            let mut lonely = 0usize;
            for (i, p) in pts.iter().enumerate() {
                let crowded = pts.iter().enumerate().any(|(j, q)| {
                    if i == j {
                        return false;
                    }
                    let d = match metric {
                        Metric::Euclidean => (p - q).norm(),
                        Metric::Hyperbolic => {
                            let num = 2.0 * (p - q).norm_sqr();
                            let den = (1.0 - p.norm_sqr()) * (1.0 - q.norm_sqr());
                            (1.0 + num / den).acosh()
                        }
                    };
                    d <= radius
                });
                if !crowded {
                    lonely += 1;
                }
            }
            Ok(lonely as f64)
        }),
    })
}

/// Scan mode for [`verify_lipschitz`].
#[derive(Debug, Clone, Copy)]
pub enum VerifyMode {
    /// Every configuration and every flip (n <= 22).
    Exhaustive,
    /// `trials` random (configuration, flip) pairs from the given seed.
    Randomized { trials: u64, seed: u64 },
}

/// Check the declared Lipschitz constant over single-coordinate flips.
/// Refutation returns the violating pair.
pub fn verify_lipschitz(f: &DiscreteFunctional, mode: VerifyMode) -> Result<CheckVerdict> {
    let n = f.arity();
    let slack = 1e-9 * f.lipschitz().max(1.0);
    let check_pair = |mask: usize, j: usize| -> Option<CheckVerdict> {
        let flipped = mask ^ (1 << j);
        let diff = (f.eval_mask(mask) - f.eval_mask(flipped)).abs();
        (diff > f.lipschitz() + slack).then(|| {
            let x = Configuration::from_mask(mask, n).to_bitstring();
            let y = Configuration::from_mask(flipped, n).to_bitstring();
            let detail = format!(
                "|f({x}) - f({y})| = {diff} exceeds declared constant {}",
                f.lipschitz()
            );
            CheckVerdict {
                holds: false,
                witness: Some(Witness::Violation(Violation::LipschitzPair {
                    x,
                    y,
                    difference: diff,
                    declared: f.lipschitz(),
                })),
                detail,
            }
        })
    };
    let scanned: u64;
    match mode {
        VerifyMode::Exhaustive => {
            if n > EXHAUSTIVE_CAP {
                return Err(Error::CapExceeded {
                    n,
                    cap: EXHAUSTIVE_CAP,
                });
            }
            for j in 0..n {
                // flips with bit j clear cover each unordered pair once
                for high in 0..1usize << (n - 1) {
                    let mask = ((high >> j) << (j + 1)) | (high & ((1 << j) - 1));
                    if let Some(v) = check_pair(mask, j) {
                        return Ok(v);
                    }
                }
            }
            scanned = (n as u64) << (n - 1);
        }
        VerifyMode::Randomized { trials, seed } => {
            let mut rng = crate::rng::SeededRng::new(seed).rng();
            for _ in 0..trials {
                let mask = (rng.random::<u64>() % (1u64 << n)) as usize;
                let j = rng.random_range(0..n);
                if let Some(v) = check_pair(mask, j) {
                    return Ok(v);
                }
            }
            scanned = trials;
        }
    }
    Ok(CheckVerdict {
        holds: true,
        witness: None,
        detail: format!(
            "|f(x) - f(x')| <= {} over {scanned} single-flip pairs",
            f.lipschitz()
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn half_odd_degree_examples() {
        let p3 = Graph::path(3).unwrap();
        let f = half_odd_degree(&p3);
        assert_eq!(f.eval_mask(0b11), 1.0); // the unique spanning tree
        assert_eq!(f.eval_mask(0), 0.0);

        let star = Graph::unit(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        let f = half_odd_degree(&star);
        assert_eq!(f.eval_mask(0b111), 2.0); // three leaves plus odd center
    }

    #[test]
    fn leaf_count_examples() {
        let p3 = Graph::path(3).unwrap();
        assert_eq!(leaf_count(&p3).eval_mask(0b11), 2.0);

        let star5 = Graph::unit(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert_eq!(leaf_count(&star5).eval_mask(0b1111), 4.0);

        let k4 = Graph::complete(4).unwrap();
        // edges of K4 listed (0,1),(0,2),(0,3),(1,2),(1,3),(2,3):
        // star at vertex 0 = edges {0,1,2}
        assert_eq!(leaf_count(&k4).eval_mask(0b000111), 3.0);
    }

    #[test]
    fn indicator_sum_examples() {
        let f = indicator_sum(&[1, 1, 1]).unwrap();
        assert_eq!(f.eval_mask(0b101), 2.0); // f = N
        let f = indicator_sum(&[0, 0]).unwrap();
        assert_eq!(f.eval_mask(0b11), 0.0);
        let f = indicator_sum(&[1, -1]).unwrap();
        assert_eq!(f.eval_mask(0b01), 1.0);
        assert_eq!(f.eval_mask(0b10), -1.0);
        assert!(indicator_sum(&[2, 0]).is_err());
    }

    #[test]
    fn lonely_points_examples() {
        let f = lonely_points(1.0, Metric::Euclidean).unwrap();
        assert_eq!(f.lipschitz(), 6.0);
        assert_eq!(f.evaluate(&PointConfiguration::empty()).unwrap(), 0.0);
        let single = PointConfiguration::new(vec![Complex64::new(0.3, 0.1)]);
        assert_eq!(f.evaluate(&single).unwrap(), 1.0);
        // 0 and 0.5 are close; 1.2 is within 1 of 0.5: nobody is lonely
        let three = PointConfiguration::new(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.5, 0.0),
            Complex64::new(1.2, 0.0),
        ]);
        assert_eq!(f.evaluate(&three).unwrap(), 0.0);
        // spread out: everyone lonely
        let spread = PointConfiguration::new(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(3.0, 0.0),
            Complex64::new(0.0, 3.0),
        ]);
        assert_eq!(f.evaluate(&spread).unwrap(), 3.0);
    }

    #[test]
    fn lonely_points_permutation_invariant() {
        let f = lonely_points(1.0, Metric::Euclidean).unwrap();
        let pts = [
            Complex64::new(0.1, 0.2),
            Complex64::new(2.0, -0.3),
            Complex64::new(0.4, 0.9),
            Complex64::new(-1.5, 0.0),
        ];
        let a = f.evaluate(&PointConfiguration::new(pts.to_vec())).unwrap();
        let mut rev = pts.to_vec();
        rev.reverse();
        let b = f.evaluate(&PointConfiguration::new(rev)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn hyperbolic_needs_constant_and_unit_disk() {
        assert!(matches!(
            lonely_points(0.5, Metric::Hyperbolic),
            Err(Error::MissingLipschitzConstant)
        ));
        let f = lonely_points_with_constant(0.5, Metric::Hyperbolic, 4.0).unwrap();
        let bad = PointConfiguration::new(vec![Complex64::new(1.5, 0.0)]);
        assert!(matches!(
            f.evaluate(&bad),
            Err(Error::OutsideUnitDisk { .. })
        ));
        let ok = PointConfiguration::new(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.9, 0.0),
        ]);
        // hyperbolic distance between 0 and 0.9 is large: both lonely
        assert_eq!(f.evaluate(&ok).unwrap(), 2.0);
    }

    #[test]
    fn verify_lipschitz_examples() {
        let f = indicator_sum(&[1, -1, 1, 0, 1, -1, 1, -1, 1, 1]).unwrap();
        assert!(verify_lipschitz(&f, VerifyMode::Exhaustive).unwrap().holds);

        let k4 = Graph::complete(4).unwrap();
        assert!(verify_lipschitz(&half_odd_degree(&k4), VerifyMode::Exhaustive)
            .unwrap()
            .holds);

        // leaf_count declared at 1 on K4 is refuted by an explicit flip
        let wrong = leaf_count(&k4).with_declared_lipschitz(1.0);
        let v = verify_lipschitz(&wrong, VerifyMode::Exhaustive).unwrap();
        assert!(!v.holds);
        match v.violation().unwrap() {
            Violation::LipschitzPair { difference, .. } => assert!(*difference >= 2.0),
            other => panic!("unexpected witness {other:?}"),
        }

        // correct declaration passes
        assert!(verify_lipschitz(&leaf_count(&k4), VerifyMode::Exhaustive)
            .unwrap()
            .holds);

        // randomized mode agrees on the refutation with enough trials
        let v = verify_lipschitz(
            &wrong,
            VerifyMode::Randomized {
                trials: 5000,
                seed: 13,
            },
        )
        .unwrap();
        assert!(!v.holds);
    }

    #[test]
    fn rescaled_functional_is_lipschitz_one() {
        let k4 = Graph::complete(4).unwrap();
        let f = leaf_count(&k4).rescaled();
        assert_eq!(f.lipschitz(), 1.0);
        assert!(verify_lipschitz(&f, VerifyMode::Exhaustive).unwrap().holds);
        assert_eq!(f.name(), "leaf_count/2");
    }

    #[test]
    fn exhaustive_cap() {
        let f = indicator_sum(&[1; 23]).unwrap();
        assert!(matches!(
            verify_lipschitz(&f, VerifyMode::Exhaustive),
            Err(Error::CapExceeded { .. })
        ));
    }
}
