//! Exact sequential-revelation martingales and the rank-conditional
//! profile `phi(k) = E(f | N = k)`.
//!
//! Two revelation schemes are enumerated exactly. Coordinate revelation
//! conditions on `X_{s(1)}, ..., X_{s(j)}` in a fixed order; point
//! revelation draws the support points of a homogeneous measure in
//! exchangeable order, conditioning on `omega >= S` after `|S|` steps, and
//! is the scheme whose increments the covering property bounds by 2.

use crate::error::{Error, Result};
use crate::functionals::DiscreteFunctional;
use crate::measures::BooleanMeasure;

/// Cap for exact trace enumeration.
pub const MARTINGALE_CAP: usize = 14;

/// Cap for the phi profile.
pub const PHI_CAP: usize = 20;

/// One revelation path: the martingale values `M_0 = 0, ..., M_end` and
/// the path probability.
#[derive(Debug, Clone)]
pub struct MartingaleTrace {
    pub values: Vec<f64>,
    pub probability: f64,
}

impl MartingaleTrace {
    pub fn max_abs_increment(&self) -> f64 {
        self.values
            .windows(2)
            .map(|w| (w[1] - w[0]).abs())
            .fold(0.0, f64::max)
    }
}

/// How the sample is revealed along the martingale.
#[derive(Debug, Clone)]
pub enum RevelationOrder {
    /// Condition coordinate by coordinate in the given order (a
    /// permutation of `0..n`).
    Coordinates(Vec<usize>),
    /// Reveal the k points of a homogeneous measure in exchangeable order.
    Points,
}

/// Enumerate the full distribution over martingale traces.
pub fn martingale_trace(
    m: &BooleanMeasure,
    f: &DiscreteFunctional,
    order: &RevelationOrder,
) -> Result<Vec<MartingaleTrace>> {
    if m.n() > MARTINGALE_CAP {
        return Err(Error::CapExceeded {
            n: m.n(),
            cap: MARTINGALE_CAP,
        });
    }
    if f.arity() != m.n() {
        return Err(Error::DimensionMismatch {
            expected: m.n(),
            got: f.arity(),
        });
    }
    match order {
        RevelationOrder::Coordinates(perm) => coordinate_traces(m, f, perm),
        RevelationOrder::Points => point_traces(m, f),
    }
}

/// Largest absolute increment over every trace of positive probability.
pub fn max_abs_increment(traces: &[MartingaleTrace]) -> f64 {
    traces
        .iter()
        .filter(|t| t.probability > 0.0)
        .map(|t| t.max_abs_increment())
        .fold(0.0, f64::max)
}

fn coordinate_traces(
    m: &BooleanMeasure,
    f: &DiscreteFunctional,
    perm: &[usize],
) -> Result<Vec<MartingaleTrace>> {
    let n = m.n();
    let mut seen = vec![false; n];
    for &j in perm {
        if j >= n || seen[j] {
            return Err(Error::InvalidParameter(format!(
                "revelation order must be a permutation of 0..{n}"
            )));
        }
        seen[j] = true;
    }
    if perm.len() != n {
        return Err(Error::InvalidParameter(format!(
            "revelation order must be a permutation of 0..{n}"
        )));
    }
    // atoms as (mask, mass, mass * f)
    let atoms: Vec<(usize, f64, f64)> = m
        .support()
        .into_iter()
        .map(|mask| {
            let w = m.mass(mask);
            (mask, w, w * f.eval_mask(mask))
        })
        .collect();
    let total_mean: f64 = atoms.iter().map(|(_, _, wf)| wf).sum();
    let mut traces = Vec::new();
    // depth-first split of the support by the revealed coordinate
    let mut stack: Vec<(usize, Vec<(usize, f64, f64)>, Vec<f64>)> =
        vec![(0, atoms, vec![0.0])];
    while let Some((depth, atoms, values)) = stack.pop() {
        if depth == n {
            let probability: f64 = atoms.iter().map(|(_, w, _)| w).sum();
            traces.push(MartingaleTrace {
                values,
                probability,
            });
            continue;
        }
        let bit = perm[depth];
        let mut zero: Vec<(usize, f64, f64)> = Vec::new();
        let mut one: Vec<(usize, f64, f64)> = Vec::new();
        for a in atoms {
            if a.0 >> bit & 1 == 1 {
                one.push(a);
            } else {
                zero.push(a);
            }
        }
        for branch in [zero, one] {
            if branch.is_empty() {
                continue;
            }
            let w: f64 = branch.iter().map(|(_, w, _)| w).sum();
            let wf: f64 = branch.iter().map(|(_, _, wf)| wf).sum();
            let mut values = values.clone();
            values.push(wf / w - total_mean);
            stack.push((depth + 1, branch, values));
        }
    }
    // deterministic order regardless of stack discipline
    traces.sort_by(|a, b| a.values.partial_cmp(&b.values).expect("finite traces"));
    Ok(traces)
}

fn point_traces(m: &BooleanMeasure, f: &DiscreteFunctional) -> Result<Vec<MartingaleTrace>> {
    let n = m.n();
    let k = m.homogeneous_rank().ok_or_else(|| {
        Error::InvalidParameter(
            "point revelation needs a homogeneous measure; condition on a rank first".into(),
        )
    })?;
    let size = 1usize << n;
    // superset sums: up_w[S] = P(omega >= S), up_wf[S] = E(f 1{omega >= S})
    let mut up_w = vec![0.0f64; size];
    let mut up_wf = vec![0.0f64; size];
    for mask in m.support() {
        up_w[mask] = m.mass(mask);
        up_wf[mask] = m.mass(mask) * f.eval_mask(mask);
    }
    for j in 0..n {
        let bit = 1usize << j;
        for mask in 0..size {
            if mask & bit == 0 {
                up_w[mask] += up_w[mask | bit];
                up_wf[mask] += up_wf[mask | bit];
            }
        }
    }
    let mean = up_wf[0];
    let mut traces = Vec::new();
    // DFS over ordered point sequences; the transition to a new point x is
    // P(omega >= S + x) / ((k - |S|) P(omega >= S))
    let mut stack: Vec<(usize, f64, Vec<f64>)> = vec![(0, 1.0, vec![0.0])];
    while let Some((s_mask, prob, values)) = stack.pop() {
        let depth = s_mask.count_ones() as usize;
        if depth == k {
            traces.push(MartingaleTrace {
                values,
                probability: prob,
            });
            continue;
        }
        let remaining = (k - depth) as f64;
        for x in 0..n {
            let bit = 1usize << x;
            if s_mask & bit != 0 {
                continue;
            }
            let next = s_mask | bit;
            if up_w[next] <= 0.0 {
                continue;
            }
            let step_prob = up_w[next] / (remaining * up_w[s_mask]);
            let mut values = values.clone();
            values.push(up_wf[next] / up_w[next] - mean);
            stack.push((next, prob * step_prob, values));
        }
    }
    traces.sort_by(|a, b| {
        a.values
            .partial_cmp(&b.values)
            .expect("finite traces")
            .then(a.probability.total_cmp(&b.probability))
    });
    Ok(traces)
}

/// The profile `phi(k) = E(f | N = k)` over realizable ranks; `None` where
/// `P(N = k) = 0`.
pub fn phi_profile(m: &BooleanMeasure, f: &DiscreteFunctional) -> Result<Vec<Option<f64>>> {
    if m.n() > PHI_CAP {
        return Err(Error::CapExceeded {
            n: m.n(),
            cap: PHI_CAP,
        });
    }
    if f.arity() != m.n() {
        return Err(Error::DimensionMismatch {
            expected: m.n(),
            got: f.arity(),
        });
    }
    let mut mass = vec![0.0f64; m.n() + 1];
    let mut mass_f = vec![0.0f64; m.n() + 1];
    for mask in m.support() {
        let k = mask.count_ones() as usize;
        mass[k] += m.mass(mask);
        mass_f[k] += m.mass(mask) * f.eval_mask(mask);
    }
    Ok(mass
        .iter()
        .zip(&mass_f)
        .map(|(&w, &wf)| (w > 0.0).then(|| wf / w))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functionals::indicator_sum;

    #[test]
    fn phi_of_counting_function_is_identity() {
        let m = BooleanMeasure::product_bernoulli(&[0.4, 0.6, 0.5]).unwrap();
        let f = indicator_sum(&[1, 1, 1]).unwrap();
        let phi = phi_profile(&m, &f).unwrap();
        for (k, v) in phi.iter().enumerate() {
            assert!((v.unwrap() - k as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn phi_of_constant_is_constant() {
        let m = BooleanMeasure::product_bernoulli(&[0.4, 0.6]).unwrap();
        let f = indicator_sum(&[0, 0]).unwrap();
        for v in phi_profile(&m, &f).unwrap() {
            assert_eq!(v.unwrap(), 0.0);
        }
    }

    #[test]
    fn phi_symmetric_product_single_coordinate() {
        // product Bernoulli(1/2)^3 with f = X1: phi(k) = k/3
        let m = BooleanMeasure::product_bernoulli(&[0.5; 3]).unwrap();
        let f = indicator_sum(&[1, 0, 0]).unwrap();
        let phi = phi_profile(&m, &f).unwrap();
        for (k, v) in phi.iter().enumerate() {
            assert!((v.unwrap() - k as f64 / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn coordinate_traces_of_product_counting_function() {
        // increments of E(N | prefix) are centered Bernoullis: |delta| <= 1
        let m = BooleanMeasure::product_bernoulli(&[0.3, 0.7, 0.5]).unwrap();
        let f = indicator_sum(&[1, 1, 1]).unwrap();
        let traces =
            martingale_trace(&m, &f, &RevelationOrder::Coordinates(vec![0, 1, 2])).unwrap();
        let total: f64 = traces.iter().map(|t| t.probability).sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!(max_abs_increment(&traces) <= 1.0 + 1e-12);
        for t in &traces {
            assert_eq!(t.values[0], 0.0);
        }
    }

    #[test]
    fn constant_functional_has_zero_traces() {
        let m = BooleanMeasure::product_bernoulli(&[0.3, 0.7]).unwrap();
        let f = indicator_sum(&[0, 0]).unwrap();
        for order in [
            RevelationOrder::Coordinates(vec![0, 1]),
            RevelationOrder::Coordinates(vec![1, 0]),
        ] {
            let traces = martingale_trace(&m, &f, &order).unwrap();
            for t in traces {
                for v in t.values {
                    assert!(v.abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn point_traces_require_homogeneous_measure() {
        let m = BooleanMeasure::product_bernoulli(&[0.3, 0.7]).unwrap();
        let f = indicator_sum(&[1, 1]).unwrap();
        assert!(martingale_trace(&m, &f, &RevelationOrder::Points).is_err());
    }

    #[test]
    fn point_traces_on_uniform_rank_one() {
        let m = BooleanMeasure::product_bernoulli(&[0.5, 0.5])
            .unwrap()
            .condition_on_rank(1)
            .unwrap();
        let f = indicator_sum(&[1, -1]).unwrap();
        let traces = martingale_trace(&m, &f, &RevelationOrder::Points).unwrap();
        let total: f64 = traces.iter().map(|t| t.probability).sum();
        assert!((total - 1.0).abs() < 1e-12);
        // k = 1: one step, landing on f(10) = 1 or f(01) = -1, mean 0
        assert_eq!(traces.len(), 2);
        for t in &traces {
            assert!((t.probability - 0.5).abs() < 1e-12);
            assert!((t.values[1].abs() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bad_permutation_rejected() {
        let m = BooleanMeasure::product_bernoulli(&[0.5, 0.5]).unwrap();
        let f = indicator_sum(&[1, 1]).unwrap();
        assert!(martingale_trace(&m, &f, &RevelationOrder::Coordinates(vec![0, 0])).is_err());
        assert!(martingale_trace(&m, &f, &RevelationOrder::Coordinates(vec![0])).is_err());
    }
}
