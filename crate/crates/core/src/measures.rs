//! Exact probability measures on the Boolean lattice `{0,1}^n`.
//!
//! [`BooleanMeasure`] stores the full probability vector over all `2^n`
//! configurations, so every operation here (conditioning, projection,
//! generating-polynomial evaluation, rank law) is exact up to f64
//! round-off. The representation is intentionally dense and capped at a
//! configurable `n` (default 20): exactness is the point of this module,
//! and the samplers cover larger instances.
//!
//! Configurations are indexed by bitmask with coordinate `j` (0-based) at
//! bit `j`. In the JSON format and in bitstrings, the first character is
//! coordinate 1, i.e. bitstrings are little-endian.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde_json::json;

use crate::error::{Error, Result};

/// Default cap on the coordinate count for dense representation.
pub const DEFAULT_N_CAP: usize = 20;

/// Inputs whose total mass is within this of 1 are accepted as normalized.
pub const NORMALIZATION_TOL: f64 = 1e-12;

/// Inputs off by more than this are rejected instead of renormalized.
pub const RENORMALIZATION_TOL: f64 = 1e-6;

/// A point of the Boolean lattice: an ordered sequence of n bits.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    bits: Vec<bool>,
}

impl Configuration {
    pub fn new(bits: Vec<bool>) -> Self {
        Configuration { bits }
    }

    /// Build from a mask with the given ambient dimension.
    pub fn from_mask(mask: usize, n: usize) -> Self {
        Configuration {
            bits: (0..n).map(|j| mask >> j & 1 == 1).collect(),
        }
    }

    /// Parse a little-endian bitstring such as `"1100"`.
    pub fn from_bitstring(s: &str) -> Result<Self> {
        let bits = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::InvalidConfiguration(format!(
                    "unexpected character {other:?} in bitstring"
                ))),
            })
            .collect::<Result<Vec<bool>>>()?;
        if bits.is_empty() {
            return Err(Error::InvalidConfiguration("empty bitstring".into()));
        }
        Ok(Configuration { bits })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bit(&self, j: usize) -> bool {
        self.bits[j]
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Number of ones (the counting function N).
    pub fn rank(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    /// Mask form; only valid for n <= usize::BITS.
    pub fn mask(&self) -> usize {
        self.bits
            .iter()
            .enumerate()
            .fold(0usize, |m, (j, &b)| if b { m | 1 << j } else { m })
    }

    pub fn hamming_distance(&self, other: &Configuration) -> usize {
        assert_eq!(self.len(), other.len(), "hamming distance needs equal n");
        self.bits
            .iter()
            .zip(&other.bits)
            .filter(|(a, b)| a != b)
            .count()
    }

    /// Little-endian bitstring (coordinate 1 first).
    pub fn to_bitstring(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }
}

impl std::fmt::Display for Configuration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_bitstring())
    }
}

/// An explicit probability measure on `{0,1}^n`.
///
/// Immutable after construction; all operations are pure functions
/// returning new measures, so values can be shared freely across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct BooleanMeasure {
    n: usize,
    /// Dense mass vector indexed by configuration mask; always normalized.
    weights: Vec<f64>,
}

impl BooleanMeasure {
    /// Build from a dense mass vector that is already normalized within
    /// [`RENORMALIZATION_TOL`]; masses are renormalized to sum exactly to 1.
    pub fn new(n: usize, weights: Vec<f64>) -> Result<Self> {
        Self::with_cap(n, weights, DEFAULT_N_CAP)
    }

    /// As [`BooleanMeasure::new`] with an explicit cap on n.
    pub fn with_cap(n: usize, weights: Vec<f64>, cap: usize) -> Result<Self> {
        Self::build(n, weights, cap, RENORMALIZATION_TOL)
    }

    /// Build from nonnegative raw weights with any positive total mass.
    pub fn from_unnormalized(n: usize, weights: Vec<f64>) -> Result<Self> {
        Self::build(n, weights, DEFAULT_N_CAP, f64::INFINITY)
    }

    /// Raw weights with an explicit cap on n.
    pub fn from_unnormalized_with_cap(n: usize, weights: Vec<f64>, cap: usize) -> Result<Self> {
        Self::build(n, weights, cap, f64::INFINITY)
    }

    fn build(n: usize, mut weights: Vec<f64>, cap: usize, reject_beyond: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        if n > cap {
            return Err(Error::CapExceeded { n, cap });
        }
        if weights.len() != 1 << n {
            return Err(Error::DimensionMismatch {
                expected: 1 << n,
                got: weights.len(),
            });
        }
        for (index, &mass) in weights.iter().enumerate() {
            if !(mass >= 0.0) || !mass.is_finite() {
                return Err(Error::NegativeMass { index, mass });
            }
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 || !total.is_finite() || (total - 1.0).abs() > reject_beyond {
            return Err(Error::NotNormalized { total });
        }
        if total != 1.0 {
            for w in &mut weights {
                *w /= total;
            }
        }
        Ok(BooleanMeasure { n, weights })
    }

    /// Build from a map of atoms, everything else getting mass zero.
    pub fn from_atoms(n: usize, atoms: &[(Configuration, f64)]) -> Result<Self> {
        if n == 0 || n > DEFAULT_N_CAP {
            return Err(Error::CapExceeded { n, cap: DEFAULT_N_CAP });
        }
        let mut weights = vec![0.0; 1usize << n];
        for (c, mass) in atoms {
            if c.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: c.len(),
                });
            }
            weights[c.mask()] += mass;
        }
        Self::new(n, weights)
    }

    /// Product of independent Bernoulli(p_j) coordinates.
    pub fn product_bernoulli(ps: &[f64]) -> Result<Self> {
        let n = ps.len();
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        for &p in ps {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::InvalidParameter(format!(
                    "Bernoulli parameter {p} outside [0,1]"
                )));
            }
        }
        if n > DEFAULT_N_CAP {
            return Err(Error::CapExceeded { n, cap: DEFAULT_N_CAP });
        }
        let mut weights = vec![0.0; 1 << n];
        for (mask, w) in weights.iter_mut().enumerate() {
            let mut mass = 1.0;
            for (j, &p) in ps.iter().enumerate() {
                mass *= if mask >> j & 1 == 1 { p } else { 1.0 - p };
            }
            *w = mass;
        }
        BooleanMeasure::from_unnormalized(n, weights)
    }

    /// Point mass at one configuration.
    pub fn point_mass(c: &Configuration) -> Result<Self> {
        Self::from_atoms(c.len(), &[(c.clone(), 1.0)])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Mass of the configuration with the given mask.
    pub fn mass(&self, mask: usize) -> f64 {
        self.weights[mask]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Masks with strictly positive mass, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.weights.len())
            .filter(|&m| self.weights[m] > 0.0)
            .collect()
    }

    /// Inclusion probability P(X_j = 1).
    pub fn marginal(&self, j: usize) -> f64 {
        assert!(j < self.n);
        (0..self.weights.len())
            .filter(|m| m >> j & 1 == 1)
            .map(|m| self.weights[m])
            .sum()
    }

    /// Expected value of the counting function N.
    pub fn mean_rank(&self) -> f64 {
        self.weights
            .iter()
            .enumerate()
            .map(|(m, &w)| w * (m.count_ones() as f64))
            .sum()
    }

    /// Evaluate the multi-affine generating polynomial at a complex point.
    ///
    /// Returns the exact sum of `P(omega) * prod_j z_j^{omega_j}` over the
    /// support.
    pub fn generating_polynomial_eval(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: z.len(),
            });
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (mask, &w) in self.weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let mut term = Complex64::new(w, 0.0);
            for (j, zj) in z.iter().enumerate() {
                if mask >> j & 1 == 1 {
                    term *= zj;
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Condition on the partial assignment `X_j = b` for `(j, b)` pairs,
    /// returning the renormalized law on the remaining coordinates in
    /// ascending original order.
    pub fn condition(&self, assignments: &BTreeMap<usize, bool>) -> Result<BooleanMeasure> {
        for &j in assignments.keys() {
            if j >= self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    got: j + 1,
                });
            }
        }
        let remaining: Vec<usize> = (0..self.n).filter(|j| !assignments.contains_key(j)).collect();
        if remaining.is_empty() {
            return Err(Error::InvalidParameter(
                "conditioning fixes every coordinate; no measure remains".into(),
            ));
        }
        let mut fixed_mask = 0usize;
        let mut fixed_bits = 0usize;
        for (&j, &b) in assignments {
            fixed_mask |= 1 << j;
            if b {
                fixed_bits |= 1 << j;
            }
        }
        let m_new = remaining.len();
        let mut weights = vec![0.0; 1 << m_new];
        let mut total = 0.0;
        for (mask, &w) in self.weights.iter().enumerate() {
            if w == 0.0 || mask & fixed_mask != fixed_bits {
                continue;
            }
            let mut out = 0usize;
            for (new_j, &old_j) in remaining.iter().enumerate() {
                if mask >> old_j & 1 == 1 {
                    out |= 1 << new_j;
                }
            }
            weights[out] += w;
            total += w;
        }
        if total <= 0.0 {
            return Err(Error::ConditionOnNull);
        }
        BooleanMeasure::from_unnormalized(m_new, weights)
    }

    /// Condition on `N = k` (all mass on rank-k configurations).
    pub fn condition_on_rank(&self, k: usize) -> Result<BooleanMeasure> {
        if k > self.n {
            return Err(Error::RankOnNull { k });
        }
        let mut weights = vec![0.0; self.weights.len()];
        let mut total = 0.0;
        for (mask, &w) in self.weights.iter().enumerate() {
            if mask.count_ones() as usize == k {
                weights[mask] = w;
                total += w;
            }
        }
        if total <= 0.0 {
            return Err(Error::RankOnNull { k });
        }
        BooleanMeasure::from_unnormalized(self.n, weights)
    }

    /// The law of N: a vector of `P(N = k)` for `k = 0..=n`.
    pub fn rank_distribution(&self) -> Vec<f64> {
        let mut dist = vec![0.0; self.n + 1];
        for (mask, &w) in self.weights.iter().enumerate() {
            dist[mask.count_ones() as usize] += w;
        }
        dist
    }

    /// Marginal law on the chosen coordinates (ascending original order).
    pub fn project(&self, coords: &[usize]) -> Result<BooleanMeasure> {
        if coords.is_empty() {
            return Err(Error::EmptySubset);
        }
        let mut sel: Vec<usize> = coords.to_vec();
        sel.sort_unstable();
        sel.dedup();
        if let Some(&max) = sel.last() {
            if max >= self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    got: max + 1,
                });
            }
        }
        let m_new = sel.len();
        let mut weights = vec![0.0; 1 << m_new];
        for (mask, &w) in self.weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let mut out = 0usize;
            for (new_j, &old_j) in sel.iter().enumerate() {
                if mask >> old_j & 1 == 1 {
                    out |= 1 << new_j;
                }
            }
            weights[out] += w;
        }
        BooleanMeasure::from_unnormalized(m_new, weights)
    }

    /// Whether all mass sits on a single rank; returns that rank if so.
    pub fn homogeneous_rank(&self) -> Option<usize> {
        let dist = self.rank_distribution();
        let mut rank = None;
        for (k, &p) in dist.iter().enumerate() {
            if p > 0.0 {
                if rank.is_some() {
                    return None;
                }
                rank = Some(k);
            }
        }
        rank
    }

    /// Serialize to the measure JSON format
    /// `{"n": n, "atoms": {"bitstring": mass, ...}}` with little-endian
    /// bitstrings (coordinate 1 = first character). Zero-mass atoms are
    /// omitted; atoms appear in ascending mask order.
    pub fn to_json(&self) -> serde_json::Value {
        let mut atoms = serde_json::Map::new();
        for mask in self.support() {
            let key = Configuration::from_mask(mask, self.n).to_bitstring();
            atoms.insert(key, json!(self.weights[mask]));
        }
        json!({ "n": self.n, "atoms": atoms })
    }

    /// Parse the measure JSON format. Inputs are renormalized when their
    /// total mass is within [`RENORMALIZATION_TOL`] of 1, rejected otherwise.
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Parse("measure JSON must be an object".into()))?;
        let n = obj
            .get("n")
            .and_then(|v| v.as_u64())
            .ok_or_else(|| Error::Parse("measure JSON needs integer field `n`".into()))?
            as usize;
        let atoms = obj
            .get("atoms")
            .and_then(|v| v.as_object())
            .ok_or_else(|| Error::Parse("measure JSON needs object field `atoms`".into()))?;
        if n == 0 || n > DEFAULT_N_CAP {
            return Err(Error::CapExceeded { n, cap: DEFAULT_N_CAP });
        }
        let mut weights = vec![0.0; 1 << n];
        for (key, v) in atoms {
            let c = Configuration::from_bitstring(key)?;
            if c.len() != n {
                return Err(Error::Parse(format!(
                    "atom {key:?} has {} coordinates, expected {n}",
                    c.len()
                )));
            }
            let mass = v
                .as_f64()
                .ok_or_else(|| Error::Parse(format!("atom {key:?} has non-numeric mass")))?;
            weights[c.mask()] += mass;
        }
        BooleanMeasure::new(n, weights)
    }

    pub fn read_json_file(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let value: serde_json::Value = serde_json::from_str(&text)?;
        Self::from_json(&value)
    }
}
