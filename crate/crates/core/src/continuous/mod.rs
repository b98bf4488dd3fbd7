//! Planar determinantal point processes sampled at desk scale: the Ginibre
//! ensemble through its finite matrix model, and zeros of the Gaussian
//! power series in the unit disk through truncation.

pub mod ginibre;
pub mod power_series;

pub use ginibre::{sample_ginibre, GinibreSpec};
pub use power_series::{sample_power_series_zeros, truncation_error_bound, PowerSeriesSpec};

use num_complex::Complex64;
use serde_json::json;

use crate::error::{Error, Result};

/// A finite planar point configuration.
///
/// As counting measures, two configurations are at total-variation distance
/// equal to their symmetric-difference count, so adding or removing one
/// point moves the configuration by exactly 1.
#[derive(Debug, Clone, PartialEq)]
pub struct PointConfiguration {
    points: Vec<Complex64>,
}

impl PointConfiguration {
    pub fn new(points: Vec<Complex64>) -> Self {
        PointConfiguration { points }
    }

    pub fn empty() -> Self {
        PointConfiguration { points: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Complex64] {
        &self.points
    }

    /// Total-variation distance as counting measures: points are matched
    /// exactly, so this is the size of the multiset symmetric difference.
    pub fn tv_distance(&self, other: &PointConfiguration) -> usize {
        let count = |pts: &[Complex64]| {
            let mut m = std::collections::BTreeMap::new();
            for p in pts {
                *m.entry((p.re.to_bits(), p.im.to_bits())).or_insert(0i64) += 1;
            }
            m
        };
        let a = count(&self.points);
        let b = count(&other.points);
        let mut keys: std::collections::BTreeSet<_> = a.keys().collect();
        keys.extend(b.keys());
        keys.iter()
            .map(|k| (a.get(*k).unwrap_or(&0) - b.get(*k).unwrap_or(&0)).unsigned_abs() as usize)
            .sum()
    }

    /// Serialize as a JSON array of `[re, im]` pairs.
    pub fn to_json(&self) -> serde_json::Value {
        json!(self.points.iter().map(|p| json!([p.re, p.im])).collect::<Vec<_>>())
    }

    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        let arr = value
            .as_array()
            .ok_or_else(|| Error::Parse("point configuration must be a JSON array".into()))?;
        let mut points = Vec::with_capacity(arr.len());
        for entry in arr {
            let pair = entry
                .as_array()
                .filter(|p| p.len() == 2)
                .ok_or_else(|| Error::Parse("each point must be a [re, im] pair".into()))?;
            let re = pair[0]
                .as_f64()
                .ok_or_else(|| Error::Parse("point coordinates must be numbers".into()))?;
            let im = pair[1]
                .as_f64()
                .ok_or_else(|| Error::Parse("point coordinates must be numbers".into()))?;
            points.push(Complex64::new(re, im));
        }
        Ok(PointConfiguration { points })
    }
}
