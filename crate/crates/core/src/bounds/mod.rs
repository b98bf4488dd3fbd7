//! Closed-form concentration bounds and the machinery that tests them:
//! exact tail computation on small instances, Monte Carlo estimation with
//! exact confidence bounds, martingale traces, and pass/fail comparison
//! reports.

pub mod martingale;
pub mod tail;

pub use martingale::{martingale_trace, max_abs_increment, phi_profile, MartingaleTrace, RevelationOrder};
pub use tail::{compare, estimate_tail, exact_tail, Comparison, TailKind, TailReport, TailRow};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which tail a bound controls.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sidedness {
    OneSided,
    TwoSided,
}

/// A closed-form tail bound family with its parameters. Every `eval` is
/// the exact formula for `P(f - Ef >= a)` (or the two-sided variant) under
/// the family's hypotheses, for a Lipschitz-1 functional.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum BoundSpec {
    /// `exp(-a^2/(8k))` for a k-homogeneous measure with the SCP.
    HomogeneousScp { k: u64 },
    /// `2 exp(-a^2/(8k))`.
    HomogeneousTwoSided { k: u64 },
    /// `exp(-a^2/(4n))`: the homogeneous bound with `k <= n/2` assumed
    /// after complementation.
    KToN { n: u64 },
    /// `3 exp(-a^2/(16(a+2mu)))` for general strong Rayleigh measures.
    GeneralOneSided { mu: f64 },
    /// `5 exp(-a^2/(16(a+2mu)))`.
    GeneralTwoSided { mu: f64 },
    /// `exp(-a^2/(8|V|))` for uniform/weighted spanning trees.
    SpanningTree { vertices: u64 },
    /// `e^a (mu/(a+mu))^{a+mu}`: the Poissonian upper tail.
    PoissonHoeffding { mu: f64 },
    /// `exp(-a^2/(2n))`: Azuma-Hoeffding for increments bounded by 1.
    Azuma { n: u64 },
    /// `exp(-2a^2/n)`: the bounded-differences bound for product measures.
    Mcdiarmid { n: u64 },
}

impl BoundSpec {
    pub fn family_name(&self) -> &'static str {
        match self {
            BoundSpec::HomogeneousScp { .. } => "homogeneous_scp",
            BoundSpec::HomogeneousTwoSided { .. } => "homogeneous_two_sided",
            BoundSpec::KToN { .. } => "k_to_n",
            BoundSpec::GeneralOneSided { .. } => "general_one_sided",
            BoundSpec::GeneralTwoSided { .. } => "general_two_sided",
            BoundSpec::SpanningTree { .. } => "spanning_tree",
            BoundSpec::PoissonHoeffding { .. } => "poisson_hoeffding",
            BoundSpec::Azuma { .. } => "azuma",
            BoundSpec::Mcdiarmid { .. } => "mcdiarmid",
        }
    }

    pub fn sidedness(&self) -> Sidedness {
        match self {
            BoundSpec::HomogeneousTwoSided { .. } | BoundSpec::GeneralTwoSided { .. } => {
                Sidedness::TwoSided
            }
            _ => Sidedness::OneSided,
        }
    }

    fn validate(&self) -> Result<()> {
        let positive_size = |name: &str, v: u64| {
            if v == 0 {
                Err(Error::InvalidParameter(format!(
                    "{name} parameter of {} must be >= 1",
                    self.family_name()
                )))
            } else {
                Ok(())
            }
        };
        let finite_mean = |mu: f64| {
            if mu >= 0.0 && mu.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "mu = {mu} of {} must be nonnegative and finite",
                    self.family_name()
                )))
            }
        };
        match *self {
            BoundSpec::HomogeneousScp { k } | BoundSpec::HomogeneousTwoSided { k } => {
                positive_size("k", k)
            }
            BoundSpec::KToN { n } | BoundSpec::Azuma { n } | BoundSpec::Mcdiarmid { n } => {
                positive_size("n", n)
            }
            BoundSpec::SpanningTree { vertices } => positive_size("vertices", vertices),
            BoundSpec::GeneralOneSided { mu } | BoundSpec::GeneralTwoSided { mu } => {
                finite_mean(mu)
            }
            BoundSpec::PoissonHoeffding { mu } => {
                finite_mean(mu).and_then(|()| {
                    if mu > 0.0 {
                        Ok(())
                    } else {
                        Err(Error::InvalidParameter(
                            "poisson_hoeffding needs mu > 0".into(),
                        ))
                    }
                })
            }
        }
    }

    /// Evaluate the bound at threshold `a >= 0`.
    pub fn eval(&self, a: f64) -> Result<f64> {
        self.validate()?;
        if !(a >= 0.0) || !a.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "threshold a = {a} must be nonnegative and finite"
            )));
        }
        let gauss = |denom: f64| (-a * a / denom).exp();
        let general = |mu: f64| {
            if a == 0.0 {
                1.0
            } else {
                (-a * a / (16.0 * (a + 2.0 * mu))).exp()
            }
        };
        Ok(match *self {
            BoundSpec::HomogeneousScp { k } => gauss(8.0 * k as f64),
            BoundSpec::HomogeneousTwoSided { k } => 2.0 * gauss(8.0 * k as f64),
            BoundSpec::KToN { n } => gauss(4.0 * n as f64),
            BoundSpec::GeneralOneSided { mu } => 3.0 * general(mu),
            BoundSpec::GeneralTwoSided { mu } => 5.0 * general(mu),
            BoundSpec::SpanningTree { vertices } => gauss(8.0 * vertices as f64),
            BoundSpec::PoissonHoeffding { mu } => {
                a.exp() * (mu / (a + mu)).powf(a + mu)
            }
            BoundSpec::Azuma { n } => gauss(2.0 * n as f64),
            BoundSpec::Mcdiarmid { n } => (-2.0 * a * a / n as f64).exp(),
        })
    }
}

/// 20 equispaced thresholds over `(0, range_bound]`.
pub fn default_a_grid(range_bound: f64) -> Vec<f64> {
    (1..=20).map(|i| range_bound * i as f64 / 20.0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paper_values() {
        // exp(-a^2/(8k)) at a=4, k=2 is e^{-1}
        let b = BoundSpec::HomogeneousScp { k: 2 };
        assert!((b.eval(4.0).unwrap() - (-1.0f64).exp()).abs() < 1e-12);
        assert!((b.eval(0.0).unwrap() - 1.0).abs() < 1e-15);

        // 3 exp(-64/192) = 3 e^{-1/3}
        let b = BoundSpec::GeneralOneSided { mu: 2.0 };
        assert!((b.eval(8.0).unwrap() - 3.0 * (-1.0f64 / 3.0).exp()).abs() < 1e-12);

        // e * (1/2)^2
        let b = BoundSpec::PoissonHoeffding { mu: 1.0 };
        assert!((b.eval(1.0).unwrap() - std::f64::consts::E / 4.0).abs() < 1e-12);

        let b = BoundSpec::SpanningTree { vertices: 4 };
        assert!((b.eval(2.0).unwrap() - (-4.0f64 / 32.0).exp()).abs() < 1e-12);

        let b = BoundSpec::Mcdiarmid { n: 8 };
        assert!((b.eval(2.0).unwrap() - (-1.0f64).exp()).abs() < 1e-12);

        let b = BoundSpec::Azuma { n: 8 };
        assert!((b.eval(2.0).unwrap() - (-0.25f64).exp()).abs() < 1e-12);

        let b = BoundSpec::KToN { n: 4 };
        assert!((b.eval(2.0).unwrap() - (-0.25f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn monotone_in_a_and_size() {
        let families = [
            BoundSpec::HomogeneousScp { k: 3 },
            BoundSpec::HomogeneousTwoSided { k: 3 },
            BoundSpec::KToN { n: 6 },
            BoundSpec::GeneralOneSided { mu: 2.5 },
            BoundSpec::GeneralTwoSided { mu: 2.5 },
            BoundSpec::SpanningTree { vertices: 5 },
            BoundSpec::PoissonHoeffding { mu: 2.5 },
            BoundSpec::Azuma { n: 6 },
            BoundSpec::Mcdiarmid { n: 6 },
        ];
        for b in families {
            let mut prev = f64::INFINITY;
            for i in 0..50 {
                let a = 0.2 * i as f64;
                let v = b.eval(a).unwrap();
                assert!(v > 0.0);
                assert!(v <= prev + 1e-15, "{b:?} not non-increasing at a={a}");
                prev = v;
            }
        }
        // non-decreasing in the size parameter
        let small = BoundSpec::HomogeneousScp { k: 2 }.eval(3.0).unwrap();
        let large = BoundSpec::HomogeneousScp { k: 5 }.eval(3.0).unwrap();
        assert!(large >= small);
        let small = BoundSpec::GeneralOneSided { mu: 1.0 }.eval(3.0).unwrap();
        let large = BoundSpec::GeneralOneSided { mu: 4.0 }.eval(3.0).unwrap();
        assert!(large >= small);
    }

    #[test]
    fn parameter_validation() {
        assert!(BoundSpec::HomogeneousScp { k: 0 }.eval(1.0).is_err());
        assert!(BoundSpec::PoissonHoeffding { mu: 0.0 }.eval(1.0).is_err());
        assert!(BoundSpec::GeneralOneSided { mu: -1.0 }.eval(1.0).is_err());
        assert!(BoundSpec::Azuma { n: 4 }.eval(-0.5).is_err());
    }

    #[test]
    fn config_round_trip() {
        let b = BoundSpec::SpanningTree { vertices: 4 };
        let text = serde_json::to_string(&b).unwrap();
        assert!(text.contains("spanning_tree"));
        let back: BoundSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(b, back);
        let parsed: BoundSpec =
            serde_json::from_str(r#"{"family":"general_one_sided","mu":2.0}"#).unwrap();
        assert_eq!(parsed, BoundSpec::GeneralOneSided { mu: 2.0 });
    }
}
