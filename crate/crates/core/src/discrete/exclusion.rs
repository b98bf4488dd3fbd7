//! Continuous-time exclusion dynamics with optional birth and death.
//!
//! The state jumps by swapping an occupied/empty site pair `(i,j)` at rate
//! `r(i,j)`, gains a particle at an empty site `i` at rate `alpha_i`, and
//! loses one at an occupied site at rate `beta_i`. Simulation is an exact
//! next-event loop: no time discretization, with the active-transition
//! table rebuilt after every event. The exact time-t law on small site
//! counts comes from uniformization of the generator on all `2^n` states.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{BooleanMeasure, Configuration};

/// Site cap for the exact generator exponential.
pub const EXACT_LAW_SITE_CAP: usize = 12;

/// Full parameterization of an exclusion run.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExclusionSpec {
    pub n_sites: usize,
    /// Symmetric nonnegative swap rates; the diagonal must be zero.
    pub swap_rates: Vec<Vec<f64>>,
    pub birth_rates: Vec<f64>,
    pub death_rates: Vec<f64>,
    /// Initial configuration as a little-endian bitstring.
    pub initial: String,
    /// Time horizon t >= 0.
    pub horizon: f64,
}

impl ExclusionSpec {
    /// Pure exclusion (no birth/death) with the given rate matrix.
    pub fn pure(swap_rates: Vec<Vec<f64>>, initial: &Configuration, horizon: f64) -> Result<Self> {
        let n = initial.len();
        let spec = ExclusionSpec {
            n_sites: n,
            swap_rates,
            birth_rates: vec![0.0; n],
            death_rates: vec![0.0; n],
            initial: initial.to_bitstring(),
            horizon,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Nearest-neighbor unit-rate exclusion on a cycle of `n` sites.
    pub fn cycle(n: usize, initial: &Configuration, horizon: f64) -> Result<Self> {
        let mut rates = vec![vec![0.0; n]; n];
        for i in 0..n {
            let j = (i + 1) % n;
            rates[i][j] = 1.0;
            rates[j][i] = 1.0;
        }
        Self::pure(rates, initial, horizon)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n_sites;
        if n == 0 {
            return Err(Error::InvalidParameter("n_sites must be positive".into()));
        }
        let c = self.initial_configuration()?;
        if c.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: c.len(),
            });
        }
        if self.swap_rates.len() != n
            || self.swap_rates.iter().any(|row| row.len() != n)
            || self.birth_rates.len() != n
            || self.death_rates.len() != n
        {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.swap_rates.len(),
            });
        }
        for i in 0..n {
            for j in 0..n {
                let r = self.swap_rates[i][j];
                if !(r >= 0.0) || !r.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "swap rate r({i},{j}) = {r} must be nonnegative"
                    )));
                }
                if (r - self.swap_rates[j][i]).abs() > 1e-12 {
                    return Err(Error::InvalidParameter(format!(
                        "swap rates must be symmetric: r({i},{j}) != r({j},{i})"
                    )));
                }
            }
            if self.swap_rates[i][i] != 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "diagonal swap rate at site {i} must be zero"
                )));
            }
        }
        for (name, rates) in [("birth", &self.birth_rates), ("death", &self.death_rates)] {
            for (i, &r) in rates.iter().enumerate() {
                if !(r >= 0.0) || !r.is_finite() {
                    return Err(Error::InvalidParameter(format!(
                        "{name} rate at site {i} is {r}"
                    )));
                }
            }
        }
        if !(self.horizon >= 0.0) || !self.horizon.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "horizon {} must be nonnegative and finite",
                self.horizon
            )));
        }
        Ok(())
    }

    pub fn initial_configuration(&self) -> Result<Configuration> {
        Configuration::from_bitstring(&self.initial)
    }

    pub fn has_birth_death(&self) -> bool {
        self.birth_rates.iter().any(|&a| a > 0.0) || self.death_rates.iter().any(|&b| b > 0.0)
    }
}

/// Run the exclusion dynamics to the horizon and return the final state.
pub fn simulate_exclusion<R: Rng>(spec: &ExclusionSpec, rng: &mut R) -> Result<Configuration> {
    spec.validate()?;
    let n = spec.n_sites;
    let mut state: Vec<bool> = spec.initial_configuration()?.bits().to_vec();
    let mut t = 0.0f64;
    let mut active: Vec<(Transition, f64)> = Vec::new();
    loop {
        active.clear();
        for i in 0..n {
            for j in i + 1..n {
                let r = spec.swap_rates[i][j];
                if r > 0.0 && state[i] != state[j] {
                    active.push((Transition::Swap(i, j), r));
                }
            }
            if !state[i] && spec.birth_rates[i] > 0.0 {
                active.push((Transition::Birth(i), spec.birth_rates[i]));
            }
            if state[i] && spec.death_rates[i] > 0.0 {
                active.push((Transition::Death(i), spec.death_rates[i]));
            }
        }
        let total: f64 = active.iter().map(|&(_, r)| r).sum();
        if total <= 0.0 {
            break;
        }
        t += -rng.random::<f64>().ln() / total;
        if t > spec.horizon {
            break;
        }
        let mut pick = rng.random::<f64>() * total;
        let mut chosen = active.last().expect("nonempty active table").0;
        for &(tr, r) in &active {
            pick -= r;
            if pick <= 0.0 {
                chosen = tr;
                break;
            }
        }
        match chosen {
            Transition::Swap(i, j) => state.swap(i, j),
            Transition::Birth(i) => state[i] = true,
            Transition::Death(i) => state[i] = false,
        }
    }
    Ok(Configuration::new(state))
}

#[derive(Debug, Clone, Copy)]
enum Transition {
    Swap(usize, usize),
    Birth(usize),
    Death(usize),
}

/// The exact time-t law as a measure on `{0,1}^n`, via uniformization of
/// the `2^n x 2^n` generator: `exp(tQ) = e^{-Lt} sum_k (Lt)^k/k! P^k` with
/// `P = I + Q/L`. The Poisson series is truncated once the remaining tail
/// mass drops below 1e-14.
pub fn exclusion_exact_law(spec: &ExclusionSpec) -> Result<BooleanMeasure> {
    spec.validate()?;
    let n = spec.n_sites;
    if n > EXACT_LAW_SITE_CAP {
        return Err(Error::CapExceeded {
            n,
            cap: EXACT_LAW_SITE_CAP,
        });
    }
    let size = 1usize << n;
    // sparse transition lists per state
    let mut transitions: Vec<Vec<(usize, f64)>> = vec![Vec::new(); size];
    let mut exit_rate = vec![0.0f64; size];
    for mask in 0..size {
        let mut push = |target: usize, rate: f64| {
            transitions[mask].push((target, rate));
            exit_rate[mask] += rate;
        };
        for i in 0..n {
            let occupied_i = mask >> i & 1 == 1;
            for j in i + 1..n {
                let r = spec.swap_rates[i][j];
                if r > 0.0 && occupied_i != (mask >> j & 1 == 1) {
                    push(mask ^ (1 << i) ^ (1 << j), r);
                }
            }
            if !occupied_i && spec.birth_rates[i] > 0.0 {
                push(mask | 1 << i, spec.birth_rates[i]);
            }
            if occupied_i && spec.death_rates[i] > 0.0 {
                push(mask & !(1 << i), spec.death_rates[i]);
            }
        }
    }
    let lambda = exit_rate.iter().cloned().fold(0.0, f64::max);
    let mut dist = vec![0.0f64; size];
    dist[spec.initial_configuration()?.mask()] = 1.0;
    if lambda <= 0.0 || spec.horizon == 0.0 {
        return BooleanMeasure::from_unnormalized(n, dist);
    }
    let lt = lambda * spec.horizon;
    let mut out = vec![0.0f64; size];
    let mut poisson = (-lt).exp();
    let mut tail = 1.0 - poisson;
    for w in out.iter_mut().zip(&dist) {
        *w.0 += poisson * w.1;
    }
    let mut next = vec![0.0f64; size];
    let mut k = 0u64;
    while tail > 1e-14 {
        k += 1;
        // one step of the uniformized chain P = I + Q/lambda
        for (mask, nx) in next.iter_mut().enumerate() {
            *nx = dist[mask] * (1.0 - exit_rate[mask] / lambda);
        }
        for (mask, list) in transitions.iter().enumerate() {
            let src = dist[mask];
            if src == 0.0 {
                continue;
            }
            for &(target, rate) in list {
                next[target] += src * rate / lambda;
            }
        }
        std::mem::swap(&mut dist, &mut next);
        poisson *= lt / k as f64;
        tail -= poisson;
        for w in out.iter_mut().zip(&dist) {
            *w.0 += poisson * w.1;
        }
        if k > 100_000 {
            return Err(Error::InvalidParameter(
                "uniformization did not converge; horizon * rate too large".into(),
            ));
        }
    }
    BooleanMeasure::from_unnormalized(n, out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SeededRng;

    fn cycle4_spec(t: f64) -> ExclusionSpec {
        let init = Configuration::from_bitstring("1100").unwrap();
        ExclusionSpec::cycle(4, &init, t).unwrap()
    }

    #[test]
    fn zero_rates_return_initial_state() {
        let init = Configuration::from_bitstring("101").unwrap();
        let spec = ExclusionSpec::pure(vec![vec![0.0; 3]; 3], &init, 5.0).unwrap();
        let mut rng = SeededRng::new(1).rng();
        assert_eq!(simulate_exclusion(&spec, &mut rng).unwrap(), init);
        let law = exclusion_exact_law(&spec).unwrap();
        assert!((law.mass(init.mask()) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn pure_exclusion_conserves_rank() {
        let spec = cycle4_spec(2.5);
        let mut rng = SeededRng::new(2).rng();
        for _ in 0..500 {
            let c = simulate_exclusion(&spec, &mut rng).unwrap();
            assert_eq!(c.rank(), 2);
        }
    }

    #[test]
    fn exact_law_is_rank_conserving_and_normalized() {
        let law = exclusion_exact_law(&cycle4_spec(0.5)).unwrap();
        let dist = law.rank_distribution();
        assert!((dist[2] - 1.0).abs() < 1e-12);
        // long horizon: converges to uniform on the 6 rank-2 states
        let law = exclusion_exact_law(&cycle4_spec(50.0)).unwrap();
        for mask in law.support() {
            assert!((law.mass(mask) - 1.0 / 6.0).abs() < 1e-9);
        }
    }

    #[test]
    fn empirical_matches_exact_law_roughly() {
        let spec = cycle4_spec(0.5);
        let exact = exclusion_exact_law(&spec).unwrap();
        let mut rng = SeededRng::new(3).rng();
        let trials = 20_000;
        let mut counts = vec![0u64; 16];
        for _ in 0..trials {
            counts[simulate_exclusion(&spec, &mut rng).unwrap().mask()] += 1;
        }
        let empirical: Vec<f64> = counts.iter().map(|&c| c as f64 / trials as f64).collect();
        let tv = crate::numeric::total_variation(&empirical, exact.weights());
        assert!(tv < 0.02, "tv = {tv}");
    }

    #[test]
    fn birth_death_changes_rank() {
        let init = Configuration::from_bitstring("00").unwrap();
        let spec = ExclusionSpec {
            n_sites: 2,
            swap_rates: vec![vec![0.0, 1.0], vec![1.0, 0.0]],
            birth_rates: vec![2.0, 0.0],
            death_rates: vec![0.0, 1.0],
            initial: init.to_bitstring(),
            horizon: 3.0,
        };
        spec.validate().unwrap();
        let law = exclusion_exact_law(&spec).unwrap();
        let dist = law.rank_distribution();
        assert!(dist[1] > 0.1 && dist[0] > 0.01);
    }

    #[test]
    fn asymmetric_rates_rejected() {
        let init = Configuration::from_bitstring("10").unwrap();
        let spec = ExclusionSpec {
            n_sites: 2,
            swap_rates: vec![vec![0.0, 1.0], vec![2.0, 0.0]],
            birth_rates: vec![0.0; 2],
            death_rates: vec![0.0; 2],
            initial: init.to_bitstring(),
            horizon: 1.0,
        };
        assert!(spec.validate().is_err());
    }
}
