pub mod sample;
pub mod tail;
pub mod verify;

use anyhow::Result;

use negdep::measures::Configuration;
use negdep::SeededRng;

use crate::config::Source;

/// Draw one discrete configuration from a source for the given trial.
pub fn draw_configuration(source: &Source, seed: SeededRng) -> Result<Configuration> {
    let mut rng = seed.rng();
    Ok(match source {
        Source::Measure(m) => {
            use rand::Rng;
            let u: f64 = rng.random();
            let mut acc = 0.0;
            let mut chosen = m.weights().len() - 1;
            for (mask, &w) in m.weights().iter().enumerate() {
                acc += w;
                if acc > u {
                    chosen = mask;
                    break;
                }
            }
            Configuration::from_mask(chosen, m.n())
        }
        Source::SpanningTree(g) => {
            let tree = negdep::discrete::sample_spanning_tree(g, &mut rng)?;
            let mask: usize = tree.iter().map(|&e| 1usize << e).sum();
            Configuration::from_mask(mask, g.edge_count())
        }
        Source::Dpp(kernel) => {
            let set = negdep::discrete::sample_dpp_finite(kernel, &mut rng)?;
            let mask: usize = set.iter().map(|&x| 1usize << x).sum();
            Configuration::from_mask(mask, kernel.n())
        }
        Source::Exclusion(spec) => negdep::discrete::simulate_exclusion(spec, &mut rng)?,
        Source::ConditionedBernoulli { weights, k } => {
            negdep::discrete::sample_conditioned_bernoulli(weights, *k, &mut rng)?
        }
        Source::Ginibre(_) | Source::PowerSeries(_) => {
            anyhow::bail!("continuous source produces point sets, not configurations")
        }
    })
}

/// Draw one point configuration from a continuous source.
pub fn draw_points(
    source: &Source,
    seed: SeededRng,
) -> Result<negdep::continuous::PointConfiguration> {
    let mut rng = seed.rng();
    Ok(match source {
        Source::Ginibre(spec) => negdep::continuous::sample_ginibre(spec, &mut rng)?,
        Source::PowerSeries(spec) => {
            negdep::continuous::sample_power_series_zeros(spec, &mut rng)?
        }
        _ => anyhow::bail!("discrete source produces configurations, not point sets"),
    })
}
