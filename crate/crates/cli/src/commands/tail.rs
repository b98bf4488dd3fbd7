//! `negdep tail`: tail report against closed-form bounds. Exact mode
//! enumerates the law when the instance is under the exact caps; Monte
//! Carlo mode estimates tails with split-sample centering and exact
//! confidence bounds. Writes `<out>.csv` and `<out>.json`; exit 1 when a
//! bound fails.

use anyhow::{bail, Context, Result};
use rayon::prelude::*;

use negdep::bounds::tail::{to_csv, to_json};
use negdep::bounds::{compare, default_a_grid, estimate_tail, exact_tail, TailReport};
use negdep::SeededRng;

use crate::config::{read_config, Source, TailConfig, TailMode};
use crate::CommonArgs;

const DEFAULT_TRIALS: u64 = 100_000;
const DEFAULT_PILOT: u64 = 1000;
const PILOT_STREAM_OFFSET: u64 = 1 << 32;

pub fn run(args: &CommonArgs) -> Result<u8> {
    let cfg: TailConfig = read_config(&args.config)?;
    let source = cfg.source.load()?;
    let trials = args.trials.unwrap_or(DEFAULT_TRIALS);

    // exact when the instance fits under the caps, Monte Carlo otherwise
    let exact_measure = if source.is_continuous() {
        None
    } else {
        match source.exact_measure() {
            Ok(m) => Some(m),
            Err(e) => match e.downcast_ref::<negdep::Error>() {
                Some(negdep::Error::CapExceeded { .. }) => None,
                _ => return Err(e),
            },
        }
    };
    let mode = match cfg.mode {
        Some(m) => m,
        None if exact_measure.is_some() => TailMode::Exact,
        None => TailMode::MonteCarlo,
    };
    if mode == TailMode::Exact && exact_measure.is_none() {
        bail!("exact mode is unavailable for this source (continuous or over the caps)");
    }
    if mode == TailMode::MonteCarlo && trials < 100 {
        bail!("Monte Carlo tails need --trials >= 100, got {trials}");
    }

    let report: TailReport;
    let mu_estimate: Option<f64>;
    if source.is_continuous() {
        let f = cfg.functional.point()?.rescaled();
        let grid = resolve_grid(&cfg, None)?;
        mu_estimate = if cfg.bounds.iter().any(|b| b.needs_mu()) {
            Some(pilot_mu_points(&source, args.seed, cfg.pilot_trials.unwrap_or(DEFAULT_PILOT))?)
        } else {
            None
        };
        report = estimate_tail(
            f.name(),
            // rescaled() folded the constant in; report the original
            original_constant(&cfg)?,
            |t| {
                let points = super::draw_points(&source, SeededRng::with_stream(args.seed, t))
                    .map_err(|e| negdep::Error::InvalidParameter(e.to_string()))?;
                f.evaluate(&points)
            },
            &grid,
            trials,
            args.seed,
        )?;
    } else {
        let f = cfg.functional.discrete(&source)?;
        let rescaling = f.lipschitz();
        let f = f.rescaled();
        match mode {
            TailMode::Exact => {
                let m = exact_measure.as_ref().expect("checked above");
                let grid = resolve_grid(&cfg, Some(m.n()))?;
                mu_estimate = Some(m.mean_rank());
                report = exact_tail(m, &f, &grid)?;
            }
            TailMode::MonteCarlo => {
                let grid = resolve_grid(&cfg, Some(f.arity()))?;
                mu_estimate = if cfg.bounds.iter().any(|b| b.needs_mu()) {
                    Some(pilot_mu_rank(
                        &source,
                        args.seed,
                        cfg.pilot_trials.unwrap_or(DEFAULT_PILOT),
                    )?)
                } else {
                    None
                };
                report = estimate_tail(
                    f.name(),
                    rescaling,
                    |t| {
                        let c = super::draw_configuration(
                            &source,
                            SeededRng::with_stream(args.seed, t),
                        )
                        .map_err(|e| negdep::Error::InvalidParameter(e.to_string()))?;
                        f.evaluate(&c)
                    },
                    &grid,
                    trials,
                    args.seed,
                )?;
            }
        }
    }

    let bounds = cfg
        .bounds
        .iter()
        .map(|b| b.resolve(mu_estimate))
        .collect::<Result<Vec<_>>>()?;
    let comparison = compare(&report, &bounds)?;

    let out = args.out.as_ref().context("tail needs --out BASE")?;
    let csv_path = out.with_extension("csv");
    let json_path = out.with_extension("json");
    std::fs::write(&csv_path, to_csv(&report, &bounds, &comparison))
        .with_context(|| format!("writing {}", csv_path.display()))?;
    let mut payload = to_json(&report, &bounds, &comparison);
    payload["seed"] = serde_json::json!(args.seed);
    if let Some(mu) = mu_estimate {
        payload["mu_estimate"] = serde_json::json!(mu);
    }
    std::fs::write(&json_path, format!("{}\n", serde_json::to_string_pretty(&payload)?))
        .with_context(|| format!("writing {}", json_path.display()))?;
    println!(
        "tail report: {} thresholds, overall {} -> {} / {}",
        report.rows.len(),
        if comparison.overall_pass { "pass" } else { "FAIL" },
        csv_path.display(),
        json_path.display(),
    );
    Ok(u8::from(!comparison.overall_pass))
}

fn original_constant(cfg: &TailConfig) -> Result<f64> {
    Ok(cfg.functional.point()?.lipschitz())
}

fn resolve_grid(cfg: &TailConfig, arity: Option<usize>) -> Result<Vec<f64>> {
    if let Some(grid) = &cfg.grid {
        if let Some(thresholds) = &grid.thresholds {
            if thresholds.is_empty() {
                bail!("grid.thresholds must be nonempty");
            }
            return Ok(thresholds.clone());
        }
        let points = grid.points.unwrap_or(20);
        let max = match (grid.max, arity) {
            (Some(m), _) => m,
            (None, Some(n)) => n as f64,
            (None, None) => bail!("continuous sources need grid.max or explicit thresholds"),
        };
        if points == 0 || !(max > 0.0) {
            bail!("grid needs points >= 1 and max > 0");
        }
        return Ok((1..=points).map(|i| max * i as f64 / points as f64).collect());
    }
    match arity {
        Some(n) => Ok(default_a_grid(n as f64)),
        None => bail!("continuous sources need a grid section (max or thresholds)"),
    }
}

fn pilot_mu_points(source: &Source, seed: u64, pilot: u64) -> Result<f64> {
    let total: f64 = (0..pilot)
        .into_par_iter()
        .map(|t| {
            super::draw_points(source, SeededRng::with_stream(seed, PILOT_STREAM_OFFSET + t))
                .map(|c| c.len() as f64)
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .sum();
    Ok(total / pilot as f64)
}

fn pilot_mu_rank(source: &Source, seed: u64, pilot: u64) -> Result<f64> {
    let total: f64 = (0..pilot)
        .into_par_iter()
        .map(|t| {
            super::draw_configuration(source, SeededRng::with_stream(seed, PILOT_STREAM_OFFSET + t))
                .map(|c| c.rank() as f64)
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .sum();
    Ok(total / pilot as f64)
}
