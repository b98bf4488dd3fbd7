//! `negdep verify`: run dependence checks on a measure and/or verify a
//! functional's declared Lipschitz constant. Writes one verdict JSON;
//! exits 1 when anything is refuted.

use anyhow::{Context, Result};
use serde_json::json;

use negdep::dependence::{
    check_covering, check_domination, check_negative_cylinder_with_cap, check_rank_covering_with_cap,
    check_scp_with_cap, check_univariate_real_rooted, rayleigh_default_grid, rayleigh_refute,
    CheckVerdict, DEFAULT_CHECK_CAP,
};
use negdep::functionals::{verify_lipschitz, VerifyMode};
use negdep::SeededRng;

use crate::config::{read_config, CheckConfig, VerifyConfig};
use crate::CommonArgs;

pub fn run(args: &CommonArgs) -> Result<u8> {
    let cfg: VerifyConfig = read_config(&args.config)?;
    if cfg.measure.is_none() && cfg.lipschitz.is_none() {
        anyhow::bail!("verify config needs `measure`+`checks` and/or `lipschitz`");
    }
    if cfg.measure.is_some() && cfg.checks.is_empty() && cfg.lipschitz.is_none() {
        anyhow::bail!("verify config has a measure but no checks");
    }
    let mut entries = Vec::new();
    let mut all_hold = true;
    let mut record = |name: String, verdict: CheckVerdict| {
        all_hold &= verdict.holds;
        entries.push(json!({ "check": name, "verdict": verdict.to_json() }));
    };

    if let Some(source_cfg) = &cfg.measure {
        let source = source_cfg.load()?;
        let measure = source.exact_measure()?;
        for check in &cfg.checks {
            let (name, verdict) = match check {
                CheckConfig::Scp { cap } => (
                    "scp".to_string(),
                    check_scp_with_cap(&measure, cap.unwrap_or(DEFAULT_CHECK_CAP))?,
                ),
                CheckConfig::NegativeCylinder { cap } => (
                    "negative_cylinder".to_string(),
                    check_negative_cylinder_with_cap(&measure, cap.unwrap_or(DEFAULT_CHECK_CAP))?,
                ),
                CheckConfig::RankCovering { cap } => (
                    "rank_covering".to_string(),
                    check_rank_covering_with_cap(&measure, cap.unwrap_or(DEFAULT_CHECK_CAP))?,
                ),
                CheckConfig::Rayleigh {} => {
                    let grid = rayleigh_default_grid(measure.n(), SeededRng::new(args.seed));
                    ("rayleigh".to_string(), rayleigh_refute(&measure, &grid, None)?)
                }
                CheckConfig::RealRooted { tol } => (
                    "real_rooted".to_string(),
                    check_univariate_real_rooted(&measure, tol.unwrap_or(1e-8))?,
                ),
                CheckConfig::Domination { other } => {
                    let rho = other.load()?.exact_measure()?;
                    ("domination".to_string(), check_domination(&measure, &rho)?)
                }
                CheckConfig::Covering { other } => {
                    let rho = other.load()?.exact_measure()?;
                    ("covering".to_string(), check_covering(&measure, &rho)?)
                }
            };
            record(name, verdict);
        }
    }

    if let Some(lip) = &cfg.lipschitz {
        let source = match &lip.graph {
            Some(path) => crate::config::Source::SpanningTree(
                negdep::Graph::read_file(path)
                    .with_context(|| format!("loading graph {}", path.display()))?,
            ),
            None => cfg
                .measure
                .as_ref()
                .context("lipschitz needs a `graph` or a graph-backed `measure` source")?
                .load()?,
        };
        let f = lip.functional.discrete(&source)?;
        let mode = match lip.trials {
            Some(trials) => VerifyMode::Randomized {
                trials,
                seed: args.seed,
            },
            None => VerifyMode::Exhaustive,
        };
        record(format!("lipschitz[{}]", f.name()), verify_lipschitz(&f, mode)?);
    }

    let output = json!({ "all_hold": all_hold, "checks": entries });
    let text = serde_json::to_string_pretty(&output)?;
    match &args.out {
        Some(path) => std::fs::write(path, format!("{text}\n"))
            .with_context(|| format!("writing {}", path.display()))?,
        None => println!("{text}"),
    }
    Ok(u8::from(!all_hold))
}
