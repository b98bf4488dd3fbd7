//! Experiment configuration schemas. Every struct rejects unknown keys so
//! typos fail loudly before any computation runs.

use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use serde::Deserialize;

use negdep::bounds::BoundSpec;
use negdep::continuous::{GinibreSpec, PowerSeriesSpec};
use negdep::discrete::exclusion::ExclusionSpec;
use negdep::discrete::{dpp_exact_pmf, HermitianKernel};
use negdep::functionals::{self, DiscreteFunctional, Metric, PointFunctional};
use negdep::measures::BooleanMeasure;
use negdep::Graph;

/// Where samples or measures come from.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SourceConfig {
    /// Explicit measure JSON file; sampling draws atoms directly.
    Measure { path: PathBuf },
    /// Weighted spanning trees of a graph file.
    SpanningTree { graph: PathBuf },
    /// Finite determinantal measure from a kernel JSON file.
    Dpp { kernel: PathBuf },
    /// Exclusion dynamics spec JSON file (time-t law / simulation).
    Exclusion { spec: PathBuf },
    /// Bernoullis conditioned on their sum.
    ConditionedBernoulli { weights: Vec<f64>, k: usize },
    /// Eigenvalues of a complex Gaussian matrix in an observation disk.
    Ginibre {
        matrix_size: usize,
        observation_radius: f64,
    },
    /// Zeros of the truncated Gaussian power series.
    PowerSeries {
        disk_radius: f64,
        truncation_degree: usize,
        root_tolerance: f64,
    },
}

/// A loaded source, either discrete (with its exact law available under
/// the caps) or a continuous point process.
pub enum Source {
    Measure(BooleanMeasure),
    SpanningTree(Graph),
    Dpp(HermitianKernel),
    Exclusion(ExclusionSpec),
    ConditionedBernoulli { weights: Vec<f64>, k: usize },
    Ginibre(GinibreSpec),
    PowerSeries(PowerSeriesSpec),
}

impl SourceConfig {
    pub fn load(&self) -> Result<Source> {
        Ok(match self {
            SourceConfig::Measure { path } => Source::Measure(
                BooleanMeasure::read_json_file(path)
                    .with_context(|| format!("loading measure {}", path.display()))?,
            ),
            SourceConfig::SpanningTree { graph } => Source::SpanningTree(
                Graph::read_file(graph)
                    .with_context(|| format!("loading graph {}", graph.display()))?,
            ),
            SourceConfig::Dpp { kernel } => Source::Dpp(
                HermitianKernel::read_json_file(kernel)
                    .with_context(|| format!("loading kernel {}", kernel.display()))?,
            ),
            SourceConfig::Exclusion { spec } => {
                let text = std::fs::read_to_string(spec)
                    .with_context(|| format!("reading {}", spec.display()))?;
                let parsed: ExclusionSpec =
                    serde_json::from_str(&text).context("parsing exclusion spec")?;
                parsed.validate()?;
                Source::Exclusion(parsed)
            }
            SourceConfig::ConditionedBernoulli { weights, k } => Source::ConditionedBernoulli {
                weights: weights.clone(),
                k: *k,
            },
            SourceConfig::Ginibre {
                matrix_size,
                observation_radius,
            } => Source::Ginibre(GinibreSpec::new(*matrix_size, *observation_radius)?),
            SourceConfig::PowerSeries {
                disk_radius,
                truncation_degree,
                root_tolerance,
            } => Source::PowerSeries(PowerSeriesSpec::new(
                *disk_radius,
                *truncation_degree,
                *root_tolerance,
            )?),
        })
    }
}

impl Source {
    pub fn is_continuous(&self) -> bool {
        matches!(self, Source::Ginibre(_) | Source::PowerSeries(_))
    }

    /// The exact law for discrete sources (errors above the module caps).
    pub fn exact_measure(&self) -> Result<BooleanMeasure> {
        Ok(match self {
            Source::Measure(m) => m.clone(),
            Source::SpanningTree(g) => negdep::discrete::enumerate_spanning_trees(g)?,
            Source::Dpp(k) => dpp_exact_pmf(k)?,
            Source::Exclusion(spec) => {
                negdep::discrete::exclusion::exclusion_exact_law(spec)?
            }
            Source::ConditionedBernoulli { weights, k } => {
                negdep::discrete::cond_bernoulli::conditioned_bernoulli_exact(weights, *k)?
            }
            Source::Ginibre(_) | Source::PowerSeries(_) => {
                bail!("continuous sources have no exact Boolean law")
            }
        })
    }

    pub fn graph(&self) -> Option<&Graph> {
        match self {
            Source::SpanningTree(g) => Some(g),
            _ => None,
        }
    }
}

/// Functional selection by name plus parameters.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionalConfig {
    /// Half the number of odd-degree vertices; needs a graph source.
    HalfOddDegree {},
    /// Number of degree-1 vertices; needs a graph source.
    LeafCount {},
    /// Signed coordinate sum with coefficients in {-1, 0, 1}.
    IndicatorSum { coeffs: Vec<i8> },
    /// Points with no neighbor within `radius`; continuous sources only.
    LonelyPoints {
        radius: f64,
        metric: MetricConfig,
        #[serde(default)]
        lipschitz: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricConfig {
    Euclidean,
    Hyperbolic,
}

impl FunctionalConfig {
    pub fn discrete(&self, source: &Source) -> Result<DiscreteFunctional> {
        match self {
            FunctionalConfig::HalfOddDegree {} => {
                let g = source
                    .graph()
                    .context("half_odd_degree needs a spanning_tree source")?;
                Ok(functionals::half_odd_degree(g))
            }
            FunctionalConfig::LeafCount {} => {
                let g = source
                    .graph()
                    .context("leaf_count needs a spanning_tree source")?;
                Ok(functionals::leaf_count(g))
            }
            FunctionalConfig::IndicatorSum { coeffs } => Ok(functionals::indicator_sum(coeffs)?),
            FunctionalConfig::LonelyPoints { .. } => {
                bail!("lonely_points applies to point configurations, not Boolean measures")
            }
        }
    }

    pub fn point(&self) -> Result<PointFunctional> {
        match self {
            FunctionalConfig::LonelyPoints {
                radius,
                metric,
                lipschitz,
            } => {
                let metric = match metric {
                    MetricConfig::Euclidean => Metric::Euclidean,
                    MetricConfig::Hyperbolic => Metric::Hyperbolic,
                };
                Ok(match lipschitz {
                    Some(c) => functionals::lonely_points_with_constant(*radius, metric, *c)?,
                    None => functionals::lonely_points(*radius, metric)?,
                })
            }
            other => bail!("functional {other:?} applies to Boolean configurations"),
        }
    }
}

/// `sample` command configuration.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleConfig {
    pub source: SourceConfig,
}

/// One dependence check to run in `verify`.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case", deny_unknown_fields)]
pub enum CheckConfig {
    Scp {
        #[serde(default)]
        cap: Option<usize>,
    },
    NegativeCylinder {
        #[serde(default)]
        cap: Option<usize>,
    },
    RankCovering {
        #[serde(default)]
        cap: Option<usize>,
    },
    /// Grid-sampled Rayleigh refutation with the default grid.
    Rayleigh {},
    RealRooted {
        #[serde(default)]
        tol: Option<f64>,
    },
    /// nu = this source's measure, rho = `other`.
    Domination { other: SourceConfig },
    Covering { other: SourceConfig },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LipschitzConfig {
    pub functional: FunctionalConfig,
    #[serde(default)]
    pub graph: Option<PathBuf>,
    #[serde(default)]
    pub trials: Option<u64>,
}

/// `verify` command configuration: checks on a measure, a Lipschitz
/// verification, or both.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    #[serde(default)]
    pub measure: Option<SourceConfig>,
    #[serde(default)]
    pub checks: Vec<CheckConfig>,
    #[serde(default)]
    pub lipschitz: Option<LipschitzConfig>,
}

#[derive(Debug, Clone, Copy, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum TailMode {
    Exact,
    MonteCarlo,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default)]
    pub points: Option<usize>,
    #[serde(default)]
    pub max: Option<f64>,
    /// Explicit thresholds override points/max.
    #[serde(default)]
    pub thresholds: Option<Vec<f64>>,
}

/// Bound families with optionally deferred mu: when `mu` is omitted for
/// the general/Poisson families, it is estimated from an independent pilot
/// run (`pilot_trials` in [`TailConfig`]).
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum BoundConfig {
    HomogeneousScp { k: u64 },
    HomogeneousTwoSided { k: u64 },
    KToN { n: u64 },
    GeneralOneSided {
        #[serde(default)]
        mu: Option<f64>,
    },
    GeneralTwoSided {
        #[serde(default)]
        mu: Option<f64>,
    },
    SpanningTree { vertices: u64 },
    PoissonHoeffding {
        #[serde(default)]
        mu: Option<f64>,
    },
    Azuma { n: u64 },
    Mcdiarmid { n: u64 },
}

impl BoundConfig {
    pub fn needs_mu(&self) -> bool {
        matches!(
            self,
            BoundConfig::GeneralOneSided { mu: None }
                | BoundConfig::GeneralTwoSided { mu: None }
                | BoundConfig::PoissonHoeffding { mu: None }
        )
    }

    pub fn resolve(&self, estimated_mu: Option<f64>) -> Result<BoundSpec> {
        let mu_or = |mu: &Option<f64>| {
            mu.or(estimated_mu)
                .context("bound needs mu: give it explicitly or enable pilot estimation")
        };
        Ok(match self {
            BoundConfig::HomogeneousScp { k } => BoundSpec::HomogeneousScp { k: *k },
            BoundConfig::HomogeneousTwoSided { k } => BoundSpec::HomogeneousTwoSided { k: *k },
            BoundConfig::KToN { n } => BoundSpec::KToN { n: *n },
            BoundConfig::GeneralOneSided { mu } => BoundSpec::GeneralOneSided { mu: mu_or(mu)? },
            BoundConfig::GeneralTwoSided { mu } => BoundSpec::GeneralTwoSided { mu: mu_or(mu)? },
            BoundConfig::SpanningTree { vertices } => BoundSpec::SpanningTree {
                vertices: *vertices,
            },
            BoundConfig::PoissonHoeffding { mu } => BoundSpec::PoissonHoeffding { mu: mu_or(mu)? },
            BoundConfig::Azuma { n } => BoundSpec::Azuma { n: *n },
            BoundConfig::Mcdiarmid { n } => BoundSpec::Mcdiarmid { n: *n },
        })
    }
}

/// `tail` command configuration.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailConfig {
    pub source: SourceConfig,
    pub functional: FunctionalConfig,
    pub bounds: Vec<BoundConfig>,
    #[serde(default)]
    pub grid: Option<GridConfig>,
    #[serde(default)]
    pub mode: Option<TailMode>,
    /// Pilot run size for mu estimation (default 1000 when needed).
    #[serde(default)]
    pub pilot_trials: Option<u64>,
}

pub fn read_config<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
}
