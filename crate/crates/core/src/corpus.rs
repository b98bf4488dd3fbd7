//! The reference measure corpus for the verification suite: explicit
//! instances of each constructively strong Rayleigh family at desk scale,
//! with fixed seeds so every run sees the same measures.
//!
//! Kinds carry the data needed to pick matching functionals (graphs expose
//! their edge structure) and the homogeneous rank when there is one.

use crate::discrete::cond_bernoulli::conditioned_bernoulli_exact;
use crate::discrete::dpp::{dpp_exact_pmf, HermitianKernel};
use crate::discrete::exclusion::{exclusion_exact_law, ExclusionSpec};
use crate::discrete::spanning_tree::enumerate_spanning_trees;
use crate::error::Result;
use crate::graph::Graph;
use crate::measures::{BooleanMeasure, Configuration};
use crate::rng::SeededRng;

/// Which family a corpus measure came from.
#[derive(Debug, Clone)]
pub enum CorpusKind {
    Product,
    ConditionedBernoulli,
    SpanningTree(Graph),
    Determinantal,
    DeterminantalRankConditioned,
    Exclusion,
}

#[derive(Debug, Clone)]
pub struct CorpusMeasure {
    pub name: String,
    pub kind: CorpusKind,
    pub measure: BooleanMeasure,
}

impl CorpusMeasure {
    pub fn homogeneous_rank(&self) -> Option<usize> {
        self.measure.homogeneous_rank()
    }

    pub fn graph(&self) -> Option<&Graph> {
        match &self.kind {
            CorpusKind::SpanningTree(g) => Some(g),
            _ => None,
        }
    }
}

/// Connected graphs with at most 8 edges used for the spanning-tree part
/// of the corpus (name, graph).
pub fn corpus_graphs() -> Vec<(String, Graph)> {
    let diamond = Graph::unit(4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap();
    let k23 = Graph::unit(5, &[(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]).unwrap();
    let wheel4 = Graph::unit(
        5,
        &[
            (0, 1),
            (1, 2),
            (2, 3),
            (3, 0),
            (4, 0),
            (4, 1),
            (4, 2),
            (4, 3),
        ],
    )
    .unwrap();
    let weighted_triangle =
        Graph::new(3, vec![(0, 1, 2.0), (1, 2, 1.0), (0, 2, 1.0)]).unwrap();
    vec![
        ("path3".into(), Graph::path(3).unwrap()),
        ("triangle".into(), Graph::cycle(3).unwrap()),
        ("weighted_triangle_211".into(), weighted_triangle),
        ("cycle4".into(), Graph::cycle(4).unwrap()),
        ("diamond".into(), diamond),
        ("k4".into(), Graph::complete(4).unwrap()),
        ("k23".into(), k23),
        ("wheel4".into(), wheel4),
    ]
}

/// Deterministic kernels with mixed spectra for the determinantal part.
pub fn corpus_kernels() -> Vec<(String, HermitianKernel)> {
    vec![
        (
            "dpp3_mixed".into(),
            HermitianKernel::from_spectrum_seeded(&[0.2, 0.5, 0.8], SeededRng::new(1001)).unwrap(),
        ),
        (
            "dpp5_mixed".into(),
            HermitianKernel::from_spectrum_seeded(&[0.15, 0.35, 0.5, 0.7, 0.9], SeededRng::new(1002))
                .unwrap(),
        ),
        (
            "dpp8_mixed".into(),
            HermitianKernel::from_spectrum_seeded(
                &[0.1, 0.2, 0.35, 0.45, 0.55, 0.7, 0.8, 0.95],
                SeededRng::new(1003),
            )
            .unwrap(),
        ),
    ]
}

/// Exclusion runs whose exact time-t laws join the corpus (all start from
/// a deterministic state, so the laws are strong Rayleigh).
pub fn corpus_exclusion_specs() -> Vec<(String, ExclusionSpec)> {
    let cycle4 = ExclusionSpec::cycle(
        4,
        &Configuration::from_bitstring("1100").unwrap(),
        0.5,
    )
    .unwrap();
    let cycle6 = ExclusionSpec::cycle(
        6,
        &Configuration::from_bitstring("110100").unwrap(),
        0.3,
    )
    .unwrap();
    // path with birth/death: non-homogeneous strong Rayleigh law
    let mut rates = vec![vec![0.0; 5]; 5];
    for i in 0..4 {
        rates[i][i + 1] = 1.0;
        rates[i + 1][i] = 1.0;
    }
    let birth_death = ExclusionSpec {
        n_sites: 5,
        swap_rates: rates,
        birth_rates: vec![0.4, 0.0, 0.2, 0.0, 0.1],
        death_rates: vec![0.0, 0.3, 0.0, 0.5, 0.2],
        initial: "10100".into(),
        horizon: 0.8,
    };
    vec![
        ("exclusion_cycle4_t0.5".into(), cycle4),
        ("exclusion_cycle6_t0.3".into(), cycle6),
        ("exclusion_bd_path5_t0.8".into(), birth_death),
    ]
}

/// Conditioned-Bernoulli instances `(name, weights, k)`.
pub fn corpus_conditioned_bernoullis() -> Vec<(String, Vec<f64>, usize)> {
    vec![
        ("condbern5_k2".into(), vec![1.0, 2.0, 3.0, 4.0, 5.0], 2),
        (
            "condbern6_k3".into(),
            vec![0.7, 1.3, 0.9, 2.1, 1.7, 0.5],
            3,
        ),
        (
            "condbern10_k4".into(),
            vec![0.5, 1.5, 0.8, 1.2, 2.0, 0.9, 1.1, 0.6, 1.8, 1.4],
            4,
        ),
    ]
}

/// Product-measure instances.
pub fn corpus_products() -> Vec<(String, Vec<f64>)> {
    vec![
        ("product2".into(), vec![0.3, 0.7]),
        ("product4".into(), vec![0.1, 0.5, 0.65, 0.9]),
        ("product8".into(), vec![0.2, 0.35, 0.5, 0.4, 0.6, 0.75, 0.15, 0.55]),
    ]
}

/// The full corpus: products, conditioned Bernoullis, spanning trees,
/// determinantal measures (plus rank-conditioned versions), and exclusion
/// time-t laws.
pub fn sr_corpus() -> Result<Vec<CorpusMeasure>> {
    let mut out = Vec::new();
    for (name, ps) in corpus_products() {
        out.push(CorpusMeasure {
            name,
            kind: CorpusKind::Product,
            measure: BooleanMeasure::product_bernoulli(&ps)?,
        });
    }
    for (name, lambda, k) in corpus_conditioned_bernoullis() {
        out.push(CorpusMeasure {
            name,
            kind: CorpusKind::ConditionedBernoulli,
            measure: conditioned_bernoulli_exact(&lambda, k)?,
        });
    }
    for (name, g) in corpus_graphs() {
        out.push(CorpusMeasure {
            name,
            kind: CorpusKind::SpanningTree(g.clone()),
            measure: enumerate_spanning_trees(&g)?,
        });
    }
    for (name, kernel) in corpus_kernels() {
        let pmf = dpp_exact_pmf(&kernel)?;
        // condition the mid-size kernel on its most likely rank
        if kernel.n() == 5 {
            let rank_law = pmf.rank_distribution();
            let k = rank_law
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .map(|(k, _)| k)
                .unwrap_or(0);
            out.push(CorpusMeasure {
                name: format!("{name}_rank{k}"),
                kind: CorpusKind::DeterminantalRankConditioned,
                measure: pmf.condition_on_rank(k)?,
            });
        }
        out.push(CorpusMeasure {
            name,
            kind: CorpusKind::Determinantal,
            measure: pmf,
        });
    }
    for (name, spec) in corpus_exclusion_specs() {
        out.push(CorpusMeasure {
            name,
            kind: CorpusKind::Exclusion,
            measure: exclusion_exact_law(&spec)?,
        });
    }
    Ok(out)
}
