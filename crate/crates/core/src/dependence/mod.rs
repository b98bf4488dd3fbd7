//! Deciding and refuting negative-dependence properties on explicit
//! measures: stochastic domination and covering (by explicit coupling
//! construction through max-flow feasibility), the stochastic covering
//! property, negative cylinder dependence, Rayleigh-inequality refutation,
//! the rank-covering chain, and real-rootedness of the rank polynomial.
//!
//! Domination and covering are decided exactly: the transportation problem
//! (source -> left atoms -> allowed pairs -> right atoms -> sink) is
//! feasible iff the max flow carries all mass, and the min cut yields an
//! explicit violating set when it is not. A returned [`Coupling`] is the
//! certificate; a returned [`Violation`] is the refutation.
//!
//! The strong Rayleigh property itself is only ever refuted here, never
//! certified: [`rayleigh_refute`] grid-samples the Rayleigh difference
//! `F_i F_j - F F_ij` over real points and [`check_univariate_real_rooted`]
//! checks the diagonalized polynomial, both necessary conditions only.

mod flow;

pub use flow::FlowNetwork;
use flow::FLOW_SCALE;

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::measures::{BooleanMeasure, Configuration};
use crate::numeric::real_polynomial_roots;
use crate::rng::SeededRng;

/// Default exhaustive cap for the subset-quantified checks.
pub const DEFAULT_CHECK_CAP: usize = 12;

/// Marginal/feasibility slack for coupling construction.
pub const COUPLING_TOL: f64 = 1e-9;

/// Refutation threshold for the Rayleigh difference, relative to the
/// magnitude of the compared products.
pub const RAYLEIGH_TOL: f64 = 1e-10;

/// A joint pmf on configuration pairs witnessing a stochastic relation.
#[derive(Debug, Clone)]
pub struct Coupling {
    pub left_n: usize,
    pub right_n: usize,
    /// Atom pairs `(x, y, mass)` with positive mass.
    pub joint: Vec<(Configuration, Configuration, f64)>,
}

/// Which support restriction a coupling is supposed to satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupportRelation {
    /// `x >= y` coordinatewise.
    Domination,
    /// `x = y` or `x` covers `y` (one extra coordinate).
    Covering,
}

impl SupportRelation {
    fn allows(&self, x: usize, y: usize) -> bool {
        match self {
            SupportRelation::Domination => x & y == y,
            SupportRelation::Covering => {
                x == y || (x & y == y && (x ^ y).count_ones() == 1)
            }
        }
    }
}

impl Coupling {
    /// Check the marginal and support invariants against the two inputs.
    pub fn validate(
        &self,
        nu: &BooleanMeasure,
        rho: &BooleanMeasure,
        relation: SupportRelation,
        tol: f64,
    ) -> Result<()> {
        let mut left = vec![0.0; 1 << self.left_n];
        let mut right = vec![0.0; 1 << self.right_n];
        for (x, y, mass) in &self.joint {
            if *mass < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "coupling mass {mass} negative on ({x}, {y})"
                )));
            }
            if !relation.allows(x.mask(), y.mask()) {
                return Err(Error::InvalidParameter(format!(
                    "coupling pair ({x}, {y}) outside the declared relation"
                )));
            }
            left[x.mask()] += mass;
            right[y.mask()] += mass;
        }
        for (mask, &w) in nu.weights().iter().enumerate() {
            if (left[mask] - w).abs() > tol {
                return Err(Error::InvalidParameter(format!(
                    "left marginal off by {} at {}",
                    (left[mask] - w).abs(),
                    Configuration::from_mask(mask, self.left_n)
                )));
            }
        }
        for (mask, &w) in rho.weights().iter().enumerate() {
            if (right[mask] - w).abs() > tol {
                return Err(Error::InvalidParameter(format!(
                    "right marginal off by {} at {}",
                    (right[mask] - w).abs(),
                    Configuration::from_mask(mask, self.right_n)
                )));
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!(self
            .joint
            .iter()
            .map(|(x, y, m)| json!([x.to_bitstring(), y.to_bitstring(), m]))
            .collect::<Vec<_>>())
    }
}

/// Structured refutation evidence. Coordinate lists are 1-based to match
/// the bitstring convention (coordinate 1 = first character).
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Violation {
    /// An upwardly closed set with `nu(A) < rho(A)`, described by its
    /// minimal elements.
    UpSet {
        minimal_elements: Vec<String>,
        nu_mass: f64,
        rho_mass: f64,
    },
    /// A Hall-type violating set for covering: `rho(B)` exceeds the nu-mass
    /// of every atom that could be matched to `B`.
    HallSet {
        right_atoms: Vec<String>,
        matchable_atoms: Vec<String>,
        nu_mass: f64,
        rho_mass: f64,
    },
    /// An SCP violation: the conditional on the lower assignment fails to
    /// cover the conditional on the higher one.
    ConditionalCovering {
        coords: Vec<usize>,
        higher: String,
        lower: String,
        inner: Box<Violation>,
    },
    /// A cylinder inequality violation on the given coordinate set.
    Cylinder {
        coords: Vec<usize>,
        all_ones: bool,
        joint_probability: f64,
        product_bound: f64,
    },
    /// A grid point where the Rayleigh difference is negative.
    RayleighPoint {
        point: Vec<f64>,
        i: usize,
        j: usize,
        delta: f64,
    },
    /// A decisively non-real root of the rank polynomial.
    ComplexRoot { re: f64, im: f64 },
    /// A rank pair whose covering coupling does not exist.
    RankPair { lower_rank: usize, inner: Box<Violation> },
    /// A single-coordinate flip exceeding the declared Lipschitz constant.
    LipschitzPair {
        x: String,
        y: String,
        difference: f64,
        declared: f64,
    },
}

/// Witness attached to a verdict: a certificate when the property holds,
/// a refutation when it does not. Never both.
#[derive(Debug, Clone)]
pub enum Witness {
    Coupling(Coupling),
    Violation(Violation),
}

/// Outcome of a dependence check.
#[derive(Debug, Clone)]
pub struct CheckVerdict {
    pub holds: bool,
    pub witness: Option<Witness>,
    pub detail: String,
}

impl CheckVerdict {
    fn holds_with(coupling: Option<Coupling>, detail: impl Into<String>) -> Self {
        CheckVerdict {
            holds: true,
            witness: coupling.map(Witness::Coupling),
            detail: detail.into(),
        }
    }

    fn refuted(violation: Violation, detail: impl Into<String>) -> Self {
        CheckVerdict {
            holds: false,
            witness: Some(Witness::Violation(violation)),
            detail: detail.into(),
        }
    }

    pub fn coupling(&self) -> Option<&Coupling> {
        match &self.witness {
            Some(Witness::Coupling(c)) => Some(c),
            _ => None,
        }
    }

    pub fn violation(&self) -> Option<&Violation> {
        match &self.witness {
            Some(Witness::Violation(v)) => Some(v),
            _ => None,
        }
    }

    /// Serialize as `{holds, witness_type, witness, detail}`.
    pub fn to_json(&self) -> serde_json::Value {
        let (witness_type, witness) = match &self.witness {
            Some(Witness::Coupling(c)) => ("coupling", c.to_json()),
            Some(Witness::Violation(v)) => ("violation", serde_json::to_value(v).unwrap()),
            None => ("none", serde_json::Value::Null),
        };
        json!({
            "holds": self.holds,
            "witness_type": witness_type,
            "witness": witness,
            "detail": self.detail,
        })
    }
}

fn one_based(coords: impl IntoIterator<Item = usize>) -> Vec<usize> {
    coords.into_iter().map(|j| j + 1).collect()
}

/// Decide `nu >= rho` (stochastic domination) by transportation
/// feasibility on the pairs `{x >= y}`.
pub fn check_domination(nu: &BooleanMeasure, rho: &BooleanMeasure) -> Result<CheckVerdict> {
    coupling_check(nu, rho, SupportRelation::Domination)
}

/// Decide `nu |> rho` (stochastic covering) on the pairs
/// `{x = y or x covers y}`.
pub fn check_covering(nu: &BooleanMeasure, rho: &BooleanMeasure) -> Result<CheckVerdict> {
    coupling_check(nu, rho, SupportRelation::Covering)
}

fn coupling_check(
    nu: &BooleanMeasure,
    rho: &BooleanMeasure,
    relation: SupportRelation,
) -> Result<CheckVerdict> {
    if nu.n() != rho.n() {
        return Err(Error::DimensionMismatch {
            expected: nu.n(),
            got: rho.n(),
        });
    }
    let n = nu.n();
    let left: Vec<usize> = nu.support();
    let right: Vec<usize> = rho.support();
    let source = 0usize;
    let sink = 1usize;
    let mut net = FlowNetwork::new(2 + left.len() + right.len());
    let left_node = |i: usize| 2 + i;
    let right_node = |j: usize| 2 + left.len() + j;

    let mut nu_total = 0i64;
    let mut rho_total = 0i64;
    let mut source_edges = Vec::with_capacity(left.len());
    for (i, &x) in left.iter().enumerate() {
        let cap = (nu.mass(x) * FLOW_SCALE).round() as i64;
        nu_total += cap;
        source_edges.push(net.add_edge(source, left_node(i), cap));
    }
    let mut sink_edges = Vec::with_capacity(right.len());
    for (j, &y) in right.iter().enumerate() {
        let cap = (rho.mass(y) * FLOW_SCALE).round() as i64;
        rho_total += cap;
        sink_edges.push(net.add_edge(right_node(j), sink, cap));
    }
    let _ = &source_edges;
    let _ = &sink_edges;
    let full = nu_total.max(rho_total) + 1;
    let mut pair_edges: Vec<(usize, usize, usize)> = Vec::new();
    for (i, &x) in left.iter().enumerate() {
        for (j, &y) in right.iter().enumerate() {
            if relation.allows(x, y) {
                let id = net.add_edge(left_node(i), right_node(j), full);
                pair_edges.push((i, j, id));
            }
        }
    }

    let flow = net.max_flow(source, sink);
    let slack = (COUPLING_TOL * FLOW_SCALE) as i64;
    if nu_total - flow <= slack && rho_total - flow <= slack {
        let mut joint = Vec::new();
        for &(i, j, id) in &pair_edges {
            let f = net.flow_on(id);
            if f > 0 {
                joint.push((
                    Configuration::from_mask(left[i], n),
                    Configuration::from_mask(right[j], n),
                    f as f64 / FLOW_SCALE,
                ));
            }
        }
        let coupling = Coupling {
            left_n: n,
            right_n: n,
            joint,
        };
        let relation_name = match relation {
            SupportRelation::Domination => "domination",
            SupportRelation::Covering => "covering",
        };
        return Ok(CheckVerdict::holds_with(
            Some(coupling),
            format!("{relation_name} coupling routed all mass"),
        ));
    }

    // Min cut: the right atoms not reachable from the source form a
    // violating set B with rho(B) > nu(matchable atoms of B).
    let reachable = net.residual_reachable(source);
    let violating: Vec<usize> = right
        .iter()
        .enumerate()
        .filter(|(j, _)| !reachable[right_node(*j)])
        .map(|(_, &y)| y)
        .collect();
    let matchable: Vec<usize> = left
        .iter()
        .copied()
        .filter(|&x| violating.iter().any(|&y| relation.allows(x, y)))
        .collect();
    let nu_mass: f64 = matchable.iter().map(|&x| nu.mass(x)).sum();
    let rho_mass: f64 = violating.iter().map(|&y| rho.mass(y)).sum();
    let verdict = match relation {
        SupportRelation::Domination => {
            // The up-closure of B is an upwardly closed set A with
            // nu(A) < rho(A); report A by the minimal elements of B.
            let minimal: Vec<usize> = violating
                .iter()
                .copied()
                .filter(|&y| !violating.iter().any(|&z| z != y && y & z == z))
                .collect();
            let in_upset = |m: usize| minimal.iter().any(|&b| m & b == b);
            let nu_up: f64 = nu.support().iter().filter(|&&m| in_upset(m)).map(|&m| nu.mass(m)).sum();
            let rho_up: f64 = rho.support().iter().filter(|&&m| in_upset(m)).map(|&m| rho.mass(m)).sum();
            CheckVerdict::refuted(
                Violation::UpSet {
                    minimal_elements: minimal
                        .iter()
                        .map(|&m| Configuration::from_mask(m, n).to_bitstring())
                        .collect(),
                    nu_mass: nu_up,
                    rho_mass: rho_up,
                },
                format!(
                    "up-set from the min cut has nu mass {nu_up:.9} < rho mass {rho_up:.9}"
                ),
            )
        }
        SupportRelation::Covering => CheckVerdict::refuted(
            Violation::HallSet {
                right_atoms: violating
                    .iter()
                    .map(|&m| Configuration::from_mask(m, n).to_bitstring())
                    .collect(),
                matchable_atoms: matchable
                    .iter()
                    .map(|&m| Configuration::from_mask(m, n).to_bitstring())
                    .collect(),
                nu_mass,
                rho_mass,
            },
            format!(
                "covering infeasible: rho mass {rho_mass:.9} needs nu mass {nu_mass:.9} of matchable atoms"
            ),
        ),
    };
    Ok(verdict)
}

/// Exhaustively test the stochastic covering property: for every coordinate
/// subset S and every covering pair of realizable assignments on S, the
/// conditional on the lower assignment must stochastically cover the
/// conditional on the higher one.
pub fn check_scp(m: &BooleanMeasure) -> Result<CheckVerdict> {
    check_scp_with_cap(m, DEFAULT_CHECK_CAP)
}

pub fn check_scp_with_cap(m: &BooleanMeasure, cap: usize) -> Result<CheckVerdict> {
    let n = m.n();
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    let mut pairs_checked = 0usize;
    // S iterates over nonempty proper subsets; conditioning on every
    // coordinate leaves nothing to compare.
    for s_mask in 1..(1usize << n) - 1 {
        let coords: Vec<usize> = (0..n).filter(|j| s_mask >> j & 1 == 1).collect();
        for &j in &coords {
            let others: Vec<usize> = coords.iter().copied().filter(|&l| l != j).collect();
            for rest in 0..1usize << others.len() {
                let mut higher = BTreeMap::new();
                let mut lower = BTreeMap::new();
                for (idx, &l) in others.iter().enumerate() {
                    let b = rest >> idx & 1 == 1;
                    higher.insert(l, b);
                    lower.insert(l, b);
                }
                higher.insert(j, true);
                lower.insert(j, false);
                let cond_high = match m.condition(&higher) {
                    Ok(c) => c,
                    Err(Error::ConditionOnNull) => continue,
                    Err(e) => return Err(e),
                };
                let cond_low = match m.condition(&lower) {
                    Ok(c) => c,
                    Err(Error::ConditionOnNull) => continue,
                    Err(e) => return Err(e),
                };
                pairs_checked += 1;
                let verdict = check_covering(&cond_low, &cond_high)?;
                if !verdict.holds {
                    let fmt_assignment = |asgn: &BTreeMap<usize, bool>| {
                        asgn.iter()
                            .map(|(&l, &b)| format!("X{}={}", l + 1, u8::from(b)))
                            .collect::<Vec<_>>()
                            .join(",")
                    };
                    let inner = match verdict.witness {
                        Some(Witness::Violation(v)) => v,
                        _ => unreachable!("refuted covering always carries a violation"),
                    };
                    let detail = format!(
                        "SCP fails on S={:?}: conditional on [{}] does not cover conditional on [{}]",
                        one_based(coords.clone()),
                        fmt_assignment(&lower),
                        fmt_assignment(&higher),
                    );
                    return Ok(CheckVerdict::refuted(
                        Violation::ConditionalCovering {
                            coords: one_based(coords.clone()),
                            higher: fmt_assignment(&higher),
                            lower: fmt_assignment(&lower),
                            inner: Box::new(inner),
                        },
                        detail,
                    ));
                }
            }
        }
    }
    Ok(CheckVerdict::holds_with(
        None,
        format!("SCP holds over {pairs_checked} realizable covering pairs"),
    ))
}

/// Verify both negative cylinder inequalities for every coordinate subset.
pub fn check_negative_cylinder(m: &BooleanMeasure) -> Result<CheckVerdict> {
    check_negative_cylinder_with_cap(m, DEFAULT_CHECK_CAP)
}

pub fn check_negative_cylinder_with_cap(m: &BooleanMeasure, cap: usize) -> Result<CheckVerdict> {
    let n = m.n();
    if n > cap {
        return Err(Error::CapExceeded { n, cap });
    }
    let size = 1usize << n;
    // superset sums: ones[S] = P(X_j = 1 for all j in S)
    let mut ones: Vec<f64> = m.weights().to_vec();
    // subset sums: subs[U] = P(support inside U); zeros on S = subs[~S]
    let mut subs: Vec<f64> = m.weights().to_vec();
    for j in 0..n {
        let bit = 1usize << j;
        for mask in 0..size {
            if mask & bit == 0 {
                ones[mask] += ones[mask | bit];
                subs[mask | bit] += subs[mask];
            }
        }
    }
    let p: Vec<f64> = (0..n).map(|j| m.marginal(j)).collect();
    let tol = 1e-10;
    for s_mask in 1..size {
        let mut prod_ones = 1.0;
        let mut prod_zeros = 1.0;
        for (j, pj) in p.iter().enumerate() {
            if s_mask >> j & 1 == 1 {
                prod_ones *= pj;
                prod_zeros *= 1.0 - pj;
            }
        }
        let coords = || one_based((0..n).filter(|j| s_mask >> j & 1 == 1));
        if ones[s_mask] > prod_ones + tol {
            return Ok(CheckVerdict::refuted(
                Violation::Cylinder {
                    coords: coords(),
                    all_ones: true,
                    joint_probability: ones[s_mask],
                    product_bound: prod_ones,
                },
                format!(
                    "P(all ones on S={:?}) = {:.9} exceeds product bound {:.9}",
                    coords(),
                    ones[s_mask],
                    prod_ones
                ),
            ));
        }
        let zeros = subs[!s_mask & (size - 1)];
        if zeros > prod_zeros + tol {
            return Ok(CheckVerdict::refuted(
                Violation::Cylinder {
                    coords: coords(),
                    all_ones: false,
                    joint_probability: zeros,
                    product_bound: prod_zeros,
                },
                format!(
                    "P(all zeros on S={:?}) = {:.9} exceeds product bound {:.9}",
                    coords(),
                    zeros,
                    prod_zeros
                ),
            ));
        }
    }
    Ok(CheckVerdict::holds_with(
        None,
        format!("both cylinder inequalities hold on all {} subsets", size - 1),
    ))
}

/// Search a grid of real points for violations of the Rayleigh inequality
/// `F_i F_j >= F_ij F`. Partial derivatives come exactly from the
/// multi-affine representation. A pass is evidence only; a refutation is
/// conclusive (up to the numerical threshold).
pub fn rayleigh_refute(
    m: &BooleanMeasure,
    grid: &[Vec<f64>],
    pairs: Option<&[(usize, usize)]>,
) -> Result<CheckVerdict> {
    let n = m.n();
    let all_pairs: Vec<(usize, usize)> = match pairs {
        Some(p) => p.to_vec(),
        None => {
            let mut v = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    v.push((i, j));
                }
            }
            v
        }
    };
    for (i, j) in &all_pairs {
        if *i >= n || *j >= n || i == j {
            return Err(Error::InvalidParameter(format!(
                "invalid coordinate pair ({i},{j}) for n={n}"
            )));
        }
    }
    for point in grid {
        if point.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: point.len(),
            });
        }
        let derivs = multiaffine_derivatives(m, point, &all_pairs);
        for (idx, &(i, j)) in all_pairs.iter().enumerate() {
            let (f, fi, fj, fij) = derivs[idx];
            let delta = fi * fj - f * fij;
            let scale = 1.0 + (fi * fj).abs() + (f * fij).abs();
            if delta < -RAYLEIGH_TOL * scale {
                return Ok(CheckVerdict::refuted(
                    Violation::RayleighPoint {
                        point: point.clone(),
                        i: i + 1,
                        j: j + 1,
                        delta,
                    },
                    format!(
                        "Rayleigh difference F_{}F_{} - F F_{}{} = {delta:.9} < 0 at {point:?}",
                        i + 1,
                        j + 1,
                        i + 1,
                        j + 1
                    ),
                ));
            }
        }
    }
    Ok(CheckVerdict::holds_with(
        None,
        format!(
            "no Rayleigh violation over {} grid points and {} pairs (necessary condition only)",
            grid.len(),
            all_pairs.len()
        ),
    ))
}

/// The default refutation grid: 200 uniform points in `[-3,3]^n` plus the
/// all-ones point.
pub fn rayleigh_default_grid(n: usize, seed: SeededRng) -> Vec<Vec<f64>> {
    use rand::Rng;
    let mut rng = seed.rng();
    let mut grid: Vec<Vec<f64>> = (0..200)
        .map(|_| (0..n).map(|_| rng.random_range(-3.0..3.0)).collect())
        .collect();
    grid.push(vec![1.0; n]);
    grid
}

/// Evaluate `(F, F_i, F_j, F_ij)` for the requested pairs at a real point.
fn multiaffine_derivatives(
    m: &BooleanMeasure,
    z: &[f64],
    pairs: &[(usize, usize)],
) -> Vec<(f64, f64, f64, f64)> {
    let n = m.n();
    let mut out = vec![(0.0, 0.0, 0.0, 0.0); pairs.len()];
    let mut f_total = 0.0;
    // per-atom singles: d_single[l] = w * prod_{k != l, k in omega} z_k,
    // nonzero only when l in omega
    let mut prefix = vec![1.0; n + 1];
    let mut suffix = vec![1.0; n + 1];
    let mut singles = vec![0.0; n];
    for (mask, &w) in m.weights().iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        let factor = |l: usize| if mask >> l & 1 == 1 { z[l] } else { 1.0 };
        prefix[0] = 1.0;
        for l in 0..n {
            prefix[l + 1] = prefix[l] * factor(l);
        }
        suffix[n] = 1.0;
        for l in (0..n).rev() {
            suffix[l] = suffix[l + 1] * factor(l);
        }
        f_total += w * prefix[n];
        for l in 0..n {
            singles[l] = if mask >> l & 1 == 1 {
                w * prefix[l] * suffix[l + 1]
            } else {
                0.0
            };
        }
        for (idx, &(i, j)) in pairs.iter().enumerate() {
            let (lo, hi) = if i < j { (i, j) } else { (j, i) };
            let entry = &mut out[idx];
            entry.1 += singles[i];
            entry.2 += singles[j];
            if mask >> lo & 1 == 1 && mask >> hi & 1 == 1 {
                // product over omega minus both coordinates
                let mut mid = 1.0;
                for l in lo + 1..hi {
                    mid *= factor(l);
                }
                entry.3 += w * prefix[lo] * mid * suffix[hi + 1];
            }
        }
    }
    for entry in &mut out {
        entry.0 = f_total;
    }
    out
}

/// Check the covering chain between every adjacent pair of realizable
/// ranks: `P_{k+1} |> P_k`.
pub fn check_rank_covering(m: &BooleanMeasure) -> Result<CheckVerdict> {
    check_rank_covering_with_cap(m, DEFAULT_CHECK_CAP)
}

pub fn check_rank_covering_with_cap(m: &BooleanMeasure, cap: usize) -> Result<CheckVerdict> {
    if m.n() > cap {
        return Err(Error::CapExceeded { n: m.n(), cap });
    }
    let pairs = rank_covering_couplings(m)?;
    match pairs {
        Ok(list) => Ok(CheckVerdict::holds_with(
            None,
            format!(
                "covering couplings constructed for {} adjacent rank pairs",
                list.len()
            ),
        )),
        Err((k, inner)) => {
            let detail = format!("rank covering fails between ranks {} and {}", k + 1, k);
            Ok(CheckVerdict::refuted(
                Violation::RankPair {
                    lower_rank: k,
                    inner: Box::new(inner),
                },
                detail,
            ))
        }
    }
}

/// Construct the witness couplings for every adjacent realizable rank pair,
/// or return the first failing pair.
#[allow(clippy::type_complexity)]
pub fn rank_covering_couplings(
    m: &BooleanMeasure,
) -> Result<std::result::Result<Vec<(usize, Coupling)>, (usize, Violation)>> {
    let dist = m.rank_distribution();
    let mut out = Vec::new();
    for k in 0..m.n() {
        if dist[k] <= 0.0 || dist[k + 1] <= 0.0 {
            continue;
        }
        let upper = m.condition_on_rank(k + 1)?;
        let lower = m.condition_on_rank(k)?;
        let verdict = check_covering(&upper, &lower)?;
        if !verdict.holds {
            let inner = match verdict.witness {
                Some(Witness::Violation(v)) => v,
                _ => unreachable!(),
            };
            return Ok(Err((k, inner)));
        }
        let coupling = match verdict.witness {
            Some(Witness::Coupling(c)) => c,
            _ => unreachable!("holding covering always carries a coupling"),
        };
        out.push((k, coupling));
    }
    Ok(Ok(out))
}

/// Decide whether the rank polynomial `sum_k P(N=k) z^k` is real-rooted
/// within tolerance, via companion-matrix eigenvalues.
pub fn check_univariate_real_rooted(m: &BooleanMeasure, tol: f64) -> Result<CheckVerdict> {
    let coeffs = m.rank_distribution();
    let roots = real_polynomial_roots(&coeffs)?;
    for root in &roots {
        if root.im.abs() > tol * (1.0 + root.norm()) {
            return Ok(CheckVerdict::refuted(
                Violation::ComplexRoot {
                    re: root.re,
                    im: root.im,
                },
                format!(
                    "rank polynomial has a non-real root {:.6}{:+.6}i",
                    root.re, root.im
                ),
            ));
        }
    }
    Ok(CheckVerdict::holds_with(
        None,
        format!("all {} roots of the rank polynomial are real within tolerance", roots.len()),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::Configuration;

    fn delta(bits: &str) -> BooleanMeasure {
        BooleanMeasure::point_mass(&Configuration::from_bitstring(bits).unwrap()).unwrap()
    }

    fn two_point() -> BooleanMeasure {
        BooleanMeasure::new(2, vec![0.5, 0.0, 0.0, 0.5]).unwrap()
    }

    fn uniform_pair(a: &str, b: &str) -> BooleanMeasure {
        BooleanMeasure::from_atoms(
            a.len(),
            &[
                (Configuration::from_bitstring(a).unwrap(), 0.5),
                (Configuration::from_bitstring(b).unwrap(), 0.5),
            ],
        )
        .unwrap()
    }

    #[test]
    fn domination_point_masses() {
        let v = check_domination(&delta("11"), &delta("00")).unwrap();
        assert!(v.holds);
        let coupling = v.coupling().unwrap();
        assert_eq!(coupling.joint.len(), 1);
        assert!((coupling.joint[0].2 - 1.0).abs() < 1e-9);

        let v = check_domination(&delta("00"), &delta("11")).unwrap();
        assert!(!v.holds);
        match v.violation().unwrap() {
            Violation::UpSet {
                minimal_elements,
                nu_mass,
                rho_mass,
            } => {
                assert_eq!(minimal_elements, &vec!["11".to_string()]);
                assert!(*nu_mass < *rho_mass);
            }
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn domination_mixed_example() {
        let nu = uniform_pair("10", "01");
        let rho = uniform_pair("00", "10");
        let v = check_domination(&nu, &rho).unwrap();
        assert!(v.holds, "{}", v.detail);
        v.coupling()
            .unwrap()
            .validate(&nu, &rho, SupportRelation::Domination, COUPLING_TOL)
            .unwrap();
    }

    #[test]
    fn covering_examples() {
        // Hamming distance 2: no covering pair available
        let v = check_covering(&delta("11"), &delta("00")).unwrap();
        assert!(!v.holds);

        let v = check_covering(&delta("10"), &delta("00")).unwrap();
        assert!(v.holds);

        // uniform on rank-2 vs rank-1 subsets of [3]
        let nu = BooleanMeasure::from_atoms(
            3,
            &[
                (Configuration::from_bitstring("110").unwrap(), 1.0 / 3.0),
                (Configuration::from_bitstring("101").unwrap(), 1.0 / 3.0),
                (Configuration::from_bitstring("011").unwrap(), 1.0 / 3.0),
            ],
        )
        .unwrap();
        let rho = BooleanMeasure::from_atoms(
            3,
            &[
                (Configuration::from_bitstring("100").unwrap(), 1.0 / 3.0),
                (Configuration::from_bitstring("010").unwrap(), 1.0 / 3.0),
                (Configuration::from_bitstring("001").unwrap(), 1.0 / 3.0),
            ],
        )
        .unwrap();
        let v = check_covering(&nu, &rho).unwrap();
        assert!(v.holds, "{}", v.detail);
        v.coupling()
            .unwrap()
            .validate(&nu, &rho, SupportRelation::Covering, COUPLING_TOL)
            .unwrap();
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let err = check_domination(&delta("1"), &delta("11")).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn scp_examples() {
        let product = BooleanMeasure::product_bernoulli(&[0.3, 0.6, 0.5]).unwrap();
        assert!(check_scp(&product).unwrap().holds);

        let v = check_scp(&two_point()).unwrap();
        assert!(!v.holds);
        assert!(matches!(
            v.violation().unwrap(),
            Violation::ConditionalCovering { .. }
        ));
    }

    #[test]
    fn scp_cap() {
        let m = BooleanMeasure::product_bernoulli(&[0.5; 13]).unwrap();
        assert!(matches!(
            check_scp(&m),
            Err(Error::CapExceeded { .. })
        ));
    }

    #[test]
    fn negative_cylinder_examples() {
        let product = BooleanMeasure::product_bernoulli(&[0.3, 0.7]).unwrap();
        assert!(check_negative_cylinder(&product).unwrap().holds);

        let v = check_negative_cylinder(&two_point()).unwrap();
        assert!(!v.holds);
        match v.violation().unwrap() {
            Violation::Cylinder {
                coords,
                joint_probability,
                product_bound,
                ..
            } => {
                assert_eq!(coords, &vec![1, 2]);
                assert!((joint_probability - 0.5).abs() < 1e-12);
                assert!((product_bound - 0.25).abs() < 1e-12);
            }
            other => panic!("unexpected witness {other:?}"),
        }

        assert!(check_negative_cylinder(&uniform_pair("10", "01")).unwrap().holds);
    }

    #[test]
    fn rayleigh_examples() {
        let product = BooleanMeasure::product_bernoulli(&[0.4, 0.8]).unwrap();
        let grid = rayleigh_default_grid(2, SeededRng::new(11));
        assert!(rayleigh_refute(&product, &grid, None).unwrap().holds);

        let v = rayleigh_refute(&two_point(), &[vec![1.0, 1.0]], None).unwrap();
        assert!(!v.holds);
        match v.violation().unwrap() {
            Violation::RayleighPoint { delta, .. } => {
                assert!((delta + 0.25).abs() < 1e-12);
            }
            other => panic!("unexpected witness {other:?}"),
        }

        // uniform{10,01}: Delta_12 = 1/4 identically
        let m = uniform_pair("10", "01");
        let grid = rayleigh_default_grid(2, SeededRng::new(3));
        assert!(rayleigh_refute(&m, &grid, None).unwrap().holds);
    }

    #[test]
    fn rank_covering_examples() {
        let product = BooleanMeasure::product_bernoulli(&[0.5, 0.5]).unwrap();
        let v = check_rank_covering(&product).unwrap();
        assert!(v.holds, "{}", v.detail);

        // homogeneous: single rank, vacuous
        let homog = uniform_pair("10", "01");
        assert!(check_rank_covering(&homog).unwrap().holds);
    }

    #[test]
    fn real_rooted_examples() {
        let product = BooleanMeasure::product_bernoulli(&[0.5, 0.5]).unwrap();
        assert!(check_univariate_real_rooted(&product, 1e-8).unwrap().holds);

        let v = check_univariate_real_rooted(&two_point(), 1e-8).unwrap();
        assert!(!v.holds);
        match v.violation().unwrap() {
            Violation::ComplexRoot { im, .. } => assert!((im.abs() - 1.0).abs() < 1e-8),
            other => panic!("unexpected witness {other:?}"),
        }

        let pm = delta("101");
        assert!(check_univariate_real_rooted(&pm, 1e-8).unwrap().holds);
    }

    #[test]
    fn verdict_json_shape() {
        let v = check_domination(&delta("11"), &delta("00")).unwrap();
        let j = v.to_json();
        assert_eq!(j["holds"], serde_json::json!(true));
        assert_eq!(j["witness_type"], serde_json::json!("coupling"));
        assert!(j["witness"].is_array());
    }
}
