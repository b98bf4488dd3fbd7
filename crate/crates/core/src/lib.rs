//! Sampling and verification toolkit for negatively dependent binary
//! random variables and their concentration behavior.
//!
//! The crate has three layers:
//!
//! - exact measures on the Boolean lattice ([`measures`]) and checkers for
//!   the negative-dependence hierarchy on them ([`dependence`]);
//! - samplers for the standard strong Rayleigh families: weighted spanning
//!   trees, conditioned Bernoullis, exclusion dynamics, finite determinantal
//!   measures ([`discrete`]), and two planar determinantal processes
//!   ([`continuous`]);
//! - Lipschitz functionals ([`functionals`]) and a harness ([`bounds`])
//!   that evaluates the closed-form concentration bounds and compares them
//!   against exact or Monte Carlo tail probabilities.
//!
//! Everything is deterministic given a master seed: see [`rng::SeededRng`].

pub mod bounds;
pub mod continuous;
pub mod corpus;
pub mod dependence;
pub mod discrete;
pub mod error;
pub mod functionals;
pub mod graph;
pub mod measures;
pub mod numeric;
pub mod rng;
pub mod stats;

pub use error::{Error, Result};
pub use graph::Graph;
pub use measures::{BooleanMeasure, Configuration};
pub use rng::SeededRng;
