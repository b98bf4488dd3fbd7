//! Exact samplers for the discrete strong Rayleigh families: weighted
//! spanning trees, Bernoullis conditioned on their sum, exclusion dynamics
//! with optional birth and death, and finite Hermitian determinantal
//! measures. Each sampler is paired with an exact law (enumeration, closed
//! form, matrix exponential, or inclusion-exclusion) that the verification
//! suite tests it against.

pub mod cond_bernoulli;
pub mod dpp;
pub mod exclusion;
pub mod spanning_tree;

pub use cond_bernoulli::sample_conditioned_bernoulli;
pub use dpp::{dpp_exact_pmf, sample_dpp_finite, HermitianKernel};
pub use exclusion::{simulate_exclusion, ExclusionSpec};
pub use spanning_tree::{enumerate_spanning_trees, sample_spanning_tree};
