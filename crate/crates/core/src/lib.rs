//! Finite-state Markov chain analysis and seeded Monte Carlo.
//!
//! The crate is organised around a dense, row-stochastic [`TransitionMatrix`].
//! Exact solvers cover stationary distributions, hitting and return times,
//! absorption probabilities, harmonic extension and spectral mixing bounds.
//! The sampling side (inverse-CDF, rejection, Metropolis-Hastings, Gibbs,
//! simulated annealing) draws every random number from an explicit
//! [`RandomSource`], so any run is reproducible from its seed.
//!
//! ```
//! use mkchain::{graph::Graph, chain::TransitionMatrix, stationary};
//!
//! let g = Graph::cycle(6).unwrap();
//! let p = TransitionMatrix::srw_from_graph(&g).unwrap();
//! let pi = stationary::solve_stationary(&p).unwrap();
//! assert!((pi[0] - 1.0 / 6.0).abs() < 1e-12);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod absorption;
pub mod chain;
pub mod cli;
pub mod distance;
mod error;
pub mod graph;
pub(crate) mod linalg;
pub mod martingale;
pub mod models;
pub mod optimize;
pub mod samplers;
pub mod spectral;
pub mod stationary;

pub use chain::{DistributionVector, Trajectory, TransitionMatrix};
pub use error::{Error, Result};
pub use graph::Graph;
pub use samplers::RandomSource;

/// Tolerance used when validating row sums and probability vectors on ingest.
pub const STOCHASTIC_TOL: f64 = 1e-10;
