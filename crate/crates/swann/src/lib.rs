//! Simulator and mean-field solver for Hebbian attractor networks on
//! small-world topologies.
//!
//! The network is a ring of binary neurons with `K` links each, a fraction
//! `omega` of them random shortcuts, storing `P` binary patterns by the Hebb
//! rule and retrieving them under synchronous sign dynamics. The crate
//! measures the mutual information between stored patterns and retrieval
//! states as a function of the load `alpha = P/K` and the topology
//! `(gamma = K/N, omega)`, both by direct simulation and by solving the
//! zero-temperature mean-field fixed-point equations, to locate the
//! information-optimal topology.

#![forbid(unsafe_code)]

pub mod error;
pub mod harness;
pub mod metrics;
pub mod network;
pub mod patterns;
pub mod rng;
pub mod theory;
pub mod topology;

pub use error::{Error, Result};
