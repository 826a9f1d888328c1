//! Hebbian weight storage and the synchronous retrieval dynamics.
//!
//! Weights live only on stored edges, aligned index-for-index with the
//! adjacency rows. After learning P patterns every weight is an integer
//! multiple of 1/K, so we store `K*W` as `i32` and the zero-temperature
//! update reduces to integer sign tests: exact, fast, and reproducible.

use crate::error::{Error, Result};
use crate::metrics;
use crate::rng::{self, TAG_NOISE};
use crate::topology::AdjacencyGraph;
use rand::Rng;
use rand_distr::StandardNormal;
use std::io::Write;

/// Edge-aligned Hebb weights; entry `e` couples row neuron `i` to
/// `graph.neighbors(i)[e - row_start]`. Stored as `K*W` (integers).
#[derive(Debug, Clone, PartialEq)]
pub struct SynapticWeights {
    kw: Vec<i32>,
    k: usize,
}

impl SynapticWeights {
    pub fn zeroed(graph: &AdjacencyGraph, k: usize) -> Self {
        SynapticWeights { kw: vec![0; graph.edge_count()], k }
    }

    pub fn nominal_k(&self) -> usize {
        self.k
    }

    /// `K*W` for edge slot `e` (graph row order).
    pub fn scaled(&self, e: usize) -> i32 {
        self.kw[e]
    }

    pub fn scaled_row(&self, graph: &AdjacencyGraph, i: usize) -> &[i32] {
        &self.kw[graph.row_range(i)]
    }
}

/// Binary neuron states at a time step.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkState {
    pub sigma: Vec<i8>,
    pub t: usize,
}

impl NetworkState {
    pub fn from_pattern(pattern: &[i8]) -> Self {
        NetworkState { sigma: pattern.to_vec(), t: 0 }
    }
}

/// Dynamics parameters. `temperature = 0` is the deterministic limit.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicsConfig {
    pub temperature: f64,
    pub t_f: usize,
    pub detect_fixed_point: bool,
    /// Master seed for the per-neuron, per-step noise streams (T > 0 only).
    pub noise_seed: u64,
}

impl DynamicsConfig {
    pub fn deterministic(t_f: usize) -> Self {
        DynamicsConfig { temperature: 0.0, t_f, detect_fixed_point: true, noise_seed: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    FixedPoint,
    Truncated,
}

/// One retrieval run: overlap trajectory and why it stopped.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub final_state: NetworkState,
    /// `m^0 .. m^{t_end}` against the monitored pattern.
    pub overlaps: Vec<f64>,
    pub stop: StopReason,
}

impl RunRecord {
    pub fn final_overlap(&self) -> f64 {
        *self.overlaps.last().unwrap()
    }
}

/// Add one pattern to the weights: `K*W_ij += xi_i * xi_j` on every stored edge.
pub fn learn_pattern(
    weights: &mut SynapticWeights,
    graph: &AdjacencyGraph,
    pattern: &[i8],
) -> Result<()> {
    if pattern.len() != graph.n() {
        return Err(Error::Dimension { expected: graph.n(), got: pattern.len() });
    }
    for i in 0..graph.n() {
        let xi = i32::from(pattern[i]);
        let range = graph.row_range(i);
        let nbrs = graph.neighbors(i);
        for (w, &j) in weights.kw[range].iter_mut().zip(nbrs) {
            *w += xi * i32::from(pattern[j as usize]);
        }
    }
    Ok(())
}

/// Integer field sum `sum_j K*W_ij * sigma_j` for neuron `i`.
#[inline]
fn field_sum(i: usize, sigma: &[i8], weights: &SynapticWeights, graph: &AdjacencyGraph) -> i32 {
    let range = graph.row_range(i);
    let nbrs = graph.neighbors(i);
    let mut acc = 0i32;
    for (&w, &j) in weights.kw[range].iter().zip(nbrs) {
        acc += w * i32::from(sigma[j as usize]);
    }
    acc
}

/// Local field `h_i = sum_j J_ij sigma_j`.
pub fn local_field(
    i: usize,
    state: &NetworkState,
    weights: &SynapticWeights,
    graph: &AdjacencyGraph,
) -> f64 {
    field_sum(i, &state.sigma, weights, graph) as f64 / weights.k as f64
}

/// One synchronous update of every neuron: `sigma_i <- sign(h_i + T x)`.
///
/// A neuron whose argument is exactly zero holds its previous state, which
/// keeps fixed points well defined. At T > 0 each `(neuron, step)` pair draws
/// from its own counter-derived stream, so trajectories do not depend on
/// evaluation order.
pub fn step_parallel(
    state: &NetworkState,
    weights: &SynapticWeights,
    graph: &AdjacencyGraph,
    config: &DynamicsConfig,
) -> NetworkState {
    let n = graph.n();
    let mut next = vec![0i8; n];
    if config.temperature == 0.0 {
        for (i, slot) in next.iter_mut().enumerate() {
            let acc = field_sum(i, &state.sigma, weights, graph);
            *slot = match acc.cmp(&0) {
                std::cmp::Ordering::Greater => 1,
                std::cmp::Ordering::Less => -1,
                std::cmp::Ordering::Equal => state.sigma[i],
            };
        }
    } else {
        let noise_seed = rng::derive_seed(config.noise_seed, TAG_NOISE);
        let k = weights.k as f64;
        for (i, slot) in next.iter_mut().enumerate() {
            let acc = field_sum(i, &state.sigma, weights, graph);
            let mut stream = rng::stream(noise_seed, (state.t * n + i) as u64);
            let x: f64 = stream.sample(StandardNormal);
            let h = acc as f64 / k + config.temperature * x;
            *slot = if h > 0.0 {
                1
            } else if h < 0.0 {
                -1
            } else {
                state.sigma[i]
            };
        }
    }
    NetworkState { sigma: next, t: state.t + 1 }
}

/// Iterate the parallel dynamics for at most `t_f` steps, recording the
/// overlap with `pattern` at every step. Stops early at an exact state fixed
/// point when `detect_fixed_point` is set and T = 0.
pub fn run(
    state: NetworkState,
    weights: &SynapticWeights,
    graph: &AdjacencyGraph,
    config: &DynamicsConfig,
    pattern: &[i8],
) -> Result<RunRecord> {
    if config.t_f == 0 {
        return Err(Error::Config("t_f must be at least 1".into()));
    }
    let mut overlaps = Vec::with_capacity(config.t_f + 1);
    overlaps.push(metrics::overlap(&state.sigma, pattern)?);
    let mut current = state;
    let detect = config.detect_fixed_point && config.temperature == 0.0;
    for _ in 0..config.t_f {
        let next = step_parallel(&current, weights, graph, config);
        overlaps.push(metrics::overlap(&next.sigma, pattern)?);
        let fixed = detect && next.sigma == current.sigma;
        current = next;
        if fixed {
            return Ok(RunRecord { final_state: current, overlaps, stop: StopReason::FixedPoint });
        }
    }
    Ok(RunRecord { final_state: current, overlaps, stop: StopReason::Truncated })
}

/// Draw an initial state at expected overlap `m0` with `pattern`: each site
/// independently equals the pattern bit with probability `(1 + m0) / 2`.
pub fn init_state_from_pattern(
    pattern: &[i8],
    m0: f64,
    rng: &mut impl Rng,
) -> Result<NetworkState> {
    if !(-1.0..=1.0).contains(&m0) {
        return Err(Error::Domain(format!("initial overlap {m0} outside [-1, 1]")));
    }
    let p_keep = (1.0 + m0) / 2.0;
    let sigma = pattern
        .iter()
        .map(|&xi| if rng.gen::<f64>() < p_keep { xi } else { -xi })
        .collect();
    Ok(NetworkState { sigma, t: 0 })
}

/// Diagnostic dump: one `i j K*W_ij` triple per stored edge.
pub fn write_weights_text(
    weights: &SynapticWeights,
    graph: &AdjacencyGraph,
    out: &mut impl Write,
) -> Result<()> {
    for i in 0..graph.n() {
        for (&w, &j) in weights.scaled_row(graph, i).iter().zip(graph.neighbors(i)) {
            writeln!(out, "{i} {j} {w}")?;
        }
    }
    Ok(())
}
