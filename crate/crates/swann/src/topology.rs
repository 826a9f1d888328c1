//! Connectivity graphs: a local ring plus random shortcuts, and the
//! cycle-probability coefficients the mean-field theory needs.
//!
//! A graph is built from `(N, K, omega)`: each neuron is wired to its `K_n`
//! ring predecessors, and random shortcuts are added per pair with probability
//! `K_r / N`, where `K_n = round((1-omega) K)` and `K_r = K - K_n`. Shortcuts
//! never duplicate local links and self-loops are forbidden, so the nominal
//! synapse count stays at `N*K`.

use crate::error::{Error, Result};
use crate::rng::{self, TAG_WALKS};
use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use std::io::Write;

/// Build parameters for a connectivity graph.
#[derive(Debug, Clone, PartialEq)]
pub struct TopologyConfig {
    pub n: usize,
    pub k: usize,
    /// Fraction of links that are random shortcuts, in [0, 1].
    pub omega: f64,
    /// Add every edge in both directions.
    pub symmetric: bool,
    pub seed: u64,
}

impl TopologyConfig {
    pub fn new(n: usize, k: usize, omega: f64, seed: u64) -> Self {
        TopologyConfig { n, k, omega, symmetric: false, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.k == 0 {
            return Err(Error::Config(format!(
                "need N >= 1 and K >= 1, got N={} K={}",
                self.n, self.k
            )));
        }
        if self.k > self.n - 1 {
            return Err(Error::Config(format!(
                "K={} exceeds N-1={} (self-loops are forbidden)",
                self.k,
                self.n - 1
            )));
        }
        if !(0.0..=1.0).contains(&self.omega) {
            return Err(Error::Config(format!("omega={} outside [0, 1]", self.omega)));
        }
        if self.local_degree() >= self.n {
            return Err(Error::Config(format!(
                "K_n={} must be below N={}",
                self.local_degree(),
                self.n
            )));
        }
        Ok(())
    }

    /// Number of ring-local links per neuron, `K_n = round((1-omega) K)`.
    pub fn local_degree(&self) -> usize {
        ((1.0 - self.omega) * self.k as f64).round() as usize
    }

    /// Mean number of random shortcuts per neuron, `K_r = K - K_n`.
    pub fn random_degree(&self) -> usize {
        self.k - self.local_degree()
    }

    /// Connectivity ratio `gamma = K/N`.
    pub fn gamma(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    /// Randomness actually realized after rounding, `K_r / K`.
    pub fn effective_omega(&self) -> f64 {
        self.random_degree() as f64 / self.k as f64
    }
}

/// Sparse directed adjacency in compressed row form.
///
/// `neighbors(i)` lists every `j` with a stored link `i -> j`; the network
/// field at `i` sums over exactly this list.
#[derive(Debug, Clone, PartialEq)]
pub struct AdjacencyGraph {
    n: usize,
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl AdjacencyGraph {
    pub fn from_rows(rows: Vec<Vec<u32>>) -> Self {
        let n = rows.len();
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let total: usize = rows.iter().map(|r| r.len()).sum();
        let mut targets = Vec::with_capacity(total);
        for row in rows {
            targets.extend_from_slice(&row);
            offsets.push(targets.len());
        }
        AdjacencyGraph { n, offsets, targets }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.targets.len()
    }

    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.targets[self.offsets[i]..self.offsets[i + 1]]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.offsets[i + 1] - self.offsets[i]
    }

    /// Row bounds of neuron `i` in the flat edge arrays.
    pub fn row_range(&self, i: usize) -> std::ops::Range<usize> {
        self.offsets[i]..self.offsets[i + 1]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| {
            self.neighbors(i)
                .iter()
                .all(|&j| self.neighbors(j as usize).contains(&(i as u32)))
        })
    }
}

/// Exact out-degree statistics over all neurons.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DegreeStats {
    pub min: usize,
    pub max: usize,
    pub mean: f64,
    pub variance: f64,
}

pub fn degree_stats(graph: &AdjacencyGraph) -> DegreeStats {
    let n = graph.n();
    let mut min = usize::MAX;
    let mut max = 0;
    let mut sum = 0usize;
    let mut sumsq = 0u128;
    for i in 0..n {
        let d = graph.degree(i);
        min = min.min(d);
        max = max.max(d);
        sum += d;
        sumsq += (d * d) as u128;
    }
    let mean = sum as f64 / n as f64;
    DegreeStats { min, max, mean, variance: sumsq as f64 / n as f64 - mean * mean }
}

/// Is `j` within the `k_n` ring predecessors of `i`?
fn is_local_pred(i: usize, j: usize, n: usize, k_n: usize) -> bool {
    let back = (i + n - j) % n;
    back >= 1 && back <= k_n
}

/// Is `j` within `k_n` ring steps of `i` in either direction?
fn is_local_either(i: usize, j: usize, n: usize, k_n: usize) -> bool {
    is_local_pred(i, j, n, k_n) || is_local_pred(j, i, n, k_n)
}

/// Build the connectivity graph for `config`.
///
/// Construction is sequential in a single seeded stream, so identical configs
/// produce bit-identical graphs.
pub fn build_topology(config: &TopologyConfig) -> Result<AdjacencyGraph> {
    config.validate()?;
    let n = config.n;
    let k_n = config.local_degree();
    let k_r = config.random_degree();
    let mut rng = rng::seeded(rng::derive_seed(config.seed, rng::TAG_GRAPH));

    let mut rows: Vec<Vec<u32>> = (0..n)
        .map(|i| {
            let mut row = Vec::with_capacity(k_n + k_r + 4);
            for step in 1..=k_n {
                row.push(((i + n - step) % n) as u32);
            }
            row
        })
        .collect();

    if config.symmetric && k_n > 0 {
        // closure of the local part: successors mirror the predecessors
        for i in 0..n {
            for step in 1..=k_n {
                let j = ((i + step) % n) as u32;
                if !is_local_pred(i, j as usize, n, k_n) {
                    rows[i].push(j);
                }
            }
        }
    }

    if k_r > 0 {
        if config.symmetric {
            sample_random_symmetric(&mut rows, n, k_n, k_r, &mut rng)?;
        } else {
            sample_random_directed(&mut rows, n, k_n, k_r, &mut rng)?;
        }
    }

    Ok(AdjacencyGraph::from_rows(rows))
}

/// Directed shortcuts: each ordered pair `(i, j)` with `j` outside the local
/// part carries an independent Bernoulli link with probability `K_r` over the
/// candidate count, so the mean shortcut degree is exactly `K_r` and the
/// fully connected limit saturates. Realized as a binomial count plus uniform
/// distinct targets, which has the identical law.
fn sample_random_directed(
    rows: &mut [Vec<u32>],
    n: usize,
    k_n: usize,
    k_r: usize,
    rng: &mut impl Rng,
) -> Result<()> {
    let candidates = n - 1 - k_n;
    if candidates == 0 {
        return Ok(());
    }
    let c_r = (k_r as f64 / candidates as f64).min(1.0);
    let binom = Binomial::new(candidates as u64, c_r)
        .map_err(|e| Error::Config(format!("invalid shortcut probability: {e}")))?;
    for i in 0..n {
        let count = binom.sample(rng) as usize;
        let mut picked: Vec<u32> = Vec::with_capacity(count);
        while picked.len() < count {
            let j = rng.gen_range(0..n);
            if j == i || is_local_pred(i, j, n, k_n) || picked.contains(&(j as u32)) {
                continue;
            }
            picked.push(j as u32);
        }
        rows[i].extend_from_slice(&picked);
    }
    Ok(())
}

/// Symmetric shortcuts: each unordered non-local pair carries an independent
/// Bernoulli link added in both directions, normalized so the mean shortcut
/// degree per neuron is `K_r`.
fn sample_random_symmetric(
    rows: &mut Vec<Vec<u32>>,
    n: usize,
    k_n: usize,
    k_r: usize,
    rng: &mut impl Rng,
) -> Result<()> {
    let per_node_candidates = n.saturating_sub(1 + 2 * k_n).max(1);
    let c_r = (k_r as f64 / per_node_candidates as f64).min(1.0);
    if 2 * k_n + 2 >= n {
        // near-complete ring: enumerate pairs directly
        for i in 0..n {
            for j in (i + 1)..n {
                if !is_local_either(i, j, n, k_n) && rng.gen::<f64>() < c_r {
                    push_pair(rows, i, j);
                }
            }
        }
        return Ok(());
    }
    for i in 0..n {
        // non-local candidates above i: all j > i minus clipped ring intervals
        let succ = k_n.min(n - 1 - i);
        let pred_wrapped = k_n.saturating_sub(i).min(n - 1 - i);
        let candidates = (n - 1 - i) - succ - pred_wrapped;
        if candidates == 0 {
            continue;
        }
        let binom = Binomial::new(candidates as u64, c_r)
            .map_err(|e| Error::Config(format!("invalid shortcut probability: {e}")))?;
        let count = binom.sample(rng) as usize;
        let mut picked: Vec<u32> = Vec::with_capacity(count);
        while picked.len() < count {
            let j = rng.gen_range(i + 1..n);
            if is_local_either(i, j, n, k_n) || picked.contains(&(j as u32)) {
                continue;
            }
            picked.push(j as u32);
        }
        for &j in &picked {
            push_pair(rows, i, j as usize);
        }
    }
    Ok(())
}

fn push_pair(rows: &mut Vec<Vec<u32>>, i: usize, j: usize) {
    rows[i].push(j as u32);
    rows[j].push(i as u32);
}

/// Replace the edge set by its symmetric closure. Rows come out sorted, so
/// the operation is idempotent bit-for-bit.
pub fn symmetrize(graph: &AdjacencyGraph) -> AdjacencyGraph {
    let n = graph.n();
    let mut rows: Vec<Vec<u32>> = (0..n).map(|i| graph.neighbors(i).to_vec()).collect();
    for i in 0..n {
        for e in graph.row_range(i) {
            let j = graph.targets[e] as usize;
            rows[j].push(i as u32);
        }
    }
    for row in &mut rows {
        row.sort_unstable();
        row.dedup();
    }
    AdjacencyGraph::from_rows(rows)
}

/// Monte Carlo estimates of the cycle-probability coefficients
/// `a_k = gamma * Tr[(C/K)^(k+2)]`, `k = 0..k_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct CycleProbabilities {
    /// Coefficients `a_0..a_k_max`.
    pub a: Vec<f64>,
    /// Per-coefficient Monte Carlo standard error (zero for analytic presets).
    pub stderr: Vec<f64>,
    pub k_max: usize,
    pub walks: usize,
}

impl CycleProbabilities {
    /// Analytic preset, no sampling noise.
    pub fn exact(a: Vec<f64>) -> Self {
        let k_max = a.len() - 1;
        let stderr = vec![0.0; a.len()];
        CycleProbabilities { a, stderr, k_max, walks: 0 }
    }
}

/// Estimate `a_k = gamma * Tr[(C/K)^(k+2)] = K * <p_i(k+2)>_i` by importance-
/// weighted closed walks: start uniformly, step uniformly among actual
/// neighbors, carry weight `deg(current)/K` per step, and score the weight
/// whenever the walk is back at its start.
///
/// The graph must be symmetric (symmetrize first if it was built directed).
pub fn estimate_cycle_probabilities(
    graph: &AdjacencyGraph,
    k_nominal: usize,
    k_max: usize,
    walks: usize,
    seed: u64,
) -> Result<CycleProbabilities> {
    if k_nominal == 0 {
        return Err(Error::Config("nominal connectivity must be positive".into()));
    }
    if walks == 0 {
        return Err(Error::Config("need at least one walk".into()));
    }
    let n = graph.n();
    for i in 0..n {
        if graph.degree(i) == 0 {
            return Err(Error::Estimation(format!(
                "neuron {i} is isolated (degree 0); cannot walk"
            )));
        }
    }

    let walk_seed = rng::derive_seed(seed, TAG_WALKS);
    let len = k_max + 2;
    let k_f = k_nominal as f64;

    // chunked accumulation in a fixed chunk grid keeps the reduction order,
    // and hence the floating-point result, independent of thread count
    const CHUNK: usize = 4096;
    let chunk_starts: Vec<usize> = (0..walks).step_by(CHUNK).collect();
    let partials: Vec<(Vec<f64>, Vec<f64>)> = chunk_starts
        .par_iter()
        .map(|&start| {
            let end = (start + CHUNK).min(walks);
            let mut sums = vec![0.0f64; k_max + 1];
            let mut sumsq = vec![0.0f64; k_max + 1];
            for w in start..end {
                let mut rng = rng::stream(walk_seed, w as u64);
                let origin = rng.gen_range(0..n);
                let mut v = origin;
                let mut weight = 1.0f64;
                for step in 1..=len {
                    let nbrs = graph.neighbors(v);
                    weight *= nbrs.len() as f64 / k_f;
                    v = nbrs[rng.gen_range(0..nbrs.len())] as usize;
                    if step >= 2 && v == origin {
                        let idx = step - 2;
                        sums[idx] += weight;
                        sumsq[idx] += weight * weight;
                    }
                }
            }
            (sums, sumsq)
        })
        .collect();

    let mut sums = vec![0.0f64; k_max + 1];
    let mut sumsq = vec![0.0f64; k_max + 1];
    for (s, sq) in partials {
        for k in 0..=k_max {
            sums[k] += s[k];
            sumsq[k] += sq[k];
        }
    }

    let w = walks as f64;
    let mut a = Vec::with_capacity(k_max + 1);
    let mut stderr = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let mean = sums[k] / w;
        let var = ((sumsq[k] / w - mean * mean) * w / (w - 1.0)).max(0.0);
        a.push(k_f * mean);
        stderr.push(k_f * (var / w).sqrt());
    }
    Ok(CycleProbabilities { a, stderr, k_max, walks })
}

/// Text dump, one line per neuron: `i: j1 j2 ... jd`.
pub fn write_graph_text(
    graph: &AdjacencyGraph,
    config: &TopologyConfig,
    out: &mut impl Write,
) -> Result<()> {
    writeln!(
        out,
        "N={} K={} omega={} seed={}",
        config.n, config.k, config.omega, config.seed
    )?;
    for i in 0..graph.n() {
        write!(out, "{i}:")?;
        for &j in graph.neighbors(i) {
            write!(out, " {j}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn neighbor_set(g: &AdjacencyGraph, i: usize) -> HashSet<u32> {
        g.neighbors(i).iter().copied().collect()
    }

    /// Exact a_k via dense matrix powers; independent of the walk estimator.
    fn dense_cycle_probabilities(g: &AdjacencyGraph, k_nominal: usize, k_max: usize) -> Vec<f64> {
        let n = g.n();
        let kf = k_nominal as f64;
        let mut a = vec![0.0f64; n * n];
        for i in 0..n {
            for &j in g.neighbors(i) {
                a[i * n + j as usize] = 1.0 / kf;
            }
        }
        let matmul = |x: &[f64], y: &[f64]| {
            let mut out = vec![0.0f64; n * n];
            for i in 0..n {
                for l in 0..n {
                    let v = x[i * n + l];
                    if v == 0.0 {
                        continue;
                    }
                    for j in 0..n {
                        out[i * n + j] += v * y[l * n + j];
                    }
                }
            }
            out
        };
        let gamma = kf / n as f64;
        let mut power = matmul(&a, &a); // (C/K)^2
        let mut result = Vec::with_capacity(k_max + 1);
        for _ in 0..=k_max {
            let trace: f64 = (0..n).map(|i| power[i * n + i]).sum();
            result.push(gamma * trace);
            power = matmul(&power, &a);
        }
        result
    }

    #[test]
    fn pure_ring_has_the_local_predecessors() {
        let cfg = TopologyConfig::new(10, 2, 0.0, 1);
        let g = build_topology(&cfg).unwrap();
        assert_eq!(neighbor_set(&g, 5), HashSet::from([4, 3]));
        assert_eq!(neighbor_set(&g, 0), HashSet::from([9, 8]));
        assert_eq!(g.edge_count(), 20);
    }

    #[test]
    fn fully_connected_limit_has_everyone_but_self() {
        let cfg = TopologyConfig::new(100, 99, 0.3, 7);
        let g = build_topology(&cfg).unwrap();
        for i in 0..100 {
            assert_eq!(g.degree(i), 99);
            assert!(!g.neighbors(i).contains(&(i as u32)));
        }
    }

    #[test]
    fn mean_degree_matches_the_generation_law() {
        // K_n local links plus Binomial(N-1-K_n, K_r/N) shortcuts per neuron
        let cfg = TopologyConfig::new(10_000, 100, 0.2, 99);
        let g = build_topology(&cfg).unwrap();
        let stats = degree_stats(&g);
        let k_n = cfg.local_degree() as f64;
        let k_r = cfg.random_degree() as f64;
        let expected = k_n + k_r;
        assert_eq!(expected, 100.0);
        // mean of N binomial draws concentrates far inside +-1
        assert!(
            (stats.mean - expected).abs() < 1.0,
            "mean degree {} vs expected {}",
            stats.mean,
            expected
        );
        assert!(stats.variance > 5.0, "shortcut part should spread degrees");
    }

    #[test]
    fn no_duplicates_and_no_self_loops() {
        for omega in [0.0, 0.3, 1.0] {
            for symmetric in [false, true] {
                let mut cfg = TopologyConfig::new(400, 24, omega, 5);
                cfg.symmetric = symmetric;
                let g = build_topology(&cfg).unwrap();
                for i in 0..g.n() {
                    let set = neighbor_set(&g, i);
                    assert_eq!(set.len(), g.degree(i), "duplicates at {i}");
                    assert!(!set.contains(&(i as u32)), "self-loop at {i}");
                }
                if symmetric {
                    assert!(g.is_symmetric());
                }
            }
        }
    }

    #[test]
    fn degree_stats_reference_points() {
        let ring = build_topology(&TopologyConfig::new(50, 2, 0.0, 1)).unwrap();
        let s = degree_stats(&ring);
        assert_eq!((s.min, s.max), (2, 2));
        assert_eq!(s.mean, 2.0);
        assert_eq!(s.variance, 0.0);

        let fc = build_topology(&TopologyConfig::new(100, 99, 0.0, 1)).unwrap();
        let s = degree_stats(&fc);
        assert_eq!(s.mean, 99.0);
        assert_eq!(s.variance, 0.0);

        // omega = 1: pure Binomial(N-1, K/N) degrees
        let rnd = build_topology(&TopologyConfig::new(10_000, 100, 1.0, 123)).unwrap();
        let s = degree_stats(&rnd);
        assert!((s.mean - 100.0).abs() < 1.0, "mean {}", s.mean);
        let expected_var = 10_000.0 * 0.01 * 0.99;
        assert!(
            (s.variance - expected_var).abs() < 15.0,
            "variance {} vs {}",
            s.variance,
            expected_var
        );
    }

    #[test]
    fn determinism_same_seed_same_graph() {
        let cfg = TopologyConfig::new(2000, 40, 0.35, 777);
        let g1 = build_topology(&cfg).unwrap();
        let g2 = build_topology(&cfg).unwrap();
        assert_eq!(g1, g2);
        let mut cfg2 = cfg.clone();
        cfg2.seed = 778;
        assert_ne!(build_topology(&cfg2).unwrap(), g1);
    }

    #[test]
    fn symmetrize_closure_and_idempotence() {
        let g = AdjacencyGraph::from_rows(vec![vec![], vec![], vec![], vec![7], vec![], vec![], vec![], vec![]]);
        let s = symmetrize(&g);
        assert_eq!(s.neighbors(3), &[7]);
        assert_eq!(s.neighbors(7), &[3]);
        let s2 = symmetrize(&s);
        assert_eq!(s, s2);
    }

    #[test]
    fn symmetrized_ring_gains_successors() {
        let g = build_topology(&TopologyConfig::new(10, 2, 0.0, 3)).unwrap();
        let s = symmetrize(&g);
        for i in 0..10u32 {
            let expect: HashSet<u32> = [1, 2, 8, 9].iter().map(|d| (i + d) % 10).collect();
            assert_eq!(neighbor_set(&s, i as usize), expect);
            assert_eq!(s.degree(i as usize), 4);
        }
    }

    #[test]
    fn already_symmetric_graph_is_unchanged() {
        let mut cfg = TopologyConfig::new(60, 6, 0.5, 11);
        cfg.symmetric = true;
        let g = build_topology(&cfg).unwrap();
        let s = symmetrize(&g);
        for i in 0..60 {
            assert_eq!(neighbor_set(&g, i), neighbor_set(&s, i));
        }
    }

    #[test]
    fn estimator_matches_dense_traces_within_three_stderr() {
        let cases: Vec<(AdjacencyGraph, usize)> = vec![
            (build_topology(&TopologyConfig::new(50, 49, 0.0, 2)).unwrap(), 49),
            (symmetrize(&build_topology(&TopologyConfig::new(120, 8, 0.0, 2)).unwrap()), 8),
            (
                {
                    let mut c = TopologyConfig::new(150, 12, 0.3, 2);
                    c.symmetric = true;
                    build_topology(&c).unwrap()
                },
                12,
            ),
            (
                {
                    let mut c = TopologyConfig::new(200, 10, 1.0, 2);
                    c.symmetric = true;
                    build_topology(&c).unwrap()
                },
                10,
            ),
        ];
        for (g, k) in cases {
            let est = estimate_cycle_probabilities(&g, k, 6, 200_000, 42).unwrap();
            let exact = dense_cycle_probabilities(&g, k, 6);
            for kk in 0..=6 {
                let tol = 3.0 * est.stderr[kk].max(1e-12);
                assert!(
                    (est.a[kk] - exact[kk]).abs() <= tol,
                    "k={kk}: est {} vs exact {} (stderr {})",
                    est.a[kk],
                    exact[kk],
                    est.stderr[kk]
                );
            }
        }
    }

    #[test]
    fn regular_symmetric_graph_has_unit_a0() {
        // symmetrized pure ring: every degree is exactly 2*K_n
        let g = symmetrize(&build_topology(&TopologyConfig::new(500, 4, 0.0, 9)).unwrap());
        let est = estimate_cycle_probabilities(&g, 8, 4, 100_000, 1).unwrap();
        assert!(
            (est.a[0] - 1.0).abs() <= 3.0 * est.stderr[0],
            "a_0 = {} +- {}",
            est.a[0],
            est.stderr[0]
        );
    }

    #[test]
    fn sparse_random_symmetric_graph_is_nearly_tree_like() {
        let mut cfg = TopologyConfig::new(100_000, 10, 1.0, 31);
        cfg.symmetric = true;
        let g = build_topology(&cfg).unwrap();
        let est = estimate_cycle_probabilities(&g, 10, 4, 200_000, 8).unwrap();
        assert!((est.a[0] - 1.0).abs() < 0.05, "a_0 = {}", est.a[0]);
        assert!(est.a[1] <= 0.05, "a_1 = {}", est.a[1]);
        assert!(est.a[2] <= 2.0 / 10.0 + 3.0 * est.stderr[2], "a_2 = {}", est.a[2]);
    }

    #[test]
    fn isolated_neuron_is_reported_by_index() {
        let g = AdjacencyGraph::from_rows(vec![vec![1], vec![0], vec![]]);
        let err = estimate_cycle_probabilities(&g, 1, 2, 100, 0).unwrap_err();
        assert!(err.to_string().contains("neuron 2"), "{err}");
    }

    #[test]
    fn estimator_is_deterministic_for_fixed_seed() {
        let g = symmetrize(&build_topology(&TopologyConfig::new(300, 6, 0.2, 4)).unwrap());
        let e1 = estimate_cycle_probabilities(&g, 6, 5, 20_000, 5).unwrap();
        let e2 = estimate_cycle_probabilities(&g, 6, 5, 20_000, 5).unwrap();
        assert_eq!(e1, e2);
    }

    #[test]
    fn config_validation_errors() {
        assert!(build_topology(&TopologyConfig::new(10, 10, 0.0, 0)).is_err());
        assert!(build_topology(&TopologyConfig::new(10, 0, 0.0, 0)).is_err());
        assert!(build_topology(&TopologyConfig::new(0, 1, 0.0, 0)).is_err());
        assert!(build_topology(&TopologyConfig::new(10, 4, 1.5, 0)).is_err());
    }

    #[test]
    fn effective_omega_reports_the_rounded_split() {
        let cfg = TopologyConfig::new(1000, 7, 0.5, 0);
        // K_n = round(3.5) = 4, K_r = 3
        assert_eq!(cfg.local_degree(), 4);
        assert_eq!(cfg.random_degree(), 3);
        assert!((cfg.effective_omega() - 3.0 / 7.0).abs() < 1e-12);
    }

    #[test]
    fn graph_text_export_format() {
        let cfg = TopologyConfig::new(4, 1, 0.0, 5);
        let g = build_topology(&cfg).unwrap();
        let mut buf = Vec::new();
        write_graph_text(&g, &cfg, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "N=4 K=1 omega=0 seed=5");
        assert_eq!(lines.next().unwrap(), "0: 3");
        assert_eq!(lines.next().unwrap(), "1: 0");
    }
}
