//! Experiment orchestration: load curves under sequential Hebbian learning,
//! topology sweeps, theory runs, and reproducible CSV emission.
//!
//! A curve run learns patterns one at a time; at each evaluation stride it
//! probes a stored pattern (a uniformly random one for the reported curve and
//! the most recent one for comparison), initializes the state at overlap
//! `m0`, runs the dynamics for at most `t_f` steps, and records
//! `(alpha, m, i)`. Points are averaged over windows of `delta_p` learning
//! steps, and the information maximum is read off the window-averaged curve.

use crate::error::{Error, Result};
use crate::metrics;
use crate::network::{
    init_state_from_pattern, learn_pattern, run, DynamicsConfig, SynapticWeights,
};
use crate::patterns::{
    generate_random_patterns, patterns_from_image, GrayImage, ImageIngestConfig, PatternSet,
};
use crate::rng::{self, TAG_CELL, TAG_INIT, TAG_NOISE, TAG_PROBE, TAG_TRIAL};
use crate::theory::{scan_info, SolverConfig, TheorySweepResult};
use crate::topology::{
    build_topology, estimate_cycle_probabilities, symmetrize, CycleProbabilities, TopologyConfig,
};
use rand::Rng;
use rayon::prelude::*;
use std::io::Write;

/// Parameters of a simulation experiment at one `(gamma, omega)` point.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    /// Target synapse count `N*K`.
    pub synapse_budget: u64,
    pub gamma: f64,
    pub omega: f64,
    /// Initial overlap: 1.0 probes stability, 0.1 probes the basin.
    pub m0: f64,
    pub t_f: usize,
    /// Patterns to learn; `None` picks `max(delta_p, ceil(0.85 K))`.
    pub p_max: Option<usize>,
    /// Averaging window along the pattern axis.
    pub delta_p: usize,
    /// Evaluation stride in learning steps; `None` picks `max(1, K/150)`.
    pub eval_every: Option<usize>,
    pub trials: usize,
    pub seed: u64,
    pub temperature: f64,
    /// Stop a trial once the windowed information has clearly collapsed.
    pub early_stop: bool,
}

impl ExperimentConfig {
    pub fn new(synapse_budget: u64, gamma: f64, omega: f64, m0: f64, seed: u64) -> Self {
        ExperimentConfig {
            synapse_budget,
            gamma,
            omega,
            m0,
            t_f: 20,
            p_max: None,
            delta_p: 25,
            eval_every: None,
            trials: 3,
            seed,
            temperature: 0.0,
            early_stop: true,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.synapse_budget == 0 {
            return Err(Error::Config("synapse budget must be positive".into()));
        }
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(Error::Config(format!("gamma={} outside (0, 1]", self.gamma)));
        }
        if !(0.0..=1.0).contains(&self.omega) {
            return Err(Error::Config(format!("omega={} outside [0, 1]", self.omega)));
        }
        if self.t_f == 0 || self.delta_p == 0 || self.trials == 0 {
            return Err(Error::Config("t_f, delta_p, and trials must be positive".into()));
        }
        Ok(())
    }
}

/// Derive `(N, K)` from a synapse budget and connectivity ratio:
/// `K = round(sqrt(budget * gamma))`, `N = round(K / gamma)`, keeping
/// `1 <= K < N`.
pub fn network_size(synapse_budget: u64, gamma: f64) -> Result<(usize, usize)> {
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::Config(format!("gamma={gamma} outside (0, 1]")));
    }
    if synapse_budget == 0 {
        return Err(Error::Config("synapse budget must be positive".into()));
    }
    let mut k = (synapse_budget as f64 * gamma).sqrt().round().max(1.0) as usize;
    let n = (k as f64 / gamma).round() as usize;
    if k >= n {
        k = n.saturating_sub(1);
    }
    if k == 0 || n < 2 {
        return Err(Error::Config(format!(
            "budget {synapse_budget} too small for gamma={gamma} (derived N={n}, K={k})"
        )));
    }
    Ok((n, k))
}

/// One window-averaged point of a load curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub alpha: f64,
    pub m_mean: f64,
    pub m_se: f64,
    pub i_mean: f64,
    pub i_se: f64,
}

/// Trial-averaged load curve with the extracted information maximum.
#[derive(Debug, Clone)]
pub struct InfoCurve {
    pub n: usize,
    pub k: usize,
    /// Random-probe curve (the reported one).
    pub points: Vec<CurvePoint>,
    /// Most-recent-pattern probe, for comparison.
    pub recent_points: Vec<CurvePoint>,
    pub alpha_max: f64,
    pub i_max: f64,
    pub i_max_se: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, Copy)]
struct WindowPoint {
    alpha: f64,
    m: f64,
    i: f64,
}

#[derive(Default)]
struct WindowAcc {
    alphas: Vec<f64>,
    ms: Vec<f64>,
    is: Vec<f64>,
}

impl WindowAcc {
    fn push(&mut self, alpha: f64, m: f64, i: f64) {
        self.alphas.push(alpha);
        self.ms.push(m);
        self.is.push(i);
    }

    fn flush(&mut self) -> Option<WindowPoint> {
        if self.alphas.is_empty() {
            return None;
        }
        let n = self.alphas.len() as f64;
        let pt = WindowPoint {
            alpha: self.alphas.iter().sum::<f64>() / n,
            m: self.ms.iter().sum::<f64>() / n,
            i: self.is.iter().sum::<f64>() / n,
        };
        self.alphas.clear();
        self.ms.clear();
        self.is.clear();
        Some(pt)
    }
}

struct TrialResult {
    windows: Vec<WindowPoint>,
    recent_windows: Vec<WindowPoint>,
    alpha_max: f64,
    i_max: f64,
}

fn default_p_cap(k: usize, delta_p: usize) -> usize {
    delta_p.max((0.85 * k as f64).ceil() as usize)
}

fn run_single_trial(
    cfg: &ExperimentConfig,
    n: usize,
    k: usize,
    trial: usize,
    make_patterns: &(dyn Fn(u64, usize, usize) -> Result<PatternSet> + Sync),
) -> Result<TrialResult> {
    let trial_seed = rng::derive_seed(cfg.seed, TAG_TRIAL + trial as u64);
    let graph = build_topology(&TopologyConfig::new(n, k, cfg.omega, trial_seed))?;
    let p_cap = cfg.p_max.unwrap_or_else(|| default_p_cap(k, cfg.delta_p));
    let patterns = make_patterns(trial_seed, p_cap, n)?;
    let p_cap = p_cap.min(patterns.count());
    let eval_every = cfg
        .eval_every
        .unwrap_or_else(|| ((k as f64 / 150.0).round() as usize).max(1));
    let dynamics = DynamicsConfig {
        temperature: cfg.temperature,
        t_f: cfg.t_f,
        detect_fixed_point: true,
        noise_seed: rng::derive_seed(trial_seed, TAG_NOISE),
    };
    let mut weights = SynapticWeights::zeroed(&graph, k);
    let mut probe_rng = rng::stream(rng::derive_seed(trial_seed, TAG_PROBE), 0);
    let init_seed = rng::derive_seed(trial_seed, TAG_INIT);

    let mut windows = Vec::new();
    let mut recent_windows = Vec::new();
    let mut acc = WindowAcc::default();
    let mut acc_recent = WindowAcc::default();
    let mut best_i = 0.0f64;
    let mut best_alpha = 0.0f64;

    for mu in 1..=p_cap {
        learn_pattern(&mut weights, &graph, patterns.pattern(mu - 1))?;
        if mu % eval_every == 0 || mu == p_cap {
            let alpha = mu as f64 / k as f64;
            let random_probe = probe_rng.gen_range(0..mu);
            for (kind, probe) in [(0usize, random_probe), (1, mu - 1)] {
                let pat = patterns.pattern(probe);
                let mut init_rng = rng::stream(init_seed, (mu * 2 + kind) as u64);
                let state = init_state_from_pattern(pat, cfg.m0, &mut init_rng)?;
                let record = run(state, &weights, &graph, &dynamics, pat)?;
                let m = record.final_overlap();
                let i = metrics::info_rate(alpha, m)?;
                if kind == 0 {
                    acc.push(alpha, m, i);
                } else {
                    acc_recent.push(alpha, m, i);
                }
            }
        }
        if mu % cfg.delta_p == 0 || mu == p_cap {
            if let Some(pt) = acc_recent.flush() {
                recent_windows.push(pt);
            }
            if let Some(pt) = acc.flush() {
                if pt.i > best_i {
                    best_i = pt.i;
                    best_alpha = pt.alpha;
                }
                let collapsed = cfg.early_stop
                    && best_i > 0.0
                    && pt.i < 0.3 * best_i
                    && pt.alpha > best_alpha + 3.0 * cfg.delta_p as f64 / k as f64;
                windows.push(pt);
                if collapsed {
                    break;
                }
            }
        }
    }

    // information maximum over window means, ties toward smaller load
    let mut alpha_max = 0.0;
    let mut i_max = 0.0;
    for pt in &windows {
        if pt.i > i_max {
            i_max = pt.i;
            alpha_max = pt.alpha;
        }
    }
    Ok(TrialResult { windows, recent_windows, alpha_max, i_max })
}

fn mean_and_se(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (0.0, 0.0);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn combine_windows(per_trial: &[&[WindowPoint]]) -> Vec<CurvePoint> {
    let max_len = per_trial.iter().map(|w| w.len()).max().unwrap_or(0);
    let mut out = Vec::with_capacity(max_len);
    for w in 0..max_len {
        let ms: Vec<f64> = per_trial.iter().filter_map(|t| t.get(w)).map(|p| p.m).collect();
        let is: Vec<f64> = per_trial.iter().filter_map(|t| t.get(w)).map(|p| p.i).collect();
        let alphas: Vec<f64> =
            per_trial.iter().filter_map(|t| t.get(w)).map(|p| p.alpha).collect();
        let (m_mean, m_se) = mean_and_se(&ms);
        let (i_mean, i_se) = mean_and_se(&is);
        let (alpha, _) = mean_and_se(&alphas);
        out.push(CurvePoint { alpha, m_mean, m_se, i_mean, i_se });
    }
    out
}

fn run_trials(
    cfg: &ExperimentConfig,
    n: usize,
    k: usize,
    make_patterns: &(dyn Fn(u64, usize, usize) -> Result<PatternSet> + Sync),
) -> Result<InfoCurve> {
    cfg.validate()?;
    let results: Vec<Result<TrialResult>> = (0..cfg.trials)
        .into_par_iter()
        .map(|trial| run_single_trial(cfg, n, k, trial, make_patterns))
        .collect();
    let mut trials = Vec::with_capacity(cfg.trials);
    for r in results {
        trials.push(r?);
    }
    let window_refs: Vec<&[WindowPoint]> = trials.iter().map(|t| t.windows.as_slice()).collect();
    let recent_refs: Vec<&[WindowPoint]> =
        trials.iter().map(|t| t.recent_windows.as_slice()).collect();
    let i_maxes: Vec<f64> = trials.iter().map(|t| t.i_max).collect();
    let alpha_maxes: Vec<f64> = trials.iter().map(|t| t.alpha_max).collect();
    let (i_max, i_max_se) = mean_and_se(&i_maxes);
    let (alpha_max, _) = mean_and_se(&alpha_maxes);
    Ok(InfoCurve {
        n,
        k,
        points: combine_windows(&window_refs),
        recent_points: combine_windows(&recent_refs),
        alpha_max,
        i_max,
        i_max_se,
        trials: cfg.trials,
    })
}

/// Run the full learning/retrieval protocol with random patterns.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<InfoCurve> {
    let (n, k) = network_size(cfg.synapse_budget, cfg.gamma)?;
    run_trials(cfg, n, k, &|seed, p, n| generate_random_patterns(p, n, seed))
}

/// Run the protocol on a fixed pattern set (for example one loaded from a
/// file). The network size comes from the patterns: `N` is the pattern
/// length and `K = round(gamma N)`. Trials still differ through their graph
/// and initial-state seeds.
pub fn run_experiment_with_patterns(cfg: &ExperimentConfig, set: &PatternSet) -> Result<InfoCurve> {
    let n = set.len();
    if n < 2 {
        return Err(Error::Config("patterns too short".into()));
    }
    let k = ((cfg.gamma * n as f64).round() as usize).clamp(1, n - 1);
    let mut cfg = cfg.clone();
    cfg.p_max = Some(cfg.p_max.unwrap_or(set.count()).min(set.count()));
    run_trials(&cfg, n, k, &|_seed, p, _n| {
        if p > set.count() {
            return Err(Error::Config(format!(
                "requested {p} patterns but the set holds {}",
                set.count()
            )));
        }
        Ok(set.clone())
    })
}

/// Image-mode experiment: `N = patch^2`, `K = round(gamma N)`, patches drawn
/// per trial from the image.
pub fn run_image_experiment(
    cfg: &ExperimentConfig,
    img: &GrayImage,
    ingest: &ImageIngestConfig,
) -> Result<InfoCurve> {
    let n = ingest.patch_size * ingest.patch_size;
    if n < 4 {
        return Err(Error::Config("patch too small".into()));
    }
    let k = ((cfg.gamma * n as f64).round() as usize).clamp(1, n - 1);
    run_trials(cfg, n, k, &|seed, p, _n| patterns_from_image(img, ingest, p, seed))
}

/// Patch side for image mode when only a budget is given: the square patch
/// whose pixel count is closest to the `N` derived from `(budget, gamma)`.
pub fn patch_from_budget(synapse_budget: u64, gamma: f64) -> Result<usize> {
    let (n, _) = network_size(synapse_budget, gamma)?;
    Ok(((n as f64).sqrt().round() as usize).max(2))
}

/// One cell of a topology sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub omega: f64,
    pub gamma: f64,
    pub n: usize,
    pub k: usize,
    pub alpha_max: f64,
    pub i_max: f64,
    pub i_se: f64,
    pub error: Option<String>,
}

/// Sweep results, ordered by `(omega, gamma)` ascending.
#[derive(Debug, Clone)]
pub struct SweepTable {
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    /// Connectivity ratio maximizing `i_max` at the given randomness.
    pub fn gamma_opt(&self, omega: f64) -> Option<&SweepRow> {
        self.rows
            .iter()
            .filter(|r| r.omega == omega && r.error.is_none())
            .max_by(|a, b| a.i_max.total_cmp(&b.i_max))
    }

    pub fn row(&self, omega: f64, gamma: f64) -> Option<&SweepRow> {
        self.rows.iter().find(|r| r.omega == omega && r.gamma == gamma)
    }
}

/// Run `run_experiment` for every `(omega, gamma)` cell. Cells execute
/// concurrently, each under a seed derived from its index in the sorted
/// grid, so the table does not depend on scheduling.
pub fn sweep_topology(
    base: &ExperimentConfig,
    gammas: &[f64],
    omegas: &[f64],
) -> Result<SweepTable> {
    sweep_with(base, gammas, omegas, |cfg| {
        let curve = run_experiment(cfg)?;
        Ok((curve.n, curve.k, curve))
    })
}

/// Image-mode sweep: the patch (and so `N`) is re-derived per `gamma` from
/// the budget, and patches are re-extracted at that size.
pub fn sweep_image(
    base: &ExperimentConfig,
    gammas: &[f64],
    omegas: &[f64],
    img: &GrayImage,
    ingest_proto: &ImageIngestConfig,
) -> Result<SweepTable> {
    sweep_with(base, gammas, omegas, |cfg| {
        let patch = patch_from_budget(cfg.synapse_budget, cfg.gamma)?;
        if img.width < patch || img.height < patch {
            return Err(Error::Ingest(format!(
                "image {}x{} smaller than derived patch {patch}",
                img.width, img.height
            )));
        }
        let mut ingest = *ingest_proto;
        ingest.patch_size = patch;
        let curve = run_image_experiment(cfg, img, &ingest)?;
        Ok((curve.n, curve.k, curve))
    })
}

fn sweep_with(
    base: &ExperimentConfig,
    gammas: &[f64],
    omegas: &[f64],
    cell: impl Fn(&ExperimentConfig) -> Result<(usize, usize, InfoCurve)> + Sync,
) -> Result<SweepTable> {
    if gammas.is_empty() || omegas.is_empty() {
        return Err(Error::Config("gamma and omega lists must be non-empty".into()));
    }
    let mut omegas = omegas.to_vec();
    omegas.sort_by(|a, b| a.total_cmp(b));
    omegas.dedup();
    let mut gammas = gammas.to_vec();
    gammas.sort_by(|a, b| a.total_cmp(b));
    gammas.dedup();

    let cells: Vec<(usize, f64, f64)> = omegas
        .iter()
        .enumerate()
        .flat_map(|(oi, &omega)| {
            gammas
                .iter()
                .enumerate()
                .map(move |(gi, &gamma)| (oi * 10_000 + gi, omega, gamma))
        })
        .collect();

    let rows: Vec<SweepRow> = cells
        .par_iter()
        .map(|&(idx, omega, gamma)| {
            let mut cfg = base.clone();
            cfg.omega = omega;
            cfg.gamma = gamma;
            cfg.seed = rng::derive_seed(base.seed, TAG_CELL + idx as u64);
            match cell(&cfg) {
                Ok((n, k, curve)) => SweepRow {
                    omega,
                    gamma,
                    n,
                    k,
                    alpha_max: curve.alpha_max,
                    i_max: curve.i_max,
                    i_se: curve.i_max_se,
                    error: None,
                },
                Err(e) => SweepRow {
                    omega,
                    gamma,
                    n: 0,
                    k: 0,
                    alpha_max: f64::NAN,
                    i_max: f64::NAN,
                    i_se: f64::NAN,
                    error: Some(e.to_string()),
                },
            }
        })
        .collect();

    Ok(SweepTable { rows })
}

/// Source of cycle coefficients for a theory run.
#[derive(Debug, Clone, PartialEq)]
pub enum AkSource {
    PresetFc,
    PresetRed,
    /// Estimate from a generated `(gamma, omega)` graph: build directed,
    /// symmetrize, walk with the nominal `K`.
    Measured { gamma: f64, omega: f64 },
}

/// Theory-mode parameters.
#[derive(Debug, Clone)]
pub struct TheoryRunConfig {
    pub source: AkSource,
    pub synapse_budget: u64,
    pub k_max: usize,
    pub walks: usize,
    pub seed: u64,
    pub alpha_grid: Vec<f64>,
    pub solver: SolverConfig,
}

impl TheoryRunConfig {
    pub fn new(source: AkSource, seed: u64) -> Result<Self> {
        Ok(TheoryRunConfig {
            source,
            synapse_budget: 4_000_000,
            k_max: 20,
            walks: 200_000,
            seed,
            alpha_grid: crate::theory::linear_grid(0.005, 1.0, 0.005)?,
            solver: SolverConfig::default(),
        })
    }
}

/// Assemble the cycle coefficients for a theory run.
pub fn theory_coefficients(cfg: &TheoryRunConfig) -> Result<CycleProbabilities> {
    match &cfg.source {
        AkSource::PresetFc => Ok(crate::theory::fc_coefficients(600)),
        AkSource::PresetRed => Ok(crate::theory::red_coefficients()),
        AkSource::Measured { gamma, omega } => {
            let (n, k) = network_size(cfg.synapse_budget, *gamma)?;
            let graph =
                symmetrize(&build_topology(&TopologyConfig::new(n, k, *omega, cfg.seed))?);
            estimate_cycle_probabilities(&graph, k, cfg.k_max, cfg.walks, cfg.seed)
        }
    }
}

/// Solve the information scan for the configured coefficient source.
pub fn run_theory(cfg: &TheoryRunConfig) -> Result<(CycleProbabilities, TheorySweepResult)> {
    let coeffs = theory_coefficients(cfg)?;
    let sweep = scan_info(&cfg.alpha_grid, &coeffs, &cfg.solver)?;
    Ok((coeffs, sweep))
}

fn fmt6(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v:.6}")
    }
}

/// Write a load curve as CSV: `#` comment lines, header, then one row per
/// window point. Output depends only on the data, so reruns are
/// byte-identical.
pub fn write_curve_csv(curve: &InfoCurve, comments: &[String], out: &mut impl Write) -> Result<()> {
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    writeln!(out, "# n={} k={} trials={}", curve.n, curve.k, curve.trials)?;
    writeln!(
        out,
        "# alpha_max={} i_max={} i_max_se={}",
        fmt6(curve.alpha_max),
        fmt6(curve.i_max),
        fmt6(curve.i_max_se)
    )?;
    writeln!(out, "alpha,m_mean,m_se,i_mean,i_se")?;
    for p in &curve.points {
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt6(p.alpha),
            fmt6(p.m_mean),
            fmt6(p.m_se),
            fmt6(p.i_mean),
            fmt6(p.i_se)
        )?;
    }
    Ok(())
}

/// Write a sweep table as CSV, rows sorted by `(omega, gamma)`.
pub fn write_sweep_csv(table: &SweepTable, comments: &[String], out: &mut impl Write) -> Result<()> {
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    for row in &table.rows {
        if let Some(err) = &row.error {
            writeln!(out, "# cell omega={} gamma={} failed: {err}", row.omega, row.gamma)?;
        }
    }
    writeln!(out, "omega,gamma,alpha_max,i_max,i_se")?;
    for row in &table.rows {
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt6(row.omega),
            fmt6(row.gamma),
            fmt6(row.alpha_max),
            fmt6(row.i_max),
            fmt6(row.i_se)
        )?;
    }
    Ok(())
}

/// Write a theory scan as CSV: `alpha,m,chi,r,MI,i,converged`.
pub fn write_theory_csv(
    sweep: &TheorySweepResult,
    comments: &[String],
    out: &mut impl Write,
) -> Result<()> {
    for c in comments {
        writeln!(out, "# {c}")?;
    }
    writeln!(
        out,
        "# alpha_c={} alpha_max={} i_max={}",
        fmt6(sweep.alpha_c),
        fmt6(sweep.alpha_max),
        fmt6(sweep.i_max)
    )?;
    for p in &sweep.points {
        if let Some(err) = &p.error {
            writeln!(out, "# alpha={} failed: {err}", fmt6(p.alpha))?;
        }
    }
    writeln!(out, "alpha,m,chi,r,MI,i,converged")?;
    for p in &sweep.points {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            fmt6(p.alpha),
            fmt6(p.m),
            fmt6(p.chi),
            fmt6(p.r),
            fmt6(p.mi),
            fmt6(p.i),
            p.converged
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn network_size_respects_the_budget_within_5_percent() {
        for budget in [1_000_000u64, 4_000_000] {
            for gamma in [1.0, 0.5, 0.1, 0.03, 0.01, 0.003, 0.001, 0.0001] {
                let (n, k) = network_size(budget, gamma).unwrap();
                if k < 8 {
                    continue; // grid too coarse to honor a tight budget
                }
                let actual = (n * k) as f64;
                let rel = (actual - budget as f64).abs() / budget as f64;
                assert!(rel <= 0.05, "budget {budget} gamma {gamma}: N={n} K={k} rel={rel}");
                assert!(n > k && k >= 1);
            }
        }
    }

    #[test]
    fn fully_connected_sizing_clamps_k_below_n() {
        let (n, k) = network_size(1_000_000, 1.0).unwrap();
        assert_eq!(n, 1000);
        assert_eq!(k, 999);
    }

    #[test]
    fn single_pattern_curve_has_the_trivial_point() {
        let mut cfg = ExperimentConfig::new(10_000, 1.0, 0.0, 1.0, 5);
        cfg.p_max = Some(1);
        cfg.trials = 1;
        cfg.eval_every = Some(1);
        let curve = run_experiment(&cfg).unwrap();
        assert_eq!(curve.points.len(), 1);
        let p = &curve.points[0];
        assert_eq!(p.m_mean, 1.0);
        let alpha = 1.0 / curve.k as f64;
        assert!((p.alpha - alpha).abs() < 1e-12);
        assert!((p.i_mean - alpha).abs() < 1e-12, "i = MI * alpha = alpha at m=1");
        assert_eq!(curve.i_max, p.i_mean);
    }

    #[test]
    fn curves_are_deterministic_and_csv_is_byte_identical() {
        let mut cfg = ExperimentConfig::new(40_000, 0.05, 0.2, 0.1, 11);
        cfg.trials = 2;
        cfg.p_max = Some(60);
        let c1 = run_experiment(&cfg).unwrap();
        let c2 = run_experiment(&cfg).unwrap();
        let mut b1 = Vec::new();
        let mut b2 = Vec::new();
        write_curve_csv(&c1, &[String::from("det check")], &mut b1).unwrap();
        write_curve_csv(&c2, &[String::from("det check")], &mut b2).unwrap();
        assert_eq!(b1, b2);
        assert!(!c1.points.is_empty());
    }

    #[test]
    fn sweep_rows_are_sorted_and_complete() {
        let mut cfg = ExperimentConfig::new(20_000, 0.1, 0.1, 1.0, 3);
        cfg.trials = 1;
        cfg.p_max = Some(30);
        let table = sweep_topology(&cfg, &[0.2, 0.05], &[0.3, 0.0, 1.0]).unwrap();
        assert_eq!(table.rows.len(), 6);
        let keys: Vec<(f64, f64)> = table.rows.iter().map(|r| (r.omega, r.gamma)).collect();
        let mut sorted = keys.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert_eq!(keys, sorted);
        assert!(table.rows.iter().all(|r| r.error.is_none()));
        assert!(table.gamma_opt(0.3).is_some());
    }

    #[test]
    fn fixed_pattern_sets_drive_the_same_protocol() {
        let set = generate_random_patterns(20, 400, 9).unwrap();
        let mut cfg = ExperimentConfig::new(0, 0.1, 0.0, 1.0, 2);
        cfg.synapse_budget = 1; // ignored for fixed sets
        cfg.trials = 1;
        let curve = run_experiment_with_patterns(&cfg, &set).unwrap();
        assert_eq!(curve.n, 400);
        assert_eq!(curve.k, 40);
        assert!(!curve.points.is_empty());
    }

    #[test]
    fn empty_curve_emits_header_and_comments_only() {
        let curve = InfoCurve {
            n: 10,
            k: 2,
            points: vec![],
            recent_points: vec![],
            alpha_max: 0.0,
            i_max: 0.0,
            i_max_se: 0.0,
            trials: 1,
        };
        let mut buf = Vec::new();
        write_curve_csv(&curve, &[String::from("empty")], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines[..3].iter().all(|l| l.starts_with('#')));
        assert_eq!(lines[3], "alpha,m_mean,m_se,i_mean,i_se");
        assert_eq!(lines.len(), 4);
    }

    #[test]
    fn bad_configs_are_rejected() {
        assert!(network_size(100, 2.0).is_err());
        assert!(network_size(0, 0.5).is_err());
        let mut cfg = ExperimentConfig::new(10_000, 0.5, 0.0, 1.0, 1);
        cfg.trials = 0;
        assert!(run_experiment(&cfg).is_err());
        let cfg = ExperimentConfig::new(10_000, 1.4, 0.0, 1.0, 1);
        assert!(run_experiment(&cfg).is_err());
    }
}
