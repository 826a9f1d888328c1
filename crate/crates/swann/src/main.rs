//! Command-line front end: load curves, topology sweeps, theory scans,
//! cycle-coefficient estimation, and image-driven runs, all emitting
//! plot-ready CSV with the full configuration echoed in comment lines.

use clap::{Parser, ValueEnum};
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use swann::error::Result;
use swann::harness::{
    self, network_size, patch_from_budget, run_experiment, run_experiment_with_patterns,
    run_image_experiment, run_theory, sweep_image, sweep_topology, AkSource, ExperimentConfig,
    TheoryRunConfig,
};
use swann::patterns::{
    load_patterns, read_pgm, EdgeFilter, ImageIngestConfig, OriginMode, ThresholdMode,
};
use swann::theory::linear_grid;
use swann::topology::{
    build_topology, estimate_cycle_probabilities, symmetrize, write_graph_text, TopologyConfig,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Stability protocol: start exactly at a stored pattern (m0 = 1).
    Stability,
    /// Retrieval protocol: start inside the basin (m0 = 0.1 by default).
    Retrieval,
    /// Mean-field fixed-point scan over the load.
    Theory,
    /// Topology sweep over gamma (and omega) lists.
    Sweep,
    /// Estimate cycle-probability coefficients for a topology.
    Ak,
    /// Retrieval sweep with image-derived patterns.
    Image,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Preset {
    Fc,
    Red,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FilterArg {
    Gradient3,
    Twopoint,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ThresholdArg {
    Median,
    Fixed,
}

#[derive(Parser, Debug)]
#[command(
    name = "swann",
    version,
    about = "Hebbian attractor networks on small-world topologies: simulation and mean-field theory"
)]
struct Args {
    #[arg(long, value_enum)]
    mode: Mode,

    /// Target synapse count N*K.
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,

    /// Connectivity ratio gamma = K/N; comma-separated list for sweeps.
    #[arg(long, value_delimiter = ',', default_value = "1.0")]
    gamma: Vec<f64>,

    /// Randomness ratio omega = K_r/K; comma-separated list for sweeps.
    #[arg(long, value_delimiter = ',', default_value = "1.0")]
    omega: Vec<f64>,

    /// Initial overlap; defaults per mode (stability 1.0, retrieval 0.1, image 0.3).
    #[arg(long)]
    m0: Option<f64>,

    /// Truncation time of the retrieval dynamics.
    #[arg(long, default_value_t = 20)]
    tf: usize,

    /// Patterns to learn (default: ~0.85 K).
    #[arg(long)]
    pmax: Option<usize>,

    /// Averaging window along the pattern axis.
    #[arg(long = "delta-p", default_value_t = 25)]
    delta_p: usize,

    /// Evaluation stride in learning steps (default: ~K/150).
    #[arg(long = "eval-every")]
    eval_every: Option<usize>,

    #[arg(long, default_value_t = 3)]
    trials: usize,

    #[arg(long, default_value_t = 42)]
    seed: u64,

    /// Environmental noise amplitude T (0 = deterministic).
    #[arg(long, default_value_t = 0.0)]
    temperature: f64,

    /// Analytic coefficient preset for theory mode.
    #[arg(long, value_enum)]
    preset: Option<Preset>,

    /// Truncation order of the cycle-coefficient estimate.
    #[arg(long, default_value_t = 20)]
    kmax: usize,

    /// Monte Carlo walks for the cycle-coefficient estimate.
    #[arg(long, default_value_t = 200_000)]
    walks: usize,

    /// Theory load grid: low edge.
    #[arg(long = "alpha-lo", default_value_t = 0.005)]
    alpha_lo: f64,

    /// Theory load grid: high edge.
    #[arg(long = "alpha-hi", default_value_t = 1.0)]
    alpha_hi: f64,

    /// Theory load grid: step.
    #[arg(long = "alpha-step", default_value_t = 0.005)]
    alpha_step: f64,

    /// Pattern file (text format) to use instead of random patterns.
    #[arg(long)]
    patterns: Option<PathBuf>,

    /// 8-bit grayscale PGM (P5 or P2) for image mode.
    #[arg(long)]
    image: Option<PathBuf>,

    /// Patch side for image mode (default: derived from budget and gamma).
    #[arg(long)]
    patch: Option<usize>,

    /// Edge filter for image mode.
    #[arg(long, value_enum, default_value_t = FilterArg::Gradient3)]
    filter: FilterArg,

    /// Binarization rule for image mode.
    #[arg(long, value_enum, default_value_t = ThresholdArg::Median)]
    threshold: ThresholdArg,

    /// Level for the fixed threshold.
    #[arg(long = "threshold-value", default_value_t = 16.0)]
    threshold_value: f64,

    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Also write the most-recent-pattern probe curve here.
    #[arg(long = "out-recent")]
    out_recent: Option<PathBuf>,

    /// Dump the generated graph as text (ak mode).
    #[arg(long = "dump-graph")]
    dump_graph: Option<PathBuf>,

    /// Keep learning past the information collapse instead of stopping early.
    #[arg(long = "no-early-stop", default_value_t = false)]
    no_early_stop: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    match dispatch(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("swann: {e}");
            ExitCode::FAILURE
        }
    }
}

fn write_out(path: &Option<PathBuf>, emit: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let file = File::create(p)?;
            let mut out = BufWriter::new(file);
            emit(&mut out)?;
            out.flush()?;
            Ok(())
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            emit(&mut lock)
        }
    }
}

fn experiment_config(args: &Args, gamma: f64, omega: f64, m0: f64) -> ExperimentConfig {
    ExperimentConfig {
        synapse_budget: args.budget,
        gamma,
        omega,
        m0,
        t_f: args.tf,
        p_max: args.pmax,
        delta_p: args.delta_p,
        eval_every: args.eval_every,
        trials: args.trials,
        seed: args.seed,
        temperature: args.temperature,
        early_stop: !args.no_early_stop,
    }
}

fn common_comments(args: &Args, mode: &str, m0: f64) -> Vec<String> {
    vec![
        format!("swann mode={mode}"),
        format!(
            "budget={} m0={m0} tf={} pmax={} delta_p={} eval_every={} trials={} seed={} temperature={}",
            args.budget,
            args.tf,
            args.pmax.map_or("auto".to_string(), |v| v.to_string()),
            args.delta_p,
            args.eval_every.map_or("auto".to_string(), |v| v.to_string()),
            args.trials,
            args.seed,
            args.temperature
        ),
    ]
}

fn ingest_from_args(args: &Args, patch: usize) -> ImageIngestConfig {
    ImageIngestConfig {
        patch_size: patch,
        filter: match args.filter {
            FilterArg::Gradient3 => EdgeFilter::Gradient3x3,
            FilterArg::Twopoint => EdgeFilter::TwoPointHorizontal,
        },
        threshold: match args.threshold {
            ThresholdArg::Median => ThresholdMode::Median,
            ThresholdArg::Fixed => ThresholdMode::Fixed(args.threshold_value),
        },
        origin: OriginMode::Random,
    }
}

fn dispatch(args: &Args) -> Result<()> {
    match args.mode {
        Mode::Stability | Mode::Retrieval => run_curve(args),
        Mode::Sweep => run_sweep(args),
        Mode::Theory => run_theory_mode(args),
        Mode::Ak => run_ak(args),
        Mode::Image => run_image(args),
    }
}

fn run_curve(args: &Args) -> Result<()> {
    let default_m0 = if args.mode == Mode::Stability { 1.0 } else { 0.1 };
    let m0 = args.m0.unwrap_or(default_m0);
    let gamma = args.gamma[0];
    let omega = args.omega[0];
    let cfg = experiment_config(args, gamma, omega, m0);
    let mode_name = if args.mode == Mode::Stability { "stability" } else { "retrieval" };

    let curve = match &args.patterns {
        Some(path) => {
            let set = load_patterns(path)?;
            eprintln!("loaded {} patterns of length {}", set.count(), set.len());
            run_experiment_with_patterns(&cfg, &set)?
        }
        None => run_experiment(&cfg)?,
    };

    let mut comments = common_comments(args, mode_name, m0);
    comments.push(format!("gamma={gamma} omega={omega}"));
    eprintln!(
        "{} N={} K={}: alpha_max={:.4} i_max={:.4} (+-{:.4})",
        mode_name, curve.n, curve.k, curve.alpha_max, curve.i_max, curve.i_max_se
    );
    write_out(&args.out, |w| harness::write_curve_csv(&curve, &comments, w))?;
    if let Some(recent_path) = &args.out_recent {
        let mut recent = curve.clone();
        recent.points = curve.recent_points.clone();
        let mut rc = comments.clone();
        rc.push("probe=most-recent".into());
        write_out(&Some(recent_path.clone()), |w| harness::write_curve_csv(&recent, &rc, w))?;
    }
    Ok(())
}

fn run_sweep(args: &Args) -> Result<()> {
    let m0 = args.m0.unwrap_or(0.1);
    let base = experiment_config(args, args.gamma[0], args.omega[0], m0);
    let table = sweep_topology(&base, &args.gamma, &args.omega)?;
    let mut comments = common_comments(args, "sweep", m0);
    comments.push(format!("gammas={:?} omegas={:?}", args.gamma, args.omega));
    for &omega in &args.omega {
        if let Some(best) = table.gamma_opt(omega) {
            eprintln!(
                "omega={omega}: gamma_opt={} i_max={:.4} (+-{:.4}) at alpha_max={:.4}",
                best.gamma, best.i_max, best.i_se, best.alpha_max
            );
        }
    }
    write_out(&args.out, |w| harness::write_sweep_csv(&table, &comments, w))
}

fn run_theory_mode(args: &Args) -> Result<()> {
    let source = match args.preset {
        Some(Preset::Fc) => AkSource::PresetFc,
        Some(Preset::Red) => AkSource::PresetRed,
        None => AkSource::Measured { gamma: args.gamma[0], omega: args.omega[0] },
    };
    let mut cfg = TheoryRunConfig::new(source, args.seed)?;
    cfg.synapse_budget = args.budget;
    cfg.k_max = args.kmax;
    cfg.walks = args.walks;
    cfg.alpha_grid = linear_grid(args.alpha_lo, args.alpha_hi, args.alpha_step)?;
    let (coeffs, sweep) = run_theory(&cfg)?;
    eprintln!(
        "theory: alpha_c={:.4} alpha_max={:.4} i_max={:.4} (a_0={:.4}, {} coefficients)",
        sweep.alpha_c,
        sweep.alpha_max,
        sweep.i_max,
        coeffs.a[0],
        coeffs.a.len()
    );
    let mut comments = vec![format!("swann mode=theory seed={}", args.seed)];
    match &cfg.source {
        AkSource::PresetFc => comments.push("a_k=preset-fc".into()),
        AkSource::PresetRed => comments.push("a_k=preset-red".into()),
        AkSource::Measured { gamma, omega } => comments.push(format!(
            "a_k=measured gamma={gamma} omega={omega} budget={} kmax={} walks={}",
            cfg.synapse_budget, cfg.k_max, cfg.walks
        )),
    }
    write_out(&args.out, |w| harness::write_theory_csv(&sweep, &comments, w))
}

fn run_ak(args: &Args) -> Result<()> {
    let gamma = args.gamma[0];
    let omega = args.omega[0];
    let (n, k) = network_size(args.budget, gamma)?;
    let topo = TopologyConfig::new(n, k, omega, args.seed);
    let graph = build_topology(&topo)?;
    if let Some(path) = &args.dump_graph {
        let file = File::create(path)?;
        let mut out = BufWriter::new(file);
        write_graph_text(&graph, &topo, &mut out)?;
        out.flush()?;
    }
    let sym = symmetrize(&graph);
    let est = estimate_cycle_probabilities(&sym, k, args.kmax, args.walks, args.seed)?;
    eprintln!(
        "ak: N={n} K={k} omega_eff={:.4} walks={} a_0={:.4}",
        topo.effective_omega(),
        est.walks,
        est.a[0]
    );
    write_out(&args.out, |w| {
        writeln!(w, "# swann mode=ak budget={} gamma={gamma} omega={omega} seed={}", args.budget, args.seed)?;
        writeln!(w, "# n={n} k={k} kmax={} walks={}", est.k_max, est.walks)?;
        writeln!(w, "k,a_k,stderr")?;
        for kk in 0..=est.k_max {
            writeln!(w, "{kk},{:.6},{:.6}", est.a[kk], est.stderr[kk])?;
        }
        Ok(())
    })
}

fn run_image(args: &Args) -> Result<()> {
    let path = args
        .image
        .as_ref()
        .ok_or_else(|| swann::Error::Config("image mode needs --image <path.pgm>".into()))?;
    let img = read_pgm(path)?;
    let m0 = args.m0.unwrap_or(0.3);
    let base = experiment_config(args, args.gamma[0], args.omega[0], m0);
    let mut comments = common_comments(args, "image", m0);
    comments.push(format!(
        "image={} filter={:?} threshold={:?}",
        path.display(),
        args.filter,
        args.threshold
    ));

    if args.gamma.len() > 1 {
        let ingest = ingest_from_args(args, 0); // patch derived per cell
        let table = sweep_image(&base, &args.gamma, &args.omega, &img, &ingest)?;
        if let Some(best) = table.gamma_opt(args.omega[0]) {
            eprintln!(
                "image sweep: gamma_opt={} i_max={:.4} (+-{:.4})",
                best.gamma, best.i_max, best.i_se
            );
        }
        comments.push(format!("gammas={:?} omega={}", args.gamma, args.omega[0]));
        write_out(&args.out, |w| harness::write_sweep_csv(&table, &comments, w))
    } else {
        let patch = match args.patch {
            Some(p) => p,
            None => patch_from_budget(args.budget, args.gamma[0])?,
        };
        let ingest = ingest_from_args(args, patch);
        let curve = run_image_experiment(&base, &img, &ingest)?;
        eprintln!(
            "image N={} K={} patch={patch}: alpha_max={:.4} i_max={:.4}",
            curve.n, curve.k, curve.alpha_max, curve.i_max
        );
        comments.push(format!("gamma={} omega={} patch={patch}", args.gamma[0], args.omega[0]));
        write_out(&args.out, |w| harness::write_curve_csv(&curve, &comments, w))
    }
}
