//! Zero-temperature mean-field fixed-point equations for the overlap `m`,
//! the susceptibility-like auxiliary `chi`, and the noise multiplier `r`:
//!
//! ```text
//! m   = erf(m / sqrt(r alpha))          erf(x) = 2 Int_0^x phi(z) dz
//! chi = 2 phi(m / sqrt(r alpha)) / sqrt(r alpha)
//! r   = sum_k a_k (k+1) chi^k
//! ```
//!
//! where `phi` is the standard normal density and the `a_k` encode the
//! topology's cycle structure. Two closed-form presets are provided: the
//! fully connected network (`a_k = 1`, `r = 1/(1-chi)^2`) and the random
//! extremely diluted network (`a_0 = 1`, rest zero, `r = 1`).

use crate::error::{Error, Result};
use crate::metrics;
use crate::topology::CycleProbabilities;

/// Tail term above this threshold means the series has not converged at its
/// truncation order.
const TAIL_TOL: f64 = 1e-8;
/// Iterates below this overlap collapse to the trivial solution.
const COLLAPSE: f64 = 1e-6;
/// Retrieval means a converged solution with overlap above this.
const RETRIEVAL_FLOOR: f64 = 1e-3;

/// Gaussian-measure error function `2 Int_0^x e^{-z^2/2}/sqrt(2 pi) dz`,
/// i.e. the standard error function evaluated at `x / sqrt(2)`.
pub fn gauss_erf(x: f64) -> f64 {
    statrs::function::erf::erf(x / std::f64::consts::SQRT_2)
}

/// Standard normal density `phi(z) = e^{-z^2/2} / sqrt(2 pi)`.
pub fn gauss_pdf(z: f64) -> f64 {
    (-z * z / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Fully connected preset: `a_k = 1` for all k up to `k_max`.
pub fn fc_coefficients(k_max: usize) -> CycleProbabilities {
    CycleProbabilities::exact(vec![1.0; k_max + 1])
}

/// Random extremely diluted preset: `a_0 = 1`, all higher coefficients zero.
pub fn red_coefficients() -> CycleProbabilities {
    CycleProbabilities::exact(vec![1.0, 0.0, 0.0])
}

/// Truncated noise-multiplier series `r = sum_k a_k (k+1) chi^k`.
///
/// Fails with a divergence error when the final term has not decayed below
/// `1e-8`, which signals that `chi` is too large for this topology's series.
pub fn r_from_chi(chi: f64, a: &CycleProbabilities) -> Result<f64> {
    if chi < 0.0 {
        return Err(Error::Domain(format!("chi = {chi} negative")));
    }
    let mut sum = 0.0;
    let mut power = 1.0; // chi^k
    let mut last_term = 0.0;
    for (k, &ak) in a.a.iter().enumerate() {
        last_term = ak * (k as f64 + 1.0) * power;
        sum += last_term;
        power *= chi;
    }
    if a.a.len() > 1 && last_term.abs() > TAIL_TOL {
        return Err(Error::Divergence { chi, tail: last_term });
    }
    Ok(sum)
}

/// Solver knobs for the damped fixed-point iteration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_iter: usize,
    pub damping: f64,
    pub m_init: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig { tol: 1e-10, max_iter: 100_000, damping: 0.5, m_init: 1.0 }
    }
}

/// A solved point of the fixed-point system at load `alpha`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixedPointSolution {
    pub m: f64,
    pub chi: f64,
    pub r: f64,
    pub alpha: f64,
    pub converged: bool,
    pub iterations: usize,
}

impl FixedPointSolution {
    pub fn is_retrieval(&self) -> bool {
        self.converged && self.m > RETRIEVAL_FLOOR
    }

    /// Largest residual of the three equations when re-substituted.
    pub fn residual(&self, a: &CycleProbabilities) -> Result<f64> {
        let s = (self.r * self.alpha).sqrt();
        let y = self.m / s;
        let res_m = (self.m - gauss_erf(y)).abs();
        let res_chi = (self.chi - 2.0 * gauss_pdf(y) / s).abs();
        let res_r = (self.r - r_from_chi(self.chi, a)?).abs();
        Ok(res_m.max(res_chi).max(res_r))
    }
}

/// Damped fixed-point iteration on `(m, chi, r)` from `m = m_init`, `r = a_0`.
///
/// An iterate collapsing below 1e-6 in `m` is reported as the trivial
/// solution `m = 0` with `chi` and `r` iterated to self-consistency there.
pub fn solve_fixed_point(
    alpha: f64,
    a: &CycleProbabilities,
    config: &SolverConfig,
) -> Result<FixedPointSolution> {
    if alpha <= 0.0 {
        return Err(Error::Domain(format!("load alpha = {alpha} must be positive")));
    }
    let d = config.damping;
    let mut m = config.m_init;
    let mut chi = 0.0;
    let mut r = a.a[0].max(f64::MIN_POSITIVE);
    for it in 1..=config.max_iter {
        let s = (r * alpha).sqrt();
        let y = m / s;
        let m_new = gauss_erf(y);
        let chi_new = 2.0 * gauss_pdf(y) / s;
        m += d * (m_new - m);
        chi += d * (chi_new - chi);
        r = r_from_chi(chi, a)?;
        if m < COLLAPSE {
            return settle_trivial(alpha, a, config, it);
        }
        let s2 = (r * alpha).sqrt();
        let y2 = m / s2;
        let res = (m - gauss_erf(y2)).abs().max((chi - 2.0 * gauss_pdf(y2) / s2).abs());
        if res < config.tol {
            return Ok(FixedPointSolution { m, chi, r, alpha, converged: true, iterations: it });
        }
    }
    Ok(FixedPointSolution { m, chi, r, alpha, converged: false, iterations: config.max_iter })
}

/// Self-consistent `(chi, r)` at the trivial solution `m = 0`.
fn settle_trivial(
    alpha: f64,
    a: &CycleProbabilities,
    config: &SolverConfig,
    start_iter: usize,
) -> Result<FixedPointSolution> {
    let d = config.damping;
    let mut chi = 0.0;
    let mut r = a.a[0].max(f64::MIN_POSITIVE);
    for it in start_iter..=config.max_iter {
        let s = (r * alpha).sqrt();
        let chi_new = 2.0 * gauss_pdf(0.0) / s;
        chi += d * (chi_new - chi);
        r = r_from_chi(chi, a)?;
        let s2 = (r * alpha).sqrt();
        if (chi - 2.0 * gauss_pdf(0.0) / s2).abs() < config.tol {
            return Ok(FixedPointSolution {
                m: 0.0,
                chi,
                r,
                alpha,
                converged: true,
                iterations: it,
            });
        }
    }
    Ok(FixedPointSolution { m: 0.0, chi, r, alpha, converged: false, iterations: config.max_iter })
}

/// Capacity search result: the largest retrieving load and the overlap there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Capacity {
    pub alpha_c: f64,
    pub m_at_capacity: f64,
}

/// Largest load (bisection to 1e-4 on the bracket `(1e-3, 2]`) that still
/// admits a retrieval solution. Solver failures count as non-retrieval.
pub fn find_capacity(a: &CycleProbabilities, config: &SolverConfig) -> Capacity {
    let retrieves = |alpha: f64| -> Option<f64> {
        match solve_fixed_point(alpha, a, config) {
            Ok(sol) if sol.is_retrieval() => Some(sol.m),
            _ => None,
        }
    };
    let mut lo = 1e-3;
    let mut m_lo = match retrieves(lo) {
        Some(m) => m,
        None => return Capacity { alpha_c: 0.0, m_at_capacity: 0.0 },
    };
    let mut hi = 2.0;
    if let Some(m) = retrieves(hi) {
        return Capacity { alpha_c: hi, m_at_capacity: m };
    }
    while hi - lo > 1e-4 {
        let mid = (lo + hi) / 2.0;
        match retrieves(mid) {
            Some(m) => {
                lo = mid;
                m_lo = m;
            }
            None => hi = mid,
        }
    }
    Capacity { alpha_c: lo, m_at_capacity: m_lo }
}

/// One solved grid point of an information scan.
#[derive(Debug, Clone)]
pub struct TheoryPoint {
    pub alpha: f64,
    pub m: f64,
    pub chi: f64,
    pub r: f64,
    pub mi: f64,
    pub i: f64,
    pub converged: bool,
    /// Solver failure for this grid point, if any; the scan continues.
    pub error: Option<String>,
}

/// Information scan over a load grid.
#[derive(Debug, Clone)]
pub struct TheorySweepResult {
    pub points: Vec<TheoryPoint>,
    pub alpha_c: f64,
    pub alpha_max: f64,
    pub i_max: f64,
}

fn eval_point(alpha: f64, a: &CycleProbabilities, config: &SolverConfig) -> TheoryPoint {
    match solve_fixed_point(alpha, a, config) {
        Ok(sol) => {
            let mi = 1.0 - metrics::conditional_entropy(sol.m).unwrap_or(1.0);
            let i = if sol.converged { alpha * mi } else { 0.0 };
            TheoryPoint {
                alpha,
                m: sol.m,
                chi: sol.chi,
                r: sol.r,
                mi,
                i,
                converged: sol.converged,
                error: None,
            }
        }
        Err(e) => TheoryPoint {
            alpha,
            m: 0.0,
            chi: 0.0,
            r: 0.0,
            mi: 0.0,
            i: 0.0,
            converged: false,
            error: Some(e.to_string()),
        },
    }
}

/// Solve every grid load, compute `i = alpha * MI(m)`, and locate the
/// information maximum; the grid argmax is refined by golden-section search
/// to 1e-4. Ties break toward smaller load.
pub fn scan_info(
    alpha_grid: &[f64],
    a: &CycleProbabilities,
    config: &SolverConfig,
) -> Result<TheorySweepResult> {
    if alpha_grid.is_empty() {
        return Err(Error::Config("empty load grid".into()));
    }
    if alpha_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Config("load grid must be strictly ascending".into()));
    }
    let points: Vec<TheoryPoint> =
        alpha_grid.iter().map(|&alpha| eval_point(alpha, a, config)).collect();

    let mut best = 0usize;
    for (idx, pt) in points.iter().enumerate() {
        if pt.i > points[best].i {
            best = idx;
        }
    }
    let mut alpha_max = points[best].alpha;
    let mut i_max = points[best].i;

    if i_max > 0.0 {
        let lo = if best > 0 { points[best - 1].alpha } else { points[best].alpha };
        let hi = if best + 1 < points.len() { points[best + 1].alpha } else { points[best].alpha };
        let (a_ref, i_ref) = golden_max(lo, hi, 1e-4, |alpha| eval_point(alpha, a, config).i);
        if i_ref > i_max || (i_ref == i_max && a_ref < alpha_max) {
            alpha_max = a_ref;
            i_max = i_ref;
        }
    }

    let capacity = find_capacity(a, config);
    Ok(TheorySweepResult { points, alpha_c: capacity.alpha_c, alpha_max, i_max })
}

/// Golden-section maximization of `f` on `[lo, hi]` to absolute tolerance
/// `tol`; returns the best evaluated `(x, f(x))`.
fn golden_max(lo: f64, hi: f64, tol: f64, f: impl Fn(f64) -> f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut a = lo;
    let mut b = hi;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut best = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    while b - a > tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
        let (cx, cf) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
        if cf > best.1 || (cf == best.1 && cx < best.0) {
            best = (cx, cf);
        }
    }
    best
}

/// Evenly spaced load grid `[lo, hi]` with step `step`.
pub fn linear_grid(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if lo <= 0.0 || hi <= lo || step <= 0.0 {
        return Err(Error::Config(format!("bad grid spec: lo={lo} hi={hi} step={step}")));
    }
    let mut grid = Vec::new();
    let mut x = lo;
    while x <= hi + 1e-12 {
        grid.push(x);
        x += step;
    }
    Ok(grid)
}
