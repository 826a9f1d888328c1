//! Overlap, Hamming distance, entropies, and the information rate.
//!
//! For a binary non-biased channel the conditional distribution of a neuron
//! state given its pattern bit is fully determined by the overlap `m`, so the
//! mutual information per neuron is `1 - S(m)` bits with `S` the binary
//! entropy of `(1+m)/2`. The information rate per synapse is `i = alpha * MI`.

use crate::error::{Error, Result};

/// Retrieval quality summary at a single load point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RetrievalMetrics {
    /// Signed overlap in [-1, 1].
    pub m: f64,
    /// Hamming distance in [0, 4].
    pub d: f64,
    /// Mutual information in bits per neuron, in [0, 1].
    pub mi: f64,
    /// Load rate P/K.
    pub alpha: f64,
    /// Information rate alpha * MI.
    pub i: f64,
}

impl RetrievalMetrics {
    pub fn from_state(state: &[i8], pattern: &[i8], alpha: f64) -> Result<Self> {
        let m = overlap(state, pattern)?;
        let d = hamming(state, pattern)?;
        let mi = 1.0 - conditional_entropy(m)?;
        Ok(RetrievalMetrics { m, d, mi, alpha, i: alpha * mi })
    }
}

fn check_lengths(a: &[i8], b: &[i8]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::Dimension { expected: b.len(), got: a.len() });
    }
    if a.is_empty() {
        return Err(Error::Dimension { expected: 1, got: 0 });
    }
    Ok(())
}

/// Normalized correlation `(1/N) sum_i pattern_i * state_i`.
pub fn overlap(state: &[i8], pattern: &[i8]) -> Result<f64> {
    check_lengths(state, pattern)?;
    let sum: i64 = state
        .iter()
        .zip(pattern)
        .map(|(&s, &p)| i64::from(s) * i64::from(p))
        .sum();
    Ok(sum as f64 / state.len() as f64)
}

/// Hamming distance `(1/N) sum_i |pattern_i - state_i|^2 = 2(1 - m)`.
///
/// Counted from mismatching sites rather than via `overlap`, but reduced
/// through the same floating expression so the identity with the overlap is
/// exact for every input.
pub fn hamming(state: &[i8], pattern: &[i8]) -> Result<f64> {
    check_lengths(state, pattern)?;
    let mismatches: i64 = state.iter().zip(pattern).filter(|(s, p)| s != p).count() as i64;
    let n = state.len() as i64;
    let sum = n - 2 * mismatches; // equals the overlap sum
    Ok(2.0 * (1.0 - sum as f64 / n as f64))
}

/// Binary conditional entropy `S(m)` in bits, with the `0 log 0 = 0` convention.
pub fn conditional_entropy(m: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&m) {
        return Err(Error::Domain(format!("overlap {m} outside [-1, 1]")));
    }
    let mut s = 0.0;
    for p in [(1.0 + m) / 2.0, (1.0 - m) / 2.0] {
        if p > 0.0 {
            s -= p * p.log2();
        }
    }
    Ok(s)
}

/// Information rate `i = alpha * (1 - S(m))` in bits per synapse.
pub fn info_rate(alpha: f64, m: f64) -> Result<f64> {
    if alpha < 0.0 {
        return Err(Error::Domain(format!("load rate {alpha} negative")));
    }
    Ok(alpha * (1.0 - conditional_entropy(m)?))
}
