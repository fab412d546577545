//! Distances between two learnt graphical models, computed from their
//! per-iteration `ln u` traces.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::Matrix;
use crate::posterior::pairs;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DistanceError {
    #[error("trace is empty")]
    EmptyTrace,
    #[error("post-burn-in lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("model uncertainty is zero; delta is undefined")]
    ZeroUncertainty,
    #[error("divide scaling needs a positive scale, got {0}")]
    NonpositiveScale(f64),
    #[error("burn-in {burnin} leaves no samples in a trace of length {len}")]
    EmptyPostBurnin { len: usize, burnin: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
}

/// How `ln u` is mapped onto the scaled value `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ScaleMode {
    /// `exp(ln u / s)`; requires `s > 0`.
    Divide,
    /// `exp(ln u - s)`, always in `(0, 1]`.
    Shift,
    /// `Divide` when `s > 0`, otherwise `Shift`.
    #[default]
    Auto,
}

impl ScaleMode {
    pub fn resolve(self, s: f64) -> Self {
        match self {
            Self::Auto if s > 0.0 => Self::Divide,
            Self::Auto => Self::Shift,
            m => m,
        }
    }
}

/// Handling of unequal post-burn-in lengths.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Alignment {
    #[default]
    Strict,
    TruncateMin,
}

/// `s = max_t ln u^(t)` across both traces.
pub fn global_scale(a: &[f64], b: &[f64]) -> Result<f64, DistanceError> {
    if a.is_empty() || b.is_empty() {
        return Err(DistanceError::EmptyTrace);
    }
    Ok(a.iter().chain(b).copied().fold(f64::NEG_INFINITY, f64::max))
}

pub fn scaled(log_u: &[f64], s: f64, mode: ScaleMode) -> Result<Vec<f64>, DistanceError> {
    match mode.resolve(s) {
        ScaleMode::Divide => {
            if !(s > 0.0) {
                return Err(DistanceError::NonpositiveScale(s));
            }
            Ok(log_u.iter().map(|&l| (l / s).exp()).collect())
        }
        _ => Ok(log_u.iter().map(|&l| (l - s).exp()).collect()),
    }
}

fn post_burnin(log_u: &[f64], burnin: usize) -> Result<&[f64], DistanceError> {
    if burnin + 1 >= log_u.len() {
        return Err(DistanceError::EmptyPostBurnin { len: log_u.len(), burnin });
    }
    Ok(&log_u[burnin + 1..])
}

/// Post-burn-in windows `t > burnin` of both traces, aligned.
pub fn aligned_windows<'a>(
    a: &'a [f64],
    burnin_a: usize,
    b: &'a [f64],
    burnin_b: usize,
    alignment: Alignment,
) -> Result<(&'a [f64], &'a [f64]), DistanceError> {
    let (pa, pb) = (post_burnin(a, burnin_a)?, post_burnin(b, burnin_b)?);
    match alignment {
        Alignment::Strict if pa.len() != pb.len() => {
            Err(DistanceError::LengthMismatch { left: pa.len(), right: pb.len() })
        }
        Alignment::Strict => Ok((pa, pb)),
        Alignment::TruncateMin => {
            let n = pa.len().min(pb.len());
            Ok((&pa[..n], &pb[..n]))
        }
    }
}

/// Discretized Hellinger distance over aligned scaled values.
pub fn hellinger(u1: &[f64], u2: &[f64]) -> Result<f64, DistanceError> {
    if u1.len() != u2.len() {
        return Err(DistanceError::LengthMismatch { left: u1.len(), right: u2.len() });
    }
    if u1.is_empty() {
        return Err(DistanceError::EmptyTrace);
    }
    let s: f64 = u1.iter().zip(u2).map(|(a, b)| (a.sqrt() - b.sqrt()).powi(2)).sum();
    Ok((s / u1.len() as f64).sqrt())
}

/// `-ln mean(√u₁ √u₂)`.
pub fn bhattacharyya(u1: &[f64], u2: &[f64]) -> Result<f64, DistanceError> {
    if u1.len() != u2.len() {
        return Err(DistanceError::LengthMismatch { left: u1.len(), right: u2.len() });
    }
    if u1.is_empty() {
        return Err(DistanceError::EmptyTrace);
    }
    let s: f64 = u1.iter().zip(u2).map(|(a, b)| (a * b).sqrt()).sum();
    Ok(-(s / u1.len() as f64).ln())
}

/// Range of the scaled values over the whole trace.
pub fn model_uncertainty(u: &[f64]) -> Result<f64, DistanceError> {
    if u.is_empty() {
        return Err(DistanceError::EmptyTrace);
    }
    let (lo, hi) = u.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)));
    Ok(hi - lo)
}

/// `δ = D_H |1/D_max,1 - 1/D_max,2|`.
pub fn delta_metric(d_h: f64, d_max1: f64, d_max2: f64) -> Result<f64, DistanceError> {
    if !(d_max1 > 0.0) || !(d_max2 > 0.0) {
        return Err(DistanceError::ZeroUncertainty);
    }
    Ok(d_h * (1.0 / d_max1 - 1.0 / d_max2).abs())
}

pub fn absolute_correlation(delta: f64) -> f64 {
    (-delta).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogOdds {
    pub sum: f64,
    pub mean: f64,
}

/// `Σ_t (ln u₁ - ln u₂)` over aligned unscaled windows.
pub fn log_odds_divergence(l1: &[f64], l2: &[f64]) -> Result<LogOdds, DistanceError> {
    if l1.len() != l2.len() {
        return Err(DistanceError::LengthMismatch { left: l1.len(), right: l2.len() });
    }
    if l1.is_empty() {
        return Err(DistanceError::EmptyTrace);
    }
    let sum: f64 = l1.iter().zip(l2).map(|(a, b)| a - b).sum();
    Ok(LogOdds { sum, mean: sum / l1.len() as f64 })
}

/// Hellinger distance between two edge-marginal matrices over `i < j`.
pub fn network_hellinger(m1: &Matrix<f64>, m2: &Matrix<f64>) -> Result<f64, DistanceError> {
    if m1.rows() != m2.rows() || m1.cols() != m2.cols() || m1.rows() != m1.cols() {
        return Err(DistanceError::DimensionMismatch { left: m1.rows(), right: m2.rows() });
    }
    let p = m1.rows();
    let count = p * p.saturating_sub(1) / 2;
    if count == 0 {
        return Err(DistanceError::EmptyTrace);
    }
    let s: f64 = pairs(p).map(|(i, j)| (m1[(i, j)].sqrt() - m2[(i, j)].sqrt()).powi(2)).sum();
    Ok((s / count as f64).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct DistanceOptions {
    pub scale_mode: ScaleMode,
    pub alignment: Alignment,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub scale: f64,
    pub scale_mode: ScaleMode,
    pub d_hellinger: f64,
    pub d_bhattacharyya: f64,
    pub d_max: [f64; 2],
    pub delta: f64,
    pub abs_corr: f64,
    pub log_odds_sum: f64,
    pub log_odds_mean: f64,
    pub n_post: usize,
    pub post_lengths: [usize; 2],
}

impl DistanceReport {
    /// Both traces were scaled with one `s`; `delta` and `abs_corr` follow from the other fields.
    pub fn is_consistent(&self, tol: f64) -> bool {
        delta_metric(self.d_hellinger, self.d_max[0], self.d_max[1])
            .map(|d| (d - self.delta).abs() <= tol && (absolute_correlation(d) - self.abs_corr).abs() <= tol)
            .unwrap_or(false)
    }
}

pub fn distance_report(
    log_u1: &[f64],
    burnin1: usize,
    log_u2: &[f64],
    burnin2: usize,
    opts: DistanceOptions,
) -> Result<DistanceReport, DistanceError> {
    let (w1, w2) = aligned_windows(log_u1, burnin1, log_u2, burnin2, opts.alignment)?;
    let s = global_scale(log_u1, log_u2)?;
    let mode = opts.scale_mode.resolve(s);
    let (su1, su2) = (scaled(w1, s, mode)?, scaled(w2, s, mode)?);
    let d_h = hellinger(&su1, &su2)?;
    let d_b = bhattacharyya(&su1, &su2)?;
    let d_max = [model_uncertainty(&scaled(log_u1, s, mode)?)?, model_uncertainty(&scaled(log_u2, s, mode)?)?];
    let delta = delta_metric(d_h, d_max[0], d_max[1])?;
    let lo = log_odds_divergence(w1, w2)?;
    Ok(DistanceReport {
        scale: s,
        scale_mode: mode,
        d_hellinger: d_h,
        d_bhattacharyya: d_b,
        d_max,
        delta,
        abs_corr: absolute_correlation(delta),
        log_odds_sum: lo.sum,
        log_odds_mean: lo.mean,
        n_post: w1.len(),
        post_lengths: [log_u1.len().saturating_sub(burnin1 + 1), log_u2.len().saturating_sub(burnin2 + 1)],
    })
}
