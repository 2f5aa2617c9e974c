//! Noise thresholds: where a bound stops being positive.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::bounds::{evaluate, BoundKind};
use super::optimize::{bisect, OptimizerConfig};
use crate::error::{Error, Result};
use crate::protocol::{b92, NoiseKind, ProtocolSpec};

/// A rate counts as positive only above this.
///
/// With preprocessing the `q = 1/2` point pins the optimum at zero from below,
/// so a plain sign test would see roundoff-level positives past the threshold.
pub const POSITIVITY_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub protocol: String,
    pub noise_name: String,
    pub bound: BoundKind,
    pub preprocessing: bool,
    /// Midpoint of the final bracket.
    pub threshold: f64,
    pub bracket: (f64, f64),
    pub overlap: Option<f64>,
    pub evaluations: usize,
    pub wall_time: Duration,
}

impl ThresholdReport {
    pub fn bracket_width(&self) -> f64 {
        self.bracket.1 - self.bracket.0
    }
}

/// Search interval for the noise parameter.
pub fn default_bracket(noise: NoiseKind) -> (f64, f64) {
    match noise {
        NoiseKind::Qber => (0.0, 0.25),
        NoiseKind::Delta => (0.0, 0.2),
    }
}

/// Bisects on "rate > [`POSITIVITY_EPS`]" over the default bracket.
pub fn threshold(spec: &ProtocolSpec, bound: BoundKind, preprocessing: bool, cfg: &OptimizerConfig) -> Result<ThresholdReport> {
    threshold_in(spec, bound, preprocessing, cfg, default_bracket(spec.noise()))
}

pub fn threshold_in(
    spec: &ProtocolSpec,
    bound: BoundKind,
    preprocessing: bool,
    cfg: &OptimizerConfig,
    (lo, hi): (f64, f64),
) -> Result<ThresholdReport> {
    let started = Instant::now();
    cfg.validate()?;
    let evaluations = std::cell::Cell::new(0);
    let rate_at = |noise: f64| -> Result<f64> {
        let r = evaluate(spec, noise, bound, preprocessing, cfg)?;
        evaluations.set(evaluations.get() + r.evaluations);
        Ok(r.rate)
    };
    let (f_lo, f_hi) = (rate_at(lo)?, rate_at(hi)?);
    if !(f_lo > POSITIVITY_EPS && f_hi <= POSITIVITY_EPS) {
        return Err(Error::NoSignChange { lo, hi, f_lo, f_hi });
    }
    let bracket = bisect(|x| Ok(rate_at(x)? > POSITIVITY_EPS), lo, hi, cfg.bisection_tol)?;
    Ok(ThresholdReport {
        protocol: spec.name().to_string(),
        noise_name: spec.noise().name().to_string(),
        bound,
        preprocessing,
        threshold: 0.5 * (bracket.0 + bracket.1),
        bracket,
        overlap: spec.overlap(),
        evaluations: evaluations.get(),
        wall_time: started.elapsed(),
    })
}

/// Overlaps `cos θ` for `θ` on a uniform grid over `[π/16, 7π/16]`.
pub fn b92_overlap_grid(points: usize) -> Vec<f64> {
    let (a, b) = (PI / 16.0, 7.0 * PI / 16.0);
    if points == 1 {
        return vec![(0.5 * (a + b)).cos()];
    }
    (0..points)
        .map(|k| (a + (b - a) * k as f64 / (points - 1) as f64).cos())
        .collect()
}

/// Thresholds at every overlap in `overlaps`, in order.
pub fn b92_thresholds(
    overlaps: &[f64],
    bound: BoundKind,
    preprocessing: bool,
    cfg: &OptimizerConfig,
) -> Result<Vec<ThresholdReport>> {
    overlaps
        .iter()
        .map(|&ov| threshold(&b92(ov)?, bound, preprocessing, cfg))
        .collect()
}

/// The largest threshold; ties go to the earliest entry.
pub fn best_threshold(reports: &[ThresholdReport]) -> Option<&ThresholdReport> {
    reports
        .iter()
        .fold(None, |best: Option<&ThresholdReport>, r| match best {
            Some(b) if b.threshold >= r.threshold => Some(b),
            _ => Some(r),
        })
}
