//! The rate function, its nested optimizations and the resulting bounds.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::eve::{eve_conditionals, EveConditionals, PreprocessingParams};
use super::optimize::{grid, maximize, minimize_with, OptimizerConfig};
use crate::error::{Error, Result};
use crate::protocol::{b92_state, BellSpectrum, FeasibleFamily, ProtocolSpec};
use crate::qmat::entropy::h2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    Lower,
    /// Restricted to bitwise flip preprocessing.
    Upper,
}

impl BoundKind {
    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Lower => "lower",
            BoundKind::Upper => "upper",
        }
    }
}

/// One evaluated bound at one noise level.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RateReport {
    pub protocol: String,
    pub noise_name: String,
    pub noise: f64,
    pub bound: BoundKind,
    pub preprocessing: bool,
    /// Bits per sifted bit.
    pub rate: f64,
    pub q_opt: f64,
    pub lambda_worst: BellSpectrum,
    /// Free attack parameter at the worst case, for one-parameter families.
    pub attack_parameter: Option<f64>,
    /// Number of rate-function evaluations.
    pub evaluations: usize,
    pub wall_time: Duration,
    /// B92 only: probability that Bob's filter passes.
    pub pass_probability: Option<f64>,
    pub overlap: Option<f64>,
}

/// `H(U|Y) = h(Q(1 - q) + (1 - Q) q)`.
pub fn h_u_given_y(qber: f64, p: PreprocessingParams) -> Result<f64> {
    if !(0.0..=0.5).contains(&qber) {
        return Err(Error::OutOfDomain {
            name: "QBER",
            value: qber,
            domain: "[0, 1/2]",
        });
    }
    Ok(h_eff(qber, p.q()))
}

fn h_eff(qber: f64, q: f64) -> f64 {
    h2(qber * (1.0 - q) + (1.0 - qber) * q)
}

/// `S(U|E) - H(U|Y)`; may be negative.
pub fn rate(spectrum: &BellSpectrum, p: PreprocessingParams) -> f64 {
    rate_with(&eve_conditionals(spectrum), p.q())
}

fn rate_with(eve: &EveConditionals, q: f64) -> f64 {
    let p = PreprocessingParams::new(q).expect("q stays in [0, 1/2]");
    eve.s_u_given_e(p) - h_eff(eve.spectrum.qber(), q)
}

/// Worst case over a family at one noise level and fixed preprocessing.
#[derive(Debug, Clone)]
pub struct InnerMin {
    pub rate: f64,
    pub spectrum: BellSpectrum,
    pub parameter: Option<f64>,
    pub evaluations: usize,
}

/// The feasible set at one noise level, with Eve's states cached on the grid.
struct Attack {
    family: FeasibleFamily,
    noise: f64,
    range: Option<(f64, f64)>,
    cached: Vec<EveConditionals>,
}

impl Attack {
    fn new(family: &FeasibleFamily, noise: f64, cfg: &OptimizerConfig) -> Result<Self> {
        family.check_noise(noise)?;
        let range = family.bounds(noise);
        let cached = match range {
            Some((lo, hi)) if hi > lo => grid(lo, hi, cfg.lambda_grid)
                .into_iter()
                .map(|t| Ok(eve_conditionals(&family.spectrum(noise, t)?)))
                .collect::<Result<_>>()?,
            _ => vec![eve_conditionals(&family.point(noise)?)],
        };
        Ok(Self {
            family: *family,
            noise,
            range,
            cached,
        })
    }

    fn at(&self, t: f64) -> Result<EveConditionals> {
        Ok(eve_conditionals(&self.family.spectrum(self.noise, t)?))
    }

    fn is_single_point(&self) -> bool {
        self.cached.len() == 1
    }

    fn inner_min(&self, q: f64, cfg: &OptimizerConfig) -> Result<InnerMin> {
        let Some((lo, hi)) = self.range else {
            let eve = &self.cached[0];
            return Ok(InnerMin {
                rate: rate_with(eve, q),
                spectrum: eve.spectrum,
                parameter: None,
                evaluations: 1,
            });
        };
        let m = minimize_with(
            |k, _| Ok(rate_with(&self.cached[k], q)),
            |t| Ok(rate_with(&self.at(t)?, q)),
            lo,
            hi,
            cfg.lambda_grid,
            cfg.golden_tol,
        )?;
        Ok(InnerMin {
            rate: m.value,
            spectrum: self.family.spectrum(self.noise, m.x)?,
            parameter: Some(m.x),
            evaluations: m.evaluations,
        })
    }
}

/// Minimum of the rate over the family's free parameter at fixed `q`.
pub fn inner_min(
    family: &FeasibleFamily,
    noise: f64,
    p: PreprocessingParams,
    cfg: &OptimizerConfig,
) -> Result<InnerMin> {
    Attack::new(family, noise, cfg)?.inner_min(p.q(), cfg)
}

fn report(spec: &ProtocolSpec, noise: f64, bound: BoundKind, preprocessing: bool, started: Instant) -> Result<RateReport> {
    let pass_probability = match spec.family() {
        FeasibleFamily::B92 { overlap } => Some(b92_state(*overlap, noise)?.pass_probability),
        _ => None,
    };
    Ok(RateReport {
        protocol: spec.name().to_string(),
        noise_name: spec.noise().name().to_string(),
        noise,
        bound,
        preprocessing,
        rate: f64::NAN,
        q_opt: 0.0,
        lambda_worst: BellSpectrum::uniform(),
        attack_parameter: None,
        evaluations: 0,
        wall_time: started.elapsed(),
        pass_probability,
        overlap: spec.overlap(),
    })
}

/// `max_q min_λ rate`; with preprocessing disabled, `q = 0`.
pub fn lower_bound(spec: &ProtocolSpec, noise: f64, preprocessing: bool, cfg: &OptimizerConfig) -> Result<RateReport> {
    let started = Instant::now();
    cfg.validate()?;
    let attack = Attack::new(spec.family(), noise, cfg)?;
    let (inner, q_opt, evaluations) = if preprocessing {
        let evals = std::cell::Cell::new(0);
        let outer = maximize(
            |q| {
                let m = attack.inner_min(q, cfg)?;
                evals.set(evals.get() + m.evaluations);
                Ok(m.rate)
            },
            0.0,
            0.5,
            cfg.q_grid,
            cfg.golden_tol,
        )?;
        let inner = attack.inner_min(outer.x, cfg)?;
        let n = evals.get() + inner.evaluations;
        (inner, outer.x, n)
    } else {
        let inner = attack.inner_min(0.0, cfg)?;
        let n = inner.evaluations;
        (inner, 0.0, n)
    };
    let mut r = report(spec, noise, BoundKind::Lower, preprocessing, started)?;
    r.rate = inner.rate;
    r.q_opt = q_opt;
    r.lambda_worst = inner.spectrum;
    r.attack_parameter = inner.parameter;
    r.evaluations = evaluations;
    r.wall_time = started.elapsed();
    Ok(r)
}

/// `min_λ max_q rate`, the bitwise-preprocessing restriction of the upper bound.
pub fn upper_bound_bitwise(
    spec: &ProtocolSpec,
    noise: f64,
    preprocessing: bool,
    cfg: &OptimizerConfig,
) -> Result<RateReport> {
    let started = Instant::now();
    cfg.validate()?;
    let attack = Attack::new(spec.family(), noise, cfg)?;
    let evals = std::cell::Cell::new(0);
    let best_q = |eve: &EveConditionals| -> Result<(f64, f64)> {
        if !preprocessing {
            evals.set(evals.get() + 1);
            return Ok((rate_with(eve, 0.0), 0.0));
        }
        let m = maximize(|q| Ok(rate_with(eve, q)), 0.0, 0.5, cfg.q_grid, cfg.golden_tol)?;
        evals.set(evals.get() + m.evaluations);
        Ok((m.value, m.x))
    };
    let (value, parameter, spectrum, q_opt) = match attack.range {
        Some((lo, hi)) if !attack.is_single_point() => {
            let m = minimize_with(
                |k, _| Ok(best_q(&attack.cached[k])?.0),
                |t| Ok(best_q(&attack.at(t)?)?.0),
                lo,
                hi,
                cfg.lambda_grid,
                cfg.golden_tol,
            )?;
            let eve = attack.at(m.x)?;
            let q_opt = best_q(&eve)?.1;
            (m.value, Some(m.x), eve.spectrum, q_opt)
        }
        range => {
            let eve = &attack.cached[0];
            let (v, q) = best_q(eve)?;
            (v, range.map(|(lo, _)| lo), eve.spectrum, q)
        }
    };
    let mut r = report(spec, noise, BoundKind::Upper, preprocessing, started)?;
    r.rate = value;
    r.q_opt = q_opt;
    r.lambda_worst = spectrum;
    r.attack_parameter = parameter;
    r.evaluations = evals.get();
    r.wall_time = started.elapsed();
    Ok(r)
}

pub fn evaluate(
    spec: &ProtocolSpec,
    noise: f64,
    bound: BoundKind,
    preprocessing: bool,
    cfg: &OptimizerConfig,
) -> Result<RateReport> {
    match bound {
        BoundKind::Lower => lower_bound(spec, noise, preprocessing, cfg),
        BoundKind::Upper => upper_bound_bitwise(spec, noise, preprocessing, cfg),
    }
}
