use keyrate::protocol::{by_name, sample_feasible_set, FeasibleFamily, NoiseKind, ProtocolSpec};
use keyrate::rates::threshold::{b92_overlap_grid, best_threshold, default_bracket, threshold_in};
use keyrate::rates::{evaluate, BoundKind, OptimizerConfig, RateReport, ThresholdReport};
use rayon::prelude::*;

use crate::args::{BoundArg, FeasibleArgs, ProtocolArgs, RateArgs, SweepArgs, ThresholdArgs};
use crate::output::{rounded, Record};
use crate::CliError;

pub const RATE_HEADER: [&str; 10] = [
    "protocol",
    "noise_name",
    "noise",
    "q_opt",
    "lambda1",
    "lambda2",
    "lambda3",
    "lambda4",
    "rate_lower",
    "rate_upper",
];

pub const THRESHOLD_HEADER: [&str; 7] = [
    "protocol",
    "noise_name",
    "bound",
    "preprocessing",
    "threshold",
    "bracket_width",
    "overlap",
];

pub const FEASIBLE_HEADER: [&str; 7] = ["source", "protocol", "qber", "lambda1", "lambda2", "lambda3", "lambda4"];

pub fn protocol_spec(p: &ProtocolArgs) -> Result<ProtocolSpec, CliError> {
    spec_for(&p.protocol, p.overlap)
}

fn spec_for(name: &str, overlap: Option<f64>) -> Result<ProtocolSpec, CliError> {
    let spec = by_name(name, overlap)?;
    if overlap.is_some() && spec.overlap().is_none() {
        return Err(CliError::Usage(format!("--overlap only applies to b92, not {name}")));
    }
    Ok(spec)
}

fn bounds(b: BoundArg) -> Vec<BoundKind> {
    match b {
        BoundArg::Lower => vec![BoundKind::Lower],
        BoundArg::Upper => vec![BoundKind::Upper],
        BoundArg::Both => vec![BoundKind::Lower, BoundKind::Upper],
    }
}

fn note_upper(kinds: &[BoundKind]) {
    if kinds.contains(&BoundKind::Upper) {
        eprintln!("note: upper bound restricted to bitwise flip preprocessing");
    }
}

/// Lower and/or upper bound at one noise level as one row.
fn rate_row(
    spec: &ProtocolSpec,
    noise: f64,
    kinds: &[BoundKind],
    preprocessing: bool,
    cfg: &OptimizerConfig,
) -> Result<Record, CliError> {
    let reports: Vec<RateReport> = kinds
        .iter()
        .map(|&k| evaluate(spec, noise, k, preprocessing, cfg))
        .collect::<Result<_, _>>()?;
    let get = |k: BoundKind| reports.iter().find(|r| r.bound == k);
    let (lower, upper) = (get(BoundKind::Lower), get(BoundKind::Upper));
    if let (Some(l), Some(u)) = (lower, upper) {
        if l.rate > u.rate + 1e-6 {
            return Err(CliError::Numerical(format!(
                "minimax violated at {noise}: lower {} > upper {}",
                l.rate, u.rate
            )));
        }
    }
    let main = lower.or(upper).expect("at least one bound");
    let lam = main.lambda_worst.values();
    let mut rec = Record::new()
        .with("protocol", spec.name())
        .with("noise_name", spec.noise().name())
        .with("noise", noise)
        .with("q_opt", main.q_opt)
        .with("lambda1", lam[0])
        .with("lambda2", lam[1])
        .with("lambda3", lam[2])
        .with("lambda4", lam[3])
        .with("rate_lower", lower.map(|r| r.rate))
        .with("rate_upper", upper.map(|r| r.rate));
    // B92 rows carry two extra columns
    if spec.overlap().is_some() {
        rec = rec.with("overlap", main.overlap).with("p_pass", main.pass_probability);
    }
    Ok(rec)
}

fn check_noise_flag(spec: &ProtocolSpec, flag: &str) -> Result<(), CliError> {
    let expected = match spec.noise() {
        NoiseKind::Qber => "--qber",
        NoiseKind::Delta => "--delta",
    };
    if flag != expected {
        return Err(CliError::Usage(format!("{} takes its noise level as {expected}", spec.name())));
    }
    Ok(())
}

pub fn rate(a: &RateArgs, cfg: &OptimizerConfig) -> Result<Vec<Record>, CliError> {
    let spec = protocol_spec(&a.protocol)?;
    check_noise_flag(&spec, a.noise.flag())?;
    let kinds = bounds(a.bound);
    note_upper(&kinds);
    Ok(vec![rate_row(&spec, a.noise.value(), &kinds, !a.protocol.no_preprocessing, cfg)?])
}

/// Noise grid `start, start + step, ..., <= stop`, with each point rounded to the rendered precision.
pub fn noise_grid(start: f64, stop: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(CliError::Usage(format!("--step must be positive, got {step}")));
    }
    if !(start <= stop) {
        return Err(CliError::Usage(format!("--start {start} exceeds --stop {stop}")));
    }
    let n = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|k| rounded(start + step * k as f64)).collect())
}

pub fn sweep(a: &SweepArgs, cfg: &OptimizerConfig) -> Result<Vec<Record>, CliError> {
    let spec = protocol_spec(&a.protocol)?;
    let grid = noise_grid(a.start, a.stop, a.step)?;
    let kinds = bounds(a.bound);
    note_upper(&kinds);
    let pre = !a.protocol.no_preprocessing;
    grid.par_iter()
        .map(|&x| rate_row(&spec, x, &kinds, pre, cfg))
        .collect::<Result<Vec<_>, _>>()
}

fn threshold_record(r: &ThresholdReport) -> Record {
    Record::new()
        .with("protocol", r.protocol.as_str())
        .with("noise_name", r.noise_name.as_str())
        .with("bound", r.bound.name())
        .with("preprocessing", r.preprocessing)
        .with("threshold", r.threshold)
        .with("bracket_width", r.bracket_width())
        .with("overlap", r.overlap)
}

/// Thresholds over a B92 overlap grid, computed concurrently, in grid order.
pub fn b92_scan(
    points: usize,
    bound: BoundKind,
    preprocessing: bool,
    cfg: &OptimizerConfig,
    bracket: (f64, f64),
) -> Result<Vec<ThresholdReport>, CliError> {
    if points == 0 {
        return Err(CliError::Usage("--overlap-points must be at least 1".into()));
    }
    b92_overlap_grid(points)
        .par_iter()
        .map(|&ov| Ok(threshold_in(&keyrate::protocol::b92(ov)?, bound, preprocessing, cfg, bracket)?))
        .collect()
}

pub fn threshold_cmd(a: &ThresholdArgs, cfg: &OptimizerConfig) -> Result<Vec<Record>, CliError> {
    let spec = protocol_spec(&a.protocol)?;
    let kinds = bounds(a.bound);
    note_upper(&kinds);
    let pre = !a.protocol.no_preprocessing;
    let (lo, hi) = default_bracket(spec.noise());
    let bracket = (a.bracket_lo.unwrap_or(lo), a.bracket_hi.unwrap_or(hi));
    if !(bracket.0 < bracket.1) {
        return Err(CliError::Usage(format!("empty bracket [{}, {}]", bracket.0, bracket.1)));
    }
    let mut out = Vec::new();
    for kind in kinds {
        if spec.overlap().is_some() && a.protocol.overlap.is_none() {
            let all = b92_scan(a.overlap_points, kind, pre, cfg, bracket)?;
            if a.per_overlap {
                out.extend(all.iter().map(threshold_record));
            } else {
                let best = best_threshold(&all).expect("grid is non-empty");
                out.push(threshold_record(best));
            }
        } else {
            out.push(threshold_record(&threshold_in(&spec, kind, pre, cfg, bracket)?));
        }
    }
    Ok(out)
}

fn spectrum_record(source: &str, spec: &ProtocolSpec, qber: f64, lam: [f64; 4]) -> Record {
    Record::new()
        .with("source", source)
        .with("protocol", spec.name())
        .with("qber", qber)
        .with("lambda1", lam[0])
        .with("lambda2", lam[1])
        .with("lambda3", lam[2])
        .with("lambda4", lam[3])
}

/// δ at which the B92 twirled state has the given QBER.
fn b92_delta_for(overlap: f64, qber: f64) -> Result<f64, CliError> {
    let family = FeasibleFamily::B92 { overlap };
    let q_at = |d: f64| family.spectrum(d, 0.0).map(|s| s.qber());
    let hi = 0.5 - 1e-9;
    if qber > q_at(hi)? {
        return Err(CliError::Lib(keyrate::Error::OutOfDomain {
            name: "QBER",
            value: qber,
            domain: "reachable by the B92 depolarizing family",
        }));
    }
    let (lo, hi) = keyrate::rates::optimize::bisect(|d| Ok(q_at(d)? < qber), 0.0, hi, 1e-13)?;
    Ok(0.5 * (lo + hi))
}

pub fn feasible_set(a: &FeasibleArgs, seed: u64) -> Result<Vec<Record>, CliError> {
    let spec = spec_for(&a.protocol, a.overlap)?;
    if a.family_points == 0 {
        return Err(CliError::Usage("--family-points must be at least 1".into()));
    }
    let sample = sample_feasible_set(&spec, a.qber, a.samples, seed)?;
    if sample.accepted.is_empty() {
        eprintln!(
            "warning: none of {} samples fell within the QBER window around {}",
            sample.drawn, a.qber
        );
        return Ok(Vec::new());
    }
    let mut out: Vec<Record> = sample
        .accepted
        .iter()
        .map(|s| spectrum_record("sample", &spec, s.qber(), s.values()))
        .collect();
    let family = *spec.family();
    let noise = match family {
        FeasibleFamily::B92 { overlap } => b92_delta_for(overlap, a.qber)?,
        _ => a.qber,
    };
    family.check_noise(noise)?;
    let (lo, hi) = family.bounds(noise).unwrap_or((0.0, 0.0));
    for k in 0..a.family_points {
        let t = if a.family_points == 1 {
            lo
        } else {
            lo + (hi - lo) * k as f64 / (a.family_points - 1) as f64
        };
        let s = family.spectrum(noise, t)?;
        out.push(spectrum_record("analytic", &spec, a.qber, s.values()));
    }
    Ok(out)
}
