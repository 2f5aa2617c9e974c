//! Analytic feasible sets: the Bell spectra compatible with an observed noise level.

use serde::{Deserialize, Serialize};

use super::b92::{b92_state, check_delta};
use super::spectrum::BellSpectrum;
use crate::error::{Error, Result};

/// A set of Bell spectra indexed by the noise level and at most one free parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FeasibleFamily {
    /// `(1 - Q - t, t, t, Q - t)` for `t ∈ [0, Q]`.
    Bb84,
    /// The single point `(1 - 3Q/2, Q/2, Q/2, Q/2)`.
    SixState,
    /// The twirled post-filter state of a depolarizing channel of strength δ.
    B92 { overlap: f64 },
}

impl FeasibleFamily {
    /// Number of free attack parameters (0 or 1).
    pub fn param_count(&self) -> usize {
        match self {
            FeasibleFamily::Bb84 => 1,
            FeasibleFamily::SixState | FeasibleFamily::B92 { .. } => 0,
        }
    }

    pub fn check_noise(&self, noise: f64) -> Result<()> {
        match self {
            FeasibleFamily::Bb84 => in_range("QBER", noise, 0.0, 0.5, "[0, 1/2]"),
            FeasibleFamily::SixState => in_range("QBER", noise, 0.0, 2.0 / 3.0, "[0, 2/3]"),
            FeasibleFamily::B92 { .. } => check_delta(noise),
        }
    }

    /// Box bounds of the free parameter at this noise level, if there is one.
    pub fn bounds(&self, noise: f64) -> Option<(f64, f64)> {
        match self {
            FeasibleFamily::Bb84 => Some((0.0, noise)),
            _ => None,
        }
    }

    /// The spectrum at `(noise, t)`; `t` is ignored by 0-parameter families.
    pub fn spectrum(&self, noise: f64, t: f64) -> Result<BellSpectrum> {
        self.check_noise(noise)?;
        match *self {
            FeasibleFamily::Bb84 => {
                if !(-1e-15..=noise + 1e-15).contains(&t) {
                    return Err(Error::OutOfDomain {
                        name: "lambda1",
                        value: t,
                        domain: "[0, QBER]",
                    });
                }
                let t = t.clamp(0.0, noise);
                BellSpectrum::new([1.0 - noise - t, t, t, noise - t])
            }
            FeasibleFamily::SixState => {
                let h = noise / 2.0;
                BellSpectrum::new([1.0 - 3.0 * h, h, h, h])
            }
            FeasibleFamily::B92 { overlap } => Ok(b92_state(overlap, noise)?.spectrum),
        }
    }

    /// The single spectrum of a 0-parameter family, or the `t = lo` end of a 1-parameter one.
    pub fn point(&self, noise: f64) -> Result<BellSpectrum> {
        let t = self.bounds(noise).map_or(0.0, |(lo, _)| lo);
        self.spectrum(noise, t)
    }

    /// Smallest max-norm distance from `s` to the family's curve at this noise level.
    pub fn distance(&self, noise: f64, s: &BellSpectrum) -> Result<f64> {
        match self.bounds(noise) {
            None => Ok(self.point(noise)?.max_norm_distance(s)),
            Some((lo, hi)) => {
                // the curve is linear in t, so a fine scan plus projection suffices
                let n = 2000;
                let mut best = f64::INFINITY;
                for k in 0..=n {
                    let t = lo + (hi - lo) * k as f64 / n as f64;
                    best = best.min(self.spectrum(noise, t)?.max_norm_distance(s));
                }
                Ok(best)
            }
        }
    }
}

fn in_range(name: &'static str, x: f64, lo: f64, hi: f64, domain: &'static str) -> Result<()> {
    if !(lo..=hi).contains(&x) {
        return Err(Error::OutOfDomain {
            name,
            value: x,
            domain,
        });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(s: BellSpectrum, expected: [f64; 4], tol: f64) -> bool {
        s.values().iter().zip(expected).all(|(a, b)| (a - b).abs() <= tol)
    }

    #[test]
    fn bb84_family_points() {
        let f = FeasibleFamily::Bb84;
        assert!(close(f.spectrum(0.1, 0.05).unwrap(), [0.85, 0.05, 0.05, 0.05], 1e-15));
        assert!(close(f.spectrum(0.0, 0.0).unwrap(), [1.0, 0.0, 0.0, 0.0], 0.0));
        let q: f64 = 0.124;
        let t = q - q * q;
        assert!((t - 0.108624).abs() < 1e-12);
        assert!(close(f.spectrum(q, t).unwrap(), [0.767376, 0.108624, 0.108624, 0.015376], 1e-12));
        assert!(f.spectrum(0.1, 0.2).is_err());
    }

    #[test]
    fn bb84_family_has_exact_qber() {
        let f = FeasibleFamily::Bb84;
        for k in 0..=25 {
            let q = 0.01 * k as f64;
            for t in [0.0, q / 2.0, q] {
                let s = f.spectrum(q, t).unwrap();
                assert!((s.qber() - q).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn six_state_points() {
        let f = FeasibleFamily::SixState;
        assert_eq!(f.param_count(), 0);
        assert!(close(f.spectrum(0.1, 0.0).unwrap(), [0.85, 0.05, 0.05, 0.05], 1e-15));
        assert!(close(f.spectrum(0.0, 0.0).unwrap(), [1.0, 0.0, 0.0, 0.0], 0.0));
        assert!(close(f.spectrum(0.1412, 0.0).unwrap(), [0.7882, 0.0706, 0.0706, 0.0706], 1e-12));
        assert!(f.spectrum(0.7, 0.0).is_err());
    }

    #[test]
    fn noise_domains() {
        assert!(FeasibleFamily::Bb84.check_noise(-0.01).is_err());
        assert!(FeasibleFamily::B92 { overlap: 0.7 }.check_noise(0.5).is_err());
        assert!(FeasibleFamily::B92 { overlap: 0.7 }.check_noise(0.02).is_ok());
    }
}
