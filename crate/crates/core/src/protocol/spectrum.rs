use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-entry slack below zero tolerated in a spectrum.
pub const ENTRY_TOL: f64 = 1e-12;
/// Tolerance on `Σ λ_i = 1`.
pub const SUM_TOL: f64 = 1e-10;

/// Weights of a two-qubit state on the Bell vectors Φ1..Φ4.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BellSpectrum([f64; 4]);

impl BellSpectrum {
    pub fn new(values: [f64; 4]) -> Result<Self> {
        for &l in &values {
            if !(-ENTRY_TOL..=1.0 + ENTRY_TOL).contains(&l) {
                return Err(Error::InvalidState(format!("Bell weight {l} outside [0, 1]")));
            }
        }
        let sum: f64 = values.iter().sum();
        if (sum - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidState(format!("Bell weights sum to {sum}")));
        }
        Ok(Self(values))
    }

    pub fn uniform() -> Self {
        Self([0.25; 4])
    }

    pub fn values(&self) -> [f64; 4] {
        self.0
    }

    /// Probability that z-basis outcomes of A and B differ: `λ3 + λ4`.
    pub fn qber(&self) -> f64 {
        self.0[2] + self.0[3]
    }

    pub fn max_norm_distance(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl std::ops::Index<usize> for BellSpectrum {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}
