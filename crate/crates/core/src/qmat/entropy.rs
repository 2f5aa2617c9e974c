//! Entropies in bits.

use super::state::DensityOperator;
use crate::error::{Error, Result};

/// `-Σ p log2 p` with `0 log 0 = 0`.
pub fn shannon_entropy(probabilities: &[f64]) -> f64 {
    probabilities
        .iter()
        .filter(|&&p| p > 0.0)
        .map(|&p| -p * p.log2())
        .sum()
}

/// `S(ρ) = -Tr ρ log2 ρ`, evaluated on the spectrum cached at construction.
pub fn von_neumann_entropy(rho: &DensityOperator) -> f64 {
    shannon_entropy(rho.spectrum())
}

/// Binary entropy `h(p)`.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::OutOfDomain {
            name: "p",
            value: p,
            domain: "[0, 1]",
        });
    }
    Ok(h2(p))
}

/// Unchecked binary entropy for hot loops; arguments are clamped into [0, 1].
pub(crate) fn h2(p: f64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    shannon_entropy(&[p, 1.0 - p])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::bell::{bell_diagonal_state, bell_state};
    use crate::protocol::BellSpectrum;

    #[test]
    fn pure_state_has_zero_entropy() {
        let rho = DensityOperator::from_pure(&bell_state(2));
        assert!(von_neumann_entropy(&rho).abs() < 1e-12);
    }

    #[test]
    fn maximally_mixed_two_qubits() {
        let rho = DensityOperator::maximally_mixed(vec![2, 2]).unwrap();
        assert!((von_neumann_entropy(&rho) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn bell_diagonal_entropy_matches_shannon() {
        let lambda = [0.8, 0.1, 0.05, 0.05];
        let rho = bell_diagonal_state(&BellSpectrum::new(lambda).unwrap());
        // independent evaluation of -Σ λ log2 λ
        let expected = -(0.8f64 * 0.8f64.log2() + 0.1 * 0.1f64.log2() + 2.0 * 0.05 * 0.05f64.log2());
        assert!((von_neumann_entropy(&rho) - expected).abs() < 1e-12);
        assert!((expected - 1.0219281).abs() < 1e-6);
    }

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.0).unwrap(), 0.0);
        assert_eq!(binary_entropy(1.0).unwrap(), 0.0);
        assert!((binary_entropy(0.5).unwrap() - 1.0).abs() < 1e-15);
        assert!((binary_entropy(0.25).unwrap() - 0.811278124459).abs() < 1e-11);
        assert!(binary_entropy(-0.1).is_err());
        assert!(binary_entropy(1.5).is_err());
    }
}
