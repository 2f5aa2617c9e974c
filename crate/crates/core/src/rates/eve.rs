//! Eve's side of the canonical purification and the conditional entropy `S(U|E)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocol::BellSpectrum;
use crate::qmat::{purify, shannon_entropy, von_neumann_entropy, ComplexMatrix, DensityOperator, PureState};

/// Alice's bit flip: with probability `q` she replaces her key bit by its complement.
/// Disabled preprocessing pins `q = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PreprocessingParams {
    q: f64,
    enabled: bool,
}

impl PreprocessingParams {
    pub fn new(q: f64) -> Result<Self> {
        if !(0.0..=0.5).contains(&q) {
            return Err(Error::OutOfDomain {
                name: "q",
                value: q,
                domain: "[0, 1/2]",
            });
        }
        Ok(Self { q, enabled: true })
    }

    pub fn none() -> Self {
        Self {
            q: 0.0,
            enabled: false,
        }
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn enabled(&self) -> bool {
        self.enabled
    }
}

/// Eve's states conditioned on Alice's bit, plus her unconditional state.
#[derive(Debug, Clone)]
pub struct EveConditionals {
    pub spectrum: BellSpectrum,
    /// `ρ_E^x` for `x = 0, 1`.
    pub given: [DensityOperator; 2],
    /// `ρ_E = diag(λ)`.
    pub marginal: DensityOperator,
    marginal_entropy: f64,
}

/// `ρ_E^x = 2 Tr_B[(<x|_A ⊗ 1) ψ (|x>_A ⊗ 1)]` for the purification of `λ`.
pub fn eve_conditionals(spectrum: &BellSpectrum) -> EveConditionals {
    let psi = purify(spectrum);
    let amps = psi.amplitudes();
    let given = [0usize, 1].map(|x| {
        // Alice's marginal is exactly 1/2 for Bell-diagonal states
        let mut v: Vec<_> = amps[x * 8..x * 8 + 8].to_vec();
        let n = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut v {
            *a /= n;
        }
        PureState::new(vec![2, 4], v)
            .and_then(|s| s.reduced_state(&[1]))
            .expect("conditional of a normalized purification")
    });
    let marginal = DensityOperator::new(vec![4], ComplexMatrix::diagonal(&spectrum.values()))
        .expect("spectrum is a probability vector");
    EveConditionals {
        spectrum: *spectrum,
        given,
        marginal,
        marginal_entropy: shannon_entropy(&spectrum.values()),
    }
}

impl EveConditionals {
    /// `ρ_UE = Σ_u 1/2 |u><u| ⊗ [(1 - q) ρ_E^u + q ρ_E^{1-u}]`.
    pub fn joint_state(&self, p: PreprocessingParams) -> DensityOperator {
        let q = p.q();
        let mut m = ComplexMatrix::zeros(8, 8);
        for u in 0..2 {
            let own = self.given[u].matrix();
            let other = self.given[1 - u].matrix();
            for i in 0..4 {
                for j in 0..4 {
                    m[(4 * u + i, 4 * u + j)] = (own[(i, j)] * (1.0 - q) + other[(i, j)] * q) * 0.5;
                }
            }
        }
        DensityOperator::new(vec![2, 4], m).expect("mixture of valid conditionals")
    }

    /// `S(U|E) = S(ρ_UE) - S(ρ_E)`.
    pub fn s_u_given_e(&self, p: PreprocessingParams) -> f64 {
        von_neumann_entropy(&self.joint_state(p)) - self.marginal_entropy
    }
}

pub fn s_u_given_e(spectrum: &BellSpectrum, p: PreprocessingParams) -> f64 {
    eve_conditionals(spectrum).s_u_given_e(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::binary_entropy;

    #[test]
    fn conditionals_average_to_marginal() {
        let s = BellSpectrum::new([0.7, 0.1, 0.15, 0.05]).unwrap();
        let e = eve_conditionals(&s);
        let avg = (e.given[0].matrix() + e.given[1].matrix()).scale_real(0.5);
        assert!(avg.approx_eq(e.marginal.matrix(), 1e-14));
    }

    #[test]
    fn phase_errors_are_invisible_in_alice_bit() {
        // (1-Q, 0, 0, Q): both conditionals equal (1-Q) P_e1 + Q P_e4
        let q = 0.2;
        let e = eve_conditionals(&BellSpectrum::new([1.0 - q, 0.0, 0.0, q]).unwrap());
        let expected = ComplexMatrix::diagonal(&[1.0 - q, 0.0, 0.0, q]);
        for x in 0..2 {
            assert!(e.given[x].matrix().approx_eq(&expected, 1e-14));
        }
    }

    #[test]
    fn pure_bell_state_leaves_eve_ignorant() {
        let s = BellSpectrum::new([1.0, 0.0, 0.0, 0.0]).unwrap();
        assert!((s_u_given_e(&s, PreprocessingParams::none()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn uniform_spectrum_gives_eve_everything() {
        // Eve holds a purification of a product state: she learns U exactly
        let s = BellSpectrum::uniform();
        assert!(s_u_given_e(&s, PreprocessingParams::none()).abs() < 1e-10);
        // and the flip adds exactly h(q) of uncertainty
        let p = PreprocessingParams::new(0.2).unwrap();
        let expected = binary_entropy(0.2).unwrap();
        assert!((s_u_given_e(&s, p) - expected).abs() < 1e-10);
    }

    #[test]
    fn bb84_closed_form() {
        // for (1-Q-t, t, t, Q-t) at t = Q - Q^2 the key rate is 1 - 2h(Q)
        for q in [0.03, 0.08, 0.11] {
            let t: f64 = q - q * q;
            let s = BellSpectrum::new([1.0 - q - t, t, t, q - t]).unwrap();
            let v = s_u_given_e(&s, PreprocessingParams::none());
            assert!((v - (1.0 - binary_entropy(q).unwrap())).abs() < 1e-10, "{q}: {v}");
        }
    }

    #[test]
    fn preprocessing_domain() {
        assert!(PreprocessingParams::new(-0.1).is_err());
        assert!(PreprocessingParams::new(0.51).is_err());
        assert_eq!(PreprocessingParams::new(0.5).unwrap().q(), 0.5);
    }
}
