//! B92 through a depolarizing channel, post-selected on Bob's filter.

use serde::{Deserialize, Serialize};

use super::maps::{bell_spectrum, d2_twirl};
use super::spec::{b92, b92_signal_states};
use super::spectrum::BellSpectrum;
use crate::error::{Error, Result};
use crate::qmat::bell::bell_amplitudes;
use crate::qmat::{eigvals_hermitian, ComplexMatrix, DensityOperator};

/// Filter pass probabilities below this are treated as total loss.
pub const MIN_PASS_PROBABILITY: f64 = 1e-12;

/// Post-selected, twirled Alice–Bob state of B92 at one channel setting.
#[derive(Debug, Clone)]
pub struct B92State {
    pub state: DensityOperator,
    pub spectrum: BellSpectrum,
    /// Probability that Bob's filter succeeds.
    pub pass_probability: f64,
    pub qber: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct B92Setting {
    pub overlap: f64,
    pub delta: f64,
}

pub fn check_delta(delta: f64) -> Result<()> {
    if !(0.0..0.5).contains(&delta) {
        return Err(Error::OutOfDomain {
            name: "delta",
            value: delta,
            domain: "[0, 1/2)",
        });
    }
    Ok(())
}

/// `(1 ⊗ E_δ)(ρ) = (1 - 2δ) ρ + δ ρ_A ⊗ 1` on the second qubit.
pub fn depolarize_second(rho: &ComplexMatrix, delta: f64) -> ComplexMatrix {
    let mut rho_a = ComplexMatrix::zeros(2, 2);
    for a in 0..2 {
        for b in 0..2 {
            rho_a[(a, b)] = rho[(2 * a, 2 * b)] + rho[(2 * a + 1, 2 * b + 1)];
        }
    }
    &rho.scale_real(1.0 - 2.0 * delta) + &rho_a.kron(&ComplexMatrix::identity(2)).scale_real(delta)
}

/// Applies `A ⊗ (B ∘ E_δ)` to `P_{Φ+}`, post-selects on Bob's filter and twirls.
///
/// The filter is rescaled so that `B†B ≤ 1`, making `pass_probability` the
/// physical success probability of Bob's measurement.
pub fn b92_state(overlap: f64, delta: f64) -> Result<B92State> {
    check_delta(delta)?;
    b92_signal_states(overlap)?;
    let spec = b92(overlap)?;
    let branch = &spec.branches()[0];

    let phi_plus = bell_amplitudes(0);
    let p = ComplexMatrix::outer(&phi_plus, &phi_plus);
    let alice = branch.encoder.kron(&ComplexMatrix::identity(2));
    let prepared = alice.sandwich(&p);
    let noisy = depolarize_second(&prepared, delta);

    let filter_norm = eigvals_hermitian(&(&branch.decoder.adjoint() * &branch.decoder))?[1];
    let bob = ComplexMatrix::identity(2).kron(&branch.decoder.scale_real(1.0 / filter_norm.sqrt()));
    let filtered = bob.sandwich(&noisy);
    let pass_probability = filtered.trace().re;
    if pass_probability < MIN_PASS_PROBABILITY {
        return Err(Error::VanishingTrace(pass_probability));
    }
    let post = DensityOperator::normalized(vec![2, 2], filtered)?;
    let state = d2_twirl(&post)?;
    let spectrum = bell_spectrum(&state)?;
    Ok(B92State {
        qber: spectrum.qber(),
        state,
        spectrum,
        pass_probability,
    })
}

/// The post-selected state before twirling; used to inspect purity.
pub fn b92_filtered_state(overlap: f64, delta: f64) -> Result<DensityOperator> {
    check_delta(delta)?;
    let spec = b92(overlap)?;
    let branch = &spec.branches()[0];
    let phi_plus = bell_amplitudes(0);
    let p = ComplexMatrix::outer(&phi_plus, &phi_plus);
    let op = branch.encoder.kron(&ComplexMatrix::identity(2));
    let noisy = depolarize_second(&op.sandwich(&p), delta);
    let bob = ComplexMatrix::identity(2).kron(&branch.decoder);
    DensityOperator::normalized(vec![2, 2], bob.sandwich(&noisy))
}
