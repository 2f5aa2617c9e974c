//! Bell basis and the canonical purification of Bell-diagonal states.

use std::f64::consts::FRAC_1_SQRT_2;

use super::matrix::{ComplexMatrix, C64, ZERO};
use super::state::{DensityOperator, PureState};
use crate::protocol::BellSpectrum;

/// Amplitudes of the Bell vectors in the computational basis `|ab>` (index `2a + b`):
/// Φ1,2 = (|00> ± |11>)/√2, Φ3,4 = (|10> ± |01>)/√2.
pub fn bell_amplitudes(i: usize) -> [C64; 4] {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    match i {
        0 => [h, ZERO, ZERO, h],
        1 => [h, ZERO, ZERO, -h],
        2 => [ZERO, h, h, ZERO],
        3 => [ZERO, -h, h, ZERO],
        _ => panic!("Bell index {i} out of range 0..4"),
    }
}

/// Bell vector `Φ_{i+1}` as a two-qubit pure state.
pub fn bell_state(i: usize) -> PureState {
    PureState::new(vec![2, 2], bell_amplitudes(i).to_vec()).expect("Bell vectors are normalized")
}

/// Unitary whose columns are the Bell vectors.
pub fn bell_basis_matrix() -> ComplexMatrix {
    ComplexMatrix::from_fn(4, 4, |i, j| bell_amplitudes(j)[i])
}

/// `Σ λ_i P_{Φ_i}` on dims `[2, 2]`.
pub fn bell_diagonal_state(spectrum: &BellSpectrum) -> DensityOperator {
    let u = bell_basis_matrix();
    let d = ComplexMatrix::diagonal(&spectrum.values());
    DensityOperator::new(vec![2, 2], u.sandwich(&d)).expect("valid spectrum yields a valid state")
}

/// `Σ_i √λ_i |Φ_i>_AB |e_i>_E` on dims `[2, 2, 4]`.
pub fn purify(spectrum: &BellSpectrum) -> PureState {
    let lambda = spectrum.values();
    let mut amps = vec![ZERO; 16];
    for (i, &l) in lambda.iter().enumerate() {
        let w = l.max(0.0).sqrt();
        for (ab, a) in bell_amplitudes(i).iter().enumerate() {
            amps[ab * 4 + i] += a * w;
        }
    }
    // absorb the O(1e-12) slack a spectrum may carry
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    PureState::new(vec![2, 2, 4], amps).expect("purification is normalized")
}
