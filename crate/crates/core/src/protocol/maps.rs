//! The protocol map D1, the Pauli twirl D2 and the Bell-basis diagonal.

use super::spec::ProtocolSpec;
use super::spectrum::BellSpectrum;
use crate::error::{Error, Result};
use crate::qmat::bell::bell_amplitudes;
use crate::qmat::{ComplexMatrix, DensityOperator, C64};

/// Traces below this mean every branch annihilated the input.
pub const MIN_BRANCH_TRACE: f64 = 1e-12;

fn require_two_qubits(rho: &DensityOperator) -> Result<()> {
    if rho.dims() != [2, 2] {
        return Err(Error::ShapeMismatch(format!(
            "expected a two-qubit state, got dims {:?}",
            rho.dims()
        )));
    }
    Ok(())
}

pub(crate) fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap()
}

pub(crate) fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap()
}

/// `Σ_j w_j (A_j ⊗ B_j) ρ (A_j ⊗ B_j)†`, renormalized to unit trace.
pub fn d1_map(spec: &ProtocolSpec, rho: &DensityOperator) -> Result<DensityOperator> {
    require_two_qubits(rho)?;
    let mut acc = ComplexMatrix::zeros(4, 4);
    for branch in spec.branches() {
        let op = branch.encoder.kron(&branch.decoder);
        acc = &acc + &op.sandwich(rho.matrix()).scale_real(branch.weight);
    }
    let tr = acc.trace().re;
    if tr < MIN_BRANCH_TRACE {
        return Err(Error::VanishingTrace(tr));
    }
    DensityOperator::new(vec![2, 2], hermitian_part(&acc.scale_real(1.0 / tr)))
}

/// Uniform mixture over `O ⊗ O` for `O ∈ {1, σz, σx, σz σx}`.
pub fn d2_twirl(rho: &DensityOperator) -> Result<DensityOperator> {
    require_two_qubits(rho)?;
    let z = pauli_z();
    let x = pauli_x();
    let ops = [ComplexMatrix::identity(2), z.clone(), x.clone(), &z * &x];
    let mut acc = ComplexMatrix::zeros(4, 4);
    for o in &ops {
        acc = &acc + &o.kron(o).sandwich(rho.matrix());
    }
    DensityOperator::new(vec![2, 2], hermitian_part(&acc.scale_real(0.25)))
}

/// `⟨Φ_i|ρ|Φ_i⟩` for the four Bell vectors.
pub fn bell_spectrum(rho: &DensityOperator) -> Result<BellSpectrum> {
    require_two_qubits(rho)?;
    let m = rho.matrix();
    let mut values = [0.0; 4];
    for (i, v) in values.iter_mut().enumerate() {
        let phi = bell_amplitudes(i);
        let mv = m.apply(&phi);
        let w: C64 = phi.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum();
        *v = w.re.max(0.0);
    }
    let sum: f64 = values.iter().sum();
    for v in &mut values {
        *v /= sum;
    }
    BellSpectrum::new(values)
}

fn hermitian_part(m: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::from_fn(m.rows(), m.cols(), |i, j| (m[(i, j)] + m[(j, i)].conj()) * 0.5)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::sampling::random_two_qubit_state;
    use crate::protocol::spec::{bb84, six_state};
    use crate::qmat::{bell_diagonal_state, bell_state, PureState};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bell_projector(i: usize) -> DensityOperator {
        DensityOperator::from_pure(&bell_state(i))
    }

    fn off_bell_diagonal(rho: &DensityOperator) -> f64 {
        let u = crate::qmat::bell_basis_matrix();
        let in_bell = &(&u.adjoint() * rho.matrix()) * &u;
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    worst = worst.max(in_bell[(i, j)].norm());
                }
            }
        }
        worst
    }

    #[test]
    fn bb84_fixes_phi_plus() {
        let out = d1_map(&bb84(), &bell_projector(0)).unwrap();
        assert!(out.approx_eq(&bell_projector(0), 1e-14));
    }

    #[test]
    fn bb84_mixes_phi_minus_with_psi_plus() {
        let out = d1_map(&bb84(), &bell_projector(1)).unwrap();
        // H⊗H maps Φ− to Ψ+; the identity branch keeps Φ−
        let expected = DensityOperator::mixture(&[(0.5, &bell_projector(1)), (0.5, &bell_projector(2))])
            .unwrap();
        assert!(out.approx_eq(&expected, 1e-14));
    }

    #[test]
    fn twirl_fixes_bell_diagonal_states() {
        let s = BellSpectrum::new([0.6, 0.2, 0.15, 0.05]).unwrap();
        let rho = bell_diagonal_state(&s);
        assert!(d2_twirl(&rho).unwrap().approx_eq(&rho, 1e-14));
    }

    #[test]
    fn twirl_of_00() {
        let rho = DensityOperator::from_pure(&PureState::basis(vec![2, 2], 0).unwrap());
        let out = d2_twirl(&rho).unwrap();
        // brute-force sum of the four conjugations, written out by hand:
        // 1⊗1 and σz⊗σz fix |00>, σx⊗σx and (σzσx)⊗(σzσx) send it to |11>
        let mut expected = ComplexMatrix::zeros(4, 4);
        expected[(0, 0)] = C64::new(0.5, 0.0);
        expected[(3, 3)] = C64::new(0.5, 0.0);
        assert!(out.matrix().approx_eq(&expected, 1e-15));
        let half = DensityOperator::mixture(&[(0.5, &bell_projector(0)), (0.5, &bell_projector(1))])
            .unwrap();
        assert!(out.approx_eq(&half, 1e-15));
        let s = bell_spectrum(&out).unwrap();
        assert!(s.max_norm_distance(&BellSpectrum::new([0.5, 0.5, 0.0, 0.0]).unwrap()) < 1e-15);
    }

    #[test]
    fn bell_spectrum_of_simple_states() {
        let s = bell_spectrum(&bell_projector(0)).unwrap();
        assert!(s.max_norm_distance(&BellSpectrum::new([1.0, 0.0, 0.0, 0.0]).unwrap()) < 1e-15);
        let mixed = DensityOperator::maximally_mixed(vec![2, 2]).unwrap();
        let s = bell_spectrum(&mixed).unwrap();
        assert!(s.max_norm_distance(&BellSpectrum::uniform()) < 1e-15);
    }

    #[test]
    fn twirl_properties_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..100 {
            let rho = random_two_qubit_state(&mut rng);
            let once = d2_twirl(&rho).unwrap();
            let twice = d2_twirl(&once).unwrap();
            assert!(twice.approx_eq(&once, 1e-12));
            assert!((once.matrix().trace().re - 1.0).abs() < 1e-12);
            assert!(once.spectrum()[0] >= 0.0);
            assert!(off_bell_diagonal(&once) < 1e-12);
            // twirling never changes the Bell diagonal
            let before = bell_spectrum(&rho).unwrap();
            let after = bell_spectrum(&once).unwrap();
            assert!(before.max_norm_distance(&after) < 1e-12);
        }
    }

    #[test]
    fn d1_output_is_valid_for_all_protocols() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let specs = [bb84(), six_state(), crate::protocol::spec::b92(0.6).unwrap()];
        for _ in 0..50 {
            let rho = random_two_qubit_state(&mut rng);
            for spec in &specs {
                let out = d1_map(spec, &rho).unwrap();
                assert!((out.matrix().trace().re - 1.0).abs() < 1e-12);
                assert!(out.matrix().is_hermitian(1e-12));
            }
        }
    }

    #[test]
    fn six_state_equalizes_error_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let rho = random_two_qubit_state(&mut rng);
            let out = d2_twirl(&d1_map(&six_state(), &rho).unwrap()).unwrap();
            let s = bell_spectrum(&out).unwrap();
            assert!((s[1] - s[2]).abs() < 1e-12 && (s[2] - s[3]).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_wrong_dims() {
        let rho = DensityOperator::maximally_mixed(vec![4]).unwrap();
        assert!(d2_twirl(&rho).is_err());
        assert!(bell_spectrum(&rho).is_err());
    }
}
