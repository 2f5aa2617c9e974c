use keyrate::protocol::BellSpectrum;
use keyrate::qmat::{
    bell_diagonal_state, eig_hermitian, purify, von_neumann_entropy, ComplexMatrix, DensityOperator, PureState, C64,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn gaussian(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Mixed state on `dims`: reduced state of a random pure state with an equal-sized environment.
fn random_state(dims: &[usize], seed: u64) -> DensityOperator {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n: usize = dims.iter().product();
    let env = (16 / n).max(1);
    let mut amps: Vec<C64> = (0..n * env).map(|_| gaussian(&mut rng)).collect();
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    amps.iter_mut().for_each(|a| *a /= norm);
    let mut full_dims = dims.to_vec();
    full_dims.push(env);
    let keep: Vec<usize> = (0..dims.len()).collect();
    PureState::new(full_dims, amps).unwrap().reduced_state(&keep).unwrap()
}

/// Eigenvectors of a random Hermitian matrix form a random unitary.
fn random_unitary(n: usize, seed: u64) -> ComplexMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9);
    let g = ComplexMatrix::from_fn(n, n, |_, _| gaussian(&mut rng));
    let h = &g + &g.adjoint();
    eig_hermitian(&h).unwrap().vectors
}

fn spectrum_from(w: [f64; 4]) -> BellSpectrum {
    let s: f64 = w.iter().sum();
    BellSpectrum::new(w.map(|x| x / s)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn entropy_is_basis_invariant(seed in any::<u64>(), dim_pick in 0usize..3) {
        let dims = [vec![2], vec![2, 2], vec![2, 2, 2]][dim_pick].clone();
        let rho = random_state(&dims, seed);
        let u = random_unitary(rho.dim(), seed);
        prop_assert!(u.unitarity_defect() < 1e-10);
        let rotated = DensityOperator::new(dims, u.sandwich(rho.matrix())).unwrap();
        prop_assert!((von_neumann_entropy(&rho) - von_neumann_entropy(&rotated)).abs() < 1e-8);
    }

    #[test]
    fn entropy_is_additive_on_products(a in any::<u64>(), b in any::<u64>()) {
        let ra = random_state(&[2], a);
        let rb = random_state(&[2, 2], b);
        let s = von_neumann_entropy(&ra.tensor(&rb));
        prop_assert!((s - von_neumann_entropy(&ra) - von_neumann_entropy(&rb)).abs() < 1e-8);
    }

    #[test]
    fn partial_trace_composes(seed in any::<u64>()) {
        let rho = random_state(&[2, 2, 4], seed);
        let two_step = rho.partial_trace(&[0, 1]).unwrap().partial_trace(&[0]).unwrap();
        let one_step = rho.partial_trace(&[0]).unwrap();
        prop_assert!(two_step.approx_eq(&one_step, 1e-12));
    }

    #[test]
    fn purification_round_trip(w in prop::array::uniform4(1e-6f64..1.0)) {
        let s = spectrum_from(w);
        let ab = purify(&s).reduced_state(&[0, 1]).unwrap();
        prop_assert!(ab.approx_eq(&bell_diagonal_state(&s), 1e-10));
        let back = keyrate::protocol::bell_spectrum(&ab).unwrap();
        prop_assert!(back.max_norm_distance(&s) < 1e-10);
    }

    #[test]
    fn purification_round_trip_degenerate(i in 0usize..4, w in 0.0f64..1.0) {
        let mut v = [0.0; 4];
        v[i] = w;
        v[(i + 1) % 4] = 1.0 - w;
        let s = BellSpectrum::new(v).unwrap();
        let back = keyrate::protocol::bell_spectrum(&purify(&s).reduced_state(&[0, 1]).unwrap()).unwrap();
        prop_assert!(back.max_norm_distance(&s) < 1e-10);
    }
}
