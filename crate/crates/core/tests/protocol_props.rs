use keyrate::protocol::{
    b92_default, bb84, bell_spectrum, d1_map, d2_twirl, random_attack_state, sample_feasible_set, six_state,
    FeasibleFamily,
};
use keyrate::qmat::bell_basis_matrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn twirl_is_idempotent_trace_and_positivity_preserving(seed in any::<u64>()) {
        let rho = random_attack_state(&mut ChaCha8Rng::seed_from_u64(seed));
        let once = d2_twirl(&rho).unwrap();
        let twice = d2_twirl(&once).unwrap();
        prop_assert!(once.approx_eq(&twice, 1e-12));
        prop_assert!((once.matrix().trace().re - 1.0).abs() < 1e-12);
        prop_assert!(once.spectrum()[0] >= 0.0);
    }

    #[test]
    fn twirl_keeps_bell_diagonal(seed in any::<u64>()) {
        let rho = random_attack_state(&mut ChaCha8Rng::seed_from_u64(seed));
        let s = bell_spectrum(&d2_twirl(&rho).unwrap()).unwrap();
        let in_bell = bell_basis_matrix().adjoint().sandwich(rho.matrix());
        for i in 0..4 {
            prop_assert!((s[i] - in_bell[(i, i)].re).abs() < 1e-12);
        }
    }

    #[test]
    fn d1_outputs_are_states(seed in any::<u64>()) {
        let rho = random_attack_state(&mut ChaCha8Rng::seed_from_u64(seed));
        for spec in [bb84(), six_state(), b92_default()] {
            let out = d1_map(&spec, &rho).unwrap();
            prop_assert!((out.matrix().trace().re - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn bb84_family_has_exact_qber(q in 0.0f64..=0.25, pick in 0usize..3) {
        let t = [0.0, q / 2.0, q][pick];
        let s = FeasibleFamily::Bb84.spectrum(q, t).unwrap();
        prop_assert_eq!(s.qber(), q);
    }
}

/// Samples are compared against the analytic family at their own QBER,
/// which sits inside the acceptance window around the target.
#[test]
fn sampler_matches_analytic_families() {
    for (spec, family) in [(bb84(), FeasibleFamily::Bb84), (six_state(), FeasibleFamily::SixState)] {
        for (k, q) in [0.05, 0.1, 0.15].into_iter().enumerate() {
            let sample = sample_feasible_set(&spec, q, 4000, 11 + k as u64).unwrap();
            assert!(!sample.accepted.is_empty(), "{} at {q}", spec.name());
            for s in &sample.accepted {
                let d = family.distance(s.qber(), s).unwrap();
                assert!(d <= 6e-3, "{} at {q}: distance {d}", spec.name());
            }
        }
    }
}
