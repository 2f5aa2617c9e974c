//! Monte-Carlo view of `D2(D1(Γ))`: random attacks pushed through the protocol maps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::maps::{bell_spectrum, d1_map, d2_twirl};
use super::spec::ProtocolSpec;
use super::spectrum::BellSpectrum;
use crate::error::{Error, Result};
use crate::qmat::{bell_state, DensityOperator, PureState, C64};

/// Half-width of the QBER window a sample must fall in to be accepted.
pub const QBER_WINDOW: f64 = 5e-3;

#[derive(Debug, Clone)]
pub struct FeasibleSample {
    pub qber: f64,
    pub drawn: usize,
    pub accepted: Vec<BellSpectrum>,
}

/// Reduced state of a Gaussian random pure state on `[2, 2, 4]` (induced measure).
pub fn random_two_qubit_state<R: Rng>(rng: &mut R) -> DensityOperator {
    let mut amps: Vec<C64> = (0..16)
        .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
        .collect();
    let norm = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    let psi = PureState::new(vec![2, 2, 4], amps).expect("normalized above");
    DensityOperator::from_pure(&psi)
        .partial_trace(&[0, 1])
        .expect("subsystems 0 and 1 exist")
}

/// `(1 - w) P_{Φ+} + w σ` with `w ~ U[0, 1]` and `σ` from [`random_two_qubit_state`].
///
/// The induced measure alone essentially never yields a QBER below 0.18 after
/// D1, so the random state is mixed with the ideal one to cover the low-noise
/// region with useful density. Every state still has full support.
pub fn random_attack_state<R: Rng>(rng: &mut R) -> DensityOperator {
    let sigma = random_two_qubit_state(rng);
    let w: f64 = rng.random();
    let ideal = DensityOperator::from_pure(&bell_state(0));
    DensityOperator::mixture(&[(1.0 - w, &ideal), (w, &sigma)]).expect("same dims")
}

/// Draws `n_samples` attack states, maps each through `D2 ∘ D1` and keeps the
/// Bell spectra whose QBER lies within [`QBER_WINDOW`] of `qber`.
pub fn sample_feasible_set(
    spec: &ProtocolSpec,
    qber: f64,
    n_samples: usize,
    seed: u64,
) -> Result<FeasibleSample> {
    if n_samples == 0 {
        return Err(Error::OutOfDomain {
            name: "n_samples",
            value: 0.0,
            domain: ">= 1",
        });
    }
    if !(0.0..=1.0).contains(&qber) {
        return Err(Error::OutOfDomain {
            name: "QBER",
            value: qber,
            domain: "[0, 1]",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut accepted = Vec::new();
    for _ in 0..n_samples {
        let rho0 = random_attack_state(&mut rng);
        let mapped = match d1_map(spec, &rho0) {
            Ok(m) => m,
            // a filter can in principle annihilate a sample; skip it
            Err(Error::VanishingTrace(_)) => continue,
            Err(e) => return Err(e),
        };
        let s = bell_spectrum(&d2_twirl(&mapped)?)?;
        if (s.qber() - qber).abs() <= QBER_WINDOW {
            accepted.push(s);
        }
    }
    Ok(FeasibleSample {
        qber,
        drawn: n_samples,
        accepted,
    })
}
