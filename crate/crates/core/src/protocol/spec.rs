//! Protocols as encoding/decoding operator data.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use serde::{Deserialize, Serialize};

use super::family::FeasibleFamily;
use crate::error::{Error, Result};
use crate::qmat::{ComplexMatrix, C64};

/// Default B92 overlap `<φ0|φ1> = cos(π/4)`: signal states at ±π/8 from the z-axis.
pub const DEFAULT_B92_OVERLAP: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Which observed quantity parametrizes a protocol's channel noise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NoiseKind {
    /// Quantum bit error rate of the sifted key.
    Qber,
    /// Depolarizing strength of the channel.
    Delta,
}

impl NoiseKind {
    pub fn name(self) -> &'static str {
        match self {
            NoiseKind::Qber => "QBER",
            NoiseKind::Delta => "delta",
        }
    }
}

/// One sifting outcome: Alice applies `encoder`, Bob applies `decoder`.
#[derive(Debug, Clone)]
pub struct Branch {
    pub encoder: ComplexMatrix,
    pub decoder: ComplexMatrix,
    pub weight: f64,
}

impl Branch {
    /// Operators for bit values encoded in `phi0`, `phi1`:
    /// `A = |0><φ0*| + |1><φ1*|` and `B = |0><φ̂1| + |1><φ̂0|`, with `φ̂i ⟂ φi`.
    ///
    /// `φ̂1` is the normalized component of `φ0` orthogonal to `φ1` (and vice
    /// versa), which reduces to `φ̂1 = φ0` for orthogonal signal states.
    pub fn from_signal_states(phi0: [C64; 2], phi1: [C64; 2], weight: f64) -> Result<Self> {
        let phi0 = normalize(phi0)?;
        let phi1 = normalize(phi1)?;
        let hat1 = orthogonal_component(phi0, phi1)?;
        let hat0 = orthogonal_component(phi1, phi0)?;
        // |i><v*| has row i equal to (v*)† = v^T
        let encoder = ComplexMatrix::from_vec(2, 2, vec![phi0[0], phi0[1], phi1[0], phi1[1]])?;
        let decoder = ComplexMatrix::from_vec(
            2,
            2,
            vec![hat1[0].conj(), hat1[1].conj(), hat0[0].conj(), hat0[1].conj()],
        )?;
        Ok(Self {
            encoder,
            decoder,
            weight,
        })
    }
}

fn normalize(v: [C64; 2]) -> Result<[C64; 2]> {
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    if n < 1e-300 {
        return Err(Error::InvalidState("zero signal vector".into()));
    }
    Ok([v[0] / n, v[1] / n])
}

/// Normalized `v - <w|v> w` for unit `w`.
fn orthogonal_component(v: [C64; 2], w: [C64; 2]) -> Result<[C64; 2]> {
    let ov = w[0].conj() * v[0] + w[1].conj() * v[1];
    let r = [v[0] - ov * w[0], v[1] - ov * w[1]];
    normalize(r).map_err(|_| Error::InvalidState("signal states are identical".into()))
}

#[derive(Debug, Clone)]
pub struct ProtocolSpec {
    name: String,
    branches: Vec<Branch>,
    family: FeasibleFamily,
    noise: NoiseKind,
}

impl ProtocolSpec {
    /// Normalizes the branch weights to sum to one.
    pub fn new(
        name: impl Into<String>,
        mut branches: Vec<Branch>,
        family: FeasibleFamily,
        noise: NoiseKind,
    ) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::ShapeMismatch("a protocol needs at least one branch".into()));
        }
        if branches.iter().any(|b| !(b.weight > 0.0 && b.weight <= 1.0)) {
            return Err(Error::OutOfDomain {
                name: "branch weight",
                value: branches.iter().map(|b| b.weight).fold(f64::NAN, f64::min),
                domain: "(0, 1]",
            });
        }
        let total: f64 = branches.iter().map(|b| b.weight).sum();
        for b in &mut branches {
            b.weight /= total;
        }
        Ok(Self {
            name: name.into(),
            branches,
            family,
            noise,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn family(&self) -> &FeasibleFamily {
        &self.family
    }

    pub fn noise(&self) -> NoiseKind {
        self.noise
    }

    /// B92 signal overlap, if this is a B92 instance.
    pub fn overlap(&self) -> Option<f64> {
        match self.family {
            FeasibleFamily::B92 { overlap } => Some(overlap),
            _ => None,
        }
    }
}

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn z_basis() -> ([C64; 2], [C64; 2]) {
    ([real(1.0), real(0.0)], [real(0.0), real(1.0)])
}

fn x_basis() -> ([C64; 2], [C64; 2]) {
    let h = FRAC_1_SQRT_2;
    ([real(h), real(h)], [real(h), real(-h)])
}

/// BB84: Hadamard and identity branches with equal weight.
pub fn bb84() -> ProtocolSpec {
    let (x0, x1) = x_basis();
    let (z0, z1) = z_basis();
    let branches = vec![
        Branch::from_signal_states(x0, x1, 0.5).unwrap(),
        Branch::from_signal_states(z0, z1, 0.5).unwrap(),
    ];
    ProtocolSpec::new("bb84", branches, FeasibleFamily::Bb84, NoiseKind::Qber).unwrap()
}

/// Rotation by 2π/3 about (1,1,1): `(1 - i(σx + σy + σz))/2`, cycling σx → σy → σz → σx.
pub fn cyclic_clifford() -> ComplexMatrix {
    let h = 0.5;
    ComplexMatrix::from_vec(
        2,
        2,
        vec![C64::new(h, -h), C64::new(-h, -h), C64::new(h, -h), C64::new(h, h)],
    )
    .unwrap()
}

/// Six-state: the z, x and y bases, generated as `C^k |0>, C^k |1>` for the
/// cyclic Clifford `C`, with equal weight.
///
/// The three branches act on Bell-diagonal states as the cyclic group of the
/// error types, so D1 equalizes λ2, λ3 and λ4.
pub fn six_state() -> ProtocolSpec {
    let c = cyclic_clifford();
    let mut u = ComplexMatrix::identity(2);
    let mut branches = Vec::with_capacity(3);
    for _ in 0..3 {
        let p0 = [u[(0, 0)], u[(1, 0)]];
        let p1 = [u[(0, 1)], u[(1, 1)]];
        branches.push(Branch::from_signal_states(p0, p1, 1.0 / 3.0).unwrap());
        u = &c * &u;
    }
    ProtocolSpec::new("six-state", branches, FeasibleFamily::SixState, NoiseKind::Qber).unwrap()
}

/// B92 signal states `cos θ|0> ± sin θ|1>` with `cos 2θ = overlap`.
pub fn b92_signal_states(overlap: f64) -> Result<([C64; 2], [C64; 2])> {
    if !(overlap > 0.0 && overlap < 1.0) {
        return Err(Error::OutOfDomain {
            name: "overlap",
            value: overlap,
            domain: "(0, 1)",
        });
    }
    let theta = overlap.acos() / 2.0;
    let (s, c) = theta.sin_cos();
    Ok(([real(c), real(s)], [real(c), real(-s)]))
}

/// B92 with the given signal overlap; a single filtering branch.
pub fn b92(overlap: f64) -> Result<ProtocolSpec> {
    let (p0, p1) = b92_signal_states(overlap)?;
    let branch = Branch::from_signal_states(p0, p1, 1.0)?;
    ProtocolSpec::new("b92", vec![branch], FeasibleFamily::B92 { overlap }, NoiseKind::Delta)
}

pub fn b92_default() -> ProtocolSpec {
    debug_assert!((DEFAULT_B92_OVERLAP - FRAC_PI_4.cos()).abs() < 1e-15);
    b92(DEFAULT_B92_OVERLAP).unwrap()
}

/// Looks a protocol up by its CLI name.
pub fn by_name(name: &str, overlap: Option<f64>) -> Result<ProtocolSpec> {
    match name.to_ascii_lowercase().as_str() {
        "bb84" => Ok(bb84()),
        "six-state" | "six_state" | "sixstate" | "6-state" => Ok(six_state()),
        "b92" => b92(overlap.unwrap_or(DEFAULT_B92_OVERLAP)),
        _ => Err(Error::InvalidProtocol(name.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hadamard() -> ComplexMatrix {
        let h = FRAC_1_SQRT_2;
        ComplexMatrix::from_real(2, 2, &[h, h, h, -h]).unwrap()
    }

    #[test]
    fn bb84_branches_are_hadamard_and_identity() {
        let spec = bb84();
        assert_eq!(spec.branches().len(), 2);
        let h = hadamard();
        assert!(spec.branches()[0].encoder.approx_eq(&h, 1e-15));
        assert!(spec.branches()[0].decoder.approx_eq(&h, 1e-15));
        let id = ComplexMatrix::identity(2);
        assert!(spec.branches()[1].encoder.approx_eq(&id, 1e-15));
        assert!(spec.branches()[1].decoder.approx_eq(&id, 1e-15));
        assert!(spec.branches().iter().all(|b| (b.weight - 0.5).abs() < 1e-15));
    }

    #[test]
    fn six_state_branches_are_unitary() {
        let spec = six_state();
        assert_eq!(spec.branches().len(), 3);
        let total: f64 = spec.branches().iter().map(|b| b.weight).sum();
        assert!((total - 1.0).abs() < 1e-12);
        for b in spec.branches() {
            assert!(b.encoder.unitarity_defect() < 1e-15);
            assert!(b.decoder.unitarity_defect() < 1e-15);
        }
    }

    #[test]
    fn cyclic_clifford_permutes_paulis() {
        let c = cyclic_clifford();
        assert!(c.unitarity_defect() < 1e-15);
        let sx = ComplexMatrix::from_real(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let sz = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap();
        let sy = ComplexMatrix::from_vec(
            2,
            2,
            vec![C64::new(0.0, 0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), C64::new(0.0, 0.0)],
        )
        .unwrap();
        assert!(c.sandwich(&sx).approx_eq(&sy, 1e-15));
        assert!(c.sandwich(&sy).approx_eq(&sz, 1e-15));
        assert!(c.sandwich(&sz).approx_eq(&sx, 1e-15));
    }

    #[test]
    fn six_state_bases_are_z_x_y() {
        let spec = six_state();
        for (k, br) in spec.branches().iter().enumerate() {
            let a = &br.encoder;
            let expected_weight = if k == 0 { 1.0 } else { 0.5 };
            assert!((a[(0, 0)].norm_sqr() - expected_weight).abs() < 1e-15);
        }
        // x basis: real relative phase; y basis: imaginary relative phase
        let x_row = &spec.branches()[1].encoder;
        let ratio = x_row[(0, 1)] / x_row[(0, 0)];
        assert!((ratio.norm() - 1.0).abs() < 1e-15 && ratio.im.abs() < 1e-15);
        let y_row = &spec.branches()[2].encoder;
        let ratio = y_row[(0, 1)] / y_row[(0, 0)];
        assert!(ratio.re.abs() < 1e-15 && (ratio.im.abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn b92_operators_follow_signal_states() {
        let overlap = 0.6;
        let spec = b92(overlap).unwrap();
        let (p0, p1) = b92_signal_states(overlap).unwrap();
        let br = &spec.branches()[0];
        // rows of A are the conjugated-signal bras, i.e. the signal amplitudes
        assert!((br.encoder[(0, 0)] - p0[0]).norm() < 1e-15);
        assert!((br.encoder[(0, 1)] - p0[1]).norm() < 1e-15);
        assert!((br.encoder[(1, 1)] - p1[1]).norm() < 1e-15);
        // B sends φ0 only to |0> and φ1 only to |1> (unambiguous discrimination)
        let b0 = br.decoder.apply(&p0);
        let b1 = br.decoder.apply(&p1);
        assert!(b0[1].norm() < 1e-15 && b0[0].norm() > 0.1);
        assert!(b1[0].norm() < 1e-15 && b1[1].norm() > 0.1);
        // filter is not unitary
        assert!(br.decoder.unitarity_defect() > 0.1);
        assert!(br.encoder.unitarity_defect() > 0.1);
        let inner = p0[0].conj() * p1[0] + p0[1].conj() * p1[1];
        assert!((inner.re - overlap).abs() < 1e-15);
    }

    #[test]
    fn b92_rejects_bad_overlap() {
        for bad in [0.0, 1.0, -0.2, 1.5, f64::NAN] {
            assert!(b92(bad).is_err());
        }
    }

    #[test]
    fn lookup() {
        assert_eq!(by_name("BB84", None).unwrap().name(), "bb84");
        assert_eq!(by_name("six-state", None).unwrap().name(), "six-state");
        assert_eq!(by_name("b92", Some(0.5)).unwrap().overlap(), Some(0.5));
        assert!(by_name("e91", None).is_err());
    }
}
