//! Density operators and pure states on labelled tensor-product spaces.

use super::eigen::eigvals_hermitian;
use super::matrix::{ComplexMatrix, C64, MAX_DIM, ZERO};
use crate::error::{Error, Result};

/// Tolerance on Hermiticity, trace and eigenvalue sign when a state is built.
pub const STATE_TOL: f64 = 1e-10;

fn check_dims(dims: &[usize], total: usize) -> Result<()> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::ShapeMismatch(format!("invalid subsystem dims {dims:?}")));
    }
    let prod: usize = dims.iter().product();
    if prod > MAX_DIM {
        return Err(Error::DimensionTooLarge(prod));
    }
    if prod != total {
        return Err(Error::ShapeMismatch(format!(
            "dims {dims:?} multiply to {prod}, matrix dimension is {total}"
        )));
    }
    Ok(())
}

/// Hermitian, positive semidefinite, unit-trace matrix with its subsystem layout.
///
/// The spectrum is computed once at construction; it doubles as the
/// positivity check and feeds [`von_neumann_entropy`].
#[derive(Debug, Clone)]
pub struct DensityOperator {
    dims: Vec<usize>,
    matrix: ComplexMatrix,
    spectrum: Vec<f64>,
}

impl DensityOperator {
    pub fn new(dims: Vec<usize>, matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::ShapeMismatch("density matrix must be square".into()));
        }
        check_dims(&dims, matrix.rows())?;
        let defect = matrix.hermiticity_defect();
        if defect > STATE_TOL {
            return Err(Error::NotHermitian(defect));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STATE_TOL || tr.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let mut spectrum = eigvals_hermitian(&matrix)?;
        if spectrum[0] < -STATE_TOL {
            return Err(Error::InvalidState(format!(
                "negative eigenvalue {:.3e}",
                spectrum[0]
            )));
        }
        for e in &mut spectrum {
            if *e < 0.0 {
                *e = 0.0;
            }
        }
        Ok(Self {
            dims,
            matrix,
            spectrum,
        })
    }

    /// Divides by the trace before validating.
    pub fn normalized(dims: Vec<usize>, matrix: ComplexMatrix) -> Result<Self> {
        let tr = matrix.trace().re;
        if tr.abs() < 1e-300 {
            return Err(Error::VanishingTrace(tr));
        }
        Self::new(dims, matrix.scale_real(1.0 / tr))
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Result<Self> {
        let n: usize = dims.iter().product();
        Self::new(dims, ComplexMatrix::identity(n).scale_real(1.0 / n as f64))
    }

    pub fn from_pure(psi: &PureState) -> Self {
        let m = ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes());
        Self::new(psi.dims().to_vec(), m).expect("projector onto a unit vector is a valid state")
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Eigenvalues ascending, with roundoff negatives clamped to zero.
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let matrix = self.matrix.kron(&other.matrix);
        Self::new(dims, matrix).expect("product of valid states is valid")
    }

    /// Reduced state on the subsystems in `keep` (kept in their original order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<Self> {
        let count = self.dims.len();
        if keep.is_empty() {
            return Err(Error::ShapeMismatch("partial trace must keep a subsystem".into()));
        }
        let mut kept = vec![false; count];
        for &k in keep {
            if k >= count || kept[k] {
                return Err(Error::InvalidSubsystem { index: k, count });
            }
            kept[k] = true;
        }

        let out_dims: Vec<usize> = (0..count).filter(|&k| kept[k]).map(|k| self.dims[k]).collect();
        let out_n: usize = out_dims.iter().product();
        let n = self.dim();
        let digits: Vec<Vec<usize>> = (0..n).map(|i| decompose(i, &self.dims)).collect();
        let split = |d: &[usize]| -> (usize, Vec<usize>) {
            let mut idx = 0;
            let mut rest = Vec::new();
            for k in 0..count {
                if kept[k] {
                    idx = idx * self.dims[k] + d[k];
                } else {
                    rest.push(d[k]);
                }
            }
            (idx, rest)
        };
        let parts: Vec<(usize, Vec<usize>)> = digits.iter().map(|d| split(d)).collect();

        let mut out = ComplexMatrix::zeros(out_n, out_n);
        for i in 0..n {
            for j in 0..n {
                if parts[i].1 == parts[j].1 {
                    out[(parts[i].0, parts[j].0)] += self.matrix[(i, j)];
                }
            }
        }
        // re-symmetrize away summation-order asymmetry
        let out = ComplexMatrix::from_fn(out_n, out_n, |i, j| (out[(i, j)] + out[(j, i)].conj()) * 0.5);
        Self::new(out_dims, out)
    }

    /// Convex combination `Σ w_k ρ_k`; all states must share `dims`.
    pub fn mixture(parts: &[(f64, &DensityOperator)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::ShapeMismatch("empty mixture".into()))?
            .1;
        let mut acc = ComplexMatrix::zeros(first.dim(), first.dim());
        for (w, rho) in parts {
            if rho.dims != first.dims {
                return Err(Error::ShapeMismatch("mixture of states with different dims".into()));
            }
            acc = &acc + &rho.matrix.scale_real(*w);
        }
        Self::new(first.dims.clone(), acc)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dims == other.dims && self.matrix.approx_eq(&other.matrix, tol)
    }
}

fn decompose(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = index % dims[k];
        index /= dims[k];
    }
    out
}

/// Unit vector on a labelled tensor-product space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    amplitudes: Vec<C64>,
}

impl PureState {
    pub fn new(dims: Vec<usize>, amplitudes: Vec<C64>) -> Result<Self> {
        check_dims(&dims, amplitudes.len())?;
        let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!("vector norm {norm} differs from 1")));
        }
        Ok(Self { dims, amplitudes })
    }

    /// Computational basis vector `|index>` on a space with the given dims.
    pub fn basis(dims: Vec<usize>, index: usize) -> Result<Self> {
        let n: usize = dims.iter().product();
        if index >= n {
            return Err(Error::ShapeMismatch(format!("basis index {index} >= dimension {n}")));
        }
        let mut amps = vec![ZERO; n];
        amps[index] = C64::new(1.0, 0.0);
        Self::new(dims, amps)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn tensor(&self, other: &Self) -> Self {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Self { dims, amplitudes }
    }

    /// Reduced state on `keep`, computed as `M M†` from the amplitude matrix
    /// rather than through the full projector.
    pub fn reduced_state(&self, keep: &[usize]) -> Result<DensityOperator> {
        let count = self.dims.len();
        let mut kept = vec![false; count];
        for &k in keep {
            if k >= count || kept[k] {
                return Err(Error::InvalidSubsystem { index: k, count });
            }
            kept[k] = true;
        }
        if keep.is_empty() {
            return Err(Error::ShapeMismatch("partial trace must keep a subsystem".into()));
        }
        let out_dims: Vec<usize> = (0..count).filter(|&k| kept[k]).map(|k| self.dims[k]).collect();
        let out_n: usize = out_dims.iter().product();
        let rest_n = self.amplitudes.len() / out_n;
        // m[kept_index][rest_index]
        let mut m = vec![ZERO; out_n * rest_n];
        for (i, a) in self.amplitudes.iter().enumerate() {
            let d = decompose(i, &self.dims);
            let (mut ki, mut ri) = (0, 0);
            for k in 0..count {
                if kept[k] {
                    ki = ki * self.dims[k] + d[k];
                } else {
                    ri = ri * self.dims[k] + d[k];
                }
            }
            m[ki * rest_n + ri] = *a;
        }
        let rho = ComplexMatrix::from_fn(out_n, out_n, |i, j| {
            (0..rest_n).map(|r| m[i * rest_n + r] * m[j * rest_n + r].conj()).sum()
        });
        DensityOperator::new(out_dims, rho)
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Either kind of state; `tensor` is defined within a kind.
pub trait Tensor: Sized {
    fn tensor_with(&self, other: &Self) -> Self;
}

impl Tensor for DensityOperator {
    fn tensor_with(&self, other: &Self) -> Self {
        self.tensor(other)
    }
}

impl Tensor for PureState {
    fn tensor_with(&self, other: &Self) -> Self {
        self.tensor(other)
    }
}

pub fn tensor<T: Tensor>(a: &T, b: &T) -> T {
    a.tensor_with(b)
}

pub fn partial_trace(rho: &DensityOperator, keep: &[usize]) -> Result<DensityOperator> {
    rho.partial_trace(keep)
}
