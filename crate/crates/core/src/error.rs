use thiserror::Error;

/// Errors raised by the state toolbox, the protocol maps and the rate optimizers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix dimension {0} exceeds the supported maximum of 16")]
    DimensionTooLarge(usize),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix is not Hermitian (max |M - M^dagger| = {0:.3e})")]
    NotHermitian(f64),

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {off_norm:.3e})")]
    NoConvergence { sweeps: usize, off_norm: f64 },

    #[error("invalid density operator: {0}")]
    InvalidState(String),

    #[error("invalid subsystem index {index} for {count} subsystems")]
    InvalidSubsystem { index: usize, count: usize },

    #[error("{name} = {value} is outside its domain {domain}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("unknown protocol '{0}' (expected bb84, six-state or b92)")]
    InvalidProtocol(String),

    #[error("all protocol branches annihilate the state (trace {0:.3e})")]
    VanishingTrace(f64),

    #[error("no sampled state matched QBER {qber} within tolerance")]
    NoAcceptedSamples { qber: f64 },

    #[error("no sign change of the rate on [{lo}, {hi}] (rate {f_lo:.3e} .. {f_hi:.3e})")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for failures of a numerical procedure, as opposed to bad input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. } | Error::NoSignChange { .. } | Error::VanishingTrace(_)
        )
    }
}
