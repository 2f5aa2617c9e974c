//! Bounds on the asymptotic secret-key rate of one-way QKD protocols.
//!
//! Alice and Bob's raw key comes from z-basis measurements of a two-qubit
//! Bell-diagonal state; Eve holds its purification. The lower bound is
//! `max_q min_λ [S(U|E) - H(U|Y)]`, where Alice flips each raw bit with
//! probability `q` before error correction and `λ` ranges over the Bell spectra
//! compatible with the observed noise. The bitwise upper bound swaps the order
//! of the two optimizations.

pub mod error;
pub mod protocol;
pub mod qmat;
pub mod rates;

pub use error::{Error, Result};
