//! Small dense complex linear algebra, quantum states and entropies.

pub mod bell;
pub mod eigen;
pub mod entropy;
pub mod matrix;
pub mod state;

pub use bell::{bell_basis_matrix, bell_diagonal_state, bell_state, purify};
pub use eigen::{eig_hermitian, eigvals_hermitian, HermitianEigen};
pub use entropy::{binary_entropy, shannon_entropy, von_neumann_entropy};
pub use matrix::{ComplexMatrix, C64, MAX_DIM};
pub use state::{partial_trace, tensor, DensityOperator, PureState, Tensor};
