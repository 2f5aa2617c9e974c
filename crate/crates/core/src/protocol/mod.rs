//! QKD protocols as operator data, the maps D1 and D2, and the feasible attack sets.

pub mod b92;
pub mod family;
pub mod maps;
pub mod sampling;
pub mod spec;
pub mod spectrum;

pub use b92::{b92_state, B92State};
pub use family::FeasibleFamily;
pub use maps::{bell_spectrum, d1_map, d2_twirl};
pub use sampling::{random_attack_state, random_two_qubit_state, sample_feasible_set, FeasibleSample, QBER_WINDOW};
pub use spec::{b92, b92_default, bb84, by_name, six_state, Branch, NoiseKind, ProtocolSpec, DEFAULT_B92_OVERLAP};
pub use spectrum::BellSpectrum;
