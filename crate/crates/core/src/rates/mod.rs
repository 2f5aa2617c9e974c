//! Rate function `S(U|E) - H(U|Y)`, the sup-inf lower bound, the bitwise upper
//! bound and threshold searches.

pub mod bounds;
pub mod eve;
pub mod optimize;
pub mod threshold;

pub use bounds::{evaluate, h_u_given_y, inner_min, lower_bound, rate, upper_bound_bitwise, BoundKind, InnerMin, RateReport};
pub use eve::{eve_conditionals, s_u_given_e, EveConditionals, PreprocessingParams};
pub use optimize::{Extremum, OptimizerConfig};
pub use threshold::{threshold, ThresholdReport, POSITIVITY_EPS};
