//! Ground truth by direct simulation: the exact second-moment contraction of
//! the four-copy state, and Monte Carlo over Haar-random gates.

mod dense;
mod haar;
mod mc;

pub use dense::{exact_twirl_fidelity, exact_twirl_fidelity_with, NoisePlacement, DENSE_CAP};
pub use haar::haar_unitary;
pub use mc::{mc_average_fidelity, mc_average_fidelity_with, run_sample, McOptions};
