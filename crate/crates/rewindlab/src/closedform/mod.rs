//! Closed forms for the noiseless families and the noisy convolutional chain.

mod conv;
mod hybrid;
mod local;
mod noisy;

pub use conv::{conv_correlation, conv_fidelity};
pub use hybrid::{
    hybrid_fidelity, hybrid_general, hybrid_m1, hybrid_m2, hybrid_m3, hybrid_m3_constant_term, hybrid_n3, touch_sum, TouchSet,
    HYBRID_M_CAP, HYBRID_N_CAP,
};
pub use local::local_fidelity;
pub use noisy::{
    noisy_conv_correlation_limit, noisy_conv_correlation_limit_q2p1, noisy_conv_fidelity, noisy_conv_fidelity_long_exponent,
    noisy_sup,
};

use num_rational::BigRational;

use crate::exact::{decay, frac, int};

/// `(q-1)/q`, the infidelity scale shared by every family.
fn gap(q: u32) -> BigRational {
    frac(q as i64 - 1, q as i64)
}

fn one() -> BigRational {
    int(1)
}

fn lambda(q: u32) -> BigRational {
    decay(q)
}
