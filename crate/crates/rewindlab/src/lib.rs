//! Haar-averaged fidelity of the qudit-rewinding protocol, computed by
//! several independent routes: closed forms, single-domain-wall sums,
//! exhaustive spin sums, transfer matrices, and direct simulation.
//!
//! ```
//! use rewindlab::circuit::{rewound, CircuitShape, RecycleTarget};
//! use rewindlab::closedform::conv_fidelity;
//! use rewindlab::oracle::exact_twirl_fidelity;
//!
//! let target = RecycleTarget::Single(1);
//! let closed = conv_fidelity(2, 3, target).unwrap();
//! assert_eq!(closed.rational().to_string(), "3/5");
//!
//! let layout = rewound(CircuitShape::conv(3, 2).unwrap(), target).unwrap();
//! let twirl = exact_twirl_fidelity(&layout, target, None).unwrap();
//! assert!((twirl.to_f64() - 0.6).abs() < 1e-12);
//! ```

pub mod circuit;
pub mod closedform;
pub mod error;
pub mod exact;
pub mod noise;
pub mod oracle;
pub mod pathcount;
pub mod result;
pub mod statmech;

pub use error::{Error, Result};
pub use result::{FidelityResult, Method, Value};

/// Guide chapters, compiled here so their examples run as doctests.
pub mod guide {
    #[doc = include_str!("../../../book/src/overview.md")]
    pub mod overview {}
    #[doc = include_str!("../../../book/src/circuits.md")]
    pub mod circuits {}
    #[doc = include_str!("../../../book/src/paths.md")]
    pub mod paths {}
    #[doc = include_str!("../../../book/src/walls.md")]
    pub mod walls {}
    #[doc = include_str!("../../../book/src/closed-forms.md")]
    pub mod closed_forms {}
    #[doc = include_str!("../../../book/src/noise.md")]
    pub mod noise {}
    #[doc = include_str!("../../../book/src/oracles.md")]
    pub mod oracles {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}
