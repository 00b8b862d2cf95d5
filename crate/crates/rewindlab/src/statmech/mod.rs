//! The folded, averaged circuit as a two-state spin model, and three ways of
//! evaluating it: the full configuration sum, the single-wall sum and (for
//! the convolutional chain) a 2x2 transfer matrix.

use serde::{Deserialize, Serialize};

mod exhaustive;
mod lattice;
mod rules;
mod transfer;
mod wall;

pub use exhaustive::{
    nonzero_configurations, partition_sum_exhaustive, partition_sum_exhaustive_capped, s_region_is_closed, DEFAULT_FREE_CAP,
};
pub use lattice::{lattice_from_circuit, BoundaryKind, DiagramLattice, LatticeNode, NodeKind, Source};
pub use rules::{
    dotted_weight, fold_overlap, link_overlap, noisy_weight, solid_weight, trivalent_weight, weingarten,
    weingarten_weight, TrivalentRule, WallWeights,
};
pub use transfer::{transfer_fidelity, transfer_pair_correlation, TransferMatrix};
pub use wall::{single_wall_fidelity, single_wall_with_weights};

/// Element of the permutation group on two copies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Spin {
    /// Identity permutation.
    One,
    /// Swap.
    S,
}

impl Spin {
    pub fn from_bit(b: bool) -> Spin {
        if b {
            Spin::S
        } else {
            Spin::One
        }
    }
}
