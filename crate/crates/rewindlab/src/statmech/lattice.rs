use serde::{Deserialize, Serialize};

use super::Spin;
use crate::circuit::{GateLayout, RecycleTarget};
use crate::error::{Error, Result};

/// Where a vertex input (or a final leg) comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Source {
    Node(usize),
    /// Initial state of a qudit, indexed by `qudit - 1`.
    Boundary(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundaryKind {
    /// `|0000>`: overlap 1 with both permutation states.
    Recycled,
    /// `|00>|Phi>`: overlap q with the identity state and 1 with the swap.
    Kept,
}

impl BoundaryKind {
    pub fn overlap(self, q: i64, tau: Spin) -> i64 {
        match (self, tau) {
            (BoundaryKind::Recycled, _) => 1,
            (BoundaryKind::Kept, Spin::One) => q,
            (BoundaryKind::Kept, Spin::S) => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NodeKind {
    Solid,
    Dotted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeNode {
    pub kind: NodeKind,
    pub qudits: (usize, usize),
    pub lower: Source,
    pub upper: Source,
}

/// Spin model of one rewound circuit. Nodes are listed in gate order, so every
/// input refers to an earlier node or to an initial boundary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagramLattice {
    pub q: u32,
    pub n: usize,
    pub nodes: Vec<LatticeNode>,
    pub boundaries: Vec<BoundaryKind>,
    /// Last writer of each qudit; contracted with the swap state.
    pub finals: Vec<Source>,
    /// Solid nodes fed directly by a recycled boundary: where walls can start.
    pub starts: Vec<usize>,
    /// Dotted nodes: always emit the identity spin.
    pub forbidden: Vec<usize>,
    /// Last node on qudit 1.
    pub end: Option<usize>,
}

impl DiagramLattice {
    pub fn solid_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.kind == NodeKind::Solid).count()
    }

    pub fn recycled_count(&self) -> usize {
        self.boundaries.iter().filter(|b| **b == BoundaryKind::Recycled).count()
    }

    /// Free two-valued variables of the exhaustive sum: one per solid node and
    /// one per recycled boundary.
    pub fn free_count(&self) -> usize {
        self.solid_count() + self.recycled_count()
    }

    /// Variable numbering shared by the evaluators: solid nodes first, in
    /// order, then recycled boundaries by qudit.
    pub(crate) fn variables(&self) -> Vars {
        let mut node_var = vec![None; self.nodes.len()];
        let mut k = 0;
        for (i, node) in self.nodes.iter().enumerate() {
            if node.kind == NodeKind::Solid {
                node_var[i] = Some(k);
                k += 1;
            }
        }
        let mut boundary_var = vec![None; self.boundaries.len()];
        for (b, kind) in self.boundaries.iter().enumerate() {
            if *kind == BoundaryKind::Recycled {
                boundary_var[b] = Some(k);
                k += 1;
            }
        }
        Vars { node_var, boundary_var, count: k }
    }
}

pub(crate) struct Vars {
    pub node_var: Vec<Option<usize>>,
    pub boundary_var: Vec<Option<usize>>,
    pub count: usize,
}

/// A spin read by a vertex: a free variable, or the identity spin (dotted
/// outputs and kept boundaries).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SpinRef {
    Var(usize),
    One,
}

impl Vars {
    pub fn resolve(&self, lattice: &DiagramLattice, src: Source) -> SpinRef {
        match src {
            Source::Node(i) => self.node_var[i].map_or(SpinRef::One, SpinRef::Var),
            Source::Boundary(b) => match lattice.boundaries[b] {
                BoundaryKind::Recycled => SpinRef::Var(self.boundary_var[b].expect("recycled boundary has a variable")),
                BoundaryKind::Kept => SpinRef::One,
            },
        }
    }
}

/// Builds the spin model of a rewound layout. Rewound gates become solid
/// vertices, gates that stay become dotted vertices.
pub fn lattice_from_circuit(layout: &GateLayout, target: RecycleTarget) -> Result<DiagramLattice> {
    let n = layout.n();
    target.validate(n)?;
    if !layout.is_rewound() {
        return Err(Error::UnsupportedFamily("layout has no rewound gates; apply the rewinding first".into()));
    }
    let mask = layout.rewound_mask();
    let recycled = target.qudits();
    let boundaries: Vec<BoundaryKind> = (1..=n)
        .map(|j| if recycled.contains(&j) { BoundaryKind::Recycled } else { BoundaryKind::Kept })
        .collect();
    let mut last: Vec<Source> = (0..n).map(Source::Boundary).collect();
    let mut nodes = Vec::new();
    let mut starts = Vec::new();
    let mut forbidden = Vec::new();
    for (k, slot) in layout.forward().enumerate() {
        let (a, b) = slot.qudits;
        if b != a + 1 || a == 0 || b > n {
            return Err(Error::UnsupportedFamily(format!("gate on ({a},{b}) is not nearest-neighbour")));
        }
        let kind = if mask[k] { NodeKind::Solid } else { NodeKind::Dotted };
        let node = LatticeNode { kind, qudits: (a, b), lower: last[a - 1], upper: last[b - 1] };
        let id = nodes.len();
        let fed_by_recycled = [node.lower, node.upper]
            .iter()
            .any(|s| matches!(s, Source::Boundary(x) if boundaries[*x] == BoundaryKind::Recycled));
        match kind {
            NodeKind::Solid if fed_by_recycled => starts.push(id),
            NodeKind::Dotted => forbidden.push(id),
            _ => {}
        }
        nodes.push(node);
        last[a - 1] = Source::Node(id);
        last[b - 1] = Source::Node(id);
    }
    let end = match last[0] {
        Source::Node(i) => Some(i),
        Source::Boundary(_) => None,
    };
    Ok(DiagramLattice { q: layout.q(), n, nodes, boundaries, finals: last, starts, forbidden, end })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{rewound, CircuitShape};

    #[test]
    fn conv_chain() {
        let layout = rewound(CircuitShape::conv(5, 2).unwrap(), RecycleTarget::Single(1)).unwrap();
        let lat = lattice_from_circuit(&layout, RecycleTarget::Single(1)).unwrap();
        assert_eq!(lat.solid_count(), 3);
        assert_eq!(lat.forbidden, vec![3]);
        assert_eq!(lat.starts, vec![0]);
        assert_eq!(lat.nodes[1].lower, Source::Node(0));
        assert_eq!(lat.nodes[1].upper, Source::Boundary(2));
        assert_eq!(lat.end, Some(0));
    }

    #[test]
    fn prefix_boundaries() {
        let layout = rewound(CircuitShape::conv(6, 2).unwrap(), RecycleTarget::Prefix(3)).unwrap();
        let lat = lattice_from_circuit(&layout, RecycleTarget::Prefix(3)).unwrap();
        let rec: Vec<bool> = lat.boundaries.iter().map(|b| *b == BoundaryKind::Recycled).collect();
        assert_eq!(rec, vec![true, true, true, false, false, false]);
    }

    #[test]
    fn pair_boundaries() {
        let layout = rewound(CircuitShape::conv(6, 2).unwrap(), RecycleTarget::Pair(4, 2)).unwrap();
        let lat = lattice_from_circuit(&layout, RecycleTarget::Pair(4, 2)).unwrap();
        assert_eq!(lat.boundaries[1], BoundaryKind::Recycled);
        assert_eq!(lat.boundaries[3], BoundaryKind::Recycled);
        assert_eq!(lat.recycled_count(), 2);
    }
}
