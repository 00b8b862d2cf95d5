use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use super::lattice::{DiagramLattice, NodeKind, Source, SpinRef, Vars};
use super::rules::{link_overlap, noisy_weight, TrivalentRule};
use super::Spin;
use crate::error::{Error, Result};
use crate::exact::{frac, int, powi, wall_unit};
use crate::result::{FidelityResult, Method};

pub const DEFAULT_FREE_CAP: usize = 24;

const CHUNK_BITS: usize = 12;

/// A node reduced to what the evaluators read.
#[derive(Clone, Copy)]
pub(crate) struct Compiled {
    pub solid: bool,
    pub lower: SpinRef,
    pub upper: SpinRef,
    /// Channel weight of the input links: inputs coming out of another node
    /// pass through two channels, initial states through none.
    pub lower_from_node: bool,
    pub upper_from_node: bool,
    pub out: Option<usize>,
}

pub(crate) struct Model {
    pub vars: Vars,
    pub nodes: Vec<Compiled>,
    pub finals: Vec<SpinRef>,
    pub recycled: usize,
    pub kept: usize,
}

pub(crate) fn compile(lattice: &DiagramLattice) -> Model {
    let vars = lattice.variables();
    let nodes = lattice
        .nodes
        .iter()
        .enumerate()
        .map(|(i, node)| Compiled {
            solid: node.kind == NodeKind::Solid,
            lower: vars.resolve(lattice, node.lower),
            upper: vars.resolve(lattice, node.upper),
            lower_from_node: matches!(node.lower, Source::Node(_)),
            upper_from_node: matches!(node.upper, Source::Node(_)),
            out: vars.node_var[i],
        })
        .collect();
    let finals = lattice.finals.iter().map(|s| vars.resolve(lattice, *s)).collect();
    let recycled = lattice.recycled_count();
    Model { vars, nodes, finals, recycled, kept: lattice.boundaries.len() - recycled }
}

#[inline]
fn spin(r: SpinRef, bits: u64) -> Spin {
    match r {
        SpinRef::One => Spin::One,
        SpinRef::Var(k) => Spin::from_bit(bits >> k & 1 == 1),
    }
}

/// Prefactor from writing the initial states in the spin basis: a recycled
/// `|0000>` is `(|1> + |s>)/(q(q+1))`, a kept qudit is `|1>/q`.
pub(crate) fn boundary_prefactor(q: u32, model: &Model) -> BigRational {
    let q = q as i64;
    powi(&frac(1, q * (q + 1)), model.recycled as i64) * powi(&frac(1, q), model.kept as i64)
}

/// Weight of a noiseless configuration as `(walls, qpow)`: the product is
/// `(q/(1+q^2))^walls * q^qpow`, or `None` when it vanishes.
fn noiseless_exponents(model: &Model, bits: u64) -> Option<(u32, i32)> {
    let mut walls = 0u32;
    let mut qpow = 0i32;
    for node in &model.nodes {
        let (a, b) = (spin(node.lower, bits), spin(node.upper, bits));
        if node.solid {
            let out = spin(SpinRef::Var(node.out.expect("solid node has a variable")), bits);
            if a != b {
                walls += 1;
            } else if out != a {
                return None;
            }
        } else {
            qpow -= (a == Spin::S) as i32 + (b == Spin::S) as i32;
        }
    }
    for f in &model.finals {
        qpow += if spin(*f, bits) == Spin::S { 2 } else { 1 };
    }
    Some((walls, qpow))
}

fn noisy_configuration(model: &Model, q: f64, alpha: f64, beta: f64, bits: u64) -> f64 {
    let mut w = 1.0;
    for node in &model.nodes {
        let (a, b) = (spin(node.lower, bits), spin(node.upper, bits));
        if node.solid {
            let out = spin(SpinRef::Var(node.out.expect("solid node has a variable")), bits);
            let ka = if node.lower_from_node { beta } else { 1.0 };
            let kb = if node.upper_from_node { beta } else { 1.0 };
            w *= noisy_weight(q, ka, kb, (a, b, out));
        } else {
            let walls = (a == Spin::S) as i32 + (b == Spin::S) as i32;
            w *= q.powi(-walls);
        }
        if w == 0.0 {
            return 0.0;
        }
    }
    for f in &model.finals {
        w *= link_overlap(q, alpha, Spin::S, spin(*f, bits));
    }
    w
}

fn check_cap(lattice: &DiagramLattice, cap: usize) -> Result<usize> {
    let free = lattice.free_count();
    if free > cap || free > 62 {
        return Err(Error::TooLarge(format!("{free} free spins exceed the cap of {cap}")));
    }
    Ok(free)
}

fn chunks(free: usize) -> (u64, u64) {
    let chunk_bits = CHUNK_BITS.min(free);
    (1u64 << (free - chunk_bits), 1u64 << chunk_bits)
}

/// Sum over every spin assignment with the default cap on free spins.
pub fn partition_sum_exhaustive(lattice: &DiagramLattice, rule: TrivalentRule) -> Result<FidelityResult> {
    partition_sum_exhaustive_capped(lattice, rule, DEFAULT_FREE_CAP)
}

pub fn partition_sum_exhaustive_capped(lattice: &DiagramLattice, rule: TrivalentRule, cap: usize) -> Result<FidelityResult> {
    let free = check_cap(lattice, cap)?;
    let model = compile(lattice);
    let q = lattice.q;
    match rule {
        TrivalentRule::Solid { .. } | TrivalentRule::Dotted { .. } => {
            let (n_chunks, size) = chunks(free);
            let counts = (0..n_chunks)
                .into_par_iter()
                .map(|c| {
                    let mut local: BTreeMap<(u32, i32), u64> = BTreeMap::new();
                    for bits in c * size..(c + 1) * size {
                        if let Some(key) = noiseless_exponents(&model, bits) {
                            *local.entry(key).or_default() += 1;
                        }
                    }
                    local
                })
                .reduce(BTreeMap::new, |mut a, b| {
                    for (k, v) in b {
                        *a.entry(k).or_default() += v;
                    }
                    a
                });
            let r = wall_unit(q);
            let qq = int(q as i64);
            let mut total = BigRational::from_integer(BigInt::from(0));
            for ((walls, qpow), count) in counts {
                total += powi(&r, walls as i64) * powi(&qq, qpow as i64) * BigRational::from_integer(BigInt::from(count));
            }
            Ok(FidelityResult::exact(total * boundary_prefactor(q, &model), Method::Sum))
        }
        TrivalentRule::Noisy { alpha, beta, .. } => {
            let (n_chunks, size) = chunks(free);
            let qf = q as f64;
            let partial: Vec<f64> = (0..n_chunks)
                .into_par_iter()
                .map(|c| (c * size..(c + 1) * size).map(|bits| noisy_configuration(&model, qf, alpha, beta, bits)).sum())
                .collect();
            let pre = qf.powi(-(model.kept as i32)) / (qf * (qf + 1.0)).powi(model.recycled as i32);
            Ok(FidelityResult::real(pre * partial.iter().sum::<f64>(), Method::Sum))
        }
        TrivalentRule::General { .. } => Err(Error::InvalidParameter(
            "the configuration sum takes the single-qudit (alpha, beta) rule; use the oracle for general channels".into(),
        )),
    }
}

/// Noiseless configurations with nonzero weight, as bit masks over the free
/// spins (solid nodes first, then recycled boundaries).
pub fn nonzero_configurations(lattice: &DiagramLattice) -> Result<Vec<u64>> {
    let free = check_cap(lattice, DEFAULT_FREE_CAP)?;
    let model = compile(lattice);
    Ok((0..1u64 << free).filter(|&bits| noiseless_exponents(&model, bits).is_some()).collect())
}

/// True when every solid node carrying `s` only has `s` among its free
/// inputs, i.e. the `s` region is closed towards the initial states.
pub fn s_region_is_closed(lattice: &DiagramLattice, bits: u64) -> bool {
    let model = compile(lattice);
    model.nodes.iter().filter(|n| n.solid).all(|node| {
        let out = spin(SpinRef::Var(node.out.expect("solid node has a variable")), bits);
        out == Spin::One
            || [node.lower, node.upper].iter().all(|r| matches!(r, SpinRef::One) || spin(*r, bits) == Spin::S)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{rewound, CircuitShape, RecycleTarget};
    use crate::statmech::lattice_from_circuit;

    fn conv(n: usize, q: u32, target: RecycleTarget) -> DiagramLattice {
        lattice_from_circuit(&rewound(CircuitShape::conv(n, q).unwrap(), target).unwrap(), target).unwrap()
    }

    #[test]
    fn conv_single_one() {
        let expect = [frac(3, 5), frac(17, 25), frac(93, 125), frac(497, 625)];
        for (n, e) in (3..7).zip(expect) {
            let r = partition_sum_exhaustive(&conv(n, 2, RecycleTarget::Single(1)), TrivalentRule::Solid { q: 2 }).unwrap();
            assert_eq!(r.rational(), &e, "n={n}");
        }
    }

    #[test]
    fn noisy_at_unit_parameters_is_noiseless() {
        let lat = conv(5, 3, RecycleTarget::Pair(3, 2));
        let exact = partition_sum_exhaustive(&lat, TrivalentRule::Solid { q: 3 }).unwrap().to_f64();
        let noisy = partition_sum_exhaustive(&lat, TrivalentRule::Noisy { q: 3, alpha: 1.0, beta: 1.0 }).unwrap().to_f64();
        assert!((exact - noisy).abs() < 1e-13);
    }

    #[test]
    fn noisy_depolarizing_chain() {
        let lat = conv(4, 2, RecycleTarget::Single(1));
        let v = partition_sum_exhaustive(&lat, TrivalentRule::Noisy { q: 2, alpha: 0.97, beta: 0.9412 }).unwrap().to_f64();
        assert!((v - 0.6646555136).abs() < 1e-9, "{v}");
    }

    #[test]
    fn cap_is_enforced() {
        let lat = conv(6, 2, RecycleTarget::Single(1));
        let r = partition_sum_exhaustive_capped(&lat, TrivalentRule::Solid { q: 2 }, 3);
        assert!(matches!(r, Err(Error::TooLarge(_))));
    }
}
