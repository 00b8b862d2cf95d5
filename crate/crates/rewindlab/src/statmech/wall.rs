//! Single-domain-wall evaluation. In the noiseless model a solid vertex with
//! equal inputs copies them, so a configuration is fixed by the initial spins
//! and by the output chosen wherever a wall passes. Only those vertices branch.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::exhaustive::{boundary_prefactor, compile, Model};
use super::lattice::{DiagramLattice, SpinRef};
use super::rules::{TrivalentRule, WallWeights};
use super::Spin;
use crate::error::{Error, Result};
use crate::exact::{int, powi};
use crate::result::{FidelityResult, Method};

/// Exponents of one wall: solid crossings, dotted vertices with one and two
/// `s` inputs, and the power of q from the final overlaps.
type Tally = (u32, u32, u32, u32);

pub fn single_wall_fidelity(lattice: &DiagramLattice, rule: TrivalentRule) -> Result<FidelityResult> {
    if !rule.is_noiseless() {
        return Err(Error::NoisyRuleRejected);
    }
    single_wall_with_weights(lattice, &WallWeights::new(lattice.q))
}

pub fn single_wall_with_weights(lattice: &DiagramLattice, weights: &WallWeights) -> Result<FidelityResult> {
    let model = compile(lattice);
    let mut tallies: BTreeMap<Tally, u64> = BTreeMap::new();
    let mut spins = vec![Spin::One; model.vars.count];
    let boundary_vars: Vec<usize> = model.vars.boundary_var.iter().flatten().copied().collect();
    for init in 0..1u32 << boundary_vars.len() {
        for (k, &v) in boundary_vars.iter().enumerate() {
            spins[v] = Spin::from_bit(init >> k & 1 == 1);
        }
        walk(&model, 0, &mut spins, (0, 0, 0, 0), &mut tallies);
    }
    let q = int(lattice.q as i64);
    let mut total = BigRational::from_integer(BigInt::from(0));
    for ((bulk, adjacent, end, qpow), count) in tallies {
        total += powi(&weights.bulk, bulk as i64)
            * powi(&weights.boundary_adjacent, adjacent as i64)
            * powi(&weights.endpoint, end as i64)
            * powi(&q, qpow as i64)
            * BigRational::from_integer(BigInt::from(count));
    }
    Ok(FidelityResult::exact(total * boundary_prefactor(lattice.q, &model), Method::Wall))
}

fn read(r: SpinRef, spins: &[Spin]) -> Spin {
    match r {
        SpinRef::One => Spin::One,
        SpinRef::Var(k) => spins[k],
    }
}

fn walk(model: &Model, at: usize, spins: &mut Vec<Spin>, tally: Tally, out: &mut BTreeMap<Tally, u64>) {
    let (bulk, mut adjacent, mut end, mut qpow) = tally;
    let mut i = at;
    while i < model.nodes.len() {
        let node = model.nodes[i];
        let (a, b) = (read(node.lower, spins), read(node.upper, spins));
        if node.solid {
            let k = node.out.expect("solid node has a variable");
            if a == b {
                spins[k] = a;
            } else {
                for s in [Spin::One, Spin::S] {
                    spins[k] = s;
                    walk(model, i + 1, spins, (bulk + 1, adjacent, end, qpow), out);
                }
                return;
            }
        } else {
            match (a == Spin::S) as u8 + (b == Spin::S) as u8 {
                1 => adjacent += 1,
                2 => end += 1,
                _ => {}
            }
        }
        i += 1;
    }
    for f in &model.finals {
        qpow += if read(*f, spins) == Spin::S { 2 } else { 1 };
    }
    *out.entry((bulk, adjacent, end, qpow)).or_default() += 1;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{rewound, CircuitShape, RecycleTarget};
    use crate::exact::frac;
    use crate::statmech::{lattice_from_circuit, partition_sum_exhaustive};

    #[test]
    fn conv_three_qudits() {
        let t = RecycleTarget::Single(1);
        let lat = lattice_from_circuit(&rewound(CircuitShape::conv(3, 2).unwrap(), t).unwrap(), t).unwrap();
        assert_eq!(single_wall_fidelity(&lat, TrivalentRule::Solid { q: 2 }).unwrap().rational(), &frac(3, 5));
    }

    #[test]
    fn rejects_noisy_rules() {
        let t = RecycleTarget::Single(1);
        let lat = lattice_from_circuit(&rewound(CircuitShape::conv(3, 2).unwrap(), t).unwrap(), t).unwrap();
        let r = single_wall_fidelity(&lat, TrivalentRule::Noisy { q: 2, alpha: 0.9, beta: 0.9 });
        assert_eq!(r, Err(Error::NoisyRuleRejected));
    }

    #[test]
    fn matches_the_full_sum_on_hybrid() {
        let t = RecycleTarget::Pair(3, 1);
        let lat = lattice_from_circuit(&rewound(CircuitShape::hybrid(4, 2, 3).unwrap(), t).unwrap(), t).unwrap();
        let wall = single_wall_fidelity(&lat, TrivalentRule::Solid { q: 3 }).unwrap();
        let sum = partition_sum_exhaustive(&lat, TrivalentRule::Solid { q: 3 }).unwrap();
        assert_eq!(wall.rational(), sum.rational());
    }
}
