use rewindlab::circuit::{rewound, CircuitShape, RecycleTarget};
use rewindlab::closedform::{hybrid_fidelity, hybrid_general, local_fidelity};
use rewindlab::noise::{channel_stats, make_channel, ChannelKind};
use rewindlab::oracle::exact_twirl_fidelity;
use rewindlab::pathcount::PathBackend;
use rewindlab::statmech::{lattice_from_circuit, partition_sum_exhaustive, single_wall_fidelity, transfer_fidelity, TrivalentRule};
use rewindlab::Error;

fn lattice(shape: CircuitShape, t: RecycleTarget) -> rewindlab::statmech::DiagramLattice {
    lattice_from_circuit(&rewound(shape, t).unwrap(), t).unwrap()
}

#[test]
fn hybrid_general_formula_matches_the_wall_sum() {
    let t = RecycleTarget::Single(1);
    for q in [2, 3] {
        for n in 3..=6 {
            for m in 1..=4 {
                let lat = lattice(CircuitShape::hybrid(n, m, q).unwrap(), t);
                let wall = single_wall_fidelity(&lat, TrivalentRule::Solid { q }).unwrap();
                let closed = hybrid_general(q, n, m, PathBackend::Reflection).unwrap();
                assert_eq!(wall.rational(), closed.rational(), "q={q} n={n} m={m}");
            }
        }
    }
}

#[test]
fn path_backends_give_the_same_hybrid_values() {
    for n in 3..=8 {
        for m in 1..=4 {
            let r = hybrid_general(2, n, m, PathBackend::Reflection).unwrap();
            for b in [PathBackend::Trig, PathBackend::Dp] {
                assert_eq!(r.rational(), hybrid_general(2, n, m, b).unwrap().rational());
            }
        }
    }
}

#[test]
fn hybrid_dispatch_beyond_the_general_cap() {
    let f = hybrid_fidelity(2, 40, 2).unwrap();
    assert_eq!(f.rational(), &rewindlab::closedform::hybrid_m2(2, 40));
    assert!(matches!(hybrid_fidelity(2, 40, 7), Err(Error::CombinatorialBlowup(_))));
}

#[test]
fn local_closed_form_matches_the_wall_sum() {
    let t = RecycleTarget::Single(1);
    for q in [2, 3] {
        for (n, m) in [(4, 2), (4, 4), (4, 6), (4, 8), (6, 2), (6, 4), (6, 6), (6, 8), (8, 6)] {
            let lat = lattice(CircuitShape::local(n, m, q).unwrap(), t);
            let wall = single_wall_fidelity(&lat, TrivalentRule::Solid { q }).unwrap();
            let closed = local_fidelity(q, n, m).unwrap();
            assert_eq!(wall.rational(), closed.rational(), "q={q} n={n} m={m}");
        }
    }
}

#[test]
fn local_rejects_odd_sizes() {
    assert!(local_fidelity(2, 8, 8).is_ok());
    assert!(local_fidelity(2, 5, 2).is_err());
    assert!(local_fidelity(2, 6, 3).is_err());
}

#[test]
fn noisy_exhaustive_sum_matches_the_chain_and_the_twirl() {
    let ch = make_channel(ChannelKind::Depolarizing(0.04), 2).unwrap();
    let stats = channel_stats(&ch);
    for n in 3..=5 {
        for t in [RecycleTarget::Single(1), RecycleTarget::Single(2), RecycleTarget::Pair(2, 1)] {
            if t.validate(n).is_err() {
                continue;
            }
            let rule = TrivalentRule::Noisy { q: 2, alpha: stats.alpha, beta: stats.beta };
            let lat = lattice(CircuitShape::conv(n, 2).unwrap(), t);
            let sum = partition_sum_exhaustive(&lat, rule).unwrap().to_f64();
            let chain = transfer_fidelity(2, n, t, &stats).unwrap().to_f64();
            let twirl = exact_twirl_fidelity(&rewound(CircuitShape::conv(n, 2).unwrap(), t).unwrap(), t, Some(&ch)).unwrap().to_f64();
            assert!((sum - chain).abs() < 1e-12, "n={n} {t}: {sum} vs {chain}");
            assert!((sum - twirl).abs() < 1e-9, "n={n} {t}: {sum} vs {twirl}");
        }
    }
}

#[test]
fn wall_sum_rejects_noisy_rules() {
    let t = RecycleTarget::Single(1);
    let lat = lattice(CircuitShape::conv(4, 2).unwrap(), t);
    let r = single_wall_fidelity(&lat, TrivalentRule::Noisy { q: 2, alpha: 0.9, beta: 0.9 });
    assert!(matches!(r, Err(Error::NoisyRuleRejected)));
}
