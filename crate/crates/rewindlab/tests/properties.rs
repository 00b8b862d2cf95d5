use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rewindlab::circuit::RecycleTarget;
use rewindlab::closedform::{conv_fidelity, hybrid_general, noisy_conv_fidelity};
use rewindlab::noise::{channel_stats, channel_stats_contracted, random_channel, ChannelStats};
use rewindlab::pathcount::{count_paths_dp, count_paths_reflection, count_paths_trig, BandConstraint, LatticePoint, PathBackend};
use rewindlab::statmech::transfer_fidelity;

proptest! {
    #[test]
    fn path_backends_agree(s in -6i64..=0, width in 0i64..8, a in -10i64..10, dx in 0i64..12, dy in 0i64..12, off in 0i64..8) {
        let band = BandConstraint::new(s, s + width);
        let from = LatticePoint::new(a, a + s + off.min(width));
        let to = LatticePoint::new(from.x + dx, from.y + dy);
        prop_assume!(band.contains(to));
        let dp = count_paths_dp(from, to, band);
        prop_assert_eq!(count_paths_reflection(from, to, band).unwrap(), dp.clone());
        prop_assert_eq!(count_paths_trig(from, to, band).unwrap(), dp);
    }

    #[test]
    fn conv_fidelity_increases_with_n(q in 2u32..6, n in 3usize..30, i in 1usize..30) {
        prop_assume!(i < n);
        let f = |n| conv_fidelity(q, n, RecycleTarget::Single(i)).unwrap().rational().clone();
        prop_assert!(f(n + 1) > f(n));
    }

    #[test]
    fn prefix_fidelity_decreases_with_k(q in 2u32..5, n in 4usize..16, k in 1usize..15) {
        prop_assume!(k + 1 < n);
        let f = |k| conv_fidelity(q, n, RecycleTarget::Prefix(k)).unwrap().rational().clone();
        prop_assert!(f(k + 1) <= f(k));
    }

    #[test]
    fn hybrid_fidelity_increases_with_n(q in 2u32..4, n in 3usize..10, m in 1usize..5) {
        let f = |n| hybrid_general(q, n, m, PathBackend::Reflection).unwrap().rational().clone();
        prop_assert!(f(n + 1) > f(n));
    }

    #[test]
    fn random_channel_parameters_are_physical(q in 2u32..4, kraus in 1usize..5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ch = random_channel(q, 1, kraus, &mut rng);
        let s = channel_stats(&ch);
        prop_assert!(s.alpha >= -1e-12 && s.alpha <= 1.0 + 1e-12);
        prop_assert!(s.beta >= -1e-12 && s.beta <= 1.0 + 1e-12);
        let c = channel_stats_contracted(&ch);
        prop_assert!((s.alpha - c.alpha).abs() < 1e-10);
        prop_assert!((s.beta - c.beta).abs() < 1e-10);
    }

    #[test]
    fn noisy_chain_reduces_to_the_noiseless_one(q in 2u32..5, n in 3usize..14, i in 1usize..13) {
        prop_assume!(i < n);
        let exact = conv_fidelity(q, n, RecycleTarget::Single(i)).unwrap().to_f64();
        let chain = transfer_fidelity(q, n, RecycleTarget::Single(i), &ChannelStats::identity()).unwrap().to_f64();
        let closed = noisy_conv_fidelity(q, n, 1.0, 1.0, i).unwrap().to_f64();
        prop_assert!((exact - chain).abs() < 1e-12);
        prop_assert!((exact - closed).abs() < 1e-12);
    }
}

#[test]
fn a_traceless_unitary_has_zero_alpha() {
    use nalgebra::DMatrix;
    use num_complex::Complex64;
    let x = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0].map(|v| Complex64::new(v, 0.0)));
    let ch = rewindlab::noise::KrausChannel::new(2, 1, vec![x]).unwrap();
    let s = channel_stats(&ch);
    assert_eq!(s.alpha, 0.0);
    assert_eq!(s.beta, 1.0);
}
