//! One line per acceptance criterion. Runs without the libtest harness so the
//! lines are printed under a plain `cargo test`.

use std::time::Instant;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rewindlab::circuit::{rewound, CircuitShape, RecycleTarget};
use rewindlab::closedform::{
    conv_correlation, conv_fidelity, hybrid_general, hybrid_m1, hybrid_m2, hybrid_m3, hybrid_n3, local_fidelity,
    noisy_conv_correlation_limit,
};
use rewindlab::exact::{decay, frac, int, powi};
use rewindlab::noise::{channel_stats, make_channel, ChannelKind, ChannelStats};
use rewindlab::oracle::{exact_twirl_fidelity, mc_average_fidelity};
use rewindlab::pathcount::{count_paths_dp, count_paths_reflection, count_paths_trig, BandConstraint, LatticePoint, PathBackend};
use rewindlab::statmech::{
    lattice_from_circuit, partition_sum_exhaustive, single_wall_fidelity, transfer_fidelity, transfer_pair_correlation,
    TrivalentRule,
};

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn conv_targets(n: usize) -> Vec<RecycleTarget> {
    let mut ts: Vec<RecycleTarget> = (1..n).map(RecycleTarget::Single).collect();
    ts.extend((1..=2.min(n - 1)).map(RecycleTarget::Prefix));
    for i in 2..n {
        for j in 1..i {
            ts.push(RecycleTarget::Pair(i, j));
        }
    }
    ts
}

fn route_equality() -> Check {
    let mut exact = 0;
    let mut twirled = 0;
    for q in [2u32, 3] {
        for n in 3..=6 {
            for t in conv_targets(n) {
                let closed = conv_fidelity(q, n, t).map_err(|e| e.to_string())?;
                let layout = rewound(CircuitShape::conv(n, q).unwrap(), t).unwrap();
                let lat = lattice_from_circuit(&layout, t).unwrap();
                let wall = single_wall_fidelity(&lat, TrivalentRule::Solid { q }).unwrap();
                let sum = partition_sum_exhaustive(&lat, TrivalentRule::Solid { q }).unwrap();
                ensure(closed.rational() == wall.rational() && wall.rational() == sum.rational(), || {
                    format!("q={q} n={n} {t}: closed {} wall {} sum {}", closed.rational(), wall.rational(), sum.rational())
                })?;
                exact += 1;
                if q == 2 || n <= 4 {
                    let tw = exact_twirl_fidelity(&layout, t, None).unwrap().to_f64();
                    ensure((tw - closed.to_f64()).abs() < 1e-9, || format!("q={q} n={n} {t}: twirl {tw} vs {}", closed.to_f64()))?;
                    twirled += 1;
                }
            }
        }
    }
    Ok(format!("{exact} instances exact over closed/wall/sum, {twirled} against the twirl"))
}

fn path_theorems() -> Check {
    let mut cases = 0u64;
    let r = -8..=8i64;
    for s in r.clone() {
        for t in s..=8 {
            let band = BandConstraint::new(s, t);
            for a in r.clone() {
                for b in r.clone() {
                    let from = LatticePoint::new(a, b);
                    if !band.contains(from) {
                        continue;
                    }
                    for c in a..=8 {
                        for d in b..=8 {
                            let to = LatticePoint::new(c, d);
                            if !band.contains(to) {
                                continue;
                            }
                            let refl = count_paths_reflection(from, to, band).map_err(|e| e.to_string())?;
                            let trig = count_paths_trig(from, to, band).map_err(|e| e.to_string())?;
                            let dp = count_paths_dp(from, to, band);
                            ensure(refl == trig && trig == dp, || format!("{from:?}->{to:?} band {s}..{t}: {refl} {trig} {dp}"))?;
                            cases += 1;
                        }
                    }
                }
            }
        }
    }
    Ok(format!("{cases} cases, three backends identical"))
}

/// k-th forward difference of a sequence of rationals.
fn difference(xs: &[BigRational], k: usize) -> Vec<BigRational> {
    let mut v = xs.to_vec();
    for _ in 0..k {
        v = v.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    v
}

fn decay_rate() -> Check {
    for q in [2u32, 3, 5] {
        let lam = decay(q);
        let log_lam = lam.to_f64().unwrap().ln();
        // Convolutional: the successive ratio of infidelities is exactly lambda.
        for n in 3..60 {
            let f = |n| int(1) - conv_fidelity(q, n, RecycleTarget::Single(1)).unwrap().rational().clone();
            let ratio = f(n + 1) / f(n);
            ensure(ratio == lam, || format!("conv q={q} n={n}: ratio {ratio}"))?;
            ensure((ratio.to_f64().unwrap().ln() - log_lam).abs() < 1e-9, || "conv slope".into())?;
        }
        // Hybrid: (1 - F_n)/lambda^n is a polynomial of degree m - 1 in n, so
        // its m-th difference vanishes and the slope of log(1 - F) is log lambda
        // up to a term that decays like 1/n.
        for m in 1..=3usize {
            let scaled: Vec<BigRational> = (4..=12)
                .map(|n| {
                    let f = hybrid_general(q, n, m, PathBackend::Reflection).unwrap().rational().clone();
                    (int(1) - f) / powi(&lam, n as i64)
                })
                .collect();
            ensure(difference(&scaled, m).iter().all(Zero::is_zero), || format!("hybrid q={q} m={m}: not polynomial of degree {}", m - 1))?;
            ensure(!difference(&scaled, m - 1).iter().any(Zero::is_zero), || format!("hybrid q={q} m={m}: degree too low"))?;
            // Slope with the polynomial factor divided out, from the general formula.
            for n in 4..12usize {
                let f = |n| int(1) - hybrid_general(q, n, m, PathBackend::Reflection).unwrap().rational().clone();
                let poly = |n: usize| &scaled[n - 4];
                let slope = (f(n + 1) / f(n) * poly(n) / poly(n + 1)).to_f64().unwrap().ln();
                ensure((slope - log_lam).abs() < 1e-9, || format!("hybrid q={q} m={m} n={n}: slope {slope}"))?;
            }
        }
    }
    Ok("conv ratio exactly q^2/(q^2+1); hybrid m=1,2,3 infidelity = lambda^n x poly(n) of degree m-1, q=2,3,5".into())
}

fn hybrid_specials() -> Check {
    let mut count = 0;
    for q in [2u32, 3] {
        for n in 3..=12usize {
            let g = |m| hybrid_general(q, n, m, PathBackend::Reflection).unwrap().rational().clone();
            ensure(g(1) == hybrid_m1(q, n), || format!("m=1 q={q} n={n}"))?;
            ensure(g(2) == hybrid_m2(q, n), || format!("m=2 q={q} n={n}"))?;
            if n >= 4 {
                ensure(g(3) == hybrid_m3(q, n), || format!("m=3 q={q} n={n}"))?;
            }
            count += 3;
        }
        for m in 1..=12 {
            ensure(hybrid_general(q, 3, m, PathBackend::Reflection).unwrap().rational() == &hybrid_n3(q, m), || format!("n=3 q={q} m={m}"))?;
            count += 1;
        }
    }
    let mut twirls = 0;
    for n in 3..=6 {
        for m in 1..=3 {
            let t = RecycleTarget::Single(1);
            let layout = rewound(CircuitShape::hybrid(n, m, 2).unwrap(), t).unwrap();
            let tw = exact_twirl_fidelity(&layout, t, None).unwrap().to_f64();
            let g = hybrid_general(2, n, m, PathBackend::Reflection).unwrap().to_f64();
            ensure((tw - g).abs() < 1e-9, || format!("twirl n={n} m={m}: {tw} vs {g}"))?;
            twirls += 1;
        }
    }
    Ok(format!("{count} exact special-form matches, {twirls} twirl matches"))
}

fn local_circuits() -> Check {
    let t = RecycleTarget::Single(1);
    let mut shallow = 0;
    for n in (4..=8).step_by(2) {
        for m in (2..=n - 2).step_by(2) {
            ensure(local_fidelity(2, n, m).unwrap().rational().is_one(), || format!("closed n={n} m={m}"))?;
            if n <= 6 {
                let layout = rewound(CircuitShape::local(n, m, 2).unwrap(), t).unwrap();
                let tw = exact_twirl_fidelity(&layout, t, None).unwrap().to_f64();
                ensure((tw - 1.0).abs() < 1e-10, || format!("twirl n={n} m={m}: {tw}"))?;
            }
            shallow += 1;
        }
    }
    let deep: Vec<f64> = (4..=24).step_by(2).map(|m| local_fidelity(2, 4, m).unwrap().to_f64()).collect();
    ensure(deep.windows(2).all(|w| w[1] < w[0]) && deep.iter().all(|&f| f > 0.5), || format!("deep not decreasing above 1/2: {deep:?}"))?;
    for m in [4, 6, 8] {
        let layout = rewound(CircuitShape::local(4, m, 2).unwrap(), t).unwrap();
        let tw = exact_twirl_fidelity(&layout, t, None).unwrap().to_f64();
        let c = local_fidelity(2, 4, m).unwrap().to_f64();
        ensure((tw - c).abs() < 1e-9, || format!("deep twirl m={m}: {tw} vs {c}"))?;
    }
    for q in [2u32, 3] {
        let far = hybrid_n3(q, 60) - frac(1, q as i64);
        ensure(far.to_f64().unwrap().abs() < 1e-30, || format!("n=3 limit q={q}"))?;
    }
    Ok(format!(
        "{shallow} shallow shapes restored exactly; n=4 deep values fall from {:.6} to {:.6} toward 1/2",
        deep[0],
        deep[deep.len() - 1]
    ))
}

fn correlations() -> Check {
    for q in [2u32, 3] {
        for n in 3..=10 {
            for i in 2..n {
                for j in 1..i {
                    let f = |t| conv_fidelity(q, n, t).unwrap().rational().clone();
                    let direct = f(RecycleTarget::Pair(i, j)) - f(RecycleTarget::Single(i)) * f(RecycleTarget::Single(j));
                    let c = conv_correlation(q, n, i, j).unwrap();
                    ensure(c.rational() == &direct, || format!("q={q} n={n} i={i} j={j}"))?;
                }
            }
            for i in 4..n {
                for j in 2..i - 1 {
                    let c = |j| conv_correlation(q, n, i, j).unwrap().rational().clone();
                    ensure(c(j) / c(j + 1) == decay(q), || format!("decay ratio q={q} n={n} i={i} j={j}"))?;
                }
            }
        }
    }
    let c = conv_correlation(2, 5, 3, 2).unwrap();
    ensure(c.rational() == &frac(576, 12500), || format!("value {}", c.rational()))?;
    let tw = |t: RecycleTarget| {
        let layout = rewound(CircuitShape::conv(5, 2).unwrap(), t).unwrap();
        exact_twirl_fidelity(&layout, t, None).unwrap().to_f64()
    };
    let oracle = tw(RecycleTarget::Pair(3, 2)) - tw(RecycleTarget::Single(3)) * tw(RecycleTarget::Single(2));
    ensure((oracle - 0.04608).abs() < 1e-9, || format!("twirl correlation {oracle}"))?;
    Ok(format!("identity holds for n<=10, q=2,3; (5,3,2) = 576/12500, twirl {oracle:.12}"))
}

fn noise() -> Check {
    for q in 2..=4 {
        let s = channel_stats(&make_channel(ChannelKind::Identity, q).unwrap());
        ensure(s == ChannelStats::identity(), || format!("identity stats q={q}: {s:?}"))?;
        let s2 = channel_stats(&make_channel(ChannelKind::Identity, q).unwrap().tensor_square().unwrap());
        ensure(s2 == ChannelStats::identity(), || format!("identity stats w=2 q={q}: {s2:?}"))?;
    }
    let mut worst: f64 = 0.0;
    for p in [0.01, 0.04] {
        let ch = make_channel(ChannelKind::Depolarizing(p), 2).unwrap();
        let stats = channel_stats(&ch);
        for n in 4..=6 {
            let t = RecycleTarget::Single(1);
            let layout = rewound(CircuitShape::conv(n, 2).unwrap(), t).unwrap();
            let tw = exact_twirl_fidelity(&layout, t, Some(&ch)).unwrap().to_f64();
            let tr = transfer_fidelity(2, n, t, &stats).unwrap().to_f64();
            worst = worst.max((tw - tr).abs());
            ensure((tw - tr).abs() < 1e-9, || format!("p={p} n={n}: twirl {tw} transfer {tr}"))?;
        }
    }
    // Finite-size corrections shrink like the second eigenvalue to the power
    // n - i, which is slow near alpha = 1; hence the larger n for 0.97.
    let mut gaps = Vec::new();
    for (alpha, n, i, j) in [(0.9, 40, 5, 2), (0.97, 80, 5, 2), (0.97, 80, 8, 5)] {
        let stats = ChannelStats::single(alpha, 1.0);
        let finite = transfer_pair_correlation(2, n, i, j, &stats).unwrap();
        let limit = noisy_conv_correlation_limit(2, alpha, (i - j) as u32).unwrap().to_f64();
        ensure((finite - limit).abs() < 1e-6, || format!("alpha={alpha} n={n} ({i},{j}): {finite} vs limit {limit}"))?;
        gaps.push((finite - limit).abs());
    }
    let (finite, limit) = (gaps[0], gaps[1]);
    Ok(format!("identity stats exact; transfer vs twirl max deviation {worst:.1e}; correlation limit deviation {finite:.1e} (alpha 0.9, n=40), {limit:.1e} (alpha 0.97, n=80)"))
}

fn single_wall() -> Check {
    let mut lattices = 0;
    let mut largest = 0;
    let mut shapes: Vec<(CircuitShape, Vec<RecycleTarget>)> = Vec::new();
    for q in [2u32, 3] {
        for n in 3..=7 {
            shapes.push((CircuitShape::conv(n, q).unwrap(), conv_targets(n)));
        }
        for n in 3..=5 {
            for m in 1..=4 {
                shapes.push((CircuitShape::hybrid(n, m, q).unwrap(), conv_targets(n)));
            }
        }
        for (n, m) in [(4, 2), (4, 4), (4, 6), (6, 2), (6, 4)] {
            shapes.push((CircuitShape::local(n, m, q).unwrap(), conv_targets(n)));
        }
    }
    for (shape, targets) in shapes {
        for t in targets {
            let layout = rewound(shape, t).unwrap();
            let lat = lattice_from_circuit(&layout, t).unwrap();
            if lat.free_count() > 24 {
                continue;
            }
            let q = shape.q.get();
            let sum = partition_sum_exhaustive(&lat, TrivalentRule::Solid { q }).unwrap();
            let wall = single_wall_fidelity(&lat, TrivalentRule::Solid { q }).unwrap();
            ensure(sum.rational() == wall.rational(), || format!("{shape:?} {t}: sum {} wall {}", sum.rational(), wall.rational()))?;
            lattices += 1;
            largest = largest.max(lat.free_count());
        }
    }
    Ok(format!("{lattices} lattices (up to {largest} free spins): full sum = single-wall sum"))
}

fn monte_carlo() -> Check {
    let t = RecycleTarget::Single(1);
    let layout = rewound(CircuitShape::conv(4, 2).unwrap(), t).unwrap();
    let exact = 17.0 / 25.0;
    let mut inside = 0;
    for seed in 0..20u64 {
        let r = mc_average_fidelity(&layout, t, None, 100_000, seed).unwrap();
        if (r.to_f64() - exact).abs() <= 4.0 * r.stderr.unwrap() {
            inside += 1;
        }
    }
    ensure(inside >= 19, || format!("only {inside}/20 seeds within 4 standard errors"))?;
    Ok(format!("{inside}/20 seeds within 4 standard errors of 17/25"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("route equality", route_equality),
        ("path-counting theorems", path_theorems),
        ("decay rate", decay_rate),
        ("hybrid specials", hybrid_specials),
        ("local circuits", local_circuits),
        ("correlations", correlations),
        ("noise", noise),
        ("single-wall sufficiency", single_wall),
        ("monte carlo", monte_carlo),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(msg) => println!("criterion {}: PASS  {name} ({secs:.1}s): {msg}", k + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({secs:.1}s): {msg}", k + 1)
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
