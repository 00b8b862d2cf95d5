use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::dense::NoisePlacement;
use super::haar::haar_unitary;
use crate::circuit::{GateLayout, RecycleTarget, SlotTag};
use crate::error::{Error, Result};
use crate::noise::{superop_rho, KrausChannel};
use crate::result::{FidelityResult, Method};

/// Density matrices above this many entries are refused.
pub const DENSITY_CAP: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct McOptions {
    pub samples: u64,
    pub seed: u64,
    pub placement: NoisePlacement,
}

impl McOptions {
    pub fn new(samples: u64, seed: u64) -> Self {
        McOptions { samples, seed, placement: NoisePlacement::ExemptRecycled }
    }
}

/// Applies `op` to the digits `digits` (first listed most significant) of a
/// vector over `q`-ary digits.
fn apply(v: &mut [Complex64], q: usize, digits: &[usize], op: &DMatrix<Complex64>) {
    let k = digits.len();
    let dim = q.pow(k as u32);
    let weights: Vec<usize> = digits.iter().map(|&d| q.pow(d as u32)).collect();
    let offsets: Vec<usize> = (0..dim)
        .map(|m| (0..k).map(|i| (m / q.pow((k - 1 - i) as u32) % q) * weights[i]).sum())
        .collect();
    let mut local = vec![Complex64::default(); dim];
    for base in 0..v.len() {
        if weights.iter().any(|&w| base / w % q != 0) {
            continue;
        }
        for (m, x) in local.iter_mut().enumerate() {
            *x = v[base + offsets[m]];
        }
        for i in 0..dim {
            v[base + offsets[i]] = (0..dim).map(|j| op[(i, j)] * local[j]).sum();
        }
    }
}

/// One sample: fresh Haar gates, forward circuit, rewinding, projection.
pub fn run_sample(layout: &GateLayout, target: RecycleTarget, channel: Option<&KrausChannel>, placement: NoisePlacement, rng: &mut ChaCha8Rng) -> f64 {
    let n = layout.n();
    let q = layout.q() as usize;
    // Forward slots come first, so a forward slot's position is its gate index.
    let gates: Vec<DMatrix<Complex64>> = layout.forward().map(|_| haar_unitary(q * q, rng)).collect();
    let recycled = target.qudits();
    let dim = q.pow(n as u32);
    let on_target = |x: usize| recycled.iter().all(|&t| (x / q.pow(t as u32 - 1)).is_multiple_of(q));
    match channel {
        None => {
            let mut psi = vec![Complex64::default(); dim];
            psi[0] = Complex64::new(1.0, 0.0);
            for (idx, slot) in layout.slots.iter().enumerate() {
                let (a, b) = slot.qudits;
                let u = match slot.inverts {
                    Some(k) => gates[k].adjoint(),
                    None => gates[idx].clone(),
                };
                apply(&mut psi, q, &[a - 1, b - 1], &u);
            }
            (0..dim).filter(|&x| on_target(x)).map(|x| psi[x].norm_sqr()).sum()
        }
        Some(ch) => {
            let nr = superop_rho(ch);
            let mut rho = vec![Complex64::default(); dim * dim];
            rho[0] = Complex64::new(1.0, 0.0);
            // First forward gate on each recycled qudit; the channel after its
            // inverse is skipped.
            let first: Vec<Option<usize>> = (1..=n)
                .map(|j| layout.forward().position(|s| s.qudits.0 == j || s.qudits.1 == j))
                .collect();
            for (idx, slot) in layout.slots.iter().enumerate() {
                let (a, b) = slot.qudits;
                let (u, k) = match slot.inverts {
                    Some(k) => (gates[k].adjoint(), k),
                    None => (gates[idx].clone(), idx),
                };
                apply(&mut rho, q, &[a - 1, b - 1], &u);
                apply(&mut rho, q, &[n + a - 1, n + b - 1], &u.map(|z| z.conj()));
                if ch.arity == 2 {
                    apply(&mut rho, q, &[a - 1, b - 1, n + a - 1, n + b - 1], &nr);
                    continue;
                }
                for x in [a, b] {
                    let exempt = placement == NoisePlacement::ExemptRecycled
                        && slot.tag == SlotTag::Rewound
                        && recycled.contains(&x)
                        && first[x - 1] == Some(k);
                    if !exempt {
                        apply(&mut rho, q, &[x - 1, n + x - 1], &nr);
                    }
                }
            }
            (0..dim).filter(|&x| on_target(x)).map(|x| rho[x + dim * x].re).sum()
        }
    }
}

pub fn mc_average_fidelity(layout: &GateLayout, target: RecycleTarget, channel: Option<&KrausChannel>, samples: u64, seed: u64) -> Result<FidelityResult> {
    mc_average_fidelity_with(layout, target, channel, McOptions::new(samples, seed))
}

/// Mean over `samples` independent circuits. Sample `k` draws from the ChaCha
/// stream `k` of the master seed, so the estimate does not depend on how the
/// work is scheduled.
pub fn mc_average_fidelity_with(layout: &GateLayout, target: RecycleTarget, channel: Option<&KrausChannel>, opts: McOptions) -> Result<FidelityResult> {
    if opts.samples == 0 {
        return Err(Error::InvalidParameter("need at least one sample".into()));
    }
    let n = layout.n();
    let q = layout.q() as usize;
    target.validate(n)?;
    if !layout.is_rewound() {
        return Err(Error::PreconditionViolation("layout has no rewound gates".into()));
    }
    let entries = (q as f64).powi(2 * n as i32);
    if channel.is_some() && entries > DENSITY_CAP as f64 {
        return Err(Error::TooLarge(format!("density matrix with {entries} entries exceeds the cap of {DENSITY_CAP}")));
    }
    if let Some(ch) = channel {
        if ch.q as usize != q {
            return Err(Error::InvalidParameter(format!("channel has q={} but the circuit has q={q}", ch.q)));
        }
        if ch.arity == 2 && opts.placement == NoisePlacement::ExemptRecycled {
            return Err(Error::InvalidParameter("a two-qudit channel cannot skip a single recycled qudit".into()));
        }
    }
    let values: Vec<f64> = (0..opts.samples)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(k);
            run_sample(layout, target, channel, opts.placement, &mut rng)
        })
        .collect();
    let m = values.len() as f64;
    let mean = values.iter().sum::<f64>() / m;
    let var = if values.len() > 1 { values.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0) } else { 0.0 };
    Ok(FidelityResult { stderr: Some((var / m).sqrt()), ..FidelityResult::real(mean, Method::Mc) })
}
