//! Four copies per qudit: 0 and 1 carry the state (ket, bra), 2 and 3 the
//! measured projector. Qudit 1 sits in the lowest digits, copy 0 first.

use std::ops::{Add, AddAssign, Mul};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::circuit::{GateLayout, RecycleTarget};
use crate::error::{Error, Result};
use crate::noise::{superop_obs, superop_rho, KrausChannel};
use crate::result::{FidelityResult, Method};

/// Largest folded vector, in amplitudes.
pub const DENSE_CAP: usize = 1 << 26;

/// Where channels act when a channel is given.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoisePlacement {
    /// After every gate, except after the last rewinding gate on a recycled
    /// qudit, which is measured right away.
    ExemptRecycled,
    /// After every gate on every qudit it touches.
    AllGates,
}

trait Amp: Copy + Send + Sync + Default + Add<Output = Self> + AddAssign + Mul<f64, Output = Self> {
    fn to_c(self) -> Complex64;
    fn from_c(z: Complex64) -> Self;
    fn re(self) -> f64;
}

impl Amp for f64 {
    fn to_c(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
    fn from_c(z: Complex64) -> Self {
        z.re
    }
    fn re(self) -> f64 {
        self
    }
}

impl Amp for Complex64 {
    fn to_c(self) -> Complex64 {
        self
    }
    fn from_c(z: Complex64) -> Self {
        z
    }
    fn re(self) -> f64 {
        self.re
    }
}

/// Groups of local indices (8 digits: qudit a copies 0..4, then qudit b)
/// over which an operator on `digits` acts, members ordered with the first
/// listed digit most significant.
fn groups(q: usize, digits: &[usize]) -> Vec<Vec<usize>> {
    let pow = |p: usize| q.pow(p as u32);
    let others: Vec<usize> = (0..8).filter(|d| !digits.contains(d)).collect();
    let k = digits.len();
    (0..pow(others.len()))
        .map(|o| {
            let base: usize = others.iter().enumerate().map(|(i, &d)| (o / pow(others.len() - 1 - i) % q) * pow(d)).sum();
            (0..pow(k))
                .map(|m| base + digits.iter().enumerate().map(|(i, &d)| (m / pow(k - 1 - i) % q) * pow(d)).sum::<usize>())
                .collect()
        })
        .collect()
}

/// Local indices where both qudits sit in the identity (`swap = false`) or
/// swap fold state.
fn support(q: usize, swap: bool) -> Vec<usize> {
    (0..q.pow(8))
        .filter(|&l| {
            let d = |i: usize| l / q.pow(i as u32) % q;
            (0..2).all(|h| {
                let (c0, c1, c2, c3) = (d(4 * h), d(4 * h + 1), d(4 * h + 2), d(4 * h + 3));
                if swap {
                    c0 == c3 && c1 == c2
                } else {
                    c0 == c1 && c2 == c3
                }
            })
        })
        .collect()
}

struct Tables {
    q: usize,
    one: Vec<usize>,
    swap: Vec<usize>,
    /// Diagonal entries (i,i) x (j,j) of copies 0,1, one group per value of copies 2,3.
    first_moment: Vec<Vec<usize>>,
    wg: (f64, f64),
}

impl Tables {
    fn new(q: usize) -> Self {
        let d = (q * q) as f64;
        let first_moment = groups(q, &[0, 1, 4, 5])
            .into_iter()
            .map(|g| {
                g.into_iter()
                    .enumerate()
                    .filter(|(m, _)| {
                        // m = (a0, a1, b0, b1): copies 0, 1 of each qudit
                        let (a0, a1, b0, b1) = (m / (q * q * q), m / (q * q) % q, m / q % q, m % q);
                        a0 == a1 && b0 == b1
                    })
                    .map(|(_, l)| l)
                    .collect()
            })
            .collect();
        Tables {
            q,
            one: support(q, false),
            swap: support(q, true),
            first_moment,
            wg: (1.0 / (d * d - 1.0), -1.0 / (d * (d * d - 1.0))),
        }
    }

    fn twirl<T: Amp>(&self, buf: &mut [T]) {
        let o1 = self.one.iter().fold(T::default(), |acc, &l| acc + buf[l]);
        let os = self.swap.iter().fold(T::default(), |acc, &l| acc + buf[l]);
        let (w0, w1) = self.wg;
        let c1 = o1 * w0 + os * w1;
        let cs = o1 * w1 + os * w0;
        buf.iter_mut().for_each(|x| *x = T::default());
        for &l in &self.one {
            buf[l] += c1;
        }
        for &l in &self.swap {
            buf[l] += cs;
        }
    }

    fn first_moment<T: Amp>(&self, buf: &mut [T]) {
        let inv = 1.0 / (self.q * self.q) as f64;
        let overlaps: Vec<T> = self.first_moment.iter().map(|g| g.iter().fold(T::default(), |acc, &l| acc + buf[l]) * inv).collect();
        buf.iter_mut().for_each(|x| *x = T::default());
        for (g, o) in self.first_moment.iter().zip(overlaps) {
            for &l in g {
                buf[l] = o;
            }
        }
    }
}

/// A channel superoperator bound to the local digits it acts on.
struct LocalOp {
    groups: Vec<Vec<usize>>,
    matrix: Vec<Complex64>,
    dim: usize,
}

impl LocalOp {
    fn new(q: usize, digits: &[usize], m: &nalgebra::DMatrix<Complex64>) -> Self {
        let dim = m.nrows();
        let matrix = (0..dim).flat_map(|i| (0..dim).map(move |j| (i, j))).map(|(i, j)| m[(i, j)]).collect();
        LocalOp { groups: groups(q, digits), matrix, dim }
    }

    fn apply<T: Amp>(&self, buf: &mut [T]) {
        let mut tmp = vec![Complex64::default(); self.dim];
        for g in &self.groups {
            for (i, t) in tmp.iter_mut().enumerate() {
                *t = (0..self.dim).map(|j| self.matrix[i * self.dim + j] * buf[g[j]].to_c()).sum();
            }
            for (i, &l) in g.iter().enumerate() {
                buf[l] = T::from_c(tmp[i]);
            }
        }
    }
}

/// Channel operators in local digits: `rho[h]`/`obs[h]` act on qudit `h`
/// (0 = lower) for single-qudit channels; `pair_*` on both for arity 2.
struct NoiseOps {
    rho: [LocalOp; 2],
    obs: [LocalOp; 2],
    pair: Option<(LocalOp, LocalOp)>,
}

impl NoiseOps {
    fn new(q: usize, ch: &KrausChannel) -> Self {
        let nr = superop_rho(ch);
        let no = superop_obs(ch);
        if ch.arity == 2 {
            let id = nalgebra::DMatrix::<Complex64>::identity(q * q, q * q);
            let pair = (LocalOp::new(q, &[0, 4, 1, 5], &nr), LocalOp::new(q, &[2, 6, 3, 7], &no));
            let dummy = || LocalOp::new(q, &[0, 1], &id);
            NoiseOps { rho: [dummy(), dummy()], obs: [dummy(), dummy()], pair: Some(pair) }
        } else {
            NoiseOps {
                rho: [LocalOp::new(q, &[0, 1], &nr), LocalOp::new(q, &[4, 5], &nr)],
                obs: [LocalOp::new(q, &[2, 3], &no), LocalOp::new(q, &[6, 7], &no)],
                pair: None,
            }
        }
    }
}

fn initial<T: Amp>(q: usize, recycled: &[bool]) -> Vec<T> {
    let local = |rec: bool| -> Vec<T> {
        (0..q.pow(4))
            .map(|l| {
                let (c0, c1, c2, c3) = (l % q, l / q % q, l / (q * q) % q, l / (q * q * q));
                let on = if rec { l == 0 } else { c0 == 0 && c1 == 0 && c2 == c3 };
                T::from_c(Complex64::new(on as u8 as f64, 0.0))
            })
            .collect()
    };
    let n = recycled.len();
    let mut v = local(recycled[n - 1]);
    for j in (0..n - 1).rev() {
        let f = local(recycled[j]);
        v = v.iter().flat_map(|&big| f.iter().map(move |&x| T::from_c(big.to_c() * x.to_c()))).collect();
    }
    v
}

/// Contraction with the swap state on every qudit.
fn final_overlap<T: Amp>(q: usize, n: usize, v: &[T]) -> f64 {
    let local: Vec<usize> = (0..q)
        .flat_map(|i| (0..q).map(move |j| i + q * j + q * q * j + q * q * q * i))
        .collect();
    let q4 = q.pow(4);
    let mut idx = vec![0usize; n];
    let mut total = 0.0;
    loop {
        let at: usize = (0..n).map(|j| local[idx[j]] * q4.pow(j as u32)).sum();
        total += v[at].re();
        let mut j = 0;
        loop {
            if j == n {
                return total;
            }
            idx[j] += 1;
            if idx[j] < local.len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
    }
}

fn for_each_block<T: Amp, F: Fn(&mut [T]) + Sync>(v: &mut [T], q: usize, a: usize, f: F) {
    let stride = q.pow(4 * (a as u32 - 1));
    let block = q.pow(8);
    v.par_chunks_mut(block * stride).for_each(|chunk| {
        let mut buf = vec![T::default(); block];
        for lo in 0..stride {
            for (l, b) in buf.iter_mut().enumerate() {
                *b = chunk[l * stride + lo];
            }
            f(&mut buf);
            for (l, b) in buf.iter().enumerate() {
                chunk[l * stride + lo] = *b;
            }
        }
    });
}

/// Exact average over Haar gates, with an optional channel after every gate
/// (recycled qudits exempt after their last rewinding gate).
pub fn exact_twirl_fidelity(layout: &GateLayout, target: RecycleTarget, channel: Option<&KrausChannel>) -> Result<FidelityResult> {
    let placement = match channel {
        Some(ch) if ch.arity == 2 => NoisePlacement::AllGates,
        _ => NoisePlacement::ExemptRecycled,
    };
    exact_twirl_fidelity_with(layout, target, channel, placement)
}

pub fn exact_twirl_fidelity_with(
    layout: &GateLayout,
    target: RecycleTarget,
    channel: Option<&KrausChannel>,
    placement: NoisePlacement,
) -> Result<FidelityResult> {
    let n = layout.n();
    let q = layout.q() as usize;
    target.validate(n)?;
    let size = (q as f64).powi(4 * n as i32);
    if size > DENSE_CAP as f64 {
        return Err(Error::TooLarge(format!("q^(4n) = {size} amplitudes exceed the cap of {DENSE_CAP}")));
    }
    if !layout.is_rewound() {
        return Err(Error::PreconditionViolation("layout has no rewound gates".into()));
    }
    if let Some(ch) = channel {
        if ch.q as usize != q {
            return Err(Error::InvalidParameter(format!("channel has q={} but the circuit has q={q}", ch.q)));
        }
        if ch.arity == 2 && placement == NoisePlacement::ExemptRecycled {
            return Err(Error::InvalidParameter("a two-qudit channel cannot skip a single recycled qudit".into()));
        }
    }
    let value = match channel {
        None => run::<f64>(layout, target, None, placement),
        Some(ch) => run::<Complex64>(layout, target, Some(ch), placement),
    };
    Ok(FidelityResult::real(value, Method::Twirl))
}

fn run<T: Amp>(layout: &GateLayout, target: RecycleTarget, channel: Option<&KrausChannel>, placement: NoisePlacement) -> f64 {
    let n = layout.n();
    let q = layout.q() as usize;
    let recycled: Vec<bool> = (1..=n).map(|j| target.qudits().contains(&j)).collect();
    let tables = Tables::new(q);
    let noise = channel.map(|ch| NoiseOps::new(q, ch));
    let mask = layout.rewound_mask();
    let mut touched = vec![false; n + 1];
    let mut v: Vec<T> = initial(q, &recycled);
    for (k, slot) in layout.forward().enumerate() {
        let (a, b) = slot.qudits;
        let rewound = mask[k];
        let skip = |x: usize| placement == NoisePlacement::ExemptRecycled && recycled[x - 1] && !touched[x];
        let obs_on = [!skip(a), !skip(b)];
        for_each_block(&mut v, q, a, |buf| {
            if rewound {
                if let Some(ops) = &noise {
                    match &ops.pair {
                        Some((_, obs)) => obs.apply(buf),
                        None => {
                            for (op, on) in ops.obs.iter().zip(obs_on) {
                                if on {
                                    op.apply(buf);
                                }
                            }
                        }
                    }
                }
                tables.twirl(buf);
            } else {
                tables.first_moment(buf);
            }
            if let Some(ops) = &noise {
                match &ops.pair {
                    Some((rho, _)) => rho.apply(buf),
                    None => ops.rho.iter().for_each(|op| op.apply(buf)),
                }
            }
        });
        touched[a] = true;
        touched[b] = true;
    }
    final_overlap(q, n, &v)
}
