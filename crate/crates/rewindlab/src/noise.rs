//! Kraus channels and the scalars that enter the noisy spin model.
//!
//! Conventions: depolarizing is `(1-p) rho + p Tr(rho) I/q`, built from the
//! Weyl operators `X^a Z^b` with weight `p/q^2` each; dephasing is
//! `(1-p) rho + p diag(rho)`, built from `Z^b` with weight `p/q`.

use std::path::Path;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::haar_unitary;

pub const COMPLETENESS_TOLERANCE: f64 = 1e-10;

type CMat = DMatrix<Complex64>;

#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    pub q: u32,
    /// Number of qudits the operators act on (1 or 2).
    pub arity: u32,
    pub operators: Vec<CMat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelStats {
    pub alpha: f64,
    pub beta: f64,
    pub beta_u: f64,
    pub beta_d: f64,
}

impl ChannelStats {
    pub fn identity() -> Self {
        ChannelStats { alpha: 1.0, beta: 1.0, beta_u: 1.0, beta_d: 1.0 }
    }

    /// Statistics of a single-qudit channel with the given `alpha`, `beta`.
    pub fn single(alpha: f64, beta: f64) -> Self {
        ChannelStats { alpha, beta, beta_u: beta, beta_d: beta }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "p", rename_all = "snake_case")]
pub enum ChannelKind {
    Identity,
    Depolarizing(f64),
    Dephasing(f64),
    AmplitudeDamping(f64),
}

impl KrausChannel {
    pub fn new(q: u32, arity: u32, operators: Vec<CMat>) -> Result<Self> {
        let ch = KrausChannel { q, arity, operators };
        validate_channel(&ch)?;
        Ok(ch)
    }

    /// Dimension `q^arity` of the space the operators act on.
    pub fn dim(&self) -> usize {
        (self.q as usize).pow(self.arity)
    }

    /// `E (x) E` as a two-qudit channel.
    pub fn tensor_square(&self) -> Result<KrausChannel> {
        if self.arity != 1 {
            return Err(Error::InvalidParameter("tensor_square needs a single-qudit channel".into()));
        }
        let ops = self.operators.iter().flat_map(|a| self.operators.iter().map(move |b| a.kronecker(b))).collect();
        Ok(KrausChannel { q: self.q, arity: 2, operators: ops })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidParameter(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ChannelFile = serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("bad channel json: {e}")))?;
        file.into_channel()
    }

    pub fn to_json(&self) -> String {
        let file = ChannelFile {
            arity: self.arity,
            operators: self
                .operators
                .iter()
                .map(|m| (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect()).collect())
                .collect(),
        };
        serde_json::to_string_pretty(&file).expect("channel serializes")
    }
}

/// On-disk form: `{arity, operators: [[[re, im], ...], ...]}` with each
/// operator given row by row.
#[derive(Debug, Serialize, Deserialize)]
struct ChannelFile {
    arity: u32,
    operators: Vec<Vec<Vec<[f64; 2]>>>,
}

impl ChannelFile {
    fn into_channel(self) -> Result<KrausChannel> {
        let first = self.operators.first().ok_or_else(|| Error::InvalidParameter("channel has no operators".into()))?;
        let dim = first.len();
        if self.arity == 0 || self.arity > 2 {
            return Err(Error::InvalidParameter(format!("arity {} not supported", self.arity)));
        }
        let q = (dim as f64).powf(1.0 / self.arity as f64).round() as u32;
        if (q as usize).pow(self.arity) != dim || q < 2 {
            return Err(Error::InvalidParameter(format!("dimension {dim} is not q^{} for q >= 2", self.arity)));
        }
        let mut ops = Vec::new();
        for rows in &self.operators {
            if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                return Err(Error::InvalidParameter("operators must be square and of equal size".into()));
            }
            ops.push(DMatrix::from_fn(dim, dim, |i, j| Complex64::new(rows[i][j][0], rows[i][j][1])));
        }
        KrausChannel::new(q, self.arity, ops)
    }
}

/// Checks `sum_k E_k^dag E_k = I`.
pub fn validate_channel(ch: &KrausChannel) -> Result<()> {
    let dim = ch.dim();
    if ch.operators.is_empty() {
        return Err(Error::InvalidParameter("channel has no operators".into()));
    }
    if ch.operators.iter().any(|e| e.nrows() != dim || e.ncols() != dim) {
        return Err(Error::InvalidParameter(format!("operators must be {dim}x{dim}")));
    }
    let sum = ch.operators.iter().fold(CMat::zeros(dim, dim), |acc, e| acc + e.adjoint() * e);
    let residual = (sum - CMat::identity(dim, dim)).norm();
    if residual > COMPLETENESS_TOLERANCE {
        return Err(Error::NotTracePreserving(residual));
    }
    Ok(())
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn shift(q: usize) -> CMat {
    DMatrix::from_fn(q, q, |i, j| if i == (j + 1) % q { c(1.0) } else { c(0.0) })
}

fn clock(q: usize) -> CMat {
    let w = 2.0 * std::f64::consts::PI / q as f64;
    DMatrix::from_fn(q, q, |i, j| if i == j { Complex64::from_polar(1.0, w * i as f64) } else { c(0.0) })
}

fn mat_pow(m: &CMat, k: usize) -> CMat {
    (0..k).fold(CMat::identity(m.nrows(), m.ncols()), |acc, _| acc * m)
}

pub fn make_channel(kind: ChannelKind, q: u32) -> Result<KrausChannel> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("q={q} must be at least 2")));
    }
    let qd = q as usize;
    let qf = q as f64;
    let check = |p: f64| {
        if (0.0..=1.0).contains(&p) {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!("parameter {p} not in [0, 1]")))
        }
    };
    let id = CMat::identity(qd, qd);
    let mut ops = Vec::new();
    match kind {
        ChannelKind::Identity => ops.push(id),
        ChannelKind::Depolarizing(p) => {
            check(p)?;
            ops.push(id * c((1.0 - p + p / (qf * qf)).sqrt()));
            if p > 0.0 {
                let (x, z) = (shift(qd), clock(qd));
                for a in 0..qd {
                    for b in 0..qd {
                        if (a, b) != (0, 0) {
                            ops.push(mat_pow(&x, a) * mat_pow(&z, b) * c((p / (qf * qf)).sqrt()));
                        }
                    }
                }
            }
        }
        ChannelKind::Dephasing(p) => {
            check(p)?;
            ops.push(id * c((1.0 - p + p / qf).sqrt()));
            if p > 0.0 {
                let z = clock(qd);
                for b in 1..qd {
                    ops.push(mat_pow(&z, b) * c((p / qf).sqrt()));
                }
            }
        }
        ChannelKind::AmplitudeDamping(g) => {
            check(g)?;
            if q != 2 {
                return Err(Error::InvalidParameter("amplitude damping is defined for qubits only".into()));
            }
            ops.push(DMatrix::from_row_slice(2, 2, &[c(1.0), c(0.0), c(0.0), c((1.0 - g).sqrt())]));
            if g > 0.0 {
                ops.push(DMatrix::from_row_slice(2, 2, &[c(0.0), c(g.sqrt()), c(0.0), c(0.0)]));
            }
        }
    }
    KrausChannel::new(q, 1, ops)
}

/// Random channel with `kraus` operators, read off a Haar isometry.
pub fn random_channel<R: Rng + ?Sized>(q: u32, arity: u32, kraus: usize, rng: &mut R) -> KrausChannel {
    let dim = (q as usize).pow(arity);
    let u = haar_unitary(dim * kraus, rng);
    let ops = (0..kraus).map(|k| u.view((k * dim, 0), (dim, dim)).into_owned()).collect();
    KrausChannel { q, arity, operators: ops }
}

/// Partial trace of a two-qudit operator. The first tensor factor is qudit
/// `u`, the second `d`.
fn partial_trace(m: &CMat, q: usize, trace_second: bool) -> CMat {
    DMatrix::from_fn(q, q, |i, j| {
        (0..q)
            .map(|k| if trace_second { m[(i * q + k, j * q + k)] } else { m[(k * q + i, k * q + j)] })
            .sum()
    })
}

/// `alpha`, `beta`, `beta_u`, `beta_d` from trace formulas. For a single-qudit
/// channel `beta_u = beta_d = beta`.
pub fn channel_stats(ch: &KrausChannel) -> ChannelStats {
    let norm = (ch.dim() * ch.dim()) as f64;
    let alpha = ch.operators.iter().map(|e| e.trace().norm_sqr()).sum::<f64>() / norm;
    let mut beta = 0.0;
    let (mut beta_u, mut beta_d) = (0.0, 0.0);
    let q = ch.q as usize;
    for a in &ch.operators {
        for b in &ch.operators {
            let ba = b * a;
            beta += ba.trace().norm_sqr();
            if ch.arity == 2 {
                beta_u += partial_trace(&ba, q, true).norm_squared();
                beta_d += partial_trace(&ba, q, false).norm_squared();
            }
        }
    }
    beta /= norm;
    if ch.arity == 2 {
        let q3 = (q * q * q) as f64;
        ChannelStats { alpha, beta, beta_u: beta_u / q3, beta_d: beta_d / q3 }
    } else {
        ChannelStats::single(alpha, beta)
    }
}

/// Fold state of `spins.len()` qudits, four copies each, as a matrix with
/// rows indexed by copies (0, 1) and columns by copies (2, 3). `true` is the
/// swap state.
fn fold_state(q: usize, spins: &[bool]) -> CMat {
    let w = spins.len();
    let dim = q.pow(w as u32);
    let digit = |x: usize, j: usize| x / q.pow((w - 1 - j) as u32) % q;
    DMatrix::from_fn(dim * dim, dim * dim, |r, col| {
        let (i0, i1, i2, i3) = (r / dim, r % dim, col / dim, col % dim);
        let ok = (0..w).all(|j| {
            let (a, b, c, d) = (digit(i0, j), digit(i1, j), digit(i2, j), digit(i3, j));
            if spins[j] {
                a == d && b == c
            } else {
                a == b && c == d
            }
        });
        if ok {
            c(1.0)
        } else {
            c(0.0)
        }
    })
}

/// `sum_k E_k (x) E_k^*`, acting on the state copies.
pub fn superop_rho(ch: &KrausChannel) -> CMat {
    let d = ch.dim() * ch.dim();
    ch.operators.iter().fold(CMat::zeros(d, d), |acc, e| acc + e.kronecker(&e.conjugate()))
}

/// `sum_k E_k^dag (x) E_k^T`, acting on the observable copies.
pub fn superop_obs(ch: &KrausChannel) -> CMat {
    let d = ch.dim() * ch.dim();
    ch.operators.iter().fold(CMat::zeros(d, d), |acc, e| acc + e.adjoint().kronecker(&e.transpose()))
}

/// The same statistics from explicit four-copy contractions: `alpha` and
/// `beta` are diagonal `s` elements with one and two channel layers,
/// `beta_u` and `beta_d` the off-diagonal elements with one qudit in `1`.
pub fn channel_stats_contracted(ch: &KrausChannel) -> ChannelStats {
    let q = ch.q as usize;
    let w = ch.arity as usize;
    let nr = superop_rho(ch);
    let no = superop_obs(ch);
    let both = |v: &CMat| &nr * v * no.transpose();
    let inner = |a: &CMat, b: &CMat| a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum::<Complex64>().re;
    let s = fold_state(q, &vec![true; w]);
    let norm = (q.pow(2 * w as u32)) as f64;
    let alpha = inner(&s, &(&nr * &s)) / norm;
    let beta = inner(&s, &both(&s)) / norm;
    if w == 2 {
        let q3 = (q * q * q) as f64;
        let beta_u = inner(&fold_state(q, &[false, true]), &both(&s)) / q3;
        let beta_d = inner(&fold_state(q, &[true, false]), &both(&s)) / q3;
        ChannelStats { alpha, beta, beta_u, beta_d }
    } else {
        ChannelStats::single(alpha, beta)
    }
}
