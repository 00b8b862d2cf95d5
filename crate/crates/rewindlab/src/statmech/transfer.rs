//! The noisy convolutional chain as a product of 2x2 matrices over the basis
//! (1, s). Walking from the active end, each rewound gate contributes `T`,
//! or `T0` when its upper input is a recycled qudit.

use nalgebra::{Matrix2, Vector2};

use crate::circuit::RecycleTarget;
use crate::error::{Error, Result};
use crate::noise::ChannelStats;
use crate::result::{FidelityResult, Method};

#[derive(Debug, Clone, PartialEq)]
pub struct TransferMatrix {
    pub matrix: Matrix2<f64>,
    /// Eigenvectors as columns, leading eigenvalue first.
    pub p: Matrix2<f64>,
    pub d: Vector2<f64>,
    p_inv: Option<Matrix2<f64>>,
}

impl TransferMatrix {
    fn from_matrix(matrix: Matrix2<f64>) -> Self {
        let (a, b, c, d) = (matrix[(0, 0)], matrix[(0, 1)], matrix[(1, 0)], matrix[(1, 1)]);
        let tr = a + d;
        let disc = ((a - d) * (a - d) + 4.0 * b * c).max(0.0).sqrt();
        let (l1, l2) = ((tr + disc) / 2.0, (tr - disc) / 2.0);
        let vec = |l: f64| {
            let (u, w) = (Vector2::new(b, l - a), Vector2::new(l - d, c));
            if u.norm_squared() >= w.norm_squared() {
                u
            } else {
                w
            }
        };
        let p = Matrix2::from_columns(&[vec(l1), vec(l2)]);
        let p_inv = if p.determinant().abs() > 1e-12 * p.norm_squared() { p.try_inverse() } else { None };
        TransferMatrix { matrix, p, d: Vector2::new(l1, l2), p_inv }
    }

    /// Bulk matrix `T`.
    pub fn bulk(q: u32, alpha: f64, beta: f64) -> Self {
        let q = q as f64;
        let den = q.powi(4) - 1.0;
        Self::from_matrix(
            Matrix2::new(
                q * q * (q * q - alpha),
                (1.0 - alpha * beta) * q.powi(3),
                q * (alpha * q * q - 1.0),
                alpha * beta * q.powi(4) - 1.0,
            ) / den,
        )
    }

    /// `T0`: the gate whose upper input is a recycled qudit.
    pub fn boundary(q: u32, alpha: f64, beta: f64) -> Self {
        let q = q as f64;
        let den = q.powi(4) - 1.0;
        Self::from_matrix(
            Matrix2::new(
                q * (q * q - alpha),
                (1.0 - alpha * beta) * q * q,
                q * (alpha * q * q - 1.0),
                alpha * beta * q.powi(4) - 1.0,
            ) / den,
        )
    }

    /// Subleading eigenvalue.
    pub fn lambda2(&self) -> f64 {
        self.d[1]
    }

    pub fn pow(&self, k: u32) -> Matrix2<f64> {
        match self.p_inv {
            Some(inv) => self.p * Matrix2::from_diagonal(&self.d.map(|l| l.powi(k as i32))) * inv,
            None => (0..k).fold(Matrix2::identity(), |acc, _| self.matrix * acc),
        }
    }
}

/// Fidelity of the noisy convolutional circuit (any target set) from the
/// single-qudit statistics `alpha`, `beta`.
pub fn transfer_fidelity(q: u32, n: usize, target: RecycleTarget, stats: &ChannelStats) -> Result<FidelityResult> {
    if q < 2 || n < 3 {
        return Err(Error::InvalidShape(format!("need q >= 2 and n >= 3, got q={q}, n={n}")));
    }
    target.validate(n)?;
    let recycled = target.qudits();
    let t = TransferMatrix::bulk(q, stats.alpha, stats.beta);
    let t0 = TransferMatrix::boundary(q, stats.alpha, stats.beta);
    let mut v = Vector2::new(1.0, 0.0);
    let mut run = 0u32;
    for g in (1..=n - 2).rev() {
        if recycled.contains(&(g + 1)) {
            v = t0.matrix * t.pow(run) * v;
            run = 0;
        } else {
            run += 1;
        }
    }
    v = t.pow(run) * v;
    let qf = q as f64;
    let fin = if recycled.contains(&1) { Vector2::new(1.0, 1.0) } else { Vector2::new(qf, 1.0) };
    Ok(FidelityResult::real(fin.dot(&v) / qf, Method::Transfer))
}

/// Connected correlation `F_ij - F_i F_j` from three transfer chains.
pub fn transfer_pair_correlation(q: u32, n: usize, i: usize, j: usize, stats: &ChannelStats) -> Result<f64> {
    if !(j >= 1 && j < i && i < n) {
        return Err(Error::InvalidIndices(format!("need n > i > j >= 1, got n={n}, i={i}, j={j}")));
    }
    let f = |t| transfer_fidelity(q, n, t, stats).map(|r| r.to_f64());
    Ok(f(RecycleTarget::Pair(i, j))? - f(RecycleTarget::Single(i))? * f(RecycleTarget::Single(j))?)
}
