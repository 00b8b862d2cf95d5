//! Right/up lattice paths confined weakly between two diagonals
//! `y = x + s` and `y = x + t`.
//!
//! Three backends: the alternating reflection sum, the finite trigonometric
//! sum, and a plain dynamic program used as the oracle.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use twofloat::TwoFloat;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticePoint {
    pub x: i64,
    pub y: i64,
}

impl LatticePoint {
    pub const fn new(x: i64, y: i64) -> Self {
        LatticePoint { x, y }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BandConstraint {
    /// Lower line `y = x + s`.
    pub s: i64,
    /// Upper line `y = x + t`.
    pub t: i64,
}

impl BandConstraint {
    pub const fn new(s: i64, t: i64) -> Self {
        BandConstraint { s, t }
    }

    pub fn contains(&self, p: LatticePoint) -> bool {
        let d = p.y - p.x;
        self.s <= d && d <= self.t
    }
}

/// Integrality tolerance for the trigonometric backend.
pub const TRIG_TOLERANCE: f64 = 1e-6;

fn check(from: LatticePoint, to: LatticePoint, band: BandConstraint) -> Result<()> {
    if band.t < band.s {
        return Err(Error::PreconditionViolation(format!("band has t={} < s={}", band.t, band.s)));
    }
    if !band.contains(from) || !band.contains(to) {
        return Err(Error::PreconditionViolation(format!(
            "endpoints {from:?}, {to:?} must lie in the band {}..={}",
            band.s, band.t
        )));
    }
    Ok(())
}

/// Binomial coefficient, zero outside `0 <= k <= n`.
pub fn binomial(n: i64, k: i64) -> BigUint {
    if n < 0 || k < 0 || k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k) as u64;
    let n = n as u64;
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Alternating binomial sum over `k`, truncated where both binomials vanish.
pub fn count_paths_reflection(from: LatticePoint, to: LatticePoint, band: BandConstraint) -> Result<BigUint> {
    check(from, to, band)?;
    if to.x < from.x || to.y < from.y {
        return Ok(BigUint::zero());
    }
    let (a, b, c, d, s, t) = (from.x, from.y, to.x, to.y, band.s, band.t);
    let steps = c + d - a - b;
    let w = t - s + 2;
    let kmax = steps / w + 1;
    let mut total = BigInt::zero();
    for k in -kmax..=kmax {
        total += BigInt::from(binomial(steps, c - a - k * w));
        total -= BigInt::from(binomial(steps, c - b - k * w + t + 1));
    }
    if total.is_negative() {
        return Err(Error::PreconditionViolation("reflection sum went negative".into()));
    }
    Ok(total.to_biguint().unwrap_or_default())
}

/// Evaluates the trigonometric sum in double-double precision and rounds.
pub fn count_paths_trig(from: LatticePoint, to: LatticePoint, band: BandConstraint) -> Result<BigUint> {
    count_paths_trig_tol(from, to, band, TRIG_TOLERANCE)
}

pub fn count_paths_trig_tol(from: LatticePoint, to: LatticePoint, band: BandConstraint, tolerance: f64) -> Result<BigUint> {
    check(from, to, band)?;
    if to.x < from.x || to.y < from.y {
        return Ok(BigUint::zero());
    }
    if from == to {
        // The finite sum drops the middle frequency, which only
        // survives for the empty path.
        return Ok(BigUint::one());
    }
    let (a, b, c, d, s, t) = (from.x, from.y, to.x, to.y, band.s, band.t);
    let steps = (c + d - a - b) as i32;
    let w = TwoFloat::from((t - s + 2) as f64);
    let pi = twofloat::consts::PI;
    let mut sum = TwoFloat::from(0.0);
    for k in 1..=(t - s + 1) / 2 {
        let kf = TwoFloat::from(k as f64);
        let base = TwoFloat::from(2.0) * (pi * kf / w).cos();
        let s1 = (pi * kf * TwoFloat::from((a - b + t + 1) as f64) / w).sin();
        let s2 = (pi * kf * TwoFloat::from((c - d + t + 1) as f64) / w).sin();
        sum += TwoFloat::from(4.0) / w * base.powi(steps) * s1 * s2;
    }
    let hi = sum.hi().round();
    let rem = sum - TwoFloat::from(hi);
    let lo = rem.hi().round();
    let frac = f64::from(rem - TwoFloat::from(lo));
    if frac.abs() > tolerance || hi + lo < 0.0 {
        return Err(Error::IntegralityFailure { value: f64::from(sum), tolerance });
    }
    let total = BigInt::from(hi as i128) + BigInt::from(lo as i64);
    Ok(total.to_biguint().unwrap_or_default())
}

/// Dynamic program over the rectangle spanned by the endpoints.
pub fn count_paths_dp(from: LatticePoint, to: LatticePoint, band: BandConstraint) -> BigUint {
    if to.x < from.x || to.y < from.y || !band.contains(from) || !band.contains(to) {
        return BigUint::zero();
    }
    let w = (to.x - from.x + 1) as usize;
    let h = (to.y - from.y + 1) as usize;
    let mut row: Vec<BigUint> = vec![BigUint::zero(); w];
    for j in 0..h {
        for i in 0..w {
            let p = LatticePoint::new(from.x + i as i64, from.y + j as i64);
            if !band.contains(p) {
                row[i] = BigUint::zero();
            } else if i == 0 && j == 0 {
                row[i] = BigUint::one();
            } else if i > 0 {
                let left = row[i - 1].clone();
                row[i] += left;
            }
        }
    }
    row[w - 1].clone()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PathBackend {
    Reflection,
    Trig,
    Dp,
}

impl PathBackend {
    pub fn name(self) -> &'static str {
        match self {
            PathBackend::Reflection => "reflection",
            PathBackend::Trig => "trig",
            PathBackend::Dp => "dp",
        }
    }
}

pub fn count_paths(backend: PathBackend, from: LatticePoint, to: LatticePoint, band: BandConstraint) -> Result<BigUint> {
    match backend {
        PathBackend::Reflection => count_paths_reflection(from, to, band),
        PathBackend::Trig => count_paths_trig(from, to, band),
        PathBackend::Dp => Ok(count_paths_dp(from, to, band)),
    }
}

/// Convenience for callers that already know the endpoints are in the band;
/// returns zero instead of an error otherwise.
pub fn count_in_band(from: LatticePoint, to: LatticePoint, band: BandConstraint) -> BigUint {
    count_paths_reflection(from, to, band).unwrap_or_default()
}
