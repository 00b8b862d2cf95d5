//! Hybrid circuits, qudit 1 recycled.
//!
//! Walls that start at the first sweep and end at sweep `m` correspond to
//! right/up lattice paths from `(1, 2)` in the band `0 <= y - x <= n - 2`.
//! A path picks up a factor `(1 + q^2)/q^2` for every point on the upper
//! line. Grouping paths by where they touch that line leaves band-limited
//! path counts between consecutive touches.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::Zero;

use super::{gap, lambda, one};
use crate::error::{Error, Result};
use crate::exact::{frac, int, powi, sum, wall_unit};
use crate::pathcount::{count_paths, BandConstraint, LatticePoint, PathBackend};
use crate::result::{FidelityResult, Method};

pub const HYBRID_M_CAP: usize = 12;
pub const HYBRID_N_CAP: usize = 24;

/// Columns `i_1 < ... < i_l` at which a path touches the upper line, and the
/// column of its destination.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TouchSet {
    pub points: Vec<i64>,
    pub destination: i64,
}

impl TouchSet {
    /// All touch sets with columns in `lo..=hi`, smallest first.
    pub fn enumerate(lo: i64, hi: i64, destination: i64) -> impl Iterator<Item = TouchSet> {
        let cols: Vec<i64> = (lo..=hi).collect();
        let k = cols.len();
        (0u64..1 << k).map(move |mask| TouchSet {
            points: (0..k).filter(|b| mask >> b & 1 == 1).map(|b| cols[b]).collect(),
            destination,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

struct Counter {
    backend: PathBackend,
    memo: HashMap<(LatticePoint, LatticePoint, i64), BigUint>,
}

impl Counter {
    fn count(&mut self, from: LatticePoint, to: LatticePoint, top: i64) -> Result<BigUint> {
        let band = BandConstraint::new(0, top);
        if to.x < from.x || to.y < from.y || !band.contains(from) || !band.contains(to) {
            return Ok(BigUint::zero());
        }
        if let Some(c) = self.memo.get(&(from, to, top)) {
            return Ok(c.clone());
        }
        let c = count_paths(self.backend, from, to, band)?;
        self.memo.insert((from, to, top), c.clone());
        Ok(c)
    }
}

/// Path count of one touch set from `start` to `end` in the band of width
/// `top`: segments between touches stay strictly below the upper line.
fn touch_weight(counter: &mut Counter, set: &TouchSet, start: LatticePoint, end: LatticePoint, top: i64) -> Result<BigUint> {
    let on_line = |p: LatticePoint| p.y - p.x == top;
    let mut v = BigUint::from(1u32);
    let mut cur = start;
    if on_line(start) && set.points.first() != Some(&start.x) {
        return Ok(BigUint::zero());
    }
    for &i in &set.points {
        let touch = LatticePoint::new(i, i + top);
        if touch != cur {
            v *= counter.count(cur, LatticePoint::new(i, i + top - 1), top - 1)?;
            if v.is_zero() {
                return Ok(v);
            }
        }
        cur = LatticePoint::new(i + 1, i + top);
    }
    match set.points.last() {
        Some(&last) if last == end.x => Ok(if end == LatticePoint::new(last, last + top) { v } else { BigUint::zero() }),
        _ if on_line(end) || cur.x > end.x => Ok(BigUint::zero()),
        _ => Ok(v * counter.count(cur, end, top - 1)?),
    }
}

/// `sum_l t^l (number of paths touching the upper line l times)` between
/// `start` and `end`, with `t = (1 + q^2)/q^2`.
pub fn touch_sum(q: u32, n: usize, start: LatticePoint, end: LatticePoint, backend: PathBackend) -> Result<BigRational> {
    let mut counter = Counter { backend, memo: HashMap::new() };
    touch_sum_with(&mut counter, q, n, start, end)
}

fn touch_sum_with(counter: &mut Counter, q: u32, n: usize, start: LatticePoint, end: LatticePoint) -> Result<BigRational> {
    let top = n as i64 - 2;
    let mut by_len: Vec<BigUint> = Vec::new();
    for set in TouchSet::enumerate(start.x, end.x, end.x) {
        let w = touch_weight(counter, &set, start, end, top)?;
        if by_len.len() <= set.len() {
            by_len.resize(set.len() + 1, BigUint::zero());
        }
        by_len[set.len()] += w;
    }
    let qi = q as i64;
    let t = frac(1 + qi * qi, qi * qi);
    Ok(sum(by_len.into_iter().enumerate().map(|(l, c)| powi(&t, l as i64) * BigRational::from_integer(c.into()))))
}

/// The general formula through band-limited path counts.
pub fn hybrid_general(q: u32, n: usize, m: usize, backend: PathBackend) -> Result<FidelityResult> {
    check(q, n, m)?;
    if m > HYBRID_M_CAP || n > HYBRID_N_CAP {
        return Err(Error::CombinatorialBlowup(format!("n={n}, m={m} beyond the caps n <= {HYBRID_N_CAP}, m <= {HYBRID_M_CAP}")));
    }
    let qi = q as i64;
    let r = wall_unit(q);
    let mut counter = Counter { backend, memo: HashMap::new() };
    let start = LatticePoint::new(1, 2);
    let mut acc = BigRational::zero();
    for a in 2..=m as i64 {
        acc += powi(&r, 2 * a - 1) * touch_sum_with(&mut counter, q, n, start, LatticePoint::new(a, a))?;
    }
    let m = m as i64;
    for c in 1..=n as i64 - 2 {
        acc += powi(&r, c + 2 * m - 1) * powi(&int(qi), c) * touch_sum_with(&mut counter, q, n, start, LatticePoint::new(m, m + c))?;
    }
    let base = frac(qi * qi + qi + 1, (qi + 1) * (qi * qi + 1));
    Ok(FidelityResult::exact(base + acc * frac(1, qi + 1), Method::Closed))
}

fn check(q: u32, n: usize, m: usize) -> Result<()> {
    if q < 2 || n < 3 || m < 1 {
        return Err(Error::InvalidShape(format!("hybrid needs q >= 2, n >= 3, m >= 1; got q={q}, n={n}, m={m}")));
    }
    Ok(())
}

pub fn hybrid_m1(q: u32, n: usize) -> BigRational {
    one() - gap(q) * powi(&lambda(q), n as i64 - 2)
}

/// Valid for `n >= 3`.
pub fn hybrid_m2(q: u32, n: usize) -> BigRational {
    let qi = q as i64;
    let n = n as i64;
    let bracket = one() + frac(n, qi * qi) + frac(2, qi.pow(4));
    one() - gap(q) * powi(&lambda(q), n) * bracket
}

/// Valid for `n >= 4`.
pub fn hybrid_m3(q: u32, n: usize) -> BigRational {
    let qi = q as i64;
    let n = n as i64;
    let bracket = one()
        + frac(n + 2, qi.pow(2))
        + frac((1 + n) * (2 + n), 2 * qi.pow(4))
        + frac(2 * (2 + n), qi.pow(6))
        + frac(3, qi.pow(8));
    one() - gap(q) * powi(&lambda(q), n + 2) * bracket
}

/// The `m = 3` form with `1/q^2` in place of `(n+2)/q^2`; kept to show that
/// it does not match the other routes.
pub fn hybrid_m3_constant_term(q: u32, n: usize) -> BigRational {
    let qi = q as i64;
    let n = n as i64;
    let bracket = one()
        + frac(1, qi.pow(2))
        + frac((1 + n) * (2 + n), 2 * qi.pow(4))
        + frac(2 * (2 + n), qi.pow(6))
        + frac(3, qi.pow(8));
    one() - gap(q) * powi(&lambda(q), n + 2) * bracket
}

pub fn hybrid_n3(q: u32, m: usize) -> BigRational {
    let qi = q as i64;
    frac(1, qi) + gap(q) * powi(&frac(1, 1 + qi * qi), m as i64)
}

/// Hybrid fidelity: the general formula within its caps, otherwise the
/// special forms where one applies.
pub fn hybrid_fidelity(q: u32, n: usize, m: usize) -> Result<FidelityResult> {
    check(q, n, m)?;
    if m <= HYBRID_M_CAP && n <= HYBRID_N_CAP {
        return hybrid_general(q, n, m, PathBackend::Reflection);
    }
    let v = match (n, m) {
        (3, _) => hybrid_n3(q, m),
        (_, 1) => hybrid_m1(q, n),
        (_, 2) => hybrid_m2(q, n),
        (_, 3) => hybrid_m3(q, n),
        _ => {
            return Err(Error::CombinatorialBlowup(format!(
                "n={n}, m={m} beyond the caps n <= {HYBRID_N_CAP}, m <= {HYBRID_M_CAP} and no special form applies"
            )))
        }
    };
    Ok(FidelityResult::exact(v, Method::Closed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn general(q: u32, n: usize, m: usize) -> BigRational {
        hybrid_general(q, n, m, PathBackend::Dp).unwrap().rational().clone()
    }

    #[test]
    fn known_values() {
        assert_eq!(general(2, 4, 2), frac(353, 625));
        assert_eq!(general(2, 6, 2), frac(163984, 250000));
        assert_eq!(general(2, 8, 3), frac(6286073, 9765625));
        assert_eq!(general(3, 6, 3), frac(2201863, 6250000));
        assert_eq!(general(2, 3, 2), frac(13, 25));
        assert_eq!(general(3, 3, 3), frac(167, 500));
    }

    #[test]
    fn specials() {
        for q in [2, 3] {
            for n in 4..9 {
                assert_eq!(general(q, n, 1), hybrid_m1(q, n));
                assert_eq!(general(q, n, 2), hybrid_m2(q, n));
                assert_eq!(general(q, n, 3), hybrid_m3(q, n));
                assert_ne!(general(q, n, 3), hybrid_m3_constant_term(q, n));
            }
            for m in 1..6 {
                assert_eq!(general(q, 3, m), hybrid_n3(q, m));
            }
        }
    }

    #[test]
    fn touch_sets() {
        let all: Vec<TouchSet> = TouchSet::enumerate(1, 3, 3).collect();
        assert_eq!(all.len(), 8);
        assert!(all.iter().all(|t| t.points.windows(2).all(|w| w[0] < w[1])));
    }

    #[test]
    fn caps() {
        assert!(matches!(hybrid_general(2, 25, 2, PathBackend::Reflection), Err(Error::CombinatorialBlowup(_))));
        assert_eq!(hybrid_fidelity(2, 40, 2).unwrap().rational(), &hybrid_m2(2, 40));
    }
}
