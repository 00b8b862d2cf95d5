use num_rational::BigRational;

use super::{gap, lambda, one};
use crate::circuit::RecycleTarget;
use crate::error::{Error, Result};
use crate::exact::{frac, powi, wall_unit};
use crate::result::{FidelityResult, Method};

fn check(q: u32, n: usize) -> Result<()> {
    if q < 2 {
        return Err(Error::InvalidShape(format!("q={q} must be at least 2")));
    }
    if n < 3 {
        return Err(Error::InvalidShape(format!("convolutional needs n >= 3, got {n}")));
    }
    Ok(())
}

fn single(q: u32, n: usize, i: usize) -> BigRational {
    // Qudits 1 and 2 see the same number of rewound gates.
    let e = (n - i.max(2)) as i64;
    one() - gap(q) * powi(&lambda(q), e)
}

fn prefix(q: u32, n: usize, k: usize) -> BigRational {
    let qi = q as i64;
    let inner = one()
        + frac((qi - 1) * (qi - 1), qi) * powi(&wall_unit(q), k as i64 - 2);
    let bracket = one() - inner * frac(1, qi * (qi * qi - qi + 1));
    one() - powi(&lambda(q), (n - k) as i64) * bracket
}

fn pair(q: u32, n: usize, i: usize, j: usize) -> BigRational {
    match j {
        1 if i == 2 => prefix(q, n, 2),
        // A recycled qudit 1 is equivalent to recycling qudit 2.
        1 => pair(q, n, i, 2),
        _ => {
            let l = lambda(q);
            let inner = one() + powi(&l, (i - j) as i64) * frac(1, q as i64);
            one() - gap(q) * powi(&l, (n - i) as i64) * inner
        }
    }
}

pub fn conv_fidelity(q: u32, n: usize, target: RecycleTarget) -> Result<FidelityResult> {
    check(q, n)?;
    target.validate(n)?;
    let v = match target {
        RecycleTarget::Single(i) => single(q, n, i),
        RecycleTarget::Prefix(k) => prefix(q, n, k),
        RecycleTarget::Pair(i, j) => pair(q, n, i, j),
    };
    Ok(FidelityResult::exact(v, Method::Closed))
}

/// Connected correlation `F_ij - F_i F_j` of two recycled qudits.
pub fn conv_correlation(q: u32, n: usize, i: usize, j: usize) -> Result<FidelityResult> {
    check(q, n)?;
    if !(j >= 1 && j < i && i < n) {
        return Err(Error::InvalidIndices(format!("need n > i > j >= 1, got n={n}, i={i}, j={j}")));
    }
    let v = if j >= 2 {
        let l = lambda(q);
        gap(q) * gap(q) * powi(&l, (n - j) as i64) * (one() - powi(&l, (n - i) as i64))
    } else {
        pair(q, n, i, j) - single(q, n, i) * single(q, n, j)
    };
    Ok(FidelityResult::exact(v, Method::Closed))
}


#[cfg(test)]
mod tests {
    use super::*;

    fn f(q: u32, n: usize, t: RecycleTarget) -> BigRational {
        conv_fidelity(q, n, t).unwrap().rational().clone()
    }

    #[test]
    fn single_first() {
        assert_eq!(f(2, 3, RecycleTarget::Single(1)), frac(3, 5));
        assert_eq!(f(2, 6, RecycleTarget::Single(1)), frac(497, 625));
        assert_eq!(f(3, 6, RecycleTarget::Single(1)), frac(2813, 5000));
        assert_eq!(f(3, 5, RecycleTarget::Single(2)), f(3, 5, RecycleTarget::Single(1)));
    }

    #[test]
    fn prefix_one_is_single_one() {
        for q in 2..6 {
            for n in 3..9 {
                assert_eq!(f(q, n, RecycleTarget::Prefix(1)), f(q, n, RecycleTarget::Single(1)));
            }
        }
    }

    #[test]
    fn pairs() {
        assert_eq!(f(2, 5, RecycleTarget::Pair(3, 2)), frac(69, 125));
        assert_eq!(f(2, 4, RecycleTarget::Pair(2, 1)), frac(13, 25));
        assert_eq!(f(2, 5, RecycleTarget::Pair(3, 1)), frac(69, 125));
        assert_eq!(f(2, 6, RecycleTarget::Pair(5, 2)), frac(311, 625));
    }

    #[test]
    fn correlation() {
        assert_eq!(conv_correlation(2, 5, 3, 2).unwrap().rational(), &frac(576, 12500));
        assert!(matches!(conv_correlation(2, 5, 2, 3), Err(Error::InvalidIndices(_))));
    }
}
