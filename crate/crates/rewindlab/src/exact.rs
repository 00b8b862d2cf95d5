//! Small helpers for exact rational arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub fn int(x: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(x))
}

pub fn frac(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// `x^e` for any integer exponent; `0^e` with `e < 0` panics.
pub fn powi(x: &BigRational, e: i64) -> BigRational {
    if e < 0 {
        return powi(&x.recip(), -e);
    }
    let mut base = x.clone();
    let mut acc = BigRational::one();
    let mut e = e as u64;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        e >>= 1;
    }
    acc
}

/// q/(1+q^2), the weight of one unit of domain wall.
pub fn wall_unit(q: u32) -> BigRational {
    let q = q as i64;
    frac(q, 1 + q * q)
}

/// q^2/(q^2+1), the decay rate of the infidelity.
pub fn decay(q: u32) -> BigRational {
    let q = q as i64;
    frac(q * q, q * q + 1)
}

pub fn sum<I: IntoIterator<Item = BigRational>>(it: I) -> BigRational {
    it.into_iter().fold(BigRational::zero(), |a, b| a + b)
}
