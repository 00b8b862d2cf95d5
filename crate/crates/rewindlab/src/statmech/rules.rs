use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::Spin;
use crate::exact::{frac, int, powi, wall_unit};
use crate::result::Value;

/// Weingarten coefficient for two copies of a `d`-dimensional unitary.
/// `swap = false` is the identity permutation.
pub fn weingarten(d: i64, swap: bool) -> BigRational {
    if swap {
        frac(-1, d * (d * d - 1))
    } else {
        frac(1, d * d - 1)
    }
}

/// Overlap `<tau|sigma>` of the two folded permutation states on one qudit.
pub fn fold_overlap(q: i64, tau: Spin, sigma: Spin) -> i64 {
    if tau == sigma {
        q * q
    } else {
        q
    }
}

/// Link overlap dressed by a channel: the equal-`s` entry picks up `kappa`.
pub fn link_overlap(q: f64, kappa: f64, tau: Spin, sigma: Spin) -> f64 {
    match (tau, sigma) {
        (Spin::One, Spin::One) => q * q,
        (Spin::S, Spin::S) => kappa * q * q,
        _ => q,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum TrivalentRule {
    /// Averaged two-qudit gate that is later rewound.
    Solid { q: u32 },
    /// Gate that stays in the circuit; only its first moment enters.
    Dotted { q: u32 },
    /// Solid rule with single-qudit noise: `alpha` on the first leg, `beta` on the second.
    Noisy { q: u32, alpha: f64, beta: f64 },
    /// Solid rule with an arbitrary two-qudit channel.
    General { q: u32, beta: f64, beta_u: f64, beta_d: f64 },
}

impl TrivalentRule {
    pub fn q(&self) -> u32 {
        match *self {
            TrivalentRule::Solid { q } | TrivalentRule::Dotted { q } => q,
            TrivalentRule::Noisy { q, .. } | TrivalentRule::General { q, .. } => q,
        }
    }

    pub fn is_noiseless(&self) -> bool {
        matches!(self, TrivalentRule::Solid { .. } | TrivalentRule::Dotted { .. })
    }
}

/// Weight of a trivalent vertex with inputs `tau1`, `tau2` and output `tau3`.
pub fn trivalent_weight(rule: TrivalentRule, spins: (Spin, Spin, Spin)) -> Value {
    use Spin::{One, S};
    let (t1, t2, t3) = spins;
    match rule {
        TrivalentRule::Solid { q } => Value::Exact(solid_weight(q, t1, t2, t3)),
        TrivalentRule::Dotted { q } => Value::Exact(dotted_weight(q, t1, t2, t3)),
        TrivalentRule::Noisy { q, alpha, beta } => Value::Real(noisy_weight(q as f64, alpha, beta, spins)),
        TrivalentRule::General { q, beta, beta_u, beta_d } => {
            let q = q as f64;
            let d = q.powi(4) - 1.0;
            Value::Real(match (t1, t2, t3) {
                (One, One, One) => 1.0,
                (One, One, S) => 0.0,
                (One, S, One) => q * (q * q - beta_u) / d,
                (One, S, S) => q * (beta_u * q * q - 1.0) / d,
                (S, One, One) => q * (q * q - beta_d) / d,
                (S, One, S) => q * (beta_d * q * q - 1.0) / d,
                (S, S, One) => q * q * (1.0 - beta) / d,
                (S, S, S) => (beta * q.powi(4) - 1.0) / d,
            })
        }
    }
}

pub fn solid_weight(q: u32, t1: Spin, t2: Spin, t3: Spin) -> BigRational {
    if t1 != t2 {
        wall_unit(q)
    } else if t1 == t3 {
        int(1)
    } else {
        BigRational::zero()
    }
}

pub fn dotted_weight(q: u32, t1: Spin, t2: Spin, t3: Spin) -> BigRational {
    if t3 == Spin::S {
        return BigRational::zero();
    }
    let walls = (t1 == Spin::S) as i64 + (t2 == Spin::S) as i64;
    powi(&int(q as i64), -walls)
}

/// `sum_sigma Wg(tau3 sigma) L_alpha(sigma, tau1) L_beta(sigma, tau2)`.
pub fn noisy_weight(q: f64, alpha: f64, beta: f64, spins: (Spin, Spin, Spin)) -> f64 {
    let (t1, t2, t3) = spins;
    let d = q * q;
    let wg = |same: bool| if same { 1.0 / (d * d - 1.0) } else { -1.0 / (d * (d * d - 1.0)) };
    [Spin::One, Spin::S]
        .into_iter()
        .map(|sigma| wg(sigma == t3) * link_overlap(q, alpha, sigma, t1) * link_overlap(q, beta, sigma, t2))
        .sum()
}

/// Same as [`noisy_weight`] but from the Weingarten sum in exact arithmetic,
/// used to check the noiseless table.
pub fn weingarten_weight(q: u32, spins: (Spin, Spin, Spin)) -> BigRational {
    let (t1, t2, t3) = spins;
    let qi = q as i64;
    [Spin::One, Spin::S]
        .into_iter()
        .map(|sigma| {
            weingarten(qi * qi, sigma != t3) * int(fold_overlap(qi, sigma, t1)) * int(fold_overlap(qi, sigma, t2))
        })
        .fold(BigRational::zero(), |a, b| a + b)
}

/// Weights carried by a single domain wall.
#[derive(Debug, Clone, PartialEq)]
pub struct WallWeights {
    /// Per solid vertex the wall passes through: q/(1+q^2).
    pub bulk: BigRational,
    /// Per dotted vertex with one `s` input: 1/q.
    pub boundary_adjacent: BigRational,
    /// Per dotted vertex with two `s` inputs: 1/q^2.
    pub endpoint: BigRational,
}

impl WallWeights {
    pub fn new(q: u32) -> Self {
        let q = q as i64;
        WallWeights { bulk: wall_unit(q as u32), boundary_adjacent: frac(1, q), endpoint: frac(1, q * q) }
    }

    pub fn as_f64(&self) -> [f64; 3] {
        [&self.bulk, &self.boundary_adjacent, &self.endpoint].map(|r| r.to_f64().unwrap_or(f64::NAN))
    }
}
