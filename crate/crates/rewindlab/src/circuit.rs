//! Circuit families, the rewinding transformation and recycle targets.
//!
//! Qudits are numbered from 1. Qudit `n` is the active one: every gate that
//! touches it stays, every other gate is undone by the rewinding step.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    #[serde(alias = "conv")]
    Convolutional,
    Hybrid,
    Local,
}

impl Family {
    pub fn parse(s: &str) -> Option<Family> {
        match s {
            "conv" | "convolutional" => Some(Family::Convolutional),
            "hybrid" => Some(Family::Hybrid),
            "local" => Some(Family::Local),
            _ => None,
        }
    }

    pub fn short(self) -> &'static str {
        match self {
            Family::Convolutional => "conv",
            Family::Hybrid => "hybrid",
            Family::Local => "local",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short())
    }
}

/// Local Hilbert-space dimension, at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct QuditDim(u32);

impl QuditDim {
    pub fn new(q: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidShape(format!("local dimension q={q} must be at least 2")));
        }
        Ok(QuditDim(q))
    }

    pub fn get(self) -> u32 {
        self.0
    }
}

impl TryFrom<u32> for QuditDim {
    type Error = Error;
    fn try_from(q: u32) -> Result<Self> {
        QuditDim::new(q)
    }
}

impl From<QuditDim> for u32 {
    fn from(q: QuditDim) -> u32 {
        q.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CircuitShape {
    pub family: Family,
    pub n: usize,
    /// Sweeps for hybrid, depth for local, 1 for convolutional.
    pub m: usize,
    pub q: QuditDim,
}

impl CircuitShape {
    pub fn new(family: Family, n: usize, m: usize, q: u32) -> Result<Self> {
        let shape = CircuitShape { family, n, m, q: QuditDim::new(q)? };
        shape.validate()?;
        Ok(shape)
    }

    pub fn conv(n: usize, q: u32) -> Result<Self> {
        Self::new(Family::Convolutional, n, 1, q)
    }

    pub fn hybrid(n: usize, m: usize, q: u32) -> Result<Self> {
        Self::new(Family::Hybrid, n, m, q)
    }

    pub fn local(n: usize, m: usize, q: u32) -> Result<Self> {
        Self::new(Family::Local, n, m, q)
    }

    pub fn validate(&self) -> Result<()> {
        let (n, m) = (self.n, self.m);
        match self.family {
            Family::Convolutional if n < 3 => Err(Error::InvalidShape(format!("convolutional needs n >= 3, got {n}"))),
            Family::Convolutional if m != 1 => Err(Error::InvalidShape(format!("convolutional has m = 1, got {m}"))),
            Family::Hybrid if n < 3 || m < 1 => Err(Error::InvalidShape(format!("hybrid needs n >= 3 and m >= 1, got n={n}, m={m}"))),
            Family::Local if n < 2 || m < 2 || n % 2 == 1 || m % 2 == 1 => {
                Err(Error::InvalidShape(format!("local needs even n and m, got n={n}, m={m}")))
            }
            _ => Ok(()),
        }
    }
}

/// Which qudits are reset and compared against |0>.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecycleTarget {
    Single(usize),
    Prefix(usize),
    /// `Pair(i, j)` with `i > j`.
    Pair(usize, usize),
}

impl RecycleTarget {
    pub fn validate(&self, n: usize) -> Result<()> {
        let ok = match *self {
            RecycleTarget::Single(i) => (1..n).contains(&i),
            RecycleTarget::Prefix(k) => (1..n).contains(&k),
            RecycleTarget::Pair(i, j) => j >= 1 && j < i && i < n,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidTarget(format!("{self} is not valid for n={n}")))
        }
    }

    /// The recycled qudits, ascending.
    pub fn qudits(&self) -> Vec<usize> {
        match *self {
            RecycleTarget::Single(i) => vec![i],
            RecycleTarget::Prefix(k) => (1..=k).collect(),
            RecycleTarget::Pair(i, j) => vec![j, i],
        }
    }

    /// Accepts `3`, `prefix:2`, `pair:3,2` (also `3,2`).
    pub fn parse(s: &str) -> Option<RecycleTarget> {
        let s = s.trim();
        let nums = |t: &str| -> Option<Vec<usize>> { t.split(',').map(|x| x.trim().parse().ok()).collect() };
        if let Some(rest) = s.strip_prefix("prefix:") {
            return rest.trim().parse().ok().map(RecycleTarget::Prefix);
        }
        let body = s.strip_prefix("pair:").or_else(|| s.strip_prefix("single:")).unwrap_or(s);
        match nums(body)?.as_slice() {
            [i] => Some(RecycleTarget::Single(*i)),
            [i, j] => Some(RecycleTarget::Pair(*i.max(j), *i.min(j))),
            _ => None,
        }
    }
}

impl fmt::Display for RecycleTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecycleTarget::Single(i) => write!(f, "{i}"),
            RecycleTarget::Prefix(k) => write!(f, "prefix:{k}"),
            RecycleTarget::Pair(i, j) => write!(f, "pair:{i},{j}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlotTag {
    Forward,
    Rewound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateSlot {
    /// Lower and upper qudit of a nearest-neighbour gate.
    pub qudits: (usize, usize),
    pub tag: SlotTag,
    /// For rewound slots, the index of the forward slot being inverted.
    pub inverts: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateLayout {
    pub shape: CircuitShape,
    pub slots: Vec<GateSlot>,
    /// Qudits on which the remaining (active) part of the circuit acts trivially.
    pub idle: BTreeSet<usize>,
}

impl GateLayout {
    pub fn n(&self) -> usize {
        self.shape.n
    }

    pub fn q(&self) -> u32 {
        self.shape.q.get()
    }

    pub fn forward(&self) -> impl Iterator<Item = &GateSlot> {
        self.slots.iter().filter(|s| s.tag == SlotTag::Forward)
    }

    /// One flag per forward slot: is it undone by the rewinding step?
    pub fn rewound_mask(&self) -> Vec<bool> {
        let nf = self.forward().count();
        let mut mask = vec![false; nf];
        for s in &self.slots {
            if let Some(k) = s.inverts {
                mask[k] = true;
            }
        }
        mask
    }

    pub fn is_rewound(&self) -> bool {
        self.slots.iter().any(|s| s.tag == SlotTag::Rewound)
    }
}

fn sweep(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (1..n).map(|i| (i, i + 1))
}

/// Odd layers start on (1,2), even layers on (2,3).
fn brick_layer(n: usize, layer: usize) -> impl Iterator<Item = (usize, usize)> {
    let start = if layer % 2 == 1 { 1 } else { 2 };
    (start..n).step_by(2).map(|i| (i, i + 1))
}

pub fn build_circuit(shape: CircuitShape) -> Result<GateLayout> {
    shape.validate()?;
    let n = shape.n;
    let pairs: Vec<(usize, usize)> = match shape.family {
        Family::Convolutional => sweep(n).collect(),
        Family::Hybrid => (0..shape.m).flat_map(|_| sweep(n)).collect(),
        Family::Local => (1..=shape.m).flat_map(|l| brick_layer(n, l)).collect(),
    };
    let slots = pairs.into_iter().map(|qudits| GateSlot { qudits, tag: SlotTag::Forward, inverts: None }).collect();
    Ok(GateLayout { shape, slots, idle: (1..n).collect() })
}

/// Appends the daggers of every forward gate acting only on idle qudits, last
/// gate first.
pub fn apply_rewinding(layout: &GateLayout, target: RecycleTarget) -> Result<GateLayout> {
    target.validate(layout.n())?;
    for t in target.qudits() {
        if !layout.idle.contains(&t) {
            return Err(Error::TargetNotIdle(t));
        }
    }
    let mut out = layout.clone();
    out.slots.retain(|s| s.tag == SlotTag::Forward);
    let inverse: Vec<GateSlot> = out
        .slots
        .iter()
        .enumerate()
        .rev()
        .filter(|(_, s)| layout.idle.contains(&s.qudits.0) && layout.idle.contains(&s.qudits.1))
        .map(|(k, s)| GateSlot { qudits: s.qudits, tag: SlotTag::Rewound, inverts: Some(k) })
        .collect();
    out.slots.extend(inverse);
    Ok(out)
}

/// `build_circuit` followed by `apply_rewinding`.
pub fn rewound(shape: CircuitShape, target: RecycleTarget) -> Result<GateLayout> {
    apply_rewinding(&build_circuit(shape)?, target)
}
