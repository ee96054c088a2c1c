//! The 1NN rule over a labeled prototype set, with margins.
//!
//! A query's margin is the distance to the nearest prototype of the opposite
//! label minus the distance to the nearest prototype of the winning label.
//! It is zero on a Voronoi boundary between classes, so requiring a positive
//! minimum margin sidesteps tie-breaking entirely.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{check_dim, Point, DEFAULT_TOL};

/// Default margin demanded by [`realizes`] on unit-circumradius scenes.
pub const DEFAULT_MU: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum Label {
    Neg,
    Pos,
}

impl Label {
    pub fn flip(self) -> Label {
        match self {
            Label::Pos => Label::Neg,
            Label::Neg => Label::Pos,
        }
    }

    pub fn sign(self) -> i8 {
        match self {
            Label::Pos => 1,
            Label::Neg => -1,
        }
    }

    pub fn from_bit(bit: bool) -> Label {
        if bit {
            Label::Pos
        } else {
            Label::Neg
        }
    }
}

impl From<Label> for i8 {
    fn from(l: Label) -> i8 {
        l.sign()
    }
}

impl TryFrom<i8> for Label {
    type Error = Error;

    fn try_from(v: i8) -> Result<Label> {
        match v {
            1 => Ok(Label::Pos),
            -1 => Ok(Label::Neg),
            _ => Err(Error::InvalidInput(format!("label must be +1 or -1, got {v}"))),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Pos => "+1",
            Label::Neg => "-1",
        })
    }
}

/// A labeling of `len` indexed points as a bitmask; bit `i` set means point
/// `i` is labeled +1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Labeling {
    bits: u64,
    len: usize,
}

impl Labeling {
    pub const MAX_LEN: usize = 64;

    pub fn new(bits: u64, len: usize) -> Result<Self> {
        if len == 0 || len > Self::MAX_LEN {
            return Err(Error::InvalidInput(format!("labeling length {len} not in 1..=64")));
        }
        if len < 64 && bits >> len != 0 {
            return Err(Error::InvalidInput(format!("bitmask {bits:#x} too wide for {len} points")));
        }
        Ok(Labeling { bits, len })
    }

    pub fn from_labels(labels: &[Label]) -> Result<Self> {
        let bits =
            labels.iter().enumerate().fold(0u64, |acc, (i, l)| if *l == Label::Pos { acc | (1 << i) } else { acc });
        Labeling::new(bits, labels.len())
    }

    /// Every labeling of `len` points, in bitmask order.
    pub fn all(len: usize) -> impl Iterator<Item = Labeling> {
        assert!((1..64).contains(&len), "cannot enumerate labelings of {len} points");
        (0..1u64 << len).map(move |bits| Labeling { bits, len })
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> Label {
        Label::from_bit(self.bits >> i & 1 == 1)
    }

    pub fn labels(&self) -> Vec<Label> {
        (0..self.len).map(|i| self.get(i)).collect()
    }

    pub fn count(&self, label: Label) -> usize {
        let pos = self.bits.count_ones() as usize;
        match label {
            Label::Pos => pos,
            Label::Neg => self.len - pos,
        }
    }

    /// The same labeling with bit `i` flipped.
    pub fn with_flipped(&self, i: usize) -> Labeling {
        Labeling { bits: self.bits ^ (1 << i), len: self.len }
    }
}

/// Reference set of one 1NN classifier.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPrototypeSet", into = "RawPrototypeSet")]
pub struct LabeledPrototypeSet {
    prototypes: Vec<Point>,
    labels: Vec<Label>,
}

#[derive(Serialize, Deserialize)]
struct RawPrototypeSet {
    prototypes: Vec<Point>,
    labels: Vec<Label>,
}

impl TryFrom<RawPrototypeSet> for LabeledPrototypeSet {
    type Error = Error;

    fn try_from(raw: RawPrototypeSet) -> Result<Self> {
        LabeledPrototypeSet::new(raw.prototypes, raw.labels)
    }
}

impl From<LabeledPrototypeSet> for RawPrototypeSet {
    fn from(s: LabeledPrototypeSet) -> Self {
        RawPrototypeSet { prototypes: s.prototypes, labels: s.labels }
    }
}

impl LabeledPrototypeSet {
    pub fn new(prototypes: Vec<Point>, labels: Vec<Label>) -> Result<Self> {
        if prototypes.is_empty() {
            return Err(Error::InvalidInput("a prototype set needs at least one prototype".into()));
        }
        if prototypes.len() != labels.len() {
            return Err(Error::InvalidInput(format!("{} prototypes but {} labels", prototypes.len(), labels.len())));
        }
        let d = prototypes[0].dim();
        for p in &prototypes {
            check_dim(p.dim(), d)?;
        }
        for i in 0..prototypes.len() {
            for j in i + 1..prototypes.len() {
                if prototypes[i].distance(&prototypes[j]) <= DEFAULT_TOL {
                    return Err(Error::InvalidInput(format!("prototypes {i} and {j} coincide")));
                }
            }
        }
        Ok(LabeledPrototypeSet { prototypes, labels })
    }

    /// Single prototype: the constant classifier.
    pub fn constant(at: Point, label: Label) -> Self {
        LabeledPrototypeSet { prototypes: vec![at], labels: vec![label] }
    }

    pub fn len(&self) -> usize {
        self.prototypes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prototypes.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.prototypes[0].dim()
    }

    pub fn prototypes(&self) -> &[Point] {
        &self.prototypes
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, Label)> {
        self.prototypes.iter().zip(self.labels.iter().copied())
    }
}

/// Outcome of classifying one query point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Classification {
    pub label: Label,
    /// Non-negative; `+inf` when the prototype set has a single label.
    pub margin: f64,
}

/// Label of the nearest prototype to `x`, with its margin.
pub fn classify(set: &LabeledPrototypeSet, x: &Point) -> Result<Classification> {
    check_dim(x.dim(), set.dim())?;
    Ok(classify_unchecked(set, x))
}

pub(crate) fn classify_unchecked(set: &LabeledPrototypeSet, x: &Point) -> Classification {
    let (pos, neg) = nearest_per_class(set, x);
    if pos <= neg {
        Classification { label: Label::Pos, margin: neg - pos }
    } else {
        Classification { label: Label::Neg, margin: pos - neg }
    }
}

/// Distance from `x` to the nearest +1 and nearest -1 prototype (`+inf` when
/// a class is absent).
fn nearest_per_class(set: &LabeledPrototypeSet, x: &Point) -> (f64, f64) {
    let mut pos = f64::INFINITY;
    let mut neg = f64::INFINITY;
    for (p, l) in set.iter() {
        let d = p.distance_sq(x);
        match l {
            Label::Pos => pos = pos.min(d),
            Label::Neg => neg = neg.min(d),
        }
    }
    (pos.sqrt(), neg.sqrt())
}

/// Smallest signed margin over `pts`: the margin where the point is
/// classified as `target` says, minus the margin where it is not.
/// Positive iff every point is classified correctly.
pub fn signed_min_margin(set: &LabeledPrototypeSet, pts: &[Point], target: Labeling) -> f64 {
    pts.iter()
        .enumerate()
        .map(|(i, x)| {
            let (pos, neg) = nearest_per_class(set, x);
            match target.get(i) {
                Label::Pos => neg - pos,
                Label::Neg => pos - neg,
            }
        })
        .fold(f64::INFINITY, f64::min)
}

/// True iff `set` labels every point of `pts` as `target` does, each with
/// margin at least `mu`.
pub fn realizes(set: &LabeledPrototypeSet, pts: &[Point], target: Labeling, mu: f64) -> Result<bool> {
    if !(mu > 0.0) {
        return Err(Error::InvalidInput(format!("margin threshold must be positive, got {mu}")));
    }
    if pts.len() != target.len() {
        return Err(Error::InvalidInput(format!("{} points but a labeling of {}", pts.len(), target.len())));
    }
    for p in pts {
        check_dim(p.dim(), set.dim())?;
    }
    Ok(signed_min_margin(set, pts, target) >= mu)
}
