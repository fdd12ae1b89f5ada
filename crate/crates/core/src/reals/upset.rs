use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{canonicalize_word, lcm};
use crate::error::{invalid, Error, Result};

/// An ultimately periodic subset of ω.
///
/// Membership of `k < prefix.len()` is `prefix[k]`; beyond the prefix it is
/// `period[(k - prefix.len()) % period.len()]`. The value is always stored
/// canonically (primitive period, shortest prefix).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UPSet {
    prefix: Vec<bool>,
    period: Vec<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SetOp {
    Intersect,
    Union,
    Minus,
}

impl UPSet {
    pub fn new(mut prefix: Vec<bool>, mut period: Vec<bool>) -> Result<Self> {
        if period.is_empty() {
            return invalid("UPSet period must be nonempty");
        }
        canonicalize_word(&mut prefix, &mut period);
        Ok(UPSet { prefix, period })
    }

    pub fn empty() -> Self {
        UPSet { prefix: vec![], period: vec![false] }
    }

    pub fn all() -> Self {
        UPSet { prefix: vec![], period: vec![true] }
    }

    pub fn evens() -> Self {
        Self::residues(2, &[0])
    }

    pub fn odds() -> Self {
        Self::residues(2, &[1])
    }

    /// `{k : k mod modulus ∈ residues}`.
    pub fn residues(modulus: usize, residues: &[usize]) -> Self {
        assert!(modulus > 0, "modulus must be positive");
        let period = (0..modulus).map(|r| residues.contains(&r)).collect();
        Self::new(vec![], period).expect("nonempty period")
    }

    pub fn finite(elements: &[usize]) -> Self {
        let len = elements.iter().max().map_or(0, |m| m + 1);
        let prefix = (0..len).map(|k| elements.contains(&k)).collect();
        Self::new(prefix, vec![false]).expect("nonempty period")
    }

    /// Builds the set from its characteristic function on `[0, n0 + p)`.
    pub fn from_fn(n0: usize, p: usize, f: impl Fn(usize) -> bool) -> Self {
        let prefix = (0..n0).map(&f).collect();
        let period = (n0..n0 + p).map(&f).collect();
        Self::new(prefix, period).expect("nonempty period")
    }

    pub fn prefix(&self) -> &[bool] {
        &self.prefix
    }

    pub fn period(&self) -> &[bool] {
        &self.period
    }

    pub fn contains(&self, k: usize) -> bool {
        match self.prefix.get(k) {
            Some(&b) => b,
            None => self.period[(k - self.prefix.len()) % self.period.len()],
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.period.iter().any(|&b| b)
    }

    pub fn is_finite(&self) -> bool {
        !self.is_infinite()
    }

    pub fn is_coinfinite(&self) -> bool {
        self.period.iter().any(|&b| !b)
    }

    /// Infinite and co-infinite.
    pub fn is_ic(&self) -> bool {
        self.is_infinite() && self.is_coinfinite()
    }

    /// Elements below `bound`.
    pub fn elements_below(&self, bound: usize) -> Vec<usize> {
        (0..bound).filter(|&k| self.contains(k)).collect()
    }

    /// Length of the window `[0, prefix + period)` that determines the set.
    pub fn horizon(&self) -> usize {
        self.prefix.len() + self.period.len()
    }

    pub fn complement(&self) -> Self {
        UPSet {
            prefix: self.prefix.iter().map(|b| !b).collect(),
            period: self.period.iter().map(|b| !b).collect(),
        }
    }

    pub fn combine(&self, other: &UPSet, op: SetOp) -> UPSet {
        let n0 = self.prefix.len().max(other.prefix.len());
        let p = lcm(self.period.len(), other.period.len());
        UPSet::from_fn(n0, p, |k| {
            let (a, b) = (self.contains(k), other.contains(k));
            match op {
                SetOp::Intersect => a && b,
                SetOp::Union => a || b,
                SetOp::Minus => a && !b,
            }
        })
    }

    pub fn intersect(&self, other: &UPSet) -> UPSet {
        self.combine(other, SetOp::Intersect)
    }

    pub fn union(&self, other: &UPSet) -> UPSet {
        self.combine(other, SetOp::Union)
    }

    pub fn minus(&self, other: &UPSet) -> UPSet {
        self.combine(other, SetOp::Minus)
    }

    /// `self ⊂* other`: `self ∖ other` is finite.
    pub fn almost_subset(&self, other: &UPSet) -> bool {
        self.minus(other).is_finite()
    }

    /// `self =* other`.
    pub fn almost_equal(&self, other: &UPSet) -> bool {
        self.almost_subset(other) && other.almost_subset(self)
    }

    /// `self ⊥ other`: the intersection is finite.
    pub fn almost_disjoint(&self, other: &UPSet) -> bool {
        self.intersect(other).is_finite()
    }

    /// Whether the coloring `self` takes both values infinitely often on `target`.
    pub fn splits(&self, target: &UPSet) -> Result<bool> {
        if target.is_finite() {
            return invalid(format!("splitting target {target} is finite"));
        }
        Ok(target.intersect(self).is_infinite() && target.minus(self).is_infinite())
    }

    /// Shifts the set right by `by`: `{k + by : k ∈ self}`.
    pub fn shift(&self, by: usize) -> UPSet {
        let mut prefix = vec![false; by];
        prefix.extend_from_slice(&self.prefix);
        UPSet::new(prefix, self.period.clone()).expect("nonempty period")
    }
}

fn write_bits(f: &mut fmt::Formatter<'_>, bits: &[bool]) -> fmt::Result {
    for &b in bits {
        f.write_str(if b { "1" } else { "0" })?;
    }
    Ok(())
}

fn parse_bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::Parse(format!("unexpected character {c:?} in bit string"))),
        })
        .collect()
}

impl fmt::Display for UPSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.prefix.is_empty() {
            f.write_str("ε")?;
        } else {
            write_bits(f, &self.prefix)?;
        }
        f.write_str("|")?;
        write_bits(f, &self.period)
    }
}

impl fmt::Debug for UPSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UPSet({self})")
    }
}

impl FromStr for UPSet {
    type Err = Error;

    /// Parses `prefix|period`, with `ε` (or nothing) for an empty prefix.
    fn from_str(s: &str) -> Result<Self> {
        let (pre, per) = s
            .trim()
            .split_once('|')
            .ok_or_else(|| Error::Parse(format!("UPSet literal {s:?} lacks '|'")))?;
        let pre = if pre == "ε" { "" } else { pre };
        let period = parse_bits(per)?;
        if period.is_empty() {
            return Err(Error::Parse(format!("UPSet literal {s:?} has empty period")));
        }
        UPSet::new(parse_bits(pre)?, period)
    }
}

impl Serialize for UPSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for UPSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
