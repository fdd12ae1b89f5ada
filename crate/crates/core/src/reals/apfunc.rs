use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::lcm;
use crate::error::{invalid, Error, Result};

/// An arithmetically periodic function ω → ω.
///
/// `f(k) = prefix[k]` for `k < n0 = prefix.len()`, and
/// `f(n0 + q·p + i) = base[i] + q·drift` with `p = base.len()`.
/// Stored canonically: primitive period first, then shortest prefix.
/// Values saturate at `u64::MAX`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct APFunc {
    prefix: Vec<u64>,
    base: Vec<u64>,
    drift: u64,
}

impl APFunc {
    pub fn new(mut prefix: Vec<u64>, mut base: Vec<u64>, mut drift: u64) -> Result<Self> {
        if base.is_empty() {
            return invalid("APFunc base must be nonempty");
        }
        reduce_period(&mut base, &mut drift);
        let p = base.len();
        while let Some(&last) = prefix.last() {
            if last.checked_add(drift) != Some(base[p - 1]) {
                break;
            }
            prefix.pop();
            base.rotate_right(1);
            base[0] = last;
        }
        Ok(APFunc { prefix, base, drift })
    }

    pub fn constant(c: u64) -> Self {
        APFunc { prefix: vec![], base: vec![c], drift: 0 }
    }

    pub fn identity() -> Self {
        APFunc { prefix: vec![], base: vec![0], drift: 1 }
    }

    /// `k ↦ slope·k + offset`.
    pub fn linear(slope: u64, offset: u64) -> Self {
        APFunc { prefix: vec![], base: vec![offset], drift: slope }
    }

    /// Function equal to `values` on `[0, values.len())` and to `tail` afterwards.
    pub fn with_prefix(values: &[u64], tail: &APFunc) -> Self {
        let n0 = values.len();
        let p = tail.base.len();
        let base = (n0..n0 + p).map(|k| tail.value(k)).collect();
        APFunc::new(values.to_vec(), base, tail.drift).expect("nonempty base")
    }

    pub fn prefix(&self) -> &[u64] {
        &self.prefix
    }

    pub fn base(&self) -> &[u64] {
        &self.base
    }

    pub fn drift(&self) -> u64 {
        self.drift
    }

    pub fn period(&self) -> usize {
        self.base.len()
    }

    pub fn value(&self, k: usize) -> u64 {
        match self.prefix.get(k) {
            Some(&v) => v,
            None => {
                let j = k - self.prefix.len();
                let p = self.base.len();
                let v = self.base[j % p] as u128 + (j / p) as u128 * self.drift as u128;
                u64::try_from(v).unwrap_or(u64::MAX)
            }
        }
    }

    pub fn values(&self, n: usize) -> Vec<u64> {
        (0..n).map(|k| self.value(k)).collect()
    }

    pub fn is_eventually_bounded(&self) -> bool {
        self.drift == 0
    }

    /// Compares `drift/p` as exact rationals.
    pub fn cmp_slope(&self, other: &APFunc) -> Ordering {
        let a = self.drift as u128 * other.base.len() as u128;
        let b = other.drift as u128 * self.base.len() as u128;
        a.cmp(&b)
    }

    /// Compares the slope with the rational `num/den`.
    pub fn cmp_slope_with(&self, num: u64, den: u64) -> Ordering {
        (self.drift as u128 * den as u128).cmp(&(num as u128 * self.base.len() as u128))
    }

    /// Window `(n0, L)` beyond which both functions are affine on every
    /// residue class mod `L`.
    fn joint_window(&self, other: &APFunc) -> (usize, usize) {
        (
            self.prefix.len().max(other.prefix.len()),
            lcm(self.base.len(), other.base.len()),
        )
    }

    /// Increase of `self` over `l` consecutive indices past the prefix
    /// (`l` must be a multiple of the period).
    fn step_over(&self, l: usize) -> u128 {
        self.drift as u128 * (l / self.base.len()) as u128
    }

    /// `other ≤* self`: `other(k) ≤ self(k)` for all but finitely many `k`.
    pub fn eventually_dominates(&self, other: &APFunc) -> bool {
        match other.cmp_slope(self) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => {
                let (n0, l) = self.joint_window(other);
                (n0..n0 + l).all(|k| other.value(k) <= self.value(k))
            }
        }
    }

    /// Index from which the larger-slope argument wins on every residue (for
    /// equal slopes, the start of the joint periodic window).
    pub fn crossover(&self, other: &APFunc) -> usize {
        let (n0, l) = self.joint_window(other);
        let (hi, lo) = match self.cmp_slope(other) {
            Ordering::Equal => return n0,
            Ordering::Greater => (self, other),
            Ordering::Less => (other, self),
        };
        let gain = hi.step_over(l) - lo.step_over(l);
        let blocks = (n0..n0 + l)
            .map(|k| {
                let (a, b) = (hi.value(k) as u128, lo.value(k) as u128);
                if b > a {
                    (b - a).div_ceil(gain)
                } else {
                    0
                }
            })
            .max()
            .unwrap_or(0);
        n0 + blocks as usize * l
    }

    /// Pointwise maximum.
    pub fn ap_max(&self, other: &APFunc) -> APFunc {
        let c = self.crossover(other);
        let prefix: Vec<u64> = (0..c).map(|k| self.value(k).max(other.value(k))).collect();
        match self.cmp_slope(other) {
            Ordering::Equal => {
                let l = lcm(self.base.len(), other.base.len());
                let base = (c..c + l).map(|k| self.value(k).max(other.value(k))).collect();
                let drift = u64::try_from(self.step_over(l)).unwrap_or(u64::MAX);
                APFunc::new(prefix, base, drift).expect("nonempty base")
            }
            Ordering::Greater => APFunc::with_prefix(&prefix, self),
            Ordering::Less => APFunc::with_prefix(&prefix, other),
        }
    }

    /// Pointwise `f + c`.
    pub fn add_const(&self, c: u64) -> APFunc {
        APFunc {
            prefix: self.prefix.iter().map(|v| v.saturating_add(c)).collect(),
            base: self.base.iter().map(|v| v.saturating_add(c)).collect(),
            drift: self.drift,
        }
    }

    /// First index where the two functions differ, `None` if equal.
    pub fn first_difference(&self, other: &APFunc) -> Option<usize> {
        if self == other {
            return None;
        }
        let (n0, l) = self.joint_window(other);
        (0..n0 + 2 * l).find(|&k| self.value(k) != other.value(k))
    }
}

/// Replaces `(base, drift)` by the shortest equivalent period.
fn reduce_period(base: &mut Vec<u64>, drift: &mut u64) {
    let p = base.len();
    for d in (1..p).filter(|d| p.is_multiple_of(*d)) {
        let total = *drift as u128 * d as u128;
        if !total.is_multiple_of(p as u128) {
            continue;
        }
        let step = (total / p as u128) as u64;
        if (d..p).all(|i| base[i - d].checked_add(step) == Some(base[i])) {
            base.truncate(d);
            *drift = step;
            return;
        }
    }
}

fn join(values: &[u64]) -> String {
    values.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

fn split_values(s: &str) -> Result<Vec<u64>> {
    let s = s.trim();
    if s.is_empty() || s == "ε" {
        return Ok(vec![]);
    }
    s.split(',')
        .map(|v| {
            v.trim()
                .parse::<u64>()
                .map_err(|e| Error::Parse(format!("bad natural {v:?}: {e}")))
        })
        .collect()
}

impl fmt::Display for APFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{};{};{}", join(&self.prefix), join(&self.base), self.drift)
    }
}

impl fmt::Debug for APFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "APFunc({self})")
    }
}

impl FromStr for APFunc {
    type Err = Error;

    /// Parses `v0,v1,..;b0,b1,..;drift`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.trim().split(';').collect();
        let [pre, base, drift] = parts.as_slice() else {
            return Err(Error::Parse(format!("APFunc literal {s:?} needs three ';'-separated fields")));
        };
        let base = split_values(base)?;
        if base.is_empty() {
            return Err(Error::Parse(format!("APFunc literal {s:?} has empty base")));
        }
        let drift = drift
            .trim()
            .parse()
            .map_err(|e| Error::Parse(format!("bad drift in {s:?}: {e}")))?;
        APFunc::new(split_values(pre)?, base, drift)
    }
}

impl Serialize for APFunc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for APFunc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
