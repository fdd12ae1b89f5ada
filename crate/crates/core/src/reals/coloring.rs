use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{canonicalize_word, lcm, APFunc, UPSet};
use crate::error::{invalid, Error, Result};

/// An ultimately periodic coloring `c ∈ n^ω`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NColoring {
    arity: u32,
    prefix: Vec<u32>,
    period: Vec<u32>,
}

impl NColoring {
    pub fn new(arity: u32, mut prefix: Vec<u32>, mut period: Vec<u32>) -> Result<Self> {
        if !(2..=36).contains(&arity) {
            return invalid(format!("coloring arity {arity} outside 2..=36"));
        }
        if period.is_empty() {
            return invalid("coloring period must be nonempty");
        }
        if let Some(c) = prefix.iter().chain(&period).find(|&&c| c >= arity) {
            return invalid(format!("color {c} out of range for arity {arity}"));
        }
        canonicalize_word(&mut prefix, &mut period);
        Ok(NColoring { arity, prefix, period })
    }

    /// `k ↦ k mod n` as an `n`-coloring.
    pub fn modular(n: u32) -> Self {
        Self::new(n, vec![], (0..n).collect()).expect("valid modular coloring")
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    /// The same coloring read in `n^ω` for a different `n`.
    pub fn with_arity(&self, arity: u32) -> Result<Self> {
        Self::new(arity, self.prefix.clone(), self.period.clone())
    }

    pub fn color(&self, k: usize) -> u32 {
        match self.prefix.get(k) {
            Some(&c) => c,
            None => self.period[(k - self.prefix.len()) % self.period.len()],
        }
    }

    /// Whether the coloring is constant on `target` past some point.
    /// Vacuously true when `target` is finite.
    pub fn almost_constant_on(&self, target: &UPSet) -> bool {
        let n0 = self.prefix.len().max(target.prefix().len());
        let l = lcm(self.period.len(), target.period().len());
        let mut seen = None;
        for k in (n0..n0 + l).filter(|&k| target.contains(k)) {
            match seen {
                None => seen = Some(self.color(k)),
                Some(c) if c != self.color(k) => return false,
                Some(_) => {}
            }
        }
        true
    }

    /// The 2-coloring `{k : bit i of c(k) is 1}`.
    pub fn bit_coloring(&self, bit: u32) -> UPSet {
        UPSet::from_fn(self.prefix.len(), self.period.len(), |k| (self.color(k) >> bit) & 1 == 1)
    }

    /// Number of bits needed to write every color.
    pub fn bit_width(&self) -> u32 {
        32 - (self.arity - 1).leading_zeros()
    }
}

fn digit(c: u32) -> char {
    char::from_digit(c, 36).expect("color below 36")
}

impl fmt::Display for NColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.arity)?;
        if self.prefix.is_empty() {
            f.write_str("ε")?;
        }
        for &c in &self.prefix {
            write!(f, "{}", digit(c))?;
        }
        f.write_str("|")?;
        for &c in &self.period {
            write!(f, "{}", digit(c))?;
        }
        Ok(())
    }
}

impl fmt::Debug for NColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NColoring({self})")
    }
}

impl FromStr for NColoring {
    type Err = Error;

    /// Parses `n:prefix|period` with base-36 color digits.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad coloring literal {s:?}"));
        let (n, rest) = s.trim().split_once(':').ok_or_else(bad)?;
        let arity: u32 = n.parse().map_err(|_| bad())?;
        let (pre, per) = rest.split_once('|').ok_or_else(bad)?;
        let pre = if pre == "ε" { "" } else { pre };
        let digits = |w: &str| -> Result<Vec<u32>> {
            w.chars().map(|c| c.to_digit(36).ok_or_else(bad)).collect()
        };
        NColoring::new(arity, digits(pre)?, digits(per)?)
    }
}

impl Serialize for NColoring {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for NColoring {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The 2-coloring `⋃_{i even} [k_i, k_{i+1})` where `k_0 = 0` and
/// `k_{i+1} = max(f(k_i), k_i) + 1` for a driver `f`.
///
/// When `slope(f) ≤ 1` the coloring is ultimately periodic and
/// [`IntervalColoring::as_upset`] returns it exactly. When `slope(f) > 1`
/// the interval lengths tend to infinity, so the coloring splits every
/// infinite set of bounded gaps, in particular every infinite [`UPSet`].
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntervalColoring {
    driver: APFunc,
}

impl IntervalColoring {
    pub fn new(driver: APFunc) -> Self {
        IntervalColoring { driver }
    }

    pub fn driver(&self) -> &APFunc {
        &self.driver
    }

    fn step(&self, k: usize) -> usize {
        (self.driver.value(k) as usize).max(k) + 1
    }

    /// Cut points `k_0 < k_1 < …` up to and including the first one `≥ bound`.
    pub fn cuts_through(&self, bound: usize) -> Vec<usize> {
        let mut cuts = vec![0];
        while *cuts.last().unwrap() < bound {
            let k = *cuts.last().unwrap();
            cuts.push(self.step(k));
        }
        cuts
    }

    pub fn contains(&self, k: usize) -> bool {
        let cuts = self.cuts_through(k + 1);
        let i = cuts.partition_point(|&c| c <= k) - 1;
        i % 2 == 0
    }

    pub fn bits(&self, len: usize) -> Vec<bool> {
        let cuts = self.cuts_through(len);
        let mut out = Vec::with_capacity(len);
        for (i, w) in cuts.windows(2).enumerate() {
            for _ in w[0]..w[1] {
                out.push(i % 2 == 0);
            }
        }
        out.truncate(len);
        out
    }

    /// Index past which the step `k ↦ k_{next}` depends only on `k mod L`.
    fn periodic_threshold(&self) -> Option<(usize, usize)> {
        let f = &self.driver;
        let n0 = f.prefix().len();
        let l = f.period();
        match f.cmp_slope_with(1, 1) {
            Ordering::Greater => None,
            Ordering::Equal => Some((n0, l)),
            Ordering::Less => {
                // f(n0 + r + jl) = a_r + j·A with A < l; f(k) < k once j(l - A) > a_r - n0 - r
                let a_step = f.drift() as usize * (l / f.period());
                let gap = l - a_step;
                let t = (0..l)
                    .map(|r| {
                        let a = f.value(n0 + r) as usize;
                        let blocks = if a + 1 > n0 + r { (a + 1 - n0 - r).div_ceil(gap) } else { 0 };
                        n0 + r + blocks * l
                    })
                    .max()
                    .unwrap_or(n0);
                Some((t, l))
            }
        }
    }

    /// The coloring as an exact [`UPSet`] when the driver has slope ≤ 1.
    pub fn as_upset(&self) -> Option<UPSet> {
        let (threshold, l) = self.periodic_threshold()?;
        let mut k = 0usize;
        let mut i = 0usize;
        let mut seen: HashMap<(usize, usize), usize> = HashMap::new();
        let mut cuts = vec![0usize];
        loop {
            if k >= threshold {
                let state = (k % l, i % 2);
                if let Some(&first) = seen.get(&state) {
                    let start = cuts[first];
                    let bits = self.bits(k);
                    return Some(
                        UPSet::new(bits[..start].to_vec(), bits[start..k].to_vec())
                            .expect("cycle has positive length"),
                    );
                }
                seen.insert(state, i);
            }
            k = self.step(k);
            i += 1;
            cuts.push(k);
        }
    }

    /// Whether this coloring splits the infinite set `target`.
    pub fn splits(&self, target: &UPSet) -> Result<bool> {
        if target.is_finite() {
            return invalid(format!("splitting target {target} is finite"));
        }
        match self.as_upset() {
            Some(c) => c.splits(target),
            None => Ok(true),
        }
    }
}

impl fmt::Display for IntervalColoring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.driver)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bit_extraction_table() {
        let c = NColoring::modular(4);
        assert_eq!(c.bit_coloring(0), UPSet::residues(4, &[1, 3]));
        assert_eq!(c.bit_coloring(1), UPSet::residues(4, &[2, 3]));
        assert_eq!(c.bit_width(), 2);
        assert_eq!(NColoring::modular(5).bit_width(), 3);
    }

    #[test]
    fn almost_constant() {
        let c = NColoring::modular(3);
        assert!(c.almost_constant_on(&UPSet::residues(3, &[1])));
        assert!(!c.almost_constant_on(&UPSet::evens()));
        assert!(c.almost_constant_on(&UPSet::residues(6, &[0])));
        let constant = NColoring::new(2, vec![], vec![1]).unwrap();
        assert!(constant.almost_constant_on(&UPSet::residues(7, &[2, 5])));
    }

    #[test]
    fn coloring_literals() {
        let c: NColoring = "4:ε|0123".parse().unwrap();
        assert_eq!(c, NColoring::modular(4));
        assert_eq!(c.to_string(), "4:ε|0123");
        assert!("2:ε|012".parse::<NColoring>().is_err());
    }

    #[test]
    fn interval_coloring_regimes() {
        // slope 0: intervals become singletons, alternating from some phase
        let ic = IntervalColoring::new(APFunc::constant(3));
        let u = ic.as_upset().unwrap();
        let bits = ic.bits(40);
        for (k, &b) in bits.iter().enumerate() {
            assert_eq!(u.contains(k), b, "k = {k}");
        }
        // slope 1: constant-length intervals
        let ic = IntervalColoring::new(APFunc::linear(1, 2));
        let u = ic.as_upset().unwrap();
        assert_eq!(u.period().len(), 6);
        // slope 2: not periodic, splits everything infinite
        let ic = IntervalColoring::new(APFunc::linear(2, 0));
        assert!(ic.as_upset().is_none());
        assert!(ic.splits(&UPSet::residues(5, &[3])).unwrap());
    }

    proptest! {
        #[test]
        fn slope_le_one_colorings_are_exact(pre in proptest::collection::vec(0u64..20, 0..4),
                                            base in proptest::collection::vec(0u64..20, 1..4),
                                            drift_num in 0u64..2) {
            let p = base.len() as u64;
            let f = APFunc::new(pre, base, drift_num * p).unwrap();
            let ic = IntervalColoring::new(f);
            let u = ic.as_upset().unwrap();
            let bits = ic.bits(u.horizon() * 3 + 50);
            for (k, &b) in bits.iter().enumerate() {
                prop_assert_eq!(u.contains(k), b);
            }
        }
    }
}
