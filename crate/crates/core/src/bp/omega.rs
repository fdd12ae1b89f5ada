use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use super::code::{code_below, tuple_code, tuple_decode};
use super::tree::{serialize_nodes, TreeNode};
use crate::error::{invalid, Error, Result};

/// Tuples above this level are never materialized.
pub const MAX_LEVEL: usize = 1 << 20;

pub(crate) fn check_level(level: usize) -> Result<()> {
    if level > MAX_LEVEL {
        return Err(Error::Resource(format!("tree level {level} exceeds the cap {MAX_LEVEL}")));
    }
    Ok(())
}

/// An element of Ω for column `n`: `n` nodes of Tₙ at a common level `l > n`
/// whose level-`n` prefixes have code below `l`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct OmegaTuple {
    level: usize,
    nodes: Vec<TreeNode>,
}

impl OmegaTuple {
    pub fn new(nodes: Vec<TreeNode>) -> Result<Self> {
        let n = nodes.len();
        if n == 0 {
            return invalid("an Ω tuple needs at least one node");
        }
        let level = nodes[0].level();
        if nodes.iter().any(|t| t.n() != n || t.level() != level) {
            return invalid(format!("Ω tuple for column {n} needs {n} nodes of T{n} at one level"));
        }
        if level <= n {
            return invalid(format!("Ω tuple level {level} must exceed {n}"));
        }
        let heads: Vec<Vec<u64>> = nodes.iter().map(|t| t.head().to_vec()).collect();
        if !code_below(&heads, level as u128)? {
            return invalid(format!("prefix code of the tuple is not below its level {level}"));
        }
        Ok(OmegaTuple { level, nodes })
    }

    /// Parses `{level, nodes: [[…]…]}` (the level field is optional).
    pub fn from_json(v: &serde_json::Value) -> Result<Self> {
        let bad = || Error::Parse(format!("bad Ω tuple {v}"));
        let nodes = v.get("nodes").and_then(|n| n.as_array()).ok_or_else(bad)?;
        let n = nodes.len();
        let nodes = nodes
            .iter()
            .map(|node| {
                let entries: Vec<u64> = node
                    .as_array()
                    .ok_or_else(bad)?
                    .iter()
                    .map(|e| e.as_u64().ok_or_else(bad))
                    .collect::<Result<_>>()?;
                TreeNode::new(n, &entries)
            })
            .collect::<Result<Vec<_>>>()?;
        let t = OmegaTuple::new(nodes)?;
        if let Some(l) = v.get("level") {
            if l.as_u64() != Some(t.level as u64) {
                return Err(bad());
            }
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn contains_node(&self, node: &TreeNode) -> bool {
        self.nodes.iter().any(|t| t == node)
    }

    /// Position of this tuple in the enumeration of Ω.
    pub fn index(&self) -> BigUint {
        let n = self.n();
        let heads: Vec<Vec<u64>> = self.nodes.iter().map(|t| t.head().to_vec()).collect();
        let c = tuple_code(&heads).expect("validated tuple");
        let digits: Vec<u8> = self.nodes.iter().flat_map(|t| t.tail().iter().map(|&b| u8::from(b))).collect();
        let suffix = BigUint::from_radix_be(&digits, 2).unwrap_or_default();
        level_start(n, self.level) + (BigUint::from(c) << (n * (self.level - n))) + suffix
    }
}

impl Serialize for OmegaTuple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        serialize_nodes(self.level, &self.nodes, s)
    }
}

/// `|Ω_l|` for column `n`, i.e. `l · 2^{n(l−n)}`.
pub fn level_size(n: usize, level: usize) -> BigUint {
    BigUint::from(level) << (n * (level - n))
}

/// Number of Ω tuples of column `n` below level `l`:
/// `Σ_{L=n+1}^{l−1} L·x^{L−n}` with `x = 2ⁿ`, in closed form.
pub fn level_start(n: usize, level: usize) -> BigUint {
    if level <= n + 1 {
        return BigUint::zero();
    }
    let m = level - n;
    let x = BigUint::one() << n;
    let xm = BigUint::one() << (n * m);
    let one = BigUint::one();
    let xm1 = &x - &one;
    // Σ_{j<m} x^j and Σ_{j<m} j x^j
    let g = (&xm - &one) / &xm1;
    let h = (&x + BigUint::from(m - 1) * &xm * &x - BigUint::from(m) * &xm) / (&xm1 * &xm1);
    h + BigUint::from(n) * (g - one)
}

/// The Ω tuple of column `n` with the given index.
pub fn tuple_at(n: usize, index: &BigUint) -> Result<OmegaTuple> {
    if n == 0 {
        return invalid("column 0 carries no Ω tuples");
    }
    // exponential then binary search for the level holding `index`
    let mut hi = n + 2;
    while level_start(n, hi) <= *index {
        hi = n + 1 + 2 * (hi - n);
        check_level(hi / 2)?;
    }
    let mut lo = n + 1;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if level_start(n, mid) <= *index {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let level = lo;
    check_level(level)?;
    let rem = index - level_start(n, level);
    let bits = n * (level - n);
    let c = (&rem >> bits).to_u128().expect("code below level");
    let heads = tuple_decode(n, c);
    let width = level - n;
    let nodes = heads
        .into_iter()
        .enumerate()
        .map(|(i, head)| {
            let offset = (n - 1 - i) * width;
            let tail = (0..width).map(|j| rem.bit((offset + width - 1 - j) as u64)).collect();
            TreeNode::from_parts(n, head, tail)
        })
        .collect();
    Ok(OmegaTuple { level, nodes })
}

/// All Ω tuples of column `n` at `level`, in enumeration order. Only for
/// small levels.
pub fn tuples_at_level(n: usize, level: usize) -> Result<Vec<OmegaTuple>> {
    let size = level_size(n, level);
    let count = size.to_usize().filter(|&c| c <= 1 << 22).ok_or_else(|| {
        Error::Resource(format!("level {level} of column {n} has {size} tuples"))
    })?;
    let start = level_start(n, level);
    (0..count).map(|i| tuple_at(n, &(&start + i))).collect()
}

/// Cantor pairing `π(x, y) = (x+y)(x+y+1)/2 + y`.
pub fn pair(x: &BigUint, y: &BigUint) -> BigUint {
    let s = x + y;
    (&s * (&s + 1u32)) / 2u32 + y
}

/// Floor square root, recursing on the top half so only the last Newton step is full width.
fn isqrt(z: &BigUint) -> BigUint {
    let bits = z.bits();
    if bits <= 256 {
        return z.sqrt();
    }
    let k = bits / 4;
    let mut s = isqrt(&(z >> (2 * k))) << k;
    s = (&s + z / &s) >> 1u32;
    while &s * &s > *z {
        s -= 1u32;
    }
    while (&s + 1u32) * (&s + 1u32) <= *z {
        s += 1u32;
    }
    s
}

pub fn unpair(z: &BigUint) -> (BigUint, BigUint) {
    let mut w = (isqrt(&(z * 8u32 + 1u32)) - 1u32) / 2u32;
    // guard against rounding at the boundary
    while &w * (&w + 1u32) / 2u32 > *z {
        w -= 1u32;
    }
    let t = &w * (&w + 1u32) / 2u32;
    let y = z - t;
    let x = &w - &y;
    (x, y)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isqrt_is_exact_on_wide_values() {
        for e in [300u32, 1000, 4097] {
            for d in [0u32, 1, 7] {
                let r = (BigUint::one() << e) + BigUint::from(d * 12345 + 3);
                let sq = &r * &r;
                assert_eq!(isqrt(&sq), r);
                assert_eq!(isqrt(&(&sq - 1u32)), &r - 1u32);
                assert_eq!(isqrt(&(&sq + &r + &r)), r);
            }
        }
    }

    #[test]
    fn level_offsets_match_direct_sums() {
        for n in 1..=3 {
            let mut acc = BigUint::zero();
            for l in n + 1..n + 12 {
                assert_eq!(level_start(n, l), acc, "n={n} l={l}");
                acc += level_size(n, l);
            }
        }
    }

    #[test]
    fn enumeration_is_a_bijection_on_small_levels() {
        for n in 1..=2 {
            let mut idx = BigUint::zero();
            for l in n + 1..n + 5 {
                let all = tuples_at_level(n, l).unwrap();
                for t in all {
                    assert_eq!(t.level(), l);
                    assert_eq!(t.index(), idx);
                    assert!(OmegaTuple::new(t.nodes().to_vec()).is_ok());
                    idx += 1u32;
                }
            }
        }
    }

    #[test]
    fn level_two_column_one() {
        // Ω at level 2 for n = 1: codes 0, 1 with one bit each
        let all = tuples_at_level(1, 2).unwrap();
        let entries: Vec<Vec<u64>> = all.iter().map(|t| t.nodes()[0].entries()).collect();
        assert_eq!(entries, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn pairing_round_trip() {
        for x in 0u32..40 {
            for y in 0u32..40 {
                let z = pair(&x.into(), &y.into());
                assert_eq!(unpair(&z), (x.into(), y.into()));
            }
        }
        assert_eq!(pair(&2u32.into(), &1u32.into()), 7u32.into());
    }

    #[test]
    fn rejects_invalid_tuples() {
        let t = |e: &[u64]| TreeNode::new(1, e).unwrap();
        assert!(OmegaTuple::new(vec![t(&[3, 0])]).is_err());
        assert!(OmegaTuple::new(vec![t(&[0])]).is_err());
        assert!(OmegaTuple::new(vec![t(&[1, 0])]).is_ok());
    }
}
