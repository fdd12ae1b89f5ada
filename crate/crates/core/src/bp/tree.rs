use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{invalid, Error, Result};
use crate::reals::APFunc;

/// A branch of ω^ω: either a whole [`APFunc`] or a finite prefix of one.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Branch {
    Func(APFunc),
    Prefix(Vec<u64>),
}

impl Branch {
    pub fn value(&self, k: usize) -> Option<u64> {
        match self {
            Branch::Func(f) => Some(f.value(k)),
            Branch::Prefix(p) => p.get(k).copied(),
        }
    }

    /// First coordinate where the two branches differ, `None` when they are
    /// equal or one prefix runs out before a difference.
    pub fn first_difference(&self, other: &Branch) -> Result<usize> {
        match (self, other) {
            (Branch::Func(f), Branch::Func(g)) => f
                .first_difference(g)
                .ok_or_else(|| Error::Invalid(format!("branches {f} and {g} are equal"))),
            _ => {
                let mut k = 0;
                loop {
                    match (self.value(k), other.value(k)) {
                        (Some(a), Some(b)) if a == b => k += 1,
                        (Some(_), Some(_)) => return Ok(k),
                        _ => return invalid("prefixes agree as far as they are known"),
                    }
                }
            }
        }
    }
}

impl From<APFunc> for Branch {
    fn from(f: APFunc) -> Self {
        Branch::Func(f)
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Branch::Func(g) => write!(f, "{g}"),
            Branch::Prefix(p) => {
                let vals: Vec<String> = p.iter().map(u64::to_string).collect();
                write!(f, "prefix:{}", vals.join(","))
            }
        }
    }
}

impl FromStr for Branch {
    type Err = Error;

    /// Either an APFunc literal or `prefix:v0,v1,…`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().strip_prefix("prefix:") {
            Some("") => Ok(Branch::Prefix(vec![])),
            Some(rest) => rest
                .split(',')
                .map(|v| v.trim().parse::<u64>().map_err(|_| Error::Parse(format!("bad prefix value {v:?}"))))
                .collect::<Result<Vec<_>>>()
                .map(Branch::Prefix),
            None => s.parse().map(Branch::Func),
        }
    }
}

/// A node of Tₙ: ω-branching on the first `n` levels, binary afterwards.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TreeNode {
    n: usize,
    head: Vec<u64>,
    tail: Vec<bool>,
}

impl TreeNode {
    pub fn new(n: usize, entries: &[u64]) -> Result<Self> {
        if n == 0 {
            return invalid("tree parameter n must be ≥ 1");
        }
        let split = entries.len().min(n);
        let mut tail = Vec::with_capacity(entries.len() - split);
        for &e in &entries[split..] {
            match e {
                0 => tail.push(false),
                1 => tail.push(true),
                _ => return invalid(format!("entry {e} past level {n} must be binary")),
            }
        }
        Ok(TreeNode { n, head: entries[..split].to_vec(), tail })
    }

    pub(crate) fn from_parts(n: usize, head: Vec<u64>, tail: Vec<bool>) -> Self {
        debug_assert!(head.len() == n || tail.is_empty());
        TreeNode { n, head, tail }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn level(&self) -> usize {
        self.head.len() + self.tail.len()
    }

    pub fn head(&self) -> &[u64] {
        &self.head
    }

    pub fn tail(&self) -> &[bool] {
        &self.tail
    }

    pub fn entries(&self) -> Vec<u64> {
        let mut out = self.head.clone();
        out.extend(self.tail.iter().map(|&b| b as u64));
        out
    }

    pub fn restrict(&self, level: usize) -> TreeNode {
        let h = level.min(self.head.len());
        let t = level.saturating_sub(self.n).min(self.tail.len());
        TreeNode { n: self.n, head: self.head[..h].to_vec(), tail: self.tail[..t].to_vec() }
    }

    pub fn is_prefix_of(&self, other: &TreeNode) -> bool {
        self.n == other.n
            && self.level() <= other.level()
            && other.head.starts_with(&self.head)
            && other.tail.starts_with(&self.tail)
    }

    pub fn comparable(&self, other: &TreeNode) -> bool {
        self.is_prefix_of(other) || other.is_prefix_of(self)
    }

    /// Reads the node back through the block coding: the exactly determined
    /// coordinates, and the length of a trailing run of 1s (a lower bound
    /// for the next coordinate).
    pub fn decode(&self) -> (Vec<u64>, usize) {
        let mut values = self.head.clone();
        let mut run = 0usize;
        for &b in &self.tail {
            if b {
                run += 1;
            } else {
                values.push(run as u64);
                run = 0;
            }
        }
        (values, run)
    }
}

impl fmt::Debug for TreeNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T{}{:?}", self.n, self.entries())
    }
}

impl Serialize for TreeNode {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries().serialize(s)
    }
}

/// `ιₙ` applied to a finite sequence: identity on the first `n` coordinates,
/// then each coordinate `m` becomes the block `1^m 0`.
pub fn iota(n: usize, f: &[u64]) -> Result<TreeNode> {
    if n == 0 {
        return invalid("tree parameter n must be ≥ 1");
    }
    let split = f.len().min(n);
    let mut tail = Vec::new();
    for &m in &f[split..] {
        tail.extend(std::iter::repeat_n(true, m as usize));
        tail.push(false);
    }
    Ok(TreeNode::from_parts(n, f[..split].to_vec(), tail))
}

/// `ιₙ(f)↾level` together with the number of coordinates of `f` it reads.
pub fn iota_restrict(n: usize, f: &Branch, level: usize) -> Result<(TreeNode, usize)> {
    if n == 0 {
        return invalid("tree parameter n must be ≥ 1");
    }
    let need = |k: usize| f.value(k).ok_or(Error::InsufficientPrefix { level });
    let h = level.min(n);
    let head = (0..h).map(need).collect::<Result<Vec<_>>>()?;
    let want = level.saturating_sub(n);
    let mut tail = Vec::with_capacity(want);
    let mut k = h;
    while tail.len() < want {
        let m = need(k)?;
        k += 1;
        let ones = (m.min((want - tail.len()) as u64)) as usize;
        tail.extend(std::iter::repeat_n(true, ones));
        if tail.len() < want {
            tail.push(false);
        }
    }
    Ok((TreeNode::from_parts(n, head, tail), k))
}

/// Level at which `ιₙ(f)` and `ιₙ(g)` first differ, i.e. the least `l` with
/// `ιₙ(f)↾l ≠ ιₙ(g)↾l`.
pub fn iota_split_level(n: usize, f: &Branch, g: &Branch) -> Result<usize> {
    let k = f.first_difference(g)?;
    if k < n {
        return Ok(k + 1);
    }
    let mut s = n as u64;
    for j in n..k {
        let v = f.value(j).expect("agreeing coordinates are known");
        s = s.saturating_add(v).saturating_add(1);
    }
    let a = f.value(k).expect("difference is known");
    let b = g.value(k).expect("difference is known");
    let level = s.saturating_add(a.min(b)).saturating_add(1);
    usize::try_from(level).map_err(|_| Error::Resource("split level exceeds usize".into()))
}

#[derive(Serialize)]
struct NodeList<'a> {
    level: usize,
    nodes: &'a [TreeNode],
}

/// JSON shape `{level, nodes: [[…]…]}` shared by tuples and certificates.
pub(crate) fn serialize_nodes<S: Serializer>(
    level: usize,
    nodes: &[TreeNode],
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    NodeList { level, nodes }.serialize(s)
}

impl<'de> Deserialize<'de> for Branch {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

impl Serialize for Branch {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
