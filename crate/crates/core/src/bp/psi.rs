use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::Serialize;

use super::code::{tuple_code, tuple_decode};
use super::omega::{check_level, level_start, pair, tuple_at, unpair, OmegaTuple};
use super::tree::{iota_restrict, Branch, TreeNode};
use crate::error::{invalid, Error, Result};
use crate::exec::Exec;

/// Levels whose full enumeration would exceed this many tuples are refused.
const LEVEL_ENUM_CAP: u128 = 1 << 22;

/// All tuples of `ψₙ(f)` at `level`, in Ω order.
pub fn psi_n_level(n: usize, f: &Branch, level: usize) -> Result<Vec<OmegaTuple>> {
    if n == 0 {
        return invalid("column 0 carries no Ω tuples");
    }
    if level <= n {
        return invalid(format!("level {level} must exceed n = {n}"));
    }
    check_level(level)?;
    let (target, _) = iota_restrict(n, f, level)?;
    let w = level - n;
    let mut out = Vec::new();
    for c in 0..level as u128 {
        let heads = tuple_decode(n, c);
        let hits: Vec<usize> = (0..n).filter(|&j| heads[j] == target.head()).collect();
        if hits.is_empty() {
            continue;
        }
        let free = n - 1;
        if free > 0 && (w * free >= 64 || (1u128 << (w * free)) > LEVEL_ENUM_CAP) {
            return Err(Error::Resource(format!("ψ{n} at level {level} is too large to enumerate")));
        }
        let mut block = Vec::new();
        // split by the first position carrying the target, so nothing repeats
        for (idx, &j0) in hits.iter().enumerate() {
            let before: Vec<usize> = hits[..idx].to_vec();
            let others: Vec<usize> = (0..n).filter(|&j| j != j0).collect();
            for s in 0u64..(1u64 << (w * free)) {
                let mut nodes = Vec::with_capacity(n);
                let mut ok = true;
                let mut slot = 0;
                for (j, head) in heads.iter().enumerate() {
                    if j == j0 {
                        nodes.push(target.clone());
                        continue;
                    }
                    let shift = (others.len() - 1 - slot) * w;
                    slot += 1;
                    let tail: Vec<bool> = (0..w).map(|b| (s >> (shift + w - 1 - b)) & 1 == 1).collect();
                    if before.contains(&j) && tail == target.tail() {
                        ok = false;
                        break;
                    }
                    nodes.push(TreeNode::from_parts(n, head.clone(), tail));
                }
                if ok {
                    block.push(nodes);
                }
            }
        }
        block.sort_by(|a, b| {
            let ta = a.iter().flat_map(|t| t.tail());
            let tb = b.iter().flat_map(|t| t.tail());
            ta.cmp(tb)
        });
        out.extend(block.into_iter().map(|nodes| OmegaTuple::new(nodes).expect("valid by construction")));
    }
    Ok(out)
}

/// Whether the natural number `x` lies in `ψ(f)`.
pub fn psi_contains(f: &Branch, x: &BigUint) -> Result<bool> {
    let (col, m) = unpair(x);
    let Some(n) = col.to_usize().filter(|&n| n > 0) else {
        return Ok(false);
    };
    if n > super::omega::MAX_LEVEL {
        return Err(Error::Resource(format!("column {n} is beyond the level cap")));
    }
    let t = tuple_at(n, &m)?;
    let f_head: Vec<u64> = (0..n)
        .map(|k| f.value(k).ok_or(Error::InsufficientPrefix { level: n }))
        .collect::<Result<_>>()?;
    if !t.nodes().iter().any(|node| node.head() == f_head) {
        return Ok(false);
    }
    let (target, _) = iota_restrict(n, f, t.level())?;
    Ok(t.contains_node(&target))
}

/// The part of `ψ(f)` below `N`, with the number of coordinates of `f` read.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PsiPrefix {
    pub bound: u64,
    pub elements: Vec<u64>,
    pub depth: usize,
}

fn pair_u128(x: u128, y: u128) -> Option<u128> {
    let s = x.checked_add(y)?;
    s.checked_mul(s + 1).map(|p| p / 2 + y)
}

/// Least `m` with `π(col, m) ≥ bound`.
fn column_limit(col: u128, bound: u64) -> u128 {
    let (mut lo, mut hi) = (0u128, bound as u128 + 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if pair_u128(col, mid).is_none_or(|p| p >= bound as u128) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// Indices `m < limit` of `ψₙ(f)` in column `n`, and the depth read.
fn column_members(n: usize, f: &Branch, limit: u128) -> Result<(Vec<u128>, usize)> {
    let f_head: Vec<u64> = (0..n)
        .map(|k| f.value(k).ok_or(Error::InsufficientPrefix { level: n }))
        .collect::<Result<_>>()?;
    let mut depth = n;
    let mut out = Vec::new();
    let mut level = n + 1;
    while let Some(start) = level_start(n, level).to_u128().filter(|&s| s < limit) {
        let w = level - n;
        let block_bits = n * w;
        let mut target_tail: Option<Option<u128>> = None;
        for c in 0..level as u128 {
            let base = match c {
                0 => start,
                _ if block_bits >= 120 => break,
                _ => start + (c << block_bits),
            };
            if base >= limit {
                break;
            }
            let heads = tuple_decode(n, c);
            let hits: Vec<usize> = (0..n).filter(|&j| heads[j] == f_head).collect();
            if hits.is_empty() {
                continue;
            }
            let tt = match target_tail {
                Some(t) => t,
                None => {
                    let (node, used) = iota_restrict(n, f, level)?;
                    depth = depth.max(used);
                    let t = if w <= 127 {
                        Some(node.tail().iter().fold(0u128, |acc, &b| acc << 1 | b as u128))
                    } else if node.tail()[..w - 127].iter().any(|&b| b) {
                        None
                    } else {
                        Some(node.tail()[w - 127..].iter().fold(0u128, |acc, &b| acc << 1 | b as u128))
                    };
                    target_tail = Some(t);
                    t
                }
            };
            let Some(tt) = tt else { continue };
            let end = if block_bits >= 120 { limit - base } else { (limit - base).min(1u128 << block_bits) };
            let mask = if w >= 128 { u128::MAX } else { (1u128 << w) - 1 };
            for s in 0..end {
                let hit = hits.iter().any(|&j| {
                    let shift = (n - 1 - j) * w;
                    let part = if shift >= 128 { 0 } else { (s >> shift) & mask };
                    part == tt
                });
                if hit {
                    out.push(base + s);
                }
            }
        }
        level += 1;
        check_level(level)?;
    }
    Ok((out, depth))
}

/// `ψ(f) ∩ [0, N)` with columns placed by Cantor pairing.
pub fn psi_prefix(f: &Branch, bound: u64, exec: Exec) -> Result<PsiPrefix> {
    let cols: Vec<usize> = (1..).take_while(|&c: &usize| pair_u128(c as u128, 0).is_some_and(|p| p < bound as u128)).collect();
    let per = exec.try_map(&cols, |&c| {
        let limit = column_limit(c as u128, bound);
        column_members(c, f, limit).map(|(ms, d)| {
            let xs: Vec<u64> = ms.into_iter().map(|m| pair_u128(c as u128, m).unwrap() as u64).collect();
            (xs, d)
        })
    })?;
    let mut elements: Vec<u64> = per.iter().flat_map(|(xs, _)| xs.iter().copied()).collect();
    elements.sort_unstable();
    let depth = per.iter().map(|(_, d)| *d).max().unwrap_or(0);
    Ok(PsiPrefix { bound, elements, depth })
}

/// Tuples common to `ψₙ(f₁), …, ψₙ(f_k)` for `k ≤ n`, one per level above
/// the code of the level-`n` prefixes.
pub fn witness_stream(n: usize, fs: &[Branch], count: usize, exec: Exec) -> Result<Vec<OmegaTuple>> {
    if fs.is_empty() || fs.len() > n {
        return invalid(format!("witness stream for column {n} needs 1..={n} branches, got {}", fs.len()));
    }
    let padded: Vec<&Branch> = (0..n).map(|i| fs.get(i).unwrap_or(&fs[0])).collect();
    let heads = padded
        .iter()
        .map(|f| iota_restrict(n, f, n).map(|(t, _)| t.head().to_vec()))
        .collect::<Result<Vec<_>>>()?;
    let code = tuple_code(&heads)?;
    let first = usize::try_from(code.max(n as u128) + 1)
        .map_err(|_| Error::Resource(format!("witness levels start at {code}")))?;
    check_level(first + count)?;
    let levels: Vec<usize> = (first..first + count).collect();
    exec.try_map(&levels, |&l| {
        let nodes = padded
            .iter()
            .map(|f| iota_restrict(n, f, l).map(|(t, _)| t))
            .collect::<Result<Vec<_>>>()?;
        let t = OmegaTuple::new(nodes)?;
        for f in fs {
            let (target, _) = iota_restrict(n, f, l)?;
            if !t.contains_node(&target) {
                return invalid("witness misses a branch");
            }
        }
        Ok(t)
    })
}

/// Common elements of `ψ(f₁) ∩ ⋯ ∩ ψ(f_k)`, each re-verified by decoding.
#[derive(Clone, Debug, Serialize)]
pub struct CenteredWitness {
    pub column: usize,
    #[serde(serialize_with = "serialize_big")]
    pub elements: Vec<BigUint>,
    pub tuples: Vec<OmegaTuple>,
}

fn serialize_big<S: serde::Serializer>(xs: &[BigUint], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| x.to_str_radix(10)))
}

pub fn centered_witness(fs: &[Branch], count: usize, exec: Exec) -> Result<CenteredWitness> {
    let mut distinct: Vec<Branch> = Vec::new();
    for f in fs {
        if !distinct.contains(f) {
            distinct.push(f.clone());
        }
    }
    if distinct.is_empty() {
        return invalid("centered witness needs a nonempty family");
    }
    let n = distinct.len();
    let tuples = witness_stream(n, &distinct, count, exec)?;
    let col = BigUint::from(n);
    let elements: Vec<BigUint> = tuples.iter().map(|t| pair(&col, &t.index())).collect();
    let checks = exec.try_map(&elements, |x| {
        distinct.iter().try_fold(true, |acc, f| Ok::<_, Error>(acc && psi_contains(f, x)?))
    })?;
    if checks.iter().any(|ok| !ok) {
        return invalid("a witness failed re-verification");
    }
    Ok(CenteredWitness { column: n, elements, tuples })
}
