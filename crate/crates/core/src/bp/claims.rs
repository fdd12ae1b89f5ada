//! Finiteness of n+1-fold intersections within one column, and emptiness
//! certificates for families that are spread out at level n.

use std::collections::BTreeSet;

use serde::Serialize;

use super::code::tuple_decode;
use super::omega::{check_level, OmegaTuple};
use super::tree::{iota_restrict, iota_split_level, Branch, TreeNode};
use crate::error::{invalid, Error, Result};
use crate::exec::Exec;

const FREE_ENUM_CAP: usize = 22;

/// The exact, complete intersection `ψₙ(f₀) ∩ ⋯ ∩ ψₙ(fₙ)`.
#[derive(Clone, Debug, Serialize)]
pub struct IntersectionCertificate {
    pub column: usize,
    /// Least level at which the `n+1` branches are pairwise distinct; no
    /// tuple at this level or above can contain them all.
    pub split_level: usize,
    pub elements: Vec<OmegaTuple>,
}

/// Level-`level` tuples containing every node of `targets`.
fn tuples_containing(n: usize, level: usize, targets: &[TreeNode]) -> Result<Vec<OmegaTuple>> {
    let w = level - n;
    let mut found: BTreeSet<(u128, Vec<bool>)> = BTreeSet::new();
    for c in 0..level as u128 {
        let heads = tuple_decode(n, c);
        // injective assignment of targets to positions with matching heads
        let mut slots: Vec<Option<usize>> = vec![None; n];
        assign(&heads, targets, 0, &mut slots, &mut |slots| {
            let free: Vec<usize> = (0..n).filter(|&j| slots[j].is_none()).collect();
            if w * free.len() > FREE_ENUM_CAP {
                return Err(Error::Resource(format!(
                    "{} free components of width {w} at level {level}",
                    free.len()
                )));
            }
            for s in 0u64..(1u64 << (w * free.len())) {
                let mut bits = Vec::with_capacity(n * w);
                let mut slot = 0;
                for fixed in slots.iter() {
                    match *fixed {
                        Some(t) => bits.extend_from_slice(targets[t].tail()),
                        None => {
                            let shift = (free.len() - 1 - slot) * w;
                            slot += 1;
                            bits.extend((0..w).map(|b| (s >> (shift + w - 1 - b)) & 1 == 1));
                        }
                    }
                }
                found.insert((c, bits));
            }
            Ok(())
        })?;
    }
    found
        .into_iter()
        .map(|(c, bits)| {
            let heads = tuple_decode(n, c);
            let nodes = heads
                .into_iter()
                .enumerate()
                .map(|(j, h)| TreeNode::from_parts(n, h, bits[j * w..(j + 1) * w].to_vec()))
                .collect();
            OmegaTuple::new(nodes)
        })
        .collect()
}

fn assign(
    heads: &[Vec<u64>],
    targets: &[TreeNode],
    next: usize,
    slots: &mut Vec<Option<usize>>,
    emit: &mut dyn FnMut(&[Option<usize>]) -> Result<()>,
) -> Result<()> {
    if next == targets.len() {
        return emit(slots);
    }
    for j in 0..heads.len() {
        if slots[j].is_none() && heads[j] == targets[next].head() {
            slots[j] = Some(next);
            assign(heads, targets, next + 1, slots, emit)?;
            slots[j] = None;
        }
    }
    Ok(())
}

pub fn intersection_exact(n: usize, fs: &[Branch], exec: Exec) -> Result<IntersectionCertificate> {
    if n == 0 || fs.len() != n + 1 {
        return invalid(format!("column {n} needs exactly {} branches, got {}", n + 1, fs.len()));
    }
    let mut split = 0;
    for i in 0..fs.len() {
        for j in i + 1..fs.len() {
            split = split.max(iota_split_level(n, &fs[i], &fs[j]).map_err(|e| match e {
                Error::Invalid(_) => Error::Invalid(format!("branches {i} and {j} are indistinguishable")),
                e => e,
            })?);
        }
    }
    check_level(split)?;
    let levels: Vec<usize> = (n + 1..split).collect();
    let per_level = exec.try_map(&levels, |&l| {
        let mut targets: Vec<TreeNode> = Vec::new();
        for f in fs {
            let (t, _) = iota_restrict(n, f, l)?;
            if !targets.contains(&t) {
                targets.push(t);
            }
        }
        if targets.len() > n {
            return Ok(Vec::new());
        }
        tuples_containing(n, l, &targets)
    })?;
    Ok(IntersectionCertificate { column: n, split_level: split, elements: per_level.concat() })
}

/// Whether column `c` of `⋂ψ(fᵢ)` is certified empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ColumnReport {
    /// The listed `c+1` branches have pairwise distinct level-`c` prefixes,
    /// so no `c`-tuple contains all of their restrictions at any level.
    Empty { column: usize, witnesses: Vec<usize> },
    NotCovered { column: usize, reason: String },
}

/// Emptiness certificates for columns `1..=max_column` of `⋂ψ(fᵢ)`.
pub fn unbounded_intersection_bound(fs: &[Branch], max_column: usize) -> Result<Vec<ColumnReport>> {
    (1..=max_column)
        .map(|c| {
            if fs.len() < c + 1 {
                return Ok(ColumnReport::NotCovered {
                    column: c,
                    reason: format!("needs {} branches, have {}", c + 1, fs.len()),
                });
            }
            let mut seen: Vec<Vec<u64>> = Vec::new();
            let mut witnesses = Vec::new();
            for (i, f) in fs.iter().enumerate() {
                let (t, _) = iota_restrict(c, f, c)?;
                if !seen.contains(&t.head().to_vec()) {
                    seen.push(t.head().to_vec());
                    witnesses.push(i);
                    if witnesses.len() == c + 1 {
                        break;
                    }
                }
            }
            Ok(if witnesses.len() == c + 1 {
                ColumnReport::Empty { column: c, witnesses }
            } else {
                ColumnReport::NotCovered {
                    column: c,
                    reason: format!("only {} distinct level-{c} prefixes", witnesses.len()),
                }
            })
        })
        .collect()
}
