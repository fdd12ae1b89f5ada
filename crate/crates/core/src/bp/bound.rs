//! Bounds on every `f` whose `ψₙ(f)` contains a finite set of observed tuples.
//!
//! Each observation forces `f` to extend one of its components. A choice of
//! one component per observation is consistent when the chosen nodes are
//! pairwise comparable, in which case `f` extends the longest of them and is
//! pinned down on the coordinates that node encodes completely.

use serde::Serialize;

use super::omega::OmegaTuple;
use super::tree::TreeNode;
use crate::error::{invalid, Error, Result};
use crate::reals::APFunc;

/// Choice-tree nodes explored before giving up.
const SEARCH_CAP: usize = 1 << 22;

#[derive(Clone, Debug, Serialize)]
pub struct Constraint {
    pub observation: OmegaTuple,
    /// Distinct components; `f` extends at least one of them.
    pub candidates: Vec<TreeNode>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundCertificate {
    pub column: usize,
    pub constraints: Vec<Constraint>,
    /// `bound[k]` dominates `f(k)` for every consistent `f`, `k < bound.len()`.
    pub bound: Vec<u64>,
    pub consistent_choices: usize,
}

/// No component choice is consistent, so no `f` produces the observations.
#[derive(Clone, Debug, Serialize)]
pub struct EmptinessCertificate {
    pub column: usize,
    pub observations: usize,
    pub choices_explored: usize,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TraceBound {
    Bounded(BoundCertificate),
    Empty(EmptinessCertificate),
}

struct Search<'a> {
    constraints: &'a [Constraint],
    explored: usize,
    leaves: Vec<Vec<u64>>,
}

impl Search<'_> {
    fn walk(&mut self, i: usize, longest: Option<&TreeNode>) -> Result<()> {
        self.explored += 1;
        if self.explored > SEARCH_CAP {
            return Err(Error::Resource(format!("trace search passed {SEARCH_CAP} choices")));
        }
        let Some(c) = self.constraints.get(i) else {
            let node = longest.expect("at least one observation");
            self.leaves.push(node.decode().0);
            return Ok(());
        };
        for cand in &c.candidates {
            let next = match longest {
                None => cand,
                Some(l) if cand.is_prefix_of(l) => l,
                Some(l) if l.is_prefix_of(cand) => cand,
                Some(_) => continue,
            };
            self.walk(i + 1, Some(next))?;
        }
        Ok(())
    }
}

pub fn bound_from_trace(column: usize, observed: &[OmegaTuple]) -> Result<TraceBound> {
    if observed.is_empty() {
        return invalid("bound extraction needs at least one observation");
    }
    if let Some(t) = observed.iter().find(|t| t.n() != column) {
        return invalid(format!("observation for column {} given to column {column}", t.n()));
    }
    let constraints: Vec<Constraint> = observed
        .iter()
        .map(|t| {
            let mut candidates: Vec<TreeNode> = Vec::new();
            for node in t.nodes() {
                if !candidates.contains(node) {
                    candidates.push(node.clone());
                }
            }
            Constraint { observation: t.clone(), candidates }
        })
        .collect();
    let mut search = Search { constraints: &constraints, explored: 0, leaves: Vec::new() };
    search.walk(0, None)?;
    let (explored, leaves) = (search.explored, search.leaves);
    if leaves.is_empty() {
        return Ok(TraceBound::Empty(EmptinessCertificate {
            column,
            observations: observed.len(),
            choices_explored: explored,
        }));
    }
    let domain = leaves.iter().map(Vec::len).min().unwrap_or(0);
    let bound = (0..domain)
        .map(|k| leaves.iter().map(|v| v[k]).max().unwrap_or(0))
        .collect();
    Ok(TraceBound::Bounded(BoundCertificate {
        column,
        constraints,
        bound,
        consistent_choices: leaves.len(),
    }))
}

/// A single function above every partial bound: pointwise maximum where any
/// bound is defined, then the identity.
pub fn combine_bounds(bounds: &[Vec<u64>]) -> APFunc {
    let len = bounds.iter().map(Vec::len).max().unwrap_or(0);
    let values: Vec<u64> = (0..len)
        .map(|k| bounds.iter().filter_map(|b| b.get(k)).copied().max().unwrap_or(0))
        .collect();
    APFunc::with_prefix(&values, &APFunc::identity())
}
