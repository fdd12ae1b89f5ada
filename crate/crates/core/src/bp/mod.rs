//! A continuous `ψ: ω^ω → [ω]^ω` with centered image such that
//! `{f : A ⊂* ψ(f)}` is `≤*`-bounded for every `A`, which yields the Borel
//! morphism from the bounding triple to the pseudo-intersection triple.
//!
//! Column `n ≥ 1` of `ψ(f)` (placed through Cantor pairing) is `ψₙ(f)`: the
//! Ω tuples of `n` nodes of `Tₙ` one of which is an initial segment of
//! `ιₙ(f)`. Any `n` branches share infinitely many tuples, any `n+1`
//! distinct branches only finitely many.

mod bound;
mod claims;
mod code;
mod omega;
mod psi;
mod tree;

use num_bigint::BigUint;

pub use bound::{bound_from_trace, combine_bounds, BoundCertificate, Constraint, EmptinessCertificate, TraceBound};
pub use claims::{intersection_exact, unbounded_intersection_bound, ColumnReport, IntersectionCertificate};
pub use code::{code_below, tuple_code, tuple_decode};
pub use omega::{level_size, level_start, pair, tuple_at, tuples_at_level, unpair, OmegaTuple, MAX_LEVEL};
pub use psi::{centered_witness, psi_contains, psi_n_level, psi_prefix, witness_stream, CenteredWitness, PsiPrefix};
pub use tree::{iota, iota_restrict, iota_split_level, Branch, TreeNode};

use crate::error::Result;
use crate::reals::{APFunc, UPSet};

/// `A ⊂* ψ(f)` for an ultimately periodic `A`.
///
/// At level `l` column `n` of `ψ(f)` holds at most `n·2^{(n−1)(l−n)}·l` of
/// the `l·2^{n(l−n)}` tuples, so its density in the column tends to 0. An
/// infinite periodic `A` meets some column in an arithmetic progression of
/// indices, hence in a set of positive density, and cannot be almost
/// contained. Finite sets are trivially almost contained.
pub fn upset_almost_in_psi(a: &UPSet) -> bool {
    a.is_finite()
}

/// A bound on `{f : A ∖ skip ⊆ ψ(f)}` read off the elements of `A` in
/// `[skip, cutoff)`, column by column, combined into one function.
pub fn bound_for_set(a: &UPSet, skip: usize, cutoff: usize, max_column: usize) -> Result<APFunc> {
    let mut per_column: Vec<Vec<OmegaTuple>> = vec![Vec::new(); max_column + 1];
    for x in a.elements_below(cutoff).into_iter().filter(|&x| x >= skip) {
        let (col, m) = unpair(&BigUint::from(x));
        let col = usize::try_from(col).unwrap_or(usize::MAX);
        if (1..=max_column).contains(&col) {
            per_column[col].push(tuple_at(col, &m)?);
        }
    }
    let mut bounds = Vec::new();
    for (col, obs) in per_column.iter().enumerate().filter(|(_, o)| !o.is_empty()) {
        if let TraceBound::Bounded(b) = bound_from_trace(col, obs)? {
            bounds.push(b.bound);
        }
    }
    Ok(combine_bounds(&bounds))
}
