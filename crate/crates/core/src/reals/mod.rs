//! Decidable stand-ins for the carriers [ω]^ω, 2^ω, n^ω and ω^ω.
//!
//! Every value here is kept in canonical form, so structural equality is
//! equality of the denoted object.

mod apfunc;
mod coloring;
mod family;
mod upset;

pub use apfunc::APFunc;
pub use coloring::{IntervalColoring, NColoring};
pub use family::{dyadic_family, family_property, FamilyProperty};
pub use upset::{SetOp, UPSet};

pub(crate) fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Smallest divisor `d` of `word.len()` such that `word` is `d`-periodic.
pub(crate) fn primitive_root_len<T: PartialEq>(word: &[T]) -> usize {
    let p = word.len();
    (1..=p)
        .filter(|d| p.is_multiple_of(*d))
        .find(|&d| (d..p).all(|i| word[i] == word[i - d]))
        .unwrap_or(p)
}

/// Canonical (prefix, period) pair for an ultimately periodic word:
/// primitive period first, then the shortest prefix.
pub(crate) fn canonicalize_word<T: PartialEq + Clone>(prefix: &mut Vec<T>, period: &mut Vec<T>) {
    let d = primitive_root_len(period);
    period.truncate(d);
    while let (Some(a), Some(b)) = (prefix.last(), period.last()) {
        if a != b {
            break;
        }
        prefix.pop();
        period.rotate_right(1);
    }
}
