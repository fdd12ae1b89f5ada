use serde::{Deserialize, Serialize};

use super::UPSet;
use crate::error::{invalid, Result};

/// Properties of finite families of subsets of ω.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyProperty {
    /// Every finite subfamily has infinite intersection.
    Centered,
    /// Totally preordered by `⊂*`.
    LinearlyOrdered,
    /// Pairwise almost disjoint, every member infinite. On a finite list
    /// this only certifies the sample: an a.d. family in the intended
    /// sense is infinite.
    AdInfinite,
}

pub fn family_property(family: &[UPSet], prop: FamilyProperty) -> Result<bool> {
    if family.is_empty() {
        return invalid("family must be nonempty");
    }
    Ok(match prop {
        // intersections of subfamilies contain the full intersection
        FamilyProperty::Centered => family
            .iter()
            .skip(1)
            .fold(family[0].clone(), |acc, s| acc.intersect(s))
            .is_infinite(),
        FamilyProperty::LinearlyOrdered => family.iter().enumerate().all(|(i, a)| {
            family[i + 1..]
                .iter()
                .all(|b| a.almost_subset(b) || b.almost_subset(a))
        }),
        FamilyProperty::AdInfinite => family.iter().enumerate().all(|(i, a)| {
            a.is_infinite() && family[i + 1..].iter().all(|b| a.almost_disjoint(b))
        }),
    })
}

/// `{k ≡ 2^i mod 2^{i+1}}` for `i < count`: pairwise disjoint infinite sets.
pub fn dyadic_family(count: u32) -> Vec<UPSet> {
    (0..count)
        .map(|i| UPSet::residues(1 << (i + 1), &[1 << i]))
        .collect()
}
