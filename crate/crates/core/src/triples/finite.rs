use std::collections::{BTreeMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Default bound on `|A₊|` for [`FiniteTriple::finite_norm`].
pub const NORM_SEARCH_BOUND: usize = 20;

/// Plus sides are stored as bitmasks.
pub const MAX_PLUS: usize = 64;

#[derive(Deserialize)]
struct RawTriple {
    minus: Vec<String>,
    plus: Vec<String>,
    relation: Vec<Vec<u8>>,
    #[serde(default)]
    properties: BTreeMap<String, Vec<Vec<String>>>,
}

/// `(A₋, A₊, 𝖠)` with finite carriers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FiniteTriple {
    minus: Vec<String>,
    plus: Vec<String>,
    /// Row `i` has bit `j` set iff `minus[i] 𝖠 plus[j]`.
    #[serde(skip)]
    rows: Vec<u64>,
}

fn numbered(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

fn unique(labels: &[String], side: &str) -> Result<()> {
    let mut seen = HashSet::new();
    match labels.iter().find(|l| !seen.insert(l.as_str())) {
        Some(l) => invalid(format!("duplicate {side} label {l:?}")),
        None => Ok(()),
    }
}

impl FiniteTriple {
    pub fn new(minus: Vec<String>, plus: Vec<String>, matrix: &[Vec<bool>]) -> Result<Self> {
        unique(&minus, "minus")?;
        unique(&plus, "plus")?;
        if plus.len() > MAX_PLUS {
            return invalid(format!("at most {MAX_PLUS} plus elements are supported"));
        }
        if matrix.len() != minus.len() || matrix.iter().any(|r| r.len() != plus.len()) {
            return invalid(format!("relation matrix must be {}×{}", minus.len(), plus.len()));
        }
        let rows = matrix
            .iter()
            .map(|r| r.iter().enumerate().fold(0u64, |m, (j, &b)| m | (b as u64) << j))
            .collect();
        Ok(FiniteTriple { minus, plus, rows })
    }

    /// Unlabelled triple from row bitmasks; labels are indices.
    pub fn from_rows(minus: usize, plus: usize, rows: &[u64]) -> Result<Self> {
        if plus > MAX_PLUS || rows.len() != minus {
            return invalid("row masks do not match the carrier sizes");
        }
        let full = full_mask(plus);
        if rows.iter().any(|r| r & !full != 0) {
            return invalid("row mask has bits past the plus side");
        }
        Ok(FiniteTriple { minus: numbered(minus), plus: numbered(plus), rows: rows.to_vec() })
    }

    /// Parses `{minus, plus, relation: [[0|1…]…], properties?: {name: [[label…]…]}}`.
    /// A named property holds for `F` when `F` lies inside one of its listed
    /// families.
    pub fn from_json(text: &str) -> Result<(Self, BTreeMap<String, Vec<u64>>)> {
        let raw: RawTriple = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        let matrix: Vec<Vec<bool>> = raw
            .relation
            .iter()
            .map(|r| r.iter().map(|&b| b != 0).collect())
            .collect();
        let t = FiniteTriple::new(raw.minus, raw.plus, &matrix)?;
        let mut props = BTreeMap::new();
        for (name, families) in raw.properties {
            let masks = families
                .iter()
                .map(|fam| t.mask_of(fam))
                .collect::<Result<Vec<_>>>()?;
            props.insert(name, masks);
        }
        Ok((t, props))
    }

    pub fn mask_of(&self, labels: &[String]) -> Result<u64> {
        labels.iter().try_fold(0u64, |m, l| {
            let j = self
                .plus
                .iter()
                .position(|p| p == l)
                .ok_or_else(|| Error::Invalid(format!("unknown plus label {l:?}")))?;
            Ok(m | 1 << j)
        })
    }

    pub fn minus(&self) -> &[String] {
        &self.minus
    }

    pub fn plus(&self) -> &[String] {
        &self.plus
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    pub fn relates(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    /// `(A₊, A₋, Ă)` with `x Ă y ⇔ ¬(y 𝖠 x)`.
    pub fn dual(&self) -> FiniteTriple {
        let rows = (0..self.plus.len())
            .map(|x| {
                (0..self.minus.len()).fold(0u64, |m, y| m | (!self.relates(y, x) as u64) << y)
            })
            .collect();
        FiniteTriple { minus: self.plus.clone(), plus: self.minus.clone(), rows }
    }

    /// Every minus element is related to a member of the plus subset `family`.
    pub fn is_dominating(&self, family: u64) -> bool {
        self.rows.iter().all(|r| r & family != 0)
    }

    /// Least size of a dominating family satisfying `prop`, `None` for ∞.
    pub fn finite_norm(&self, prop: Option<&dyn Fn(u64) -> bool>) -> Result<Option<usize>> {
        self.finite_norm_bounded(prop, NORM_SEARCH_BOUND)
    }

    pub fn finite_norm_bounded(
        &self,
        prop: Option<&dyn Fn(u64) -> bool>,
        bound: usize,
    ) -> Result<Option<usize>> {
        Ok(self.norm_witness_bounded(prop, bound)?.map(|m| m.count_ones() as usize))
    }

    /// A smallest dominating family satisfying `prop`, first in Gosper order.
    pub fn norm_witness_bounded(
        &self,
        prop: Option<&dyn Fn(u64) -> bool>,
        bound: usize,
    ) -> Result<Option<u64>> {
        let p = self.plus.len();
        if p > bound {
            return Err(Error::Resource(format!(
                "norm search over {p} plus elements exceeds the bound {bound}"
            )));
        }
        let ok = |m: &u64| self.is_dominating(*m) && prop.is_none_or(|f| f(*m));
        Ok((0..=p).find_map(|size| subsets_of_size(p, size).find(ok)))
    }
}

fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Subsets of `0..n` with exactly `k` elements, as bitmasks in increasing order.
pub fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = u64> {
    let limit = if n >= 64 { None } else { Some(1u64 << n) };
    let first = if k == 0 { Some(0) } else if k <= n { Some(full_mask(k)) } else { None };
    std::iter::successors(first, move |&v| {
        if v == 0 {
            return None;
        }
        // Gosper's hack
        let c = v & v.wrapping_neg();
        let r = v.checked_add(c)?;
        let next = (((r ^ v) >> 2) / c) | r;
        match limit {
            Some(l) if next >= l => None,
            _ => Some(next),
        }
    })
}

/// A pair of maps `φ: B₋ → A₋`, `ψ: A₊ → B₊` between finite triples.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FiniteMorphism {
    pub phi: Vec<usize>,
    pub psi: Vec<usize>,
}

impl FiniteMorphism {
    /// `φ(b) 𝖠 a ⟹ b 𝖡 ψ(a)` for all `b ∈ B₋`, `a ∈ A₊`.
    pub fn is_morphism(&self, a: &FiniteTriple, b: &FiniteTriple) -> bool {
        maps_form_morphism(&self.phi, &self.psi, a, b)
    }

    /// `ψ[F]` as a plus-side mask of the target.
    pub fn image(&self, family: u64) -> u64 {
        self.psi
            .iter()
            .enumerate()
            .filter(|(j, _)| family >> j & 1 == 1)
            .fold(0, |m, (_, &k)| m | 1 << k)
    }

    /// `(ψ, φ)`, read as a map pair between the duals in the other direction.
    pub fn dual(&self) -> FiniteMorphism {
        FiniteMorphism { phi: self.psi.clone(), psi: self.phi.clone() }
    }
}

fn maps_form_morphism(phi: &[usize], psi: &[usize], a: &FiniteTriple, b: &FiniteTriple) -> bool {
    (0..b.minus.len()).all(|x| {
        let row = a.rows[phi[x]];
        (0..a.plus.len()).all(|y| row >> y & 1 == 0 || b.relates(x, psi[y]))
    })
}

fn all_maps(from: usize, to: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for _ in 0..from {
        out = out
            .into_iter()
            .flat_map(|m| {
                (0..to).map(move |v| {
                    let mut m = m.clone();
                    m.push(v);
                    m
                })
            })
            .collect();
    }
    out
}

/// Every morphism from `a` to `b`, by exhaustive search.
pub fn finite_morphisms(a: &FiniteTriple, b: &FiniteTriple) -> Vec<FiniteMorphism> {
    let phis = all_maps(b.minus.len(), a.minus.len());
    let psis = all_maps(a.plus.len(), b.plus.len());
    let mut out = Vec::new();
    for phi in &phis {
        for psi in &psis {
            if maps_form_morphism(phi, psi, a, b) {
                out.push(FiniteMorphism { phi: phi.clone(), psi: psi.clone() });
            }
        }
    }
    out
}

/// Every triple with `|A₋| = m` and `|A₊| = p`.
pub fn all_triples(m: usize, p: usize) -> impl Iterator<Item = FiniteTriple> {
    let cells = m * p;
    assert!(cells < 32, "too many relations to enumerate");
    (0u64..1 << cells).map(move |bits| {
        let rows: Vec<u64> = (0..m).map(|i| bits >> (i * p) & full_mask(p)).collect();
        FiniteTriple::from_rows(m, p, &rows).expect("masks fit")
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn labels(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn dual_is_involution_on_example() {
        let t = FiniteTriple::new(
            labels(&["1", "2", "3"]),
            labels(&["a", "b"]),
            &[vec![true, false], vec![false, false], vec![false, false]],
        )
        .unwrap();
        let d = t.dual();
        assert_eq!(d.minus(), t.plus());
        assert!(!d.relates(0, 0));
        assert!(d.relates(0, 1));
        assert_eq!(d.dual(), t);
    }

    #[test]
    fn complete_and_empty() {
        let full = FiniteTriple::from_rows(3, 3, &[7, 7, 7]).unwrap();
        assert_eq!(full.dual().rows(), &[0, 0, 0]);
        assert_eq!(full.finite_norm(None).unwrap(), Some(1));
        assert!(full.is_dominating(0b100));
        let id = FiniteTriple::from_rows(3, 3, &[1, 2, 4]).unwrap();
        assert!(!id.is_dominating(0b011));
        assert_eq!(id.finite_norm(None).unwrap(), Some(3));
        let dead = FiniteTriple::from_rows(2, 2, &[1, 0]).unwrap();
        assert_eq!(dead.finite_norm(None).unwrap(), None);
    }

    #[test]
    fn norm_respects_property_and_bound() {
        let full = FiniteTriple::from_rows(2, 3, &[7, 7]).unwrap();
        let only_pairs = |m: u64| m.count_ones() >= 2;
        assert_eq!(full.finite_norm(Some(&only_pairs)).unwrap(), Some(2));
        let big = FiniteTriple::from_rows(1, 21, &[1]).unwrap();
        assert!(matches!(big.finite_norm(None), Err(Error::Resource(_))));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(FiniteTriple::new(labels(&["x", "x"]), labels(&["a"]), &[vec![true], vec![true]]).is_err());
        assert!(FiniteTriple::new(labels(&["x"]), labels(&["a"]), &[vec![true, false]]).is_err());
        assert!(FiniteTriple::from_rows(1, 2, &[4]).is_err());
    }

    #[test]
    fn json_with_properties() {
        let text = r#"{"minus":["x","y"],"plus":["a","b","c"],
            "relation":[[1,0,0],[0,1,1]],
            "properties":{"pairs":[["a","c"]]}}"#;
        let (t, props) = FiniteTriple::from_json(text).unwrap();
        assert_eq!(t.finite_norm(None).unwrap(), Some(2));
        let allowed = props["pairs"].clone();
        let inside = move |m: u64| allowed.iter().any(|&f| m & !f == 0);
        assert_eq!(t.finite_norm(Some(&inside)).unwrap(), Some(2));
        assert!(FiniteTriple::from_json(r#"{"minus":[],"plus":["a"],"relation":[],"properties":{"p":[["z"]]}}"#).is_err());
    }

    #[test]
    fn gosper_counts() {
        assert_eq!(subsets_of_size(5, 2).count(), 10);
        assert_eq!(subsets_of_size(5, 0).collect::<Vec<_>>(), vec![0]);
        assert_eq!(subsets_of_size(3, 4).count(), 0);
        assert_eq!(subsets_of_size(4, 4).collect::<Vec<_>>(), vec![15]);
    }

    #[test]
    fn identity_is_found_among_morphisms() {
        let t = FiniteTriple::from_rows(2, 2, &[0b01, 0b11]).unwrap();
        let ms = finite_morphisms(&t, &t);
        assert!(ms.contains(&FiniteMorphism { phi: vec![0, 1], psi: vec![0, 1] }));
        assert_eq!(all_triples(2, 2).count(), 16);
    }

    proptest! {
        #[test]
        fn morphisms_dualize(ra in proptest::collection::vec(0u64..8, 3), rb in proptest::collection::vec(0u64..8, 3)) {
            let a = FiniteTriple::from_rows(3, 3, &ra).unwrap();
            let b = FiniteTriple::from_rows(3, 3, &rb).unwrap();
            for m in finite_morphisms(&a, &b) {
                prop_assert!(m.dual().is_morphism(&b.dual(), &a.dual()));
            }
        }
    }
}
