use serde::Serialize;

use super::construct::{AdversaryCertificate, Predictor};
use super::machine::{bits_to_string, Answer, ContinuousMachine};
use crate::error::{invalid, Error, Result};
use crate::reals::UPSet;

/// Whether `θ(c↾I_{<k}) = c↾I_k`.
pub fn predicts(theta: &Predictor, c: &[bool], k: usize) -> Result<bool> {
    if k >= theta.depth() {
        return invalid(format!("level {k} is past the constructed depth {}", theta.depth()));
    }
    let iv = theta.partition().interval(k);
    if c.len() < iv.end {
        return invalid(format!("c must be determined on the first {} positions", iv.end));
    }
    Ok(theta.theta(k, &c[..iv.start])? == &c[iv])
}

/// [`predicts`] for the characteristic function of a set.
pub fn predicts_set(theta: &Predictor, c: &UPSet, k: usize) -> Result<bool> {
    let bits: Vec<bool> = (0..theta.partition().covered()).map(|i| c.contains(i)).collect();
    predicts(theta, &bits, k)
}

fn check_class(cert: &AdversaryCertificate, n: usize, r: usize) -> Result<()> {
    if n == 0 || r >= n {
        return invalid(format!("class ({n}, {r}) needs 0 ≤ r < n"));
    }
    let _ = cert;
    Ok(())
}

/// Positions in intervals `I_k` with `k ≢ r (mod n)`, `k` below the depth.
pub fn free_positions(cert: &AdversaryCertificate, n: usize, r: usize) -> Result<Vec<usize>> {
    check_class(cert, n, r)?;
    let p = cert.partition();
    Ok((0..cert.depth()).filter(|k| k % n != r).flat_map(|k| p.interval(k)).collect())
}

/// The element of `S_{n,r}` that follows `θ` on levels `≡ r` and reads
/// `free_bits` (concatenated in order) on the other levels.
pub fn predicted_family_element(cert: &AdversaryCertificate, n: usize, r: usize, free_bits: &[bool]) -> Result<Vec<bool>> {
    let free = free_positions(cert, n, r)?.len();
    if free_bits.len() != free {
        return invalid(format!("class ({n}, {r}) has {free} free positions, got {} bits", free_bits.len()));
    }
    let p = cert.partition();
    let mut c = Vec::with_capacity(p.covered());
    let mut rest = free_bits;
    for k in 0..cert.depth() {
        let width = p.interval(k).len();
        if k % n == r {
            let t = cert.predictor.theta(k, &c)?.to_vec();
            c.extend(t);
        } else {
            c.extend_from_slice(&rest[..width]);
            rest = &rest[width..];
        }
    }
    Ok(c)
}

/// An element of `S_{n,r}` together with its alternation on a target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitTrace {
    pub n: usize,
    pub r: usize,
    pub element: String,
    /// Target points inside the free region.
    pub points: Vec<usize>,
    pub ones: usize,
    pub zeros: usize,
}

impl SplitTrace {
    pub fn splits(&self) -> bool {
        self.ones > 0 && self.zeros > 0
    }
}

/// Sets the free bits of an `S_{n,r}` element to alternate 1, 0, 1, … on the
/// target's points in the free region; other free bits are 0.
pub fn splitter_from_free_class(cert: &AdversaryCertificate, n: usize, r: usize, target: &UPSet) -> Result<SplitTrace> {
    let free = free_positions(cert, n, r)?;
    let points: Vec<usize> = free.iter().copied().filter(|&i| target.contains(i)).collect();
    if points.len() < 2 {
        return invalid(format!(
            "target meets the free region of class ({n}, {r}) in {} point(s) within depth {}",
            points.len(),
            cert.depth()
        ));
    }
    let mut bits = vec![false; free.len()];
    let mut flip = true;
    for (slot, pos) in free.iter().enumerate() {
        if target.contains(*pos) {
            bits[slot] = flip;
            flip = !flip;
        }
    }
    let c = predicted_family_element(cert, n, r, &bits)?;
    let ones = points.iter().filter(|&&i| c[i]).count();
    Ok(SplitTrace { n, r, element: bits_to_string(&c), zeros: points.len() - ones, points, ones })
}

/// A re-verified `ψ(c)(a_k) = 1` for a predicted level `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImageFact {
    pub level: usize,
    pub pivot: usize,
    pub prefix_len: usize,
}

/// For `c ∈ S_{n,r}`, confirms `ψ(c)(a_k) = 1` at every `k ≡ r (mod n)` by
/// querying the machine on `c↾I_{<k+1}`, so `ψ(c)` is constant 1 on the
/// constructed part of `A_r = {a_k : k ≡ r}`.
pub fn image_nonsplit_certificate(
    cert: &AdversaryCertificate,
    machine: &dyn ContinuousMachine,
    c: &[bool],
    n: usize,
    r: usize,
) -> Result<Vec<ImageFact>> {
    check_class(cert, n, r)?;
    let p = cert.partition();
    let mut facts = Vec::new();
    for k in (r..cert.depth()).step_by(n) {
        if !predicts(&cert.predictor, c, k)? {
            return invalid(format!("c is not predicted at level {k}, so it is outside S_({n},{r})"));
        }
        let end = p.interval(k).end;
        let pivot = cert.pivots[k];
        let a = machine.query(&c[..end], pivot)?;
        if a != Answer::One {
            return Err(Error::MachineFault(format!(
                "{} answers {a} at pivot {pivot} on {}, the certificate records 1",
                machine.name(),
                bits_to_string(&c[..end])
            )));
        }
        facts.push(ImageFact { level: k, pivot, prefix_len: end });
    }
    Ok(facts)
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassReport {
    pub n: usize,
    pub r: usize,
    /// The element with all free bits set to 1.
    pub representative: String,
    pub image_facts: Vec<ImageFact>,
    /// One entry per target; `None` when the target misses the free region.
    pub splitters: Vec<Option<SplitTrace>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub depth: usize,
    pub classes: Vec<ClassReport>,
}

impl FamilyReport {
    /// Whether every target is split by some class with this `n`.
    pub fn splits_all_targets(&self, n: usize) -> bool {
        let classes: Vec<_> = self.classes.iter().filter(|c| c.n == n).collect();
        let Some(first) = classes.first() else { return true };
        (0..first.splitters.len()).all(|t| classes.iter().any(|c| c.splitters[t].as_ref().is_some_and(SplitTrace::splits)))
    }
}

/// Representatives, splitters and image certificates for `⋃ S_{n,r}`.
pub fn multiclass_family(
    cert: &AdversaryCertificate,
    machine: &dyn ContinuousMachine,
    specs: &[(usize, usize)],
    targets: &[UPSet],
) -> Result<FamilyReport> {
    let mut classes = Vec::with_capacity(specs.len());
    for &(n, r) in specs {
        let free = free_positions(cert, n, r)?.len();
        let rep = predicted_family_element(cert, n, r, &vec![true; free])?;
        let image_facts = image_nonsplit_certificate(cert, machine, &rep, n, r)?;
        let splitters = targets
            .iter()
            .map(|t| match splitter_from_free_class(cert, n, r, t) {
                Ok(s) => Ok(Some(s)),
                Err(Error::Invalid(_)) => Ok(None),
                Err(e) => Err(e),
            })
            .collect::<Result<_>>()?;
        classes.push(ClassReport { n, r, representative: bits_to_string(&rep), image_facts, splitters });
    }
    Ok(FamilyReport { depth: cert.depth(), classes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::construct::{build_adversary, IntervalPartition};
    use crate::adversary::machine::{ConstantMachine, IdentityMachine};
    use crate::exec::Exec;
    use proptest::prelude::*;

    fn identity_cert(depth: usize) -> AdversaryCertificate {
        build_adversary(&IdentityMachine, depth, 1_000_000, Exec::Sequential).unwrap().certificate().clone()
    }

    #[test]
    fn even_class_shape() {
        let cert = identity_cert(5);
        let c = predicted_family_element(&cert, 2, 0, &[true, true]).unwrap();
        assert_eq!(c, vec![true; 5]);
        for k in (0..5).step_by(2) {
            assert!(predicts(&cert.predictor, &c, k).unwrap());
        }
        let c = predicted_family_element(&cert, 2, 0, &[false, false]).unwrap();
        assert!(!predicts(&cert.predictor, &c, 1).unwrap());
        assert!(predicts(&cert.predictor, &c, 4).unwrap());
        assert!(predicts(&cert.predictor, &c, 5).is_err());
    }

    #[test]
    fn flipping_a_bit_only_affects_its_level() {
        let cert = identity_cert(5);
        let mut c = predicted_family_element(&cert, 1, 0, &[]).unwrap();
        c[2] = !c[2];
        let got: Vec<bool> = (0..5).map(|k| predicts(&cert.predictor, &c, k).unwrap()).collect();
        assert_eq!(got, vec![true, true, false, true, true]);
    }

    #[test]
    fn splitter_alternates() {
        let cert = identity_cert(5);
        let all = UPSet::all();
        let t = splitter_from_free_class(&cert, 2, 0, &all).unwrap();
        assert_eq!(t.points, vec![1, 3]);
        assert!(t.splits());
        let t = splitter_from_free_class(&cert, 2, 1, &UPSet::evens()).unwrap();
        assert_eq!((t.ones, t.zeros), (2, 1));
        assert!(splitter_from_free_class(&cert, 2, 0, &UPSet::evens()).is_err());
    }

    #[test]
    fn image_facts_and_tampering() {
        let cert = identity_cert(5);
        let c = predicted_family_element(&cert, 2, 0, &[false, false]).unwrap();
        let facts = image_nonsplit_certificate(&cert, &IdentityMachine, &c, 2, 0).unwrap();
        assert_eq!(facts.iter().map(|f| f.pivot).collect::<Vec<_>>(), vec![0, 2, 4]);
        assert!(image_nonsplit_certificate(&cert, &ConstantMachine(true), &c, 2, 0).is_ok());

        let mut bad = cert.clone();
        bad.predictor.set_theta(2, &[true, false], vec![false]).unwrap();
        let c = predicted_family_element(&bad, 2, 0, &[false, false]).unwrap();
        assert!(matches!(image_nonsplit_certificate(&bad, &IdentityMachine, &c, 2, 0), Err(Error::MachineFault(_))));
    }

    #[test]
    fn corollary_family() {
        let cert = identity_cert(7);
        let specs: Vec<_> = (1..=3).flat_map(|n| (0..n).map(move |r| (n, r))).collect();
        let targets = [UPSet::all(), UPSet::evens(), UPSet::odds(), UPSet::residues(3, &[0])];
        let rep = multiclass_family(&cert, &IdentityMachine, &specs, &targets).unwrap();
        assert_eq!(rep.classes.len(), 6);
        assert!(rep.splits_all_targets(2));
        assert!(rep.splits_all_targets(3));
        let empty = multiclass_family(&cert, &IdentityMachine, &[], &targets).unwrap();
        assert!(empty.classes.is_empty());
    }

    proptest! {
        #[test]
        fn predicts_matches_table(rows in proptest::collection::vec(proptest::collection::vec(any::<bool>(), 3), 1 + 8), c in proptest::collection::vec(any::<bool>(), 6)) {
            let p = IntervalPartition::new(vec![0, 3, 6]).unwrap();
            let theta = Predictor::new(p, vec![vec![rows[0].clone()], rows[1..].to_vec()]).unwrap();
            let idx = (0..3).fold(0, |a, i| a | (c[i] as usize) << i);
            prop_assert_eq!(predicts(&theta, &c, 0).unwrap(), c[..3] == rows[0][..]);
            prop_assert_eq!(predicts(&theta, &c, 1).unwrap(), c[3..] == rows[1 + idx][..]);
        }
    }
}
