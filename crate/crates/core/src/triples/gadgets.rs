//! Refutation gadgets: given any candidate pair of maps, produce a concrete
//! instance of a violated morphism clause.

use serde::Serialize;

use super::machine::Machine;
use super::rep::Rep;
use crate::error::{invalid, Error, Result};
use crate::reals::{family_property, APFunc, FamilyProperty, UPSet};

/// Which relation the filter-class side uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterRelation {
    /// `φ(f) ̸⊥ X`, the almost disjointness triple.
    NotAlmostDisjoint,
    /// `φ(f) ̸⊂* X`, a pseudo-intersection triple over any filter class.
    NotAlmostSubset,
}

/// A violation of `φ(f) R X ⟹ f ̸≥* ψ(X)`.
#[derive(Clone, Debug, Serialize)]
pub struct FilterClassViolation {
    pub relation: FilterRelation,
    pub psi_odds: APFunc,
    pub psi_evens: APFunc,
    pub f: APFunc,
    pub phi_f: UPSet,
    pub x_name: String,
    pub x: UPSet,
    pub psi_x: APFunc,
}

impl FilterClassViolation {
    /// Re-checks both clauses: `φ(f) R X` and `f ≥* ψ(X)`.
    pub fn verify(&self) -> bool {
        let premise = match self.relation {
            FilterRelation::NotAlmostDisjoint => self.phi_f.intersect(&self.x).is_infinite(),
            FilterRelation::NotAlmostSubset => !self.phi_f.almost_subset(&self.x),
        };
        premise && self.f.eventually_dominates(&self.psi_x)
    }
}

fn ask_set(m: &dyn Machine, input: &Rep) -> Result<UPSet> {
    match m.apply(input)? {
        Rep::Set(s) => Ok(s),
        other => Err(Error::KindMismatch { expected: "set".into(), found: format!("{other} from {} on {input}", m.name()) }),
    }
}

fn ask_func(m: &dyn Machine, input: &Rep) -> Result<APFunc> {
    match m.apply(input)? {
        Rep::Func(f) => Ok(f),
        other => Err(Error::KindMismatch { expected: "func".into(), found: format!("{other} from {} on {input}", m.name()) }),
    }
}

/// Refutes `φ: ω^ω → sets`, `ψ: sets → ω^ω` as a morphism into the bounding
/// triple, using the odds and evens.
pub fn refute_filterclass_to_b(
    phi: &dyn Machine,
    psi: &dyn Machine,
    relation: FilterRelation,
) -> Result<FilterClassViolation> {
    let (odds, evens) = (UPSet::odds(), UPSet::evens());
    let psi_odds = ask_func(psi, &Rep::Set(odds.clone()))?;
    let psi_evens = ask_func(psi, &Rep::Set(evens.clone()))?;
    let f = psi_odds.ap_max(&psi_evens);
    let phi_f = ask_set(phi, &Rep::Func(f.clone()))?;
    if phi_f.is_finite() {
        return invalid(format!("φ({f}) = {phi_f} is finite, outside the candidate's contract"));
    }
    let premise = |x: &UPSet| match relation {
        FilterRelation::NotAlmostDisjoint => phi_f.intersect(x).is_infinite(),
        FilterRelation::NotAlmostSubset => !phi_f.almost_subset(x),
    };
    let (x_name, x, psi_x) = if premise(&odds) {
        ("O", odds, psi_odds.clone())
    } else {
        ("E", evens, psi_evens.clone())
    };
    let v = FilterClassViolation {
        relation,
        psi_odds,
        psi_evens,
        f,
        phi_f,
        x_name: x_name.into(),
        x,
        psi_x,
    };
    debug_assert!(v.verify());
    Ok(v)
}

/// Three infinite sets with pairwise infinite intersections and finite
/// triple intersection.
#[derive(Clone, Debug, Serialize)]
pub struct TripleSets(pub [UPSet; 3]);

impl Default for TripleSets {
    /// `{0,1 mod 3}`, `{1,2 mod 3}`, `{0,2 mod 3}`.
    fn default() -> Self {
        TripleSets([UPSet::residues(3, &[0, 1]), UPSet::residues(3, &[1, 2]), UPSet::residues(3, &[0, 2])])
    }
}

impl TripleSets {
    pub fn new(sets: [UPSet; 3]) -> Result<Self> {
        let [a, b, c] = &sets;
        let pairwise = [(a, b), (b, c), (a, c)].iter().all(|(x, y)| x.intersect(y).is_infinite());
        if !pairwise || a.intersect(b).intersect(c).is_infinite() {
            return invalid("the sets need infinite pairwise and finite triple intersections");
        }
        Ok(TripleSets(sets))
    }
}

const NAMES: [&str; 3] = ["A", "B", "C"];

/// A violated clause of a candidate morphism from the pseudo-intersection
/// triple to the tower triple.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "clause", rename_all = "snake_case")]
pub enum PtViolation {
    /// `{X, Y}` is centered but `{ψ(X), ψ(Y)}` is not linearly ordered.
    Property { x_name: String, x: UPSet, y_name: String, y: UPSet, psi_x: UPSet, psi_y: UPSet },
    /// `D ⊂* ψ(Y)` yet `φ(D) ̸⊂* Y`.
    Relation { d: UPSet, phi_d: UPSet, y_name: String, y: UPSet, psi_y: UPSet },
}

impl PtViolation {
    pub fn verify(&self) -> Result<bool> {
        Ok(match self {
            PtViolation::Property { x, y, psi_x, psi_y, .. } => {
                family_property(&[x.clone(), y.clone()], FamilyProperty::Centered)?
                    && !family_property(&[psi_x.clone(), psi_y.clone()], FamilyProperty::LinearlyOrdered)?
            }
            PtViolation::Relation { d, phi_d, y, psi_y, .. } => {
                d.almost_subset(psi_y) && !phi_d.almost_subset(y)
            }
        })
    }
}

pub fn refute_p_to_t(phi: &dyn Machine, psi: &dyn Machine, sets: &TripleSets) -> Result<PtViolation> {
    let images = sets
        .0
        .iter()
        .map(|s| ask_set(psi, &Rep::Set(s.clone())))
        .collect::<Result<Vec<_>>>()?;
    if let Some(bad) = images.iter().find(|s| s.is_finite()) {
        return invalid(format!("ψ returned the finite set {bad}, outside the candidate's contract"));
    }
    for (i, j) in [(0, 1), (1, 2), (0, 2)] {
        let (pi, pj) = (&images[i], &images[j]);
        if !pi.almost_subset(pj) && !pj.almost_subset(pi) {
            return Ok(PtViolation::Property {
                x_name: NAMES[i].into(),
                x: sets.0[i].clone(),
                y_name: NAMES[j].into(),
                y: sets.0[j].clone(),
                psi_x: pi.clone(),
                psi_y: pj.clone(),
            });
        }
    }
    let d = images[0].intersect(&images[1]).intersect(&images[2]);
    let phi_d = ask_set(phi, &Rep::Set(d.clone()))?;
    if phi_d.is_finite() {
        return invalid(format!("φ({d}) = {phi_d} is finite, outside the candidate's contract"));
    }
    let i = (0..3)
        .find(|&i| !phi_d.almost_subset(&sets.0[i]))
        .expect("an infinite set is not almost inside three sets with finite intersection");
    let v = PtViolation::Relation {
        d,
        phi_d,
        y_name: NAMES[i].into(),
        y: sets.0[i].clone(),
        psi_y: images[i].clone(),
    };
    debug_assert!(v.verify().unwrap_or(false));
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triples::machine::FnMachine;
    use proptest::prelude::*;

    #[test]
    fn constant_candidates_refuted_with_evens() {
        let phi = FnMachine::constant(Rep::Set(UPSet::evens()));
        let psi = FnMachine::constant(Rep::Func(APFunc::constant(0)));
        let v = refute_filterclass_to_b(&*phi, &*psi, FilterRelation::NotAlmostDisjoint).unwrap();
        assert_eq!(v.x_name, "E");
        assert!(v.verify());
        let v = refute_filterclass_to_b(&*phi, &*psi, FilterRelation::NotAlmostSubset).unwrap();
        assert!(v.verify());
    }

    #[test]
    fn finite_phi_is_out_of_contract() {
        let phi = FnMachine::constant(Rep::Set(UPSet::finite(&[1])));
        let psi = FnMachine::constant(Rep::Func(APFunc::constant(0)));
        assert!(refute_filterclass_to_b(&*phi, &*psi, FilterRelation::NotAlmostDisjoint).is_err());
    }

    #[test]
    fn identity_psi_is_not_linear() {
        let id = FnMachine::identity();
        let v = refute_p_to_t(&*id, &*id, &TripleSets::default()).unwrap();
        assert!(matches!(v, PtViolation::Property { .. }));
        assert!(v.verify().unwrap());
    }

    #[test]
    fn constant_psi_breaks_the_relation() {
        let id = FnMachine::identity();
        let evens = FnMachine::constant(Rep::Set(UPSet::evens()));
        let v = refute_p_to_t(&*id, &*evens, &TripleSets::default()).unwrap();
        match &v {
            PtViolation::Relation { d, phi_d, y_name, .. } => {
                assert_eq!(d, &UPSet::evens());
                assert_eq!(phi_d, &UPSet::evens());
                assert_eq!(y_name, "A");
            }
            other => panic!("expected a relation violation, got {other:?}"),
        }
        assert!(v.verify().unwrap());
    }

    #[test]
    fn triple_sets_validated() {
        assert!(TripleSets::new([UPSet::evens(), UPSet::evens(), UPSet::evens()]).is_err());
        let d = TripleSets::default();
        assert!(TripleSets::new(d.0.clone()).is_ok());
    }

    fn any_set() -> impl Strategy<Value = UPSet> {
        (proptest::collection::vec(any::<bool>(), 0..4), proptest::collection::vec(any::<bool>(), 1..5))
            .prop_map(|(p, q)| UPSet::new(p, q).unwrap())
    }

    fn any_func() -> impl Strategy<Value = APFunc> {
        (proptest::collection::vec(0u64..20, 0..3), proptest::collection::vec(0u64..20, 1..3), 0u64..4)
            .prop_map(|(p, b, d)| APFunc::new(p, b, d).unwrap())
    }

    proptest! {
        #[test]
        fn filter_gadget_always_verifies(fo in any_func(), fe in any_func(), target in any_set()) {
            prop_assume!(target.is_infinite());
            let psi = FnMachine::arc("table", move |r| {
                let s = r.as_set()?;
                Ok(Rep::Func(if s == &UPSet::odds() { fo.clone() } else { fe.clone() }))
            });
            let phi = FnMachine::constant(Rep::Set(target));
            for rel in [FilterRelation::NotAlmostDisjoint, FilterRelation::NotAlmostSubset] {
                let v = refute_filterclass_to_b(&*phi, &*psi, rel).unwrap();
                prop_assert!(v.verify());
            }
        }

        #[test]
        fn pt_gadget_always_verifies(a in any_set(), b in any_set(), c in any_set(), target in any_set()) {
            prop_assume!(a.is_infinite() && b.is_infinite() && c.is_infinite() && target.is_infinite());
            let table = [a, b, c];
            let sets = TripleSets::default();
            let keys = sets.0.clone();
            let psi = FnMachine::arc("table", move |r| {
                let s = r.as_set()?;
                let i = keys.iter().position(|k| k == s).unwrap_or(0);
                Ok(Rep::Set(table[i].clone()))
            });
            let phi = FnMachine::constant(Rep::Set(target));
            match refute_p_to_t(&*phi, &*psi, &sets) {
                Ok(v) => prop_assert!(v.verify().unwrap()),
                Err(Error::Invalid(_)) => {}
                Err(e) => prop_assert!(false, "{e}"),
            }
        }
    }
}
