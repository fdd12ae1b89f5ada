use std::sync::Arc;

use serde::Serialize;

use super::coded::CodedTriple;
use super::machine::{Composed, FnMachine, Machine};
use super::probes;
use super::rep::Rep;
use crate::error::{Error, Result};
use crate::exec::Exec;

/// A candidate morphism `source → target`: `φ: target₋ → source₋` and
/// `ψ: source₊ → target₊`.
#[derive(Clone)]
pub struct MorphismCandidate {
    pub name: String,
    pub source: CodedTriple,
    pub target: CodedTriple,
    pub phi: Arc<dyn Machine>,
    pub psi: Arc<dyn Machine>,
}

impl std::fmt::Debug for MorphismCandidate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MorphismCandidate")
            .field("name", &self.name)
            .field("source", &self.source.id)
            .field("target", &self.target.id)
            .field("phi", &self.phi.name())
            .field("psi", &self.psi.name())
            .finish()
    }
}

impl MorphismCandidate {
    pub fn new(
        name: impl Into<String>,
        source: CodedTriple,
        target: CodedTriple,
        phi: Arc<dyn Machine>,
        psi: Arc<dyn Machine>,
    ) -> Self {
        MorphismCandidate { name: name.into(), source, target, phi, psi }
    }

    pub fn identity(t: CodedTriple) -> Self {
        Self::new(format!("id_{}", t.id), t.clone(), t, FnMachine::identity(), FnMachine::identity())
    }
}

/// Probe representations for a morphism check.
#[derive(Clone, Debug, Default)]
pub struct ProbeSet {
    /// Elements of the target's minus side.
    pub minus: Vec<Rep>,
    /// Elements of the source's plus side.
    pub plus: Vec<Rep>,
    /// Families of source plus elements for the property clause.
    pub families: Vec<Vec<Rep>>,
}

impl ProbeSet {
    /// The default probe suite for `source → target`.
    pub fn default_for(source: &CodedTriple, target: &CodedTriple) -> Self {
        ProbeSet {
            minus: probes::probes(&target.minus),
            plus: probes::probes(&source.plus),
            families: probes::families(&source.plus),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationViolation {
    pub b_minus: Rep,
    pub phi_b: Rep,
    pub a_plus: Rep,
    pub psi_a: Rep,
}

#[derive(Clone, Debug, Serialize)]
pub struct PropertyViolation {
    pub family: Vec<Rep>,
    pub image: Vec<Rep>,
    pub required: String,
}

/// Outcome of a probe-relative morphism check. An empty report means the
/// candidate is consistent on the probes, not that it is a morphism.
#[derive(Clone, Debug, Serialize)]
pub struct MorphismReport {
    pub candidate: String,
    pub source: String,
    pub target: String,
    pub pairs_checked: usize,
    pub families_checked: usize,
    pub families_skipped: usize,
    pub relation_violations: Vec<RelationViolation>,
    pub property_violations: Vec<PropertyViolation>,
}

impl MorphismReport {
    pub fn consistent(&self) -> bool {
        self.relation_violations.is_empty() && self.property_violations.is_empty()
    }

    pub fn summary(&self) -> String {
        if self.consistent() {
            format!(
                "{}: consistent on probes ({} pairs, {} families)",
                self.candidate, self.pairs_checked, self.families_checked
            )
        } else {
            format!(
                "{}: {} relation and {} property violations",
                self.candidate,
                self.relation_violations.len(),
                self.property_violations.len()
            )
        }
    }
}

fn apply_checked(m: &dyn Machine, input: &Rep, carrier: &super::coded::Carrier) -> Result<Rep> {
    let out = m.apply(input)?;
    if !carrier.accepts(&out) {
        return Err(Error::KindMismatch {
            expected: carrier.to_string(),
            found: format!("{out} from {} on {input}", m.name()),
        });
    }
    Ok(out)
}

/// Checks `φ(b) 𝖠 a ⟹ b 𝖡 ψ(a)` on every probe pair and the property clause
/// on every supplied family.
pub fn check_morphism(c: &MorphismCandidate, probes: &ProbeSet, exec: Exec) -> Result<MorphismReport> {
    let (a, b) = (&c.source, &c.target);
    for r in &probes.minus {
        b.minus.admit(r)?;
    }
    for r in &probes.plus {
        a.plus.admit(r)?;
    }
    let psi_a = exec.try_map(&probes.plus, |x| apply_checked(&*c.psi, x, &b.plus))?;
    let rows = exec.try_map(&probes.minus, |x| -> Result<Vec<RelationViolation>> {
        let phi_b = apply_checked(&*c.phi, x, &a.minus)?;
        let mut bad = Vec::new();
        for (y, py) in probes.plus.iter().zip(&psi_a) {
            if a.relation.eval(&phi_b, y)? && !b.relation.eval(x, py)? {
                bad.push(RelationViolation {
                    b_minus: x.clone(),
                    phi_b: phi_b.clone(),
                    a_plus: y.clone(),
                    psi_a: py.clone(),
                });
            }
        }
        Ok(bad)
    })?;
    let relation_violations = rows.into_iter().flatten().collect();

    let mut families_checked = 0;
    let mut families_skipped = 0;
    let mut property_violations = Vec::new();
    if let Some(q) = b.property {
        for fam in &probes.families {
            for r in fam {
                a.plus.admit(r)?;
            }
            if let Some(p) = a.property {
                if !p.holds(fam)? {
                    families_skipped += 1;
                    continue;
                }
            }
            families_checked += 1;
            let image = fam
                .iter()
                .map(|x| apply_checked(&*c.psi, x, &b.plus))
                .collect::<Result<Vec<_>>>()?;
            if !q.holds(&image)? {
                property_violations.push(PropertyViolation { family: fam.clone(), image, required: q.to_string() });
            }
        }
    }
    Ok(MorphismReport {
        candidate: c.name.clone(),
        source: a.id.clone(),
        target: b.id.clone(),
        pairs_checked: probes.minus.len() * probes.plus.len(),
        families_checked,
        families_skipped,
        relation_violations,
        property_violations,
    })
}

/// `c2 ∘ c1` for `c1: A → B` and `c2: B → C`.
pub fn compose(c1: &MorphismCandidate, c2: &MorphismCandidate) -> Result<MorphismCandidate> {
    if c1.target != c2.source {
        return Err(Error::KindMismatch {
            expected: format!("a morphism out of {}", c1.target.id),
            found: format!("{} out of {}", c2.name, c2.source.id),
        });
    }
    Ok(MorphismCandidate {
        name: format!("{} ∘ {}", c2.name, c1.name),
        source: c1.source.clone(),
        target: c2.target.clone(),
        phi: Composed::arc(c2.phi.clone(), c1.phi.clone()),
        psi: Composed::arc(c1.psi.clone(), c2.psi.clone()),
    })
}

/// `(ψ, φ)` as a morphism `B^⊥ → A^⊥`.
pub fn dual_morphism(c: &MorphismCandidate) -> Result<MorphismCandidate> {
    Ok(MorphismCandidate {
        name: format!("dual({})", c.name),
        source: c.target.dual()?,
        target: c.source.dual()?,
        phi: c.psi.clone(),
        psi: c.phi.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reals::UPSet;

    #[test]
    fn identity_on_splitting_is_consistent() {
        let s = CodedTriple::s();
        let id = MorphismCandidate::identity(s.clone());
        let r = check_morphism(&id, &ProbeSet::default_for(&s, &s), Exec::Sequential).unwrap();
        assert!(r.consistent(), "{}", r.summary());
        let twice = compose(&id, &id).unwrap();
        assert!(check_morphism(&twice, &ProbeSet::default_for(&s, &s), Exec::Parallel).unwrap().consistent());
    }

    #[test]
    fn compose_rejects_mismatch() {
        let a = MorphismCandidate::identity(CodedTriple::s());
        let b = MorphismCandidate::identity(CodedTriple::r());
        assert!(matches!(compose(&a, &b), Err(Error::KindMismatch { .. })));
    }

    #[test]
    fn dual_of_identity_is_identity() {
        let d = CodedTriple::d();
        let dm = dual_morphism(&MorphismCandidate::identity(d.clone())).unwrap();
        assert_eq!(dm.source, d.dual().unwrap());
        let x = Rep::Func(crate::reals::APFunc::identity());
        assert_eq!(dm.phi.apply(&x).unwrap(), x);
        assert!(dual_morphism(&MorphismCandidate::identity(CodedTriple::p())).is_err());
    }

    #[test]
    fn wrong_output_kind_is_reported() {
        let s = CodedTriple::s();
        let c = MorphismCandidate::new(
            "bad",
            s.clone(),
            s.clone(),
            FnMachine::constant(Rep::Set(UPSet::empty())),
            FnMachine::identity(),
        );
        let err = check_morphism(&c, &ProbeSet::default_for(&s, &s), Exec::Sequential).unwrap_err();
        assert!(matches!(err, Error::KindMismatch { .. }));
    }
}
