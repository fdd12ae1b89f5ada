use std::fmt;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::rep::Rep;
use crate::bp::{centered_witness, upset_almost_in_psi, Branch};
use crate::error::{invalid, Error, Result};
use crate::exec::Exec;
use crate::reals::{family_property, FamilyProperty, UPSet};

/// The set a triple's side ranges over, with the representations admitted
/// for it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Carrier {
    /// `[ω]^ω`: infinite `Set`s, `PsiImage`s and `IntervalColoring`s.
    Infinite,
    /// `2^ω`: any `Set` (read as its characteristic function) or an
    /// `IntervalColoring`.
    Coloring,
    /// `ω^ω`: `Func`.
    Baire,
    /// Infinite, coinfinite `Set`s and `IntervalColoring`s.
    Ic,
    /// `n^ω`: `Coloring` of arity `n`.
    NColoring(u32),
    /// `n`-tuples of infinite sets.
    Tuples(usize),
    /// Tuples of infinite sets of any positive length.
    FiniteTuples,
    /// Sequences of 2-colorings.
    ColoringSeq,
    /// Sequences of infinite sets.
    InfiniteSeq,
}

impl Carrier {
    pub fn accepts(&self, r: &Rep) -> bool {
        match (self, r) {
            (Carrier::Infinite, Rep::Set(s)) => s.is_infinite(),
            // the 1-intervals of an interval coloring form an infinite, coinfinite set
            (Carrier::Infinite | Carrier::Ic, Rep::IntervalColoring(_)) => true,
            (Carrier::Infinite, Rep::PsiImage(_)) => true,
            (Carrier::Coloring, Rep::Set(_) | Rep::IntervalColoring(_)) => true,
            (Carrier::Baire, Rep::Func(_)) => true,
            (Carrier::Ic, Rep::Set(s)) => s.is_ic(),
            (Carrier::NColoring(n), Rep::Coloring(c)) => c.arity() == *n,
            (Carrier::Tuples(n), Rep::Tuple(v)) => v.len() == *n && v.iter().all(UPSet::is_infinite),
            (Carrier::FiniteTuples, Rep::Tuple(v)) => !v.is_empty() && v.iter().all(UPSet::is_infinite),
            (Carrier::ColoringSeq, Rep::Seq(_)) => true,
            (Carrier::InfiniteSeq, Rep::Seq(v)) => v.iter().all(UPSet::is_infinite),
            _ => false,
        }
    }

    /// `Ok(())` when `r` lies in this carrier, else a kind mismatch.
    pub fn admit(&self, r: &Rep) -> Result<()> {
        if self.accepts(r) {
            Ok(())
        } else {
            Err(r.mismatch(&self.to_string()))
        }
    }
}

impl fmt::Display for Carrier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Carrier::Infinite => write!(f, "[ω]^ω"),
            Carrier::Coloring => write!(f, "2^ω"),
            Carrier::Baire => write!(f, "ω^ω"),
            Carrier::Ic => write!(f, "IC"),
            Carrier::NColoring(n) => write!(f, "{n}^ω"),
            Carrier::Tuples(n) => write!(f, "([ω]^ω)^{n}"),
            Carrier::FiniteTuples => write!(f, "([ω]^ω)^<ω"),
            Carrier::ColoringSeq => write!(f, "(2^ω)^ω"),
            Carrier::InfiniteSeq => write!(f, "([ω]^ω)^ω"),
        }
    }
}

/// `x 𝖠 y` for `x` on the minus side and `y` on the plus side.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `x ̸⊂* y`
    NotAlmostSubset,
    /// `y` splits `x`
    IsSplitBy,
    /// `x` does not split `y`
    DoesNotSplit,
    /// `x ̸≥* y`
    NotDominates,
    /// `x ≤* y`
    DominatedBy,
    /// `x ̸⊥ y`
    NotAlmostDisjoint,
    /// the coloring `x` is almost constant on `y`
    AlmostConstant,
    /// every coloring of the sequence `x` is almost constant on `y`
    AllAlmostConstant,
    /// `y` splits every set listed in `x`
    SplitsAll,
    /// `y` splits at least this many sets of `x`
    SplitsAtLeast(usize),
    /// `¬(y 𝖠 x)`
    Dual(Box<Relation>),
}

fn coloring_splits(c: &Rep, target: &UPSet) -> Result<bool> {
    match c {
        Rep::Set(s) => s.splits(target),
        Rep::IntervalColoring(ic) => ic.splits(target),
        r => Err(r.mismatch("2-coloring")),
    }
}

fn almost_subset(x: &UPSet, y: &Rep) -> Result<bool> {
    match y {
        Rep::Set(s) => Ok(x.almost_subset(s)),
        Rep::PsiImage(_) => Ok(upset_almost_in_psi(x)),
        r => Err(r.mismatch("set")),
    }
}

fn listed(x: &Rep) -> Result<&[UPSet]> {
    match x {
        Rep::Tuple(v) | Rep::Seq(v) => Ok(v),
        r => Err(r.mismatch("tuple or seq")),
    }
}

impl Relation {
    pub fn eval(&self, x: &Rep, y: &Rep) -> Result<bool> {
        match self {
            Relation::NotAlmostSubset => Ok(!almost_subset(x.as_set()?, y)?),
            Relation::IsSplitBy => coloring_splits(y, x.as_set()?),
            Relation::DoesNotSplit => Ok(!coloring_splits(x, y.as_set()?)?),
            Relation::NotDominates => Ok(!x.as_func()?.eventually_dominates(y.as_func()?)),
            Relation::DominatedBy => Ok(y.as_func()?.eventually_dominates(x.as_func()?)),
            Relation::NotAlmostDisjoint => Ok(!x.as_set()?.almost_disjoint(y.as_set()?)),
            Relation::AlmostConstant => match x {
                Rep::Coloring(c) => Ok(c.almost_constant_on(y.as_set()?)),
                r => Err(r.mismatch("ncol")),
            },
            Relation::AllAlmostConstant => {
                let b = y.as_set()?;
                for c in listed(x)? {
                    if c.splits(b)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Relation::SplitsAll => {
                for a in listed(x)? {
                    if !coloring_splits(y, a)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Relation::SplitsAtLeast(m) => {
                let mut hit = 0;
                for a in listed(x)? {
                    hit += coloring_splits(y, a)? as usize;
                }
                Ok(hit >= *m)
            }
            Relation::Dual(inner) => Ok(!inner.eval(y, x)?),
        }
    }

    pub fn dual(&self) -> Relation {
        match self {
            Relation::Dual(inner) => (**inner).clone(),
            r => Relation::Dual(Box::new(r.clone())),
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::NotAlmostSubset => write!(f, "x ̸⊂* y"),
            Relation::IsSplitBy => write!(f, "x is split by y"),
            Relation::DoesNotSplit => write!(f, "x does not split y"),
            Relation::NotDominates => write!(f, "x ̸≥* y"),
            Relation::DominatedBy => write!(f, "x ≤* y"),
            Relation::NotAlmostDisjoint => write!(f, "x ̸⊥ y"),
            Relation::AlmostConstant => write!(f, "x is almost constant on y"),
            Relation::AllAlmostConstant => write!(f, "every x_n is almost constant on y"),
            Relation::SplitsAll => write!(f, "y splits every x_i"),
            Relation::SplitsAtLeast(m) => write!(f, "y splits at least {m} of the x_i"),
            Relation::Dual(inner) => write!(f, "not ({inner}, with x and y swapped)"),
        }
    }
}

/// Family properties from the catalog, decided on finite families of
/// plus-side representations.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Property {
    Centered,
    LinearlyOrdered,
    /// Pairwise almost disjoint infinite sets whose union is coinfinite, the
    /// finite trace of an infinite almost disjoint family.
    AlmostDisjointInfinite,
    /// Every member is a finite boolean combination of an independent list
    /// drawn from the family itself.
    IndependentDerived,
}

const WITNESS_COUNT: usize = 2;

fn sets_of(family: &[Rep]) -> Option<Vec<UPSet>> {
    family.iter().map(|r| r.as_set().ok().cloned()).collect()
}

fn is_independent(sets: &[&UPSet]) -> bool {
    (0u64..1 << sets.len()).all(|signs| {
        let mut acc = UPSet::all();
        for (i, s) in sets.iter().enumerate() {
            acc = if signs >> i & 1 == 1 { acc.intersect(s) } else { acc.minus(s) };
        }
        acc.is_infinite()
    })
}

/// Whether `x` is almost equal to some conjunction of generators or their
/// complements.
fn is_boolean_term(x: &UPSet, gens: &[&UPSet]) -> bool {
    let mut states = vec![UPSet::all()];
    for g in gens {
        let mut next = Vec::with_capacity(states.len() * 3);
        for s in states {
            next.push(s.intersect(g));
            next.push(s.minus(g));
            next.push(s);
        }
        states = next;
    }
    states.iter().any(|s| s.almost_equal(x))
}

const INDEPENDENCE_SEARCH_MAX: usize = 10;

impl Property {
    pub fn name(self) -> &'static str {
        match self {
            Property::Centered => "centered",
            Property::LinearlyOrdered => "linearly ordered",
            Property::AlmostDisjointInfinite => "almost disjoint and infinite",
            Property::IndependentDerived => "derived from an independent family",
        }
    }

    pub fn closed_downward(self) -> bool {
        !matches!(self, Property::IndependentDerived)
    }

    pub fn holds(self, family: &[Rep]) -> Result<bool> {
        if family.is_empty() {
            return invalid("family must be nonempty");
        }
        if let Some(sets) = sets_of(family) {
            return self.holds_on_sets(&sets);
        }
        let psi: Option<Vec<_>> = family
            .iter()
            .map(|r| match r {
                Rep::PsiImage(f) => Some(Branch::from(f.clone())),
                _ => None,
            })
            .collect();
        match (self, psi) {
            // images of ψ always form a centered family; the witness run
            // confirms it on this subfamily
            (Property::Centered, Some(fs)) => {
                centered_witness(&fs, WITNESS_COUNT, Exec::default())?;
                Ok(true)
            }
            _ => Err(Error::Invalid(format!(
                "property {} is not decidable on the family [{}]",
                self.name(),
                family.iter().map(Rep::to_string).collect::<Vec<_>>().join(", ")
            ))),
        }
    }

    fn holds_on_sets(self, sets: &[UPSet]) -> Result<bool> {
        match self {
            Property::Centered => family_property(sets, FamilyProperty::Centered),
            Property::LinearlyOrdered => family_property(sets, FamilyProperty::LinearlyOrdered),
            Property::AlmostDisjointInfinite => {
                let union = sets.iter().fold(UPSet::empty(), |acc, s| acc.union(s));
                Ok(family_property(sets, FamilyProperty::AdInfinite)? && union.is_coinfinite())
            }
            Property::IndependentDerived => {
                if sets.len() > INDEPENDENCE_SEARCH_MAX {
                    return Err(Error::Resource(format!(
                        "independence search is limited to {INDEPENDENCE_SEARCH_MAX} sets"
                    )));
                }
                Ok((1u64..1 << sets.len()).any(|mask| {
                    let gens: Vec<&UPSet> =
                        (0..sets.len()).filter(|i| mask >> i & 1 == 1).map(|i| &sets[i]).collect();
                    is_independent(&gens) && sets.iter().all(|x| is_boolean_term(x, &gens))
                }))
            }
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A triple over decidable representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CodedTriple {
    pub id: String,
    pub name: String,
    pub minus: Carrier,
    pub plus: Carrier,
    pub relation: Relation,
    pub property: Option<Property>,
    pub note: Option<String>,
}

impl CodedTriple {
    fn simple(id: &str, name: &str, minus: Carrier, plus: Carrier, relation: Relation) -> Self {
        CodedTriple {
            id: id.into(),
            name: name.into(),
            minus,
            plus,
            relation,
            property: None,
            note: None,
        }
    }

    fn with_property(mut self, p: Property) -> Self {
        self.property = Some(p);
        self
    }

    fn with_note(mut self, note: &str) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn p() -> Self {
        Self::simple("p", "𝔭", Carrier::Infinite, Carrier::Infinite, Relation::NotAlmostSubset)
            .with_property(Property::Centered)
    }

    pub fn t() -> Self {
        Self::simple("t", "𝔱", Carrier::Infinite, Carrier::Infinite, Relation::NotAlmostSubset)
            .with_property(Property::LinearlyOrdered)
    }

    pub fn s() -> Self {
        Self::simple("s", "𝔰", Carrier::Infinite, Carrier::Coloring, Relation::IsSplitBy)
    }

    pub fn r() -> Self {
        Self::simple("r", "𝔯", Carrier::Coloring, Carrier::Infinite, Relation::DoesNotSplit)
    }

    pub fn b() -> Self {
        Self::simple("b", "𝔟", Carrier::Baire, Carrier::Baire, Relation::NotDominates)
    }

    pub fn d() -> Self {
        Self::simple("d", "𝔡", Carrier::Baire, Carrier::Baire, Relation::DominatedBy)
    }

    pub fn a() -> Self {
        Self::simple("a", "𝔞", Carrier::Ic, Carrier::Ic, Relation::NotAlmostDisjoint)
            .with_property(Property::AlmostDisjointInfinite)
    }

    pub fn i() -> Self {
        Self::simple("i", "𝔦", Carrier::Ic, Carrier::Ic, Relation::DoesNotSplit)
            .with_property(Property::IndependentDerived)
            .with_note(
                "F is derived from an independent family by taking all intersections of \
                 finitely many sets or their complements; only this finite consequence is checked",
            )
    }

    pub fn u() -> Self {
        Self::simple("u", "𝔲", Carrier::Infinite, Carrier::Infinite, Relation::DoesNotSplit)
            .with_property(Property::Centered)
    }

    pub fn r_n(n: u32) -> Self {
        Self::simple(
            &format!("r_{n}"),
            &format!("𝔯_{n}"),
            Carrier::NColoring(n),
            Carrier::Infinite,
            Relation::AlmostConstant,
        )
    }

    pub fn r_sigma() -> Self {
        Self::simple("r_sigma", "𝔯_σ", Carrier::ColoringSeq, Carrier::Infinite, Relation::AllAlmostConstant)
    }

    pub fn s_n(n: usize) -> Self {
        Self::simple(&format!("s_{n}"), &format!("𝔰_{n}"), Carrier::Tuples(n), Carrier::Coloring, Relation::SplitsAll)
    }

    pub fn s_nm(n: usize, m: usize) -> Self {
        Self::simple(
            &format!("s_{n}_{m}"),
            &format!("𝔰_{n},{m}"),
            Carrier::Tuples(n),
            Carrier::Coloring,
            Relation::SplitsAtLeast(m),
        )
    }

    pub fn s_sigma() -> Self {
        Self::simple("s_sigma", "𝔰_σ", Carrier::InfiniteSeq, Carrier::Coloring, Relation::SplitsAll)
    }

    pub fn s_fin() -> Self {
        Self::simple("s_fin", "𝔰_<ω", Carrier::FiniteTuples, Carrier::Coloring, Relation::SplitsAll)
    }

    pub fn is_simple(&self) -> bool {
        self.property.is_none()
    }

    /// `(A₊, A₋, Ă)` with `x Ă y ⇔ ¬(y 𝖠 x)`.
    pub fn dual(&self) -> Result<CodedTriple> {
        if let Some(p) = self.property {
            return invalid(format!("{} carries the property \"{p}\" and has no dual", self.id));
        }
        let strip = |s: &str, suffix: &str| s.strip_suffix(suffix).map(str::to_string);
        Ok(CodedTriple {
            id: strip(&self.id, "^dual").unwrap_or_else(|| format!("{}^dual", self.id)),
            name: strip(&self.name, "^⊥").unwrap_or_else(|| format!("{}^⊥", self.name)),
            minus: self.plus.clone(),
            plus: self.minus.clone(),
            relation: self.relation.dual(),
            property: None,
            note: None,
        })
    }

    /// Evaluates the relation after checking both carriers.
    pub fn relates(&self, x: &Rep, y: &Rep) -> Result<bool> {
        self.minus.admit(x)?;
        self.plus.admit(y)?;
        self.relation.eval(x, y)
    }

    /// Probe-relative domination: every probe is related to some member.
    pub fn is_dominating(&self, family: &[Rep], probes: &[Rep]) -> Result<bool> {
        if probes.is_empty() {
            return invalid("domination check needs at least one probe");
        }
        for x in probes {
            let mut hit = false;
            for y in family {
                if self.relates(x, y)? {
                    hit = true;
                    break;
                }
            }
            if !hit {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Same evaluation as `other` on every probe pair.
    pub fn agrees_with(&self, other: &CodedTriple, minus: &[Rep], plus: &[Rep]) -> Result<bool> {
        for x in minus {
            for y in plus {
                if self.relates(x, y)? != other.relates(x, y)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

impl Serialize for CodedTriple {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("CodedTriple", 7)?;
        st.serialize_field("id", &self.id)?;
        st.serialize_field("name", &self.name)?;
        st.serialize_field("minus", &self.minus.to_string())?;
        st.serialize_field("plus", &self.plus.to_string())?;
        st.serialize_field("relation", &self.relation.to_string())?;
        st.serialize_field("property", &self.property.map(Property::name))?;
        st.serialize_field("note", &self.note)?;
        st.end()
    }
}

/// Table 1 together with the splitting and reaping variants; parametrized
/// entries appear at `n = 2` and `(n, m) = (4, 2)`.
pub fn catalog() -> Vec<CodedTriple> {
    vec![
        CodedTriple::p(),
        CodedTriple::s(),
        CodedTriple::r(),
        CodedTriple::b(),
        CodedTriple::d(),
        CodedTriple::a(),
        CodedTriple::i(),
        CodedTriple::u(),
        CodedTriple::t(),
        CodedTriple::r_n(2),
        CodedTriple::r_sigma(),
        CodedTriple::s_n(2),
        CodedTriple::s_nm(4, 2),
        CodedTriple::s_sigma(),
        CodedTriple::s_fin(),
    ]
}

/// Looks a triple up by id, including parametrized ids such as `r_3`,
/// `s_5` and `s_4_2`, and duals written `<id>^dual`.
pub fn lookup(id: &str) -> Result<CodedTriple> {
    if let Some(base) = id.strip_suffix("^dual") {
        return lookup(base)?.dual();
    }
    if let Some(t) = catalog().into_iter().find(|t| t.id == id) {
        return Ok(t);
    }
    let num = |s: &str| s.parse::<usize>().ok().filter(|&n| n >= 1);
    let unknown = || Error::Invalid(format!("unknown triple {id:?}"));
    if let Some(n) = id.strip_prefix("r_").and_then(num) {
        return Ok(CodedTriple::r_n(u32::try_from(n).map_err(|_| unknown())?));
    }
    if let Some(rest) = id.strip_prefix("s_") {
        let parts: Vec<_> = rest.split('_').map(num).collect();
        return match parts.as_slice() {
            [Some(n)] => Ok(CodedTriple::s_n(*n)),
            [Some(n), Some(m)] if m <= n => Ok(CodedTriple::s_nm(*n, *m)),
            _ => Err(unknown()),
        };
    }
    Err(unknown())
}
