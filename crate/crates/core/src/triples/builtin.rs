//! The explicit positive morphisms.

use std::sync::Arc;

use super::coded::CodedTriple;
use super::machine::{FnMachine, Machine};
use super::morphism::MorphismCandidate;
use super::rep::Rep;
use crate::bp::bound_for_set;
use crate::error::{invalid, Result};
use crate::reals::{APFunc, IntervalColoring, UPSet};

/// Window of `A` scanned by the bounding map.
const BOUND_CUTOFF: usize = 4096;
const BOUND_MAX_COLUMN: usize = 8;

/// `k ↦ min(A ∖ k) + 1` for an infinite `A`.
pub fn next_element_func(a: &UPSet) -> Result<APFunc> {
    if a.is_finite() {
        return invalid(format!("{a} is finite"));
    }
    let n0 = a.prefix().len();
    let p = a.period().len();
    let next = |k: usize| (k..).find(|&j| a.contains(j)).expect("infinite set") as u64 + 1;
    APFunc::new((0..n0).map(next).collect(), (n0..n0 + p).map(next).collect(), p as u64)
}

fn set_to_next(r: &Rep) -> Result<Rep> {
    Ok(Rep::Func(next_element_func(r.as_set()?)?))
}

fn func_to_intervals(r: &Rep) -> Result<Rep> {
    Ok(Rep::IntervalColoring(IntervalColoring::new(r.as_func()?.clone())))
}

/// Infinite sets and interval colorings pass through, other sets become
/// the evens.
fn infinite_or_evens(r: &Rep, keep: impl Fn(&UPSet) -> bool) -> Result<Rep> {
    match r {
        Rep::Set(s) if keep(s) => Ok(r.clone()),
        Rep::Set(_) => Ok(Rep::Set(UPSet::evens())),
        Rep::IntervalColoring(_) => Ok(r.clone()),
        other => Err(other.mismatch("set or icol")),
    }
}

fn m(name: &str, f: impl Fn(&Rep) -> Result<Rep> + Send + Sync + 'static) -> Arc<dyn Machine> {
    FnMachine::arc(name, f)
}

pub fn d_to_b() -> MorphismCandidate {
    MorphismCandidate::new(
        "d→b",
        CodedTriple::d(),
        CodedTriple::b(),
        FnMachine::identity(),
        m("f+1", |r| Ok(Rep::Func(r.as_func()?.add_const(1)))),
    )
}

pub fn d_to_s() -> MorphismCandidate {
    MorphismCandidate::new(
        "d→s",
        CodedTriple::d(),
        CodedTriple::s(),
        m("next element + 1", set_to_next),
        m("interval coloring", func_to_intervals),
    )
}

pub fn r_to_b() -> MorphismCandidate {
    MorphismCandidate::new(
        "r→b",
        CodedTriple::r(),
        CodedTriple::b(),
        m("interval coloring", func_to_intervals),
        m("next element + 1", set_to_next),
    )
}

pub fn u_to_r() -> MorphismCandidate {
    MorphismCandidate::new(
        "u→r",
        CodedTriple::u(),
        CodedTriple::r(),
        m("id, finite to evens", |r| infinite_or_evens(r, UPSet::is_infinite)),
        FnMachine::identity(),
    )
}

pub fn i_to_r() -> MorphismCandidate {
    MorphismCandidate::new(
        "i→r",
        CodedTriple::i(),
        CodedTriple::r(),
        m("id, non-IC to evens", |r| infinite_or_evens(r, UPSet::is_ic)),
        FnMachine::identity(),
    )
}

pub fn a_to_p() -> MorphismCandidate {
    MorphismCandidate::new(
        "a→p",
        CodedTriple::a(),
        CodedTriple::p(),
        m("id, cofinite to evens", |r| match r {
            Rep::Set(s) if s.is_ic() => Ok(r.clone()),
            Rep::Set(_) => Ok(Rep::Set(UPSet::evens())),
            other => Err(other.mismatch("set")),
        }),
        m("complement", |r| Ok(Rep::Set(r.as_set()?.complement()))),
    )
}

pub fn t_to_p() -> MorphismCandidate {
    MorphismCandidate::new("t→p", CodedTriple::t(), CodedTriple::p(), FnMachine::identity(), FnMachine::identity())
}

pub fn b_to_p() -> MorphismCandidate {
    MorphismCandidate::new(
        "b→p",
        CodedTriple::b(),
        CodedTriple::p(),
        m("trace bound", |r| Ok(Rep::Func(bound_for_set(r.as_set()?, 0, BOUND_CUTOFF, BOUND_MAX_COLUMN)?))),
        m("psi", |r| Ok(Rep::PsiImage(r.as_func()?.clone()))),
    )
}

/// `c ↦ ⟨bit i of c⟩_i`.
pub fn r_sigma_to_r_n(n: u32) -> MorphismCandidate {
    MorphismCandidate::new(
        format!("r_sigma→r_{n}"),
        CodedTriple::r_sigma(),
        CodedTriple::r_n(n),
        m("bit colorings", |r| match r {
            Rep::Coloring(c) => Ok(Rep::Seq((0..c.bit_width()).map(|i| c.bit_coloring(i)).collect())),
            other => Err(other.mismatch("ncol")),
        }),
        FnMachine::identity(),
    )
}

/// Reads an `m`-coloring as an `n`-coloring, `m < n`.
pub fn r_n_to_r_m(n: u32, target: u32) -> MorphismCandidate {
    MorphismCandidate::new(
        format!("r_{n}→r_{target}"),
        CodedTriple::r_n(n),
        CodedTriple::r_n(target),
        m("inclusion", move |r| match r {
            Rep::Coloring(c) => Ok(Rep::Coloring(c.with_arity(n)?)),
            other => Err(other.mismatch("ncol")),
        }),
        FnMachine::identity(),
    )
}

pub fn s_sigma_to_s() -> MorphismCandidate {
    MorphismCandidate::new(
        "s_sigma→s",
        CodedTriple::s_sigma(),
        CodedTriple::s(),
        m("constant sequence", |r| Ok(Rep::Seq(vec![r.as_set()?.clone()]))),
        FnMachine::identity(),
    )
}

/// Pads an `m`-tuple to `n` entries by repeating its last set, `m < n`.
pub fn s_n_to_s_m(n: usize, target: usize) -> MorphismCandidate {
    MorphismCandidate::new(
        format!("s_{n}→s_{target}"),
        CodedTriple::s_n(n),
        CodedTriple::s_n(target),
        m("pad", move |r| match r {
            Rep::Tuple(v) if !v.is_empty() => {
                let mut v = v.clone();
                v.resize(n, v.last().expect("nonempty").clone());
                Ok(Rep::Tuple(v))
            }
            other => Err(other.mismatch("tuple")),
        }),
        FnMachine::identity(),
    )
}

pub fn builtin_morphisms() -> Vec<MorphismCandidate> {
    vec![
        d_to_b(),
        d_to_s(),
        r_to_b(),
        u_to_r(),
        i_to_r(),
        a_to_p(),
        t_to_p(),
        b_to_p(),
        r_sigma_to_r_n(4),
        r_n_to_r_m(4, 2),
        s_sigma_to_s(),
        s_n_to_s_m(3, 2),
    ]
}

pub fn builtin(source: &str, target: &str) -> Option<MorphismCandidate> {
    builtin_morphisms()
        .into_iter()
        .find(|c| c.source.id == source && c.target.id == target)
}
