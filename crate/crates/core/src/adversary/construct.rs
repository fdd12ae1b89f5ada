use std::collections::HashMap;
use std::ops::Range;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use super::machine::{bits_to_string, Answer, ContinuousMachine, DenseOpen};
use crate::error::{invalid, Error, Result};
use crate::exec::Exec;

/// Histories `s ∈ 2^{I_{<k}}` are enumerated, so `|I_{<k}|` is capped.
pub const MAX_HISTORY_BITS: usize = 20;

/// Consecutive nonempty intervals `I_k = [c_k, c_{k+1})` with `c_0 = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalPartition {
    cuts: Vec<usize>,
}

impl IntervalPartition {
    pub fn new(cuts: Vec<usize>) -> Result<Self> {
        if cuts.first() != Some(&0) {
            return invalid("cut points must start at 0");
        }
        if cuts.windows(2).any(|w| w[0] >= w[1]) {
            return invalid("intervals must be nonempty");
        }
        Ok(IntervalPartition { cuts })
    }

    pub fn depth(&self) -> usize {
        self.cuts.len() - 1
    }

    pub fn cuts(&self) -> &[usize] {
        &self.cuts
    }

    pub fn interval(&self, k: usize) -> Range<usize> {
        self.cuts[k]..self.cuts[k + 1]
    }

    /// `|I_{<k}|`.
    pub fn start(&self, k: usize) -> usize {
        self.cuts[k]
    }

    /// Number of positions covered.
    pub fn covered(&self) -> usize {
        *self.cuts.last().expect("cuts start at 0")
    }

    pub fn level_of(&self, pos: usize) -> Option<usize> {
        (pos < self.covered()).then(|| self.cuts.partition_point(|&c| c <= pos) - 1)
    }
}

/// `θ(s) ∈ 2^{I_k}` for every `s ∈ 2^{I_{<k}}`, `k` below the depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Predictor {
    partition: IntervalPartition,
    /// `table[k][s]`, where bit `i` of the index `s` is position `i`.
    table: Vec<Vec<Vec<bool>>>,
}

pub(crate) fn history_index(history: &[bool]) -> usize {
    history.iter().enumerate().fold(0, |acc, (i, &b)| acc | (b as usize) << i)
}

pub(crate) fn history_bits(index: usize, len: usize) -> Vec<bool> {
    (0..len).map(|i| index >> i & 1 == 1).collect()
}

impl Predictor {
    pub fn new(partition: IntervalPartition, table: Vec<Vec<Vec<bool>>>) -> Result<Self> {
        if table.len() != partition.depth() {
            return invalid("predictor table depth differs from the partition");
        }
        for (k, row) in table.iter().enumerate() {
            let start = partition.start(k);
            if start > MAX_HISTORY_BITS || row.len() != 1 << start {
                return invalid(format!("level {k} needs 2^{start} predictions"));
            }
            let width = partition.interval(k).len();
            if row.iter().any(|t| t.len() != width) {
                return invalid(format!("level {k} predictions must have {width} bits"));
            }
        }
        Ok(Predictor { partition, table })
    }

    pub fn partition(&self) -> &IntervalPartition {
        &self.partition
    }

    pub fn depth(&self) -> usize {
        self.partition.depth()
    }

    pub fn table(&self) -> &[Vec<Vec<bool>>] {
        &self.table
    }

    /// `θ(s)` for `s ∈ 2^{I_{<k}}`.
    pub fn theta(&self, k: usize, history: &[bool]) -> Result<&[bool]> {
        if k >= self.depth() {
            return invalid(format!("level {k} is past the constructed depth {}", self.depth()));
        }
        if history.len() != self.partition.start(k) {
            return invalid(format!("level {k} histories have {} bits", self.partition.start(k)));
        }
        Ok(&self.table[k][history_index(history)])
    }

    /// Replaces one prediction; used to build tampered certificates.
    pub fn set_theta(&mut self, k: usize, history: &[bool], theta: Vec<bool>) -> Result<()> {
        let width = self.partition.interval(k).len();
        if theta.len() != width {
            return invalid(format!("level {k} predictions must have {width} bits"));
        }
        self.theta(k, history)?;
        self.table[k][history_index(history)] = theta;
        Ok(())
    }
}

/// The machine decides `ψ(c)(pivot) = 1` on the cylinder `history ∪ theta`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecidedFact {
    pub level: usize,
    pub history: String,
    pub theta: String,
    pub pivot: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdversaryCertificate {
    pub machine: String,
    pub predictor: Predictor,
    pub pivots: Vec<usize>,
    pub queries: usize,
}

impl AdversaryCertificate {
    pub fn depth(&self) -> usize {
        self.predictor.depth()
    }

    pub fn partition(&self) -> &IntervalPartition {
        self.predictor.partition()
    }

    pub fn facts(&self) -> Vec<DecidedFact> {
        let p = self.partition();
        (0..self.depth())
            .flat_map(|k| {
                let start = p.start(k);
                self.predictor.table[k].iter().enumerate().map(move |(s, t)| DecidedFact {
                    level: k,
                    history: bits_to_string(&history_bits(s, start)),
                    theta: bits_to_string(t),
                    pivot: self.pivots[k],
                })
            })
            .collect()
    }
}

impl Serialize for AdversaryCertificate {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("AdversaryCertificate", 6)?;
        st.serialize_field("machine", &self.machine)?;
        st.serialize_field("depth", &self.depth())?;
        st.serialize_field("cuts", self.partition().cuts())?;
        st.serialize_field("pivots", &self.pivots)?;
        st.serialize_field("queries", &self.queries)?;
        st.serialize_field("facts", &self.facts())?;
        st.end()
    }
}

/// Where an exhausted search stopped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Frontier {
    pub level: usize,
    /// Search cost `(a − a_{k−1} − 1) + |extension|` being examined.
    pub cost: usize,
    pub pivot: usize,
    /// Histories still lacking an extension that decides 1 at `pivot`.
    pub pending: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum AdversaryOutcome {
    Complete { certificate: AdversaryCertificate },
    Exhausted { partial: AdversaryCertificate, frontier: Frontier },
}

impl AdversaryOutcome {
    pub fn certificate(&self) -> &AdversaryCertificate {
        match self {
            AdversaryOutcome::Complete { certificate } => certificate,
            AdversaryOutcome::Exhausted { partial, .. } => partial,
        }
    }

    pub fn is_complete(&self) -> bool {
        matches!(self, AdversaryOutcome::Complete { .. })
    }
}

struct Counter<'a> {
    machine: &'a dyn ContinuousMachine,
    used: AtomicUsize,
    budget: usize,
}

impl Counter<'_> {
    fn query(&self, prefix: &[bool], m: usize) -> Result<Answer> {
        if self.used.fetch_add(1, Ordering::Relaxed) >= self.budget {
            self.used.fetch_sub(1, Ordering::Relaxed);
            return Err(Error::Budget(format!("{} queries used", self.budget)));
        }
        self.machine.query(prefix, m)
    }

    fn used(&self) -> usize {
        self.used.load(Ordering::Relaxed)
    }
}

/// Per-history search state for one pivot: lengths tried so far and the
/// first extension found.
#[derive(Default, Clone)]
struct PivotState {
    next_len: usize,
    found: Option<Vec<bool>>,
}

/// Tries extensions of lengths up to `len`, shortest first, lexicographic.
fn search_extension(
    counter: &Counter,
    base: &[bool],
    pivot: usize,
    len: usize,
    state: &mut PivotState,
) -> Result<()> {
    while state.found.is_none() && state.next_len <= len {
        let l = state.next_len;
        for code in 0u64..1 << l {
            // lexicographic: first bit most significant
            let ext: Vec<bool> = (0..l).map(|i| code >> (l - 1 - i) & 1 == 1).collect();
            let mut prefix = base.to_vec();
            prefix.extend_from_slice(&ext);
            if counter.query(&prefix, pivot)? == Answer::One {
                state.found = Some(ext);
                break;
            }
        }
        state.next_len += 1;
    }
    Ok(())
}

fn partial_certificate(
    machine: &dyn ContinuousMachine,
    cuts: &[usize],
    table: &[Vec<Vec<bool>>],
    pivots: &[usize],
    queries: usize,
) -> AdversaryCertificate {
    let partition = IntervalPartition::new(cuts.to_vec()).expect("cuts grow");
    AdversaryCertificate {
        machine: machine.name().to_string(),
        predictor: Predictor::new(partition, table.to_vec()).expect("consistent table"),
        pivots: pivots.to_vec(),
        queries,
    }
}

pub fn build_adversary(
    machine: &dyn ContinuousMachine,
    depth: usize,
    budget: usize,
    exec: Exec,
) -> Result<AdversaryOutcome> {
    build_adversary_with(machine, depth, budget, exec, None)
}

/// Builds `(I_k, a_k, θ)` for `k < depth` such that the machine decides
/// `ψ(c)(a_k) = 1` on every cylinder `s ∪ θ(s)`.
pub fn build_adversary_with(
    machine: &dyn ContinuousMachine,
    depth: usize,
    budget: usize,
    exec: Exec,
    dense_open: Option<&dyn DenseOpen>,
) -> Result<AdversaryOutcome> {
    let counter = Counter { machine, used: AtomicUsize::new(0), budget };
    let exec = if machine.concurrent() { exec } else { Exec::Sequential };
    let mut cuts = vec![0usize];
    let mut table: Vec<Vec<Vec<bool>>> = Vec::new();
    let mut pivots: Vec<usize> = Vec::new();

    for k in 0..depth {
        let start = cuts[k];
        if start > MAX_HISTORY_BITS {
            return Err(Error::Resource(format!(
                "level {k} would enumerate 2^{start} histories (limit 2^{MAX_HISTORY_BITS})"
            )));
        }
        let bases: Vec<Vec<bool>> = (0..1usize << start)
            .map(|s| {
                let mut b = history_bits(s, start);
                if let Some(h) = dense_open {
                    b.extend(h.extend(k, &b));
                }
                b
            })
            .collect();
        let a_min = pivots.last().map_or(0, |a| a + 1);
        let states: Vec<Mutex<HashMap<usize, PivotState>>> =
            bases.iter().map(|_| Mutex::new(HashMap::new())).collect();

        let mut cost = 0usize;
        let found = 'search: loop {
            for a in a_min..=a_min + cost {
                let len = cost - (a - a_min);
                let results = exec.map_range(bases.len(), |s| -> Result<bool> {
                    let mut st = states[s].lock().expect("unpoisoned");
                    let entry = st.entry(a).or_default();
                    search_extension(&counter, &bases[s], a, len, entry)?;
                    Ok(entry.found.is_some())
                });
                let mut all = true;
                for r in results {
                    match r {
                        Ok(ok) => all &= ok,
                        Err(Error::Budget(_)) => {
                            let pending = (0..bases.len())
                                .filter(|&s| {
                                    let st = states[s].lock().expect("unpoisoned");
                                    st.get(&a).is_none_or(|e| e.found.is_none())
                                })
                                .map(|s| bits_to_string(&history_bits(s, start)))
                                .collect();
                            return Ok(AdversaryOutcome::Exhausted {
                                partial: partial_certificate(machine, &cuts, &table, &pivots, counter.used()),
                                frontier: Frontier { level: k, cost, pivot: a, pending },
                            });
                        }
                        Err(e) => return Err(e),
                    }
                }
                if all {
                    break 'search a;
                }
            }
            cost += 1;
        };

        // θ(s) = t(s) ⌢ extension, padded with 0s to a common length ≥ 1
        let thetas: Vec<Vec<bool>> = bases
            .iter()
            .enumerate()
            .map(|(s, base)| {
                let st = states[s].lock().expect("unpoisoned");
                let mut t = base[start..].to_vec();
                t.extend(st[&found].found.clone().expect("every history succeeded"));
                t
            })
            .collect();
        let width = thetas.iter().map(Vec::len).max().unwrap_or(0).max(1);
        let mut row = Vec::with_capacity(thetas.len());
        for (s, mut t) in thetas.into_iter().enumerate() {
            t.resize(width, false);
            let mut prefix = history_bits(s, start);
            prefix.extend_from_slice(&t);
            match counter.query(&prefix, found) {
                Ok(Answer::One) => {}
                Ok(other) => {
                    return Err(Error::MachineFault(format!(
                        "{}: answer at {found} changed to {other} after padding {}",
                        machine.name(),
                        bits_to_string(&prefix)
                    )))
                }
                Err(Error::Budget(_)) => {
                    return Ok(AdversaryOutcome::Exhausted {
                        partial: partial_certificate(machine, &cuts, &table, &pivots, counter.used()),
                        frontier: Frontier { level: k, cost, pivot: found, pending: vec![] },
                    })
                }
                Err(e) => return Err(e),
            }
            row.push(t);
        }
        cuts.push(start + width);
        table.push(row);
        pivots.push(found);
    }
    Ok(AdversaryOutcome::Complete {
        certificate: partial_certificate(machine, &cuts, &table, &pivots, counter.used()),
    })
}

/// Re-queries every decided fact; returns how many were confirmed.
pub fn verify_certificate(cert: &AdversaryCertificate, machine: &dyn ContinuousMachine) -> Result<usize> {
    if cert.pivots.len() != cert.depth() || cert.pivots.windows(2).any(|w| w[0] >= w[1]) {
        return invalid("pivots must increase and match the depth");
    }
    let p = cert.partition();
    let mut confirmed = 0;
    for k in 0..cert.depth() {
        let start = p.start(k);
        for (s, t) in cert.predictor.table[k].iter().enumerate() {
            let mut prefix = history_bits(s, start);
            prefix.extend_from_slice(t);
            let a = machine.query(&prefix, cert.pivots[k])?;
            if a != Answer::One {
                return Err(Error::MachineFault(format!(
                    "{} answers {a} at {} on {}, the certificate records 1",
                    machine.name(),
                    cert.pivots[k],
                    bits_to_string(&prefix)
                )));
            }
            confirmed += 1;
        }
    }
    Ok(confirmed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adversary::machine::{ConstantMachine, FnContinuous, IdentityMachine};

    #[test]
    fn identity_gives_unit_intervals() {
        let out = build_adversary(&IdentityMachine, 5, 1_000_000, Exec::Sequential).unwrap();
        let cert = out.certificate();
        assert!(out.is_complete());
        assert_eq!(cert.partition().cuts(), &[0, 1, 2, 3, 4, 5]);
        assert_eq!(cert.pivots, vec![0, 1, 2, 3, 4]);
        for k in 0..5 {
            assert_eq!(cert.predictor.table()[k].len(), 1 << k);
            assert!(cert.predictor.table()[k].iter().all(|t| t == &[true]));
        }
        assert_eq!(verify_certificate(cert, &IdentityMachine).unwrap(), 31);
    }

    #[test]
    fn parallel_matches_sequential() {
        let a = build_adversary(&IdentityMachine, 6, 1_000_000, Exec::Sequential).unwrap();
        let b = build_adversary(&IdentityMachine, 6, 1_000_000, Exec::Parallel).unwrap();
        assert_eq!(a.certificate(), b.certificate());
    }

    #[test]
    fn all_ones_needs_no_extension() {
        let out = build_adversary(&ConstantMachine(true), 4, 1000, Exec::Sequential).unwrap();
        let cert = out.certificate();
        assert_eq!(cert.partition().cuts(), &[0, 1, 2, 3, 4]);
        assert_eq!(cert.pivots, vec![0, 1, 2, 3]);
        assert!(cert.predictor.table().iter().flatten().all(|t| t == &[false]));
    }

    #[test]
    fn all_zeros_exhausts_the_budget() {
        let out = build_adversary(&ConstantMachine(false), 3, 5000, Exec::Sequential).unwrap();
        match out {
            AdversaryOutcome::Exhausted { partial, frontier } => {
                assert_eq!(partial.depth(), 0);
                assert_eq!(frontier.level, 0);
                assert_eq!(frontier.pending, vec![String::new()]);
                assert_eq!(partial.queries, 5000);
            }
            other => panic!("expected exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn shifted_machine_uses_later_pivots() {
        // ψ(c)(m) = c(m + 2)
        let m = FnContinuous::new("shift2", |p, m| match p.get(m + 2) {
            Some(true) => Answer::One,
            Some(false) => Answer::Zero,
            None => Answer::Undecided,
        });
        let out = build_adversary(&m, 4, 100_000, Exec::Sequential).unwrap();
        let cert = out.certificate();
        assert!(out.is_complete());
        assert!(cert.pivots.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(verify_certificate(cert, &m).unwrap(), cert.facts().len());
    }

    #[test]
    fn non_monotone_machine_is_a_fault() {
        // decides 1 on the exact length 1, then flips
        let m = FnContinuous::new("flaky", |p, _| if p.len() == 1 && p[0] { Answer::One } else if p.len() > 1 { Answer::Zero } else { Answer::Undecided });
        struct Pad;
        impl DenseOpen for Pad {
            fn extend(&self, _: usize, _: &[bool]) -> Vec<bool> {
                vec![]
            }
        }
        let ok = build_adversary_with(&m, 1, 100, Exec::Sequential, Some(&Pad)).unwrap();
        let mut cert = ok.certificate().clone();
        cert.predictor.set_theta(0, &[], vec![false]).unwrap();
        assert!(matches!(verify_certificate(&cert, &m), Err(Error::MachineFault(_))));
    }

    #[test]
    fn dense_open_hook_prepends_extensions() {
        struct Ones;
        impl DenseOpen for Ones {
            fn extend(&self, _: usize, _: &[bool]) -> Vec<bool> {
                vec![true, true]
            }
        }
        let out = build_adversary_with(&IdentityMachine, 3, 100_000, Exec::Sequential, Some(&Ones)).unwrap();
        let cert = out.certificate();
        assert!(cert.predictor.table().iter().flatten().all(|t| t.len() >= 2 && t[0] && t[1]));
        verify_certificate(cert, &IdentityMachine).unwrap();
    }

    #[test]
    fn partition_lookup() {
        let p = IntervalPartition::new(vec![0, 2, 3, 7]).unwrap();
        assert_eq!(p.level_of(1), Some(0));
        assert_eq!(p.level_of(2), Some(1));
        assert_eq!(p.level_of(6), Some(2));
        assert_eq!(p.level_of(7), None);
        assert!(IntervalPartition::new(vec![0, 2, 2]).is_err());
        assert!(IntervalPartition::new(vec![1, 2]).is_err());
    }
}
