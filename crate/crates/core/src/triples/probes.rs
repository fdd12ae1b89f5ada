//! Default probe representations for each carrier.

use super::coded::Carrier;
use super::rep::Rep;
use crate::reals::{dyadic_family, APFunc, IntervalColoring, NColoring, UPSet};

fn sets(lits: &[&str]) -> Vec<UPSet> {
    lits.iter().map(|s| s.parse().expect("probe literal")).collect()
}

/// Infinite sets; the first six are infinite and coinfinite.
fn infinite_sets() -> Vec<UPSet> {
    sets(&["ε|10", "ε|01", "ε|100", "ε|011", "ε|0100", "1101|011", "ε|1", "000|1", "ε|1100"])
}

fn funcs() -> Vec<APFunc> {
    // small heads first: families of ψ-images are drawn from the front
    [";0;0", ";1;0", ";0;1", ";1;1", ";0;2", "3,1;0,5;2", ";2,0,1;3", "9;4;0"]
        .iter()
        .map(|s| s.parse().expect("probe literal"))
        .collect()
}

fn colorings(n: u32) -> Vec<NColoring> {
    let top = n - 1;
    let mut out = vec![
        NColoring::modular(n),
        NColoring::new(n, vec![], vec![0]).expect("valid"),
        NColoring::new(n, vec![top], vec![top, 0]).expect("valid"),
        NColoring::new(n, vec![0, top], vec![top, top, 0]).expect("valid"),
    ];
    out.dedup();
    out
}

pub fn probes(carrier: &Carrier) -> Vec<Rep> {
    match carrier {
        Carrier::Infinite => infinite_sets().into_iter().map(Rep::Set).collect(),
        Carrier::Ic => infinite_sets().into_iter().filter(UPSet::is_ic).map(Rep::Set).collect(),
        Carrier::Coloring => {
            let mut v: Vec<Rep> = infinite_sets().into_iter().map(Rep::Set).collect();
            v.extend(sets(&["ε|0", "101|0"]).into_iter().map(Rep::Set));
            v.extend(
                [APFunc::identity(), APFunc::constant(3), APFunc::linear(2, 0)]
                    .into_iter()
                    .map(|f| Rep::IntervalColoring(IntervalColoring::new(f))),
            );
            v
        }
        Carrier::Baire => funcs().into_iter().map(Rep::Func).collect(),
        Carrier::NColoring(n) => colorings(*n).into_iter().map(Rep::Coloring).collect(),
        Carrier::Tuples(n) => tuples(*n),
        Carrier::FiniteTuples => (1..=3).flat_map(tuples).collect(),
        Carrier::ColoringSeq => vec![
            Rep::Seq(sets(&["ε|10"])),
            Rep::Seq(sets(&["ε|10", "ε|1100", "ε|0"])),
            Rep::Seq(sets(&["ε|0", "ε|1"])),
            Rep::Seq(sets(&["ε|100", "101|0", "ε|0110"])),
        ],
        Carrier::InfiniteSeq => vec![
            Rep::Seq(sets(&["ε|10"])),
            Rep::Seq(sets(&["ε|10", "ε|01", "ε|1"])),
            Rep::Seq(sets(&["ε|100", "1101|011"])),
        ],
    }
}

fn tuples(n: usize) -> Vec<Rep> {
    let base = infinite_sets();
    (0..base.len())
        .step_by(2)
        .map(|start| Rep::Tuple((0..n).map(|i| base[(start + i) % base.len()].clone()).collect()))
        .collect()
}

/// Small families of plus-side probes for property checks: singletons,
/// pairs and a triple of leading probes, plus carrier-specific families.
pub fn families(carrier: &Carrier) -> Vec<Vec<Rep>> {
    let plus = probes(carrier);
    let lead = &plus[..plus.len().min(5)];
    let mut out: Vec<Vec<Rep>> = lead.iter().map(|r| vec![r.clone()]).collect();
    for i in 0..lead.len() {
        for j in i + 1..lead.len() {
            out.push(vec![lead[i].clone(), lead[j].clone()]);
        }
    }
    if lead.len() >= 3 {
        out.push(lead[..3].to_vec());
    }
    let set_family = |v: Vec<UPSet>| v.into_iter().map(Rep::Set).collect::<Vec<_>>();
    match carrier {
        Carrier::Ic | Carrier::Infinite => {
            out.push(set_family(dyadic_family(3)));
            out.push(set_family(sets(&["ε|10", "ε|01"])));
            out.push(set_family(sets(&["ε|100", "ε|010", "ε|001"])));
            out.push(set_family(sets(&["ε|10", "ε|1000", "ε|10000000"])));
            out.push(set_family(sets(&["ε|10", "ε|1100", "ε|1000", "ε|0100"])));
        }
        Carrier::Baire => {
            out.retain(|f| f.len() <= 2);
            out.push(plus[..3].to_vec());
        }
        _ => {}
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn probes_lie_in_their_carriers() {
        let carriers = [
            Carrier::Infinite,
            Carrier::Ic,
            Carrier::Coloring,
            Carrier::Baire,
            Carrier::NColoring(2),
            Carrier::NColoring(4),
            Carrier::Tuples(3),
            Carrier::FiniteTuples,
            Carrier::ColoringSeq,
            Carrier::InfiniteSeq,
        ];
        for c in carriers {
            let ps = probes(&c);
            assert!(ps.len() >= 3, "{c}");
            assert!(ps.iter().all(|r| c.accepts(r)), "{c}");
            for fam in families(&c) {
                assert!(fam.iter().all(|r| c.accepts(r)), "{c}");
            }
        }
    }
}
