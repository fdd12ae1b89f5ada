use std::fs;
use std::time::Duration;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;

use borel_tukey::adversary::{
    build_adversary, multiclass_family, verify_certificate, AdversaryOutcome, ConstantMachine, ContinuousMachine,
    IdentityMachine, ProcessContinuous,
};
use borel_tukey::bp::{bound_from_trace, intersection_exact, psi_prefix, witness_stream, Branch, TraceBound};
use borel_tukey::exec::Exec;
use borel_tukey::splitting::{antichain, bt_edge, x_order, SplitSpec, XSpec, XVerdict};
use borel_tukey::triples::{
    catalog, refute_filterclass_to_b, refute_p_to_t, vd_diagram, DiagramKind, FilterRelation, FiniteTriple,
    ProcessMachine, PtViolation, TripleSets,
};
use borel_tukey::{Error, UPSet};

use crate::{AdversaryAction, BuiltinMachine, Command, Format, FormatArg, Gadget, RelationArg, Verdict};

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn no_dot(format: Format) -> Result<()> {
    if format == Format::Dot {
        bail!(Error::Invalid("dot output is only available for diagram".into()));
    }
    Ok(())
}

fn verdict(yes: bool) -> Verdict {
    if yes {
        Verdict::Yes
    } else {
        Verdict::No
    }
}

fn branches(fs: &[String]) -> Result<Vec<Branch>> {
    fs.iter().map(|f| f.parse::<Branch>().with_context(|| format!("parsing branch {f:?}"))).collect()
}

fn xspec(s: &str) -> Result<XSpec> {
    let s = s.trim().trim_start_matches('{').trim_end_matches('}');
    let elems = if s.is_empty() || s == "-" {
        vec![]
    } else {
        s.split(',')
            .map(|e| e.trim().parse::<u32>().map_err(|_| Error::Parse(format!("bad index {e:?}"))))
            .collect::<std::result::Result<Vec<_>, _>>()?
    };
    Ok(XSpec::new(elems)?)
}

fn set_string(x: &XSpec) -> String {
    let v: Vec<String> = x.elements().iter().map(u32::to_string).collect();
    format!("{{{}}}", v.join(","))
}

pub fn run(command: Command) -> Result<Verdict> {
    let exec = Exec::default();
    match command {
        Command::Catalog(FormatArg { format }) => {
            no_dot(format)?;
            let cat = catalog();
            match format {
                Format::Json => print_json(&cat)?,
                _ => {
                    for t in &cat {
                        let prop = t.property.as_ref().map(|p| format!("  [{p}]")).unwrap_or_default();
                        println!("{:<8} {:<8} {} × {}, {}{}", t.id, t.name, t.minus, t.plus, t.relation, prop);
                    }
                }
            }
            Ok(Verdict::Yes)
        }
        Command::Diagram { kind, format: FormatArg { format } } => {
            let kind: DiagramKind = kind.parse()?;
            let d = vd_diagram(kind);
            match format {
                Format::Dot => print!("{}", d.graph().to_dot(&format!("{kind:?}").to_lowercase())),
                Format::Json => print_json(&d.graph().to_json())?,
                Format::Text => {
                    for e in &d.edges {
                        println!("{} -> {}  {}  ({})", e.src, e.dst, e.verdict, e.provenance);
                    }
                }
            }
            Ok(Verdict::Yes)
        }
        Command::Edge { n, m, n_prime, m_prime, format: FormatArg { format } } => {
            no_dot(format)?;
            let v = bt_edge(SplitSpec::new(n, m)?, SplitSpec::new(n_prime, m_prime)?);
            match format {
                Format::Json => print_json(&v)?,
                _ => println!("{v}"),
            }
            Ok(verdict(v.is_morphism()))
        }
        Command::Antichain { max_m, format: FormatArg { format } } => {
            no_dot(format)?;
            let r = antichain(max_m)?;
            match format {
                Format::Json => print_json(&r)?,
                _ => {
                    for p in &r.pairs {
                        println!("m={} m'={}: {} / {}", p.lo, p.hi, p.forward, p.backward);
                    }
                    println!("{} pairs, antichain {}", r.pairs.len(), if r.holds() { "holds" } else { "fails" });
                }
            }
            Ok(verdict(r.holds()))
        }
        Command::Embed { x, y, format: FormatArg { format } } => {
            no_dot(format)?;
            let (x, y) = (xspec(&x)?, xspec(&y)?);
            let v = x_order(&x, &y);
            match format {
                Format::Json => print_json(&v)?,
                _ => match &v {
                    XVerdict::Morphism => println!("morphism ({} ⊇ {})", set_string(&x), set_string(&y)),
                    XVerdict::NoMorphism { witness, .. } => {
                        println!("no morphism ({witness} ∈ {} but not in {})", set_string(&y), set_string(&x))
                    }
                },
            }
            Ok(verdict(matches!(v, XVerdict::Morphism)))
        }
        Command::Psi { f, bound, format: FormatArg { format } } => {
            no_dot(format)?;
            let p = psi_prefix(&f.parse::<Branch>()?, bound, exec)?;
            match format {
                Format::Json => print_json(&p)?,
                _ => {
                    let xs: Vec<String> = p.elements.iter().map(u64::to_string).collect();
                    println!("ψ(f) ∩ [0,{bound}) = {{{}}}", xs.join(", "));
                    println!("coordinates of f read: {}", p.depth);
                }
            }
            Ok(Verdict::Yes)
        }
        Command::Witnesses { n, fs, count, format: FormatArg { format } } => {
            no_dot(format)?;
            let ws = witness_stream(n, &branches(&fs)?, count, exec)?;
            match format {
                Format::Json => print_json(&ws)?,
                _ => {
                    for w in &ws {
                        println!("level {}: index {}", w.level(), w.index());
                    }
                }
            }
            Ok(Verdict::Yes)
        }
        Command::Intersect { n, fs, format: FormatArg { format } } => {
            no_dot(format)?;
            let c = intersection_exact(n, &branches(&fs)?, exec)?;
            match format {
                Format::Json => print_json(&c)?,
                _ => {
                    println!("column {}: split level {}, {} element(s)", c.column, c.split_level, c.elements.len());
                    for t in &c.elements {
                        println!("level {}: index {}", t.level(), t.index());
                    }
                }
            }
            Ok(Verdict::Yes)
        }
        Command::Bound { column, obs, format: FormatArg { format } } => {
            no_dot(format)?;
            let text = fs::read_to_string(&obs).with_context(|| format!("reading {}", obs.display()))?;
            let raw: serde_json::Value = serde_json::from_str(&text).map_err(|e| Error::Parse(e.to_string()))?;
            let tuples = raw
                .as_array()
                .ok_or_else(|| Error::Parse("observations must be a JSON array".into()))?
                .iter()
                .map(borel_tukey::bp::OmegaTuple::from_json)
                .collect::<std::result::Result<Vec<_>, _>>()?;
            let b = bound_from_trace(column, &tuples)?;
            match format {
                Format::Json => print_json(&b)?,
                _ => match &b {
                    TraceBound::Bounded(c) => {
                        let vs: Vec<String> = c.bound.iter().map(u64::to_string).collect();
                        println!("bound on f: [{}] ({} consistent choices)", vs.join(", "), c.consistent_choices);
                    }
                    TraceBound::Empty(e) => {
                        println!("no f is consistent with the {} observations ({} choices explored)", e.observations, e.choices_explored)
                    }
                },
            }
            Ok(verdict(matches!(b, TraceBound::Bounded(_))))
        }
        Command::Refute { gadget, phi, psi, relation, sets, timeout_ms, format: FormatArg { format } } => {
            no_dot(format)?;
            let timeout = Duration::from_millis(timeout_ms);
            let phi = ProcessMachine::spawn(&phi, timeout)?;
            let psi = ProcessMachine::spawn(&psi, timeout)?;
            let (json, text, ok) = match gadget {
                Gadget::A2b => {
                    let rel = match relation {
                        RelationArg::NotAd => FilterRelation::NotAlmostDisjoint,
                        RelationArg::NotSubset => FilterRelation::NotAlmostSubset,
                    };
                    let v = refute_filterclass_to_b(&phi, &psi, rel)?;
                    let text = format!(
                        "violation: φ({}) = {} meets {} = {}, yet f ≥* ψ({}) = {}",
                        v.f, v.phi_f, v.x_name, v.x, v.x_name, v.psi_x
                    );
                    (serde_json::to_value(&v)?, text, v.verify())
                }
                Gadget::P2t => {
                    let sets = match sets {
                        Some(s) => {
                            let parsed: Vec<UPSet> = s.iter().map(|x| x.parse()).collect::<std::result::Result<_, _>>()?;
                            TripleSets::new([parsed[0].clone(), parsed[1].clone(), parsed[2].clone()])?
                        }
                        None => TripleSets::default(),
                    };
                    let v = refute_p_to_t(&phi, &psi, &sets)?;
                    let ok = v.verify()?;
                    let text = match &v {
                        PtViolation::Property { x_name, x, y_name, y, psi_x, psi_y } => format!(
                            "violation: {{{x_name} = {x}, {y_name} = {y}}} is centered, yet ψ gives {psi_x} and {psi_y}, which are ⊂*-incomparable"
                        ),
                        PtViolation::Relation { d, phi_d, y_name, y, psi_y } => format!(
                            "violation: D = {d} ⊂* ψ({y_name}) = {psi_y}, yet φ(D) = {phi_d} is not ⊂* {y_name} = {y}"
                        ),
                    };
                    (serde_json::to_value(&v)?, text, ok)
                }
            };
            if !ok {
                return Err(anyhow!(Error::MachineFault("the returned violation does not re-verify".into())));
            }
            match format {
                Format::Json => print_json(&json)?,
                _ => println!("{text}"),
            }
            Ok(Verdict::No)
        }
        Command::Adversary { action: AdversaryAction::Run { machine, builtin, depth, budget, classes, targets, timeout_ms } } => {
            let machine: Box<dyn ContinuousMachine> = match (machine, builtin) {
                (Some(cmd), _) => Box::new(ProcessContinuous::spawn(&cmd, Duration::from_millis(timeout_ms))?),
                (None, Some(BuiltinMachine::Identity)) => Box::new(IdentityMachine),
                (None, Some(BuiltinMachine::AllOnes)) => Box::new(ConstantMachine(true)),
                (None, Some(BuiltinMachine::AllZeros)) => Box::new(ConstantMachine(false)),
                (None, None) => bail!(Error::Invalid("give --machine or --builtin".into())),
            };
            let targets: Vec<UPSet> = targets.iter().map(|t| t.parse()).collect::<std::result::Result<_, _>>()?;
            let outcome = build_adversary(machine.as_ref(), depth, budget, Exec::Sequential)?;
            match &outcome {
                AdversaryOutcome::Complete { certificate } => {
                    let verified = verify_certificate(certificate, machine.as_ref())?;
                    let family = match classes {
                        Some(n) => {
                            let specs: Vec<(usize, usize)> = (0..n).map(|r| (n, r)).collect();
                            Some(multiclass_family(certificate, machine.as_ref(), &specs, &targets)?)
                        }
                        None => None,
                    };
                    print_json(&serde_json::json!({
                        "outcome": outcome,
                        "verified_facts": verified,
                        "family": family,
                    }))?;
                    Ok(Verdict::Yes)
                }
                AdversaryOutcome::Exhausted { frontier, .. } => {
                    print_json(&serde_json::json!({ "outcome": outcome }))?;
                    Err(anyhow!(Error::Budget(format!(
                        "{budget} queries spent at level {} (pivot {}, cost {})",
                        frontier.level, frontier.pivot, frontier.cost
                    ))))
                }
            }
        }
        Command::Norm { triple, property, format: FormatArg { format } } => {
            no_dot(format)?;
            let text = fs::read_to_string(&triple).with_context(|| format!("reading {}", triple.display()))?;
            let (t, props) = FiniteTriple::from_json(&text)?;
            let allowed = match &property {
                Some(name) => Some(
                    props
                        .get(name)
                        .ok_or_else(|| Error::Invalid(format!("property {name:?} is not defined in the triple file")))?
                        .clone(),
                ),
                None => None,
            };
            let qualifies = |f: u64| allowed.as_ref().is_none_or(|ms| ms.iter().any(|m| f & !m == 0));
            let witness = t.norm_witness_bounded(Some(&qualifies), borel_tukey::triples::NORM_SEARCH_BOUND)?;
            let family: Option<Vec<&str>> = witness.map(|m| {
                (0..t.plus().len()).filter(|j| m >> j & 1 == 1).map(|j| t.plus()[j].as_str()).collect()
            });
            match format {
                Format::Json => print_json(&serde_json::json!({
                    "norm": family.as_ref().map(Vec::len),
                    "family": family,
                    "property": property,
                }))?,
                _ => match &family {
                    Some(f) => println!("norm = {} via {{{}}}", f.len(), f.join(", ")),
                    None => println!("norm = ∞ (no dominating family)"),
                },
            }
            Ok(verdict(family.is_some()))
        }
    }
}
