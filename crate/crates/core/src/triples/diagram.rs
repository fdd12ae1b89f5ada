//! Van Douwen's diagram, classically and with Borel morphisms.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, GraphEdge};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DiagramKind {
    Classical,
    Borel,
}

impl FromStr for DiagramKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "classical" => Ok(DiagramKind::Classical),
            "borel" => Ok(DiagramKind::Borel),
            _ => Err(Error::Parse(format!("unknown diagram kind {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "BT-morphism")]
    BtMorphism,
    #[serde(rename = "no-BT-morphism")]
    NoBtMorphism,
    #[serde(rename = "no-morphism-at-all")]
    NoMorphismAtAll,
    #[serde(rename = "open")]
    Open,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::BtMorphism => "BT-morphism",
            Verdict::NoBtMorphism => "no-BT-morphism",
            Verdict::NoMorphismAtAll => "no-morphism-at-all",
            Verdict::Open => "open",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "name", rename_all = "snake_case")]
pub enum Evidence {
    /// Id pair of the builtin candidate, `source→target`.
    Builtin(String),
    ForcingArgument,
    /// Name of the refutation gadget.
    Gadget(String),
    Open,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EdgeRecord {
    pub src: String,
    pub dst: String,
    pub verdict: Verdict,
    pub provenance: String,
    pub evidence: Evidence,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagram {
    pub kind: DiagramKind,
    pub nodes: Vec<String>,
    pub edges: Vec<EdgeRecord>,
}

impl Diagram {
    pub fn positive_edges(&self) -> Vec<(&str, &str)> {
        self.edges
            .iter()
            .filter(|e| e.verdict == Verdict::BtMorphism || self.kind == DiagramKind::Classical)
            .map(|e| (e.src.as_str(), e.dst.as_str()))
            .collect()
    }

    pub fn edge(&self, src: &str, dst: &str) -> Option<&EdgeRecord> {
        self.edges.iter().find(|e| e.src == src && e.dst == dst)
    }

    pub fn graph(&self) -> Graph {
        Graph {
            nodes: self.nodes.clone(),
            edges: self
                .edges
                .iter()
                .map(|e| GraphEdge {
                    src: e.src.clone(),
                    dst: e.dst.clone(),
                    verdict: Some(e.verdict.to_string()),
                    provenance: Some(e.provenance.clone()),
                    dashed: self.kind == DiagramKind::Borel && e.verdict != Verdict::BtMorphism,
                })
                .collect(),
        }
    }
}

fn rec(src: &str, dst: &str, verdict: Verdict, evidence: Evidence, provenance: &str) -> EdgeRecord {
    EdgeRecord { src: src.into(), dst: dst.into(), verdict, provenance: provenance.into(), evidence }
}

fn builtin(src: &str, dst: &str, provenance: &str) -> EdgeRecord {
    rec(src, dst, Verdict::BtMorphism, Evidence::Builtin(format!("{src}→{dst}")), provenance)
}

fn forcing(src: &str, dst: &str, provenance: &str) -> EdgeRecord {
    rec(src, dst, Verdict::NoBtMorphism, Evidence::ForcingArgument, provenance)
}

fn borel_edges() -> Vec<EdgeRecord> {
    let mut v = vec![
        builtin("i", "r", "identity maps, non-IC inputs sent to the evens"),
        builtin("u", "r", "identity maps"),
        builtin("d", "s", "next element of A against the interval coloring of f"),
        builtin("d", "b", "identity and f ↦ f+1"),
        builtin("r", "b", "dual of the dominating to splitting morphism"),
        builtin("b", "p", "column construction ψ(f) with trace bounds"),
        builtin("a", "p", "ψ(A) = ω∖A"),
        builtin("t", "p", "identity maps; linearly ordered families are centered"),
        forcing("i", "d", "would yield a Borel morphism between the simple triples r and d, which forcing rules out"),
        forcing("s", "p", "a Borel morphism would persist to a forcing extension in which the inequality fails"),
        rec(
            "a",
            "b",
            Verdict::NoMorphismAtAll,
            Evidence::Gadget("filterclass-to-b".into()),
            "odds and evens with f = max(ψ(O), ψ(E))",
        ),
        rec(
            "p",
            "t",
            Verdict::NoMorphismAtAll,
            Evidence::Gadget("p-to-t".into()),
            "three sets with infinite pairwise and empty triple intersection",
        ),
        rec("b", "t", Verdict::Open, Evidence::Open, "whether the column construction can be improved to reach t"),
    ];
    for (x, y) in [("i", "u"), ("i", "a"), ("u", "i"), ("u", "a"), ("a", "i"), ("a", "u")] {
        v.push(forcing(x, y, "reduces to a Borel morphism out of the simple triple r"));
    }
    v
}

const CLASSICAL: [(&str, &str); 9] = [
    ("i", "d"),
    ("i", "r"),
    ("u", "r"),
    ("d", "s"),
    ("d", "b"),
    ("r", "b"),
    ("a", "b"),
    ("s", "p"),
    ("b", "p"),
];

pub fn vd_diagram(kind: DiagramKind) -> Diagram {
    let borel = borel_edges();
    match kind {
        DiagramKind::Borel => Diagram {
            kind,
            nodes: ["i", "u", "d", "r", "a", "s", "b", "p", "t"].map(String::from).to_vec(),
            edges: borel,
        },
        DiagramKind::Classical => Diagram {
            kind,
            nodes: ["i", "u", "d", "r", "a", "s", "b", "p"].map(String::from).to_vec(),
            edges: CLASSICAL
                .iter()
                .map(|&(s, d)| {
                    let b = borel.iter().find(|e| e.src == s && e.dst == d).expect("every inequality is classified");
                    EdgeRecord { provenance: format!("provable inequality; Borel status: {}", b.provenance), ..b.clone() }
                })
                .collect(),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triples::builtin::builtin;

    #[test]
    fn borel_positive_edges_match_the_figure() {
        let d = vd_diagram(DiagramKind::Borel);
        let mut pos: Vec<_> = d.positive_edges().into_iter().filter(|(s, t)| *s != "t" && *t != "t").collect();
        pos.sort();
        let mut want = vec![("a", "p"), ("b", "p"), ("d", "b"), ("d", "s"), ("i", "r"), ("r", "b"), ("u", "r")];
        want.sort();
        assert_eq!(pos, want);
        assert_eq!(d.edge("b", "t").unwrap().verdict, Verdict::Open);
        assert_ne!(d.edge("a", "b").unwrap().verdict, Verdict::BtMorphism);
    }

    #[test]
    fn classical_has_a_to_b() {
        let c = vd_diagram(DiagramKind::Classical);
        assert_eq!(c.positive_edges().len(), 9);
        assert!(c.edge("a", "b").is_some());
    }

    #[test]
    fn positive_edges_have_builtins() {
        for e in vd_diagram(DiagramKind::Borel).edges {
            if let Evidence::Builtin(_) = e.evidence {
                assert!(builtin(&e.src, &e.dst).is_some(), "{}→{}", e.src, e.dst);
            }
        }
    }

    #[test]
    fn json_shape() {
        let j = vd_diagram(DiagramKind::Borel).graph().to_json();
        assert!(j["nodes"].as_array().unwrap().len() == 9);
        assert!(j["edges"][0]["verdict"].is_string());
        assert!(j["edges"][0]["provenance"].is_string());
    }
}
