//! Directed graphs rendered as DOT or as `{nodes, edges}` JSON.

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GraphEdge {
    pub src: String,
    pub dst: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    /// Drawn dashed in DOT.
    #[serde(skip)]
    pub dashed: bool,
}

impl GraphEdge {
    pub fn plain(src: impl Into<String>, dst: impl Into<String>) -> Self {
        GraphEdge { src: src.into(), dst: dst.into(), verdict: None, provenance: None, dashed: false }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Graph {
    pub nodes: Vec<String>,
    pub edges: Vec<GraphEdge>,
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

impl Graph {
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("digraph {} {{\n", quote(name));
        for n in &self.nodes {
            out.push_str(&format!("  {};\n", quote(n)));
        }
        for e in &self.edges {
            let mut attrs = Vec::new();
            if let Some(v) = &e.verdict {
                attrs.push(format!("label={}", quote(v)));
            }
            if e.dashed {
                attrs.push("style=dashed".to_string());
            }
            let attrs = if attrs.is_empty() { String::new() } else { format!(" [{}]", attrs.join(", ")) };
            out.push_str(&format!("  {} -> {}{attrs};\n", quote(&e.src), quote(&e.dst)));
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("graph serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot_and_json_shapes() {
        let g = Graph {
            nodes: vec!["a".into(), "b\"".into()],
            edges: vec![GraphEdge { dashed: true, verdict: Some("open".into()), ..GraphEdge::plain("a", "b\"") }],
        };
        let dot = g.to_dot("g");
        assert!(dot.contains("\"a\" -> \"b\\\"\" [label=\"open\", style=dashed];"));
        let j = g.to_json();
        assert_eq!(j["edges"][0]["src"], "a");
        assert_eq!(j["edges"][0]["verdict"], "open");
        assert!(j["edges"][0].get("provenance").is_none());
    }
}
