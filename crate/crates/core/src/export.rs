//! DOT and JSON renderings of route graphs and roadmap subgraphs.

use std::collections::HashMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::model::{Roadmap, RouteGraph, Waypoint, WaypointKey};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExportNode {
    pub id: String,
    pub label: String,
    pub anchor: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExportEdge {
    pub from: String,
    pub to: String,
    /// `None` for a defective unit in a roadmap.
    pub trail: Option<String>,
    pub two_way: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ExportGraph {
    pub nodes: Vec<ExportNode>,
    pub edges: Vec<ExportEdge>,
}

#[derive(Default)]
struct Builder {
    graph: ExportGraph,
    ids: HashMap<WaypointKey, usize>,
}

impl Builder {
    fn node(&mut self, w: &Waypoint, anchors: &[Waypoint]) -> String {
        let at = match self.ids.get(&w.key()) {
            Some(&i) => i,
            None => {
                self.graph.nodes.push(ExportNode {
                    id: w.id().to_string(),
                    label: w.label(),
                    anchor: anchors.contains(w),
                });
                self.ids.insert(w.key(), self.graph.nodes.len() - 1);
                self.graph.nodes.len() - 1
            }
        };
        self.graph.nodes[at].id.clone()
    }
}

impl ExportGraph {
    /// Every vertex and edge of `g`, in graph order.
    pub fn from_graph(g: &RouteGraph, anchors: &[Waypoint]) -> Self {
        let mut b = Builder::default();
        for v in g.vertices() {
            b.node(v, anchors);
        }
        for e in g.edges() {
            b.graph.edges.push(ExportEdge {
                from: b.graph.nodes[e.from].id.clone(),
                to: b.graph.nodes[e.to].id.clone(),
                trail: Some(e.trail.id().to_string()),
                two_way: e.two_way,
            });
        }
        b.graph
    }

    /// The waypoints and units of a roadmap's routeways. A unit shared by
    /// several routeways appears once.
    pub fn from_roadmap(r: &Roadmap, anchors: &[Waypoint]) -> Self {
        let mut b = Builder::default();
        for unit in r.routeways().iter().flat_map(|g| g.units()) {
            let from = b.node(unit.initial(), anchors);
            let to = b.node(unit.terminal(), anchors);
            let trail = unit.trail_id().map(str::to_string);
            let mut push = |from: &String, to: &String| {
                let edge = ExportEdge {
                    from: from.clone(),
                    to: to.clone(),
                    trail: trail.clone(),
                    two_way: unit.is_two_way(),
                };
                if !b.graph.edges.contains(&edge) {
                    b.graph.edges.push(edge);
                }
            };
            push(&from, &to);
            if unit.is_two_way() {
                push(&to, &from);
            }
        }
        if r.routeways().iter().all(|g| g.is_empty()) {
            b.node(r.start(), anchors);
        }
        b.graph
    }

    pub fn to_dot(&self) -> String {
        if self.nodes.is_empty() {
            return "digraph { }\n".to_string();
        }
        let mut out = String::from("digraph {\n");
        for n in &self.nodes {
            let shape = if n.anchor { "doublecircle" } else { "box" };
            let _ = writeln!(
                out,
                "  {} [label={}, shape={shape}];",
                quote(&n.id),
                quote(&n.label)
            );
        }
        for e in &self.edges {
            let label = e.trail.as_deref().unwrap_or("");
            let _ = write!(
                out,
                "  {} -> {} [label={}",
                quote(&e.from),
                quote(&e.to),
                quote(label)
            );
            if e.trail.is_none() {
                out.push_str(", style=dashed");
            }
            out.push_str("];\n");
        }
        out.push_str("}\n");
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("export graph always serializes") + "\n"
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::model::{build_graph, BaseField, RouteUnit, Routeway, Trail};

    fn wp(s: &str) -> Waypoint {
        Waypoint::single(s, format!("stmt {s}"))
    }

    #[test]
    fn empty_graph_skeleton() {
        assert_eq!(ExportGraph::default().to_dot(), "digraph { }\n");
    }

    #[test]
    fn two_way_gives_two_edges_with_same_label() {
        let p = Arc::new(Trail::new("P", "p"));
        let u = RouteUnit::new(wp("A"), wp("B"), p.clone())
            .two_way()
            .unwrap();
        let g = build_graph(&[u], &BaseField::new("B", [p])).unwrap().graph;
        let x = ExportGraph::from_graph(&g, &[wp("A")]);
        let dot = x.to_dot();
        assert_eq!(dot.matches("[label=\"P\"]").count(), 2);
        assert!(dot.contains("\"A\" [label=\"stmt A\", shape=doublecircle]"));
        assert!(x.edges.iter().all(|e| e.two_way));
    }

    #[test]
    fn roadmap_subgraph_dedupes_units() {
        let p = Arc::new(Trail::new("P", "p"));
        let q = Arc::new(Trail::new("Q", "q"));
        let g1 = Routeway::from_units(vec![
            RouteUnit::new(wp("H"), wp("F"), p.clone()),
            RouteUnit::new(wp("F"), wp("S"), p.clone()),
        ])
        .unwrap();
        let g2 = Routeway::from_units(vec![
            RouteUnit::new(wp("H"), wp("F"), p.clone()),
            RouteUnit::new(wp("F"), wp("S"), q),
        ])
        .unwrap();
        let r = Roadmap::new(wp("H"), wp("S"), vec![g1, g2]).unwrap();
        let x = ExportGraph::from_roadmap(&r, &[]);
        assert_eq!(x.nodes.len(), 3);
        assert_eq!(x.edges.len(), 3);
    }

    #[test]
    fn quoting() {
        assert_eq!(quote("a \"b\" \\"), "\"a \\\"b\\\" \\\\\"");
    }
}
