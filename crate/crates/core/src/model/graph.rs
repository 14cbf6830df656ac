use std::collections::HashMap;
use std::sync::Arc;

use serde::Serialize;

use super::{
    BaseField, ModelError, RouteUnit, SingleApplication, Substitution, Trail, Waypoint, WaypointKey,
};

/// A directed, trail-labelled edge of a route graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    pub trail: Arc<Trail>,
    pub substitution: Option<Substitution>,
    /// Produced by expanding a two-way unit.
    pub two_way: bool,
    /// Index of the unit this edge came from in the input list.
    pub source_unit: usize,
}

/// Why a unit was reported while building a graph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum UnitIssue {
    Defective,
    NotInBaseField,
    TemplateMismatch,
    /// Admitted; the trail has no templates to check against.
    UnverifiableSingleApplication,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitReport {
    pub unit: usize,
    pub issue: UnitIssue,
    pub admitted: bool,
}

/// The route graph of a base field: a quiver whose edges are the
/// irreducible route units.
#[derive(Clone, Debug)]
pub struct RouteGraph {
    base: BaseField,
    vertices: Vec<Waypoint>,
    index: HashMap<WaypointKey, usize>,
    edges: Vec<Edge>,
    outgoing: Vec<Vec<usize>>,
    incoming: Vec<Vec<usize>>,
}

/// A graph together with the units that were excluded or flagged.
#[derive(Clone, Debug)]
pub struct GraphBuild {
    pub graph: RouteGraph,
    pub reports: Vec<UnitReport>,
}

/// Builds the route graph of `base` from a pool of units.
///
/// Units that are not irreducible are left out and reported. Two-way units
/// contribute an edge in each direction.
pub fn build_graph(units: &[RouteUnit], base: &BaseField) -> Result<GraphBuild, ModelError> {
    check_waypoint_ids(units)?;
    let mut graph = RouteGraph::empty(base.clone());
    let mut reports = Vec::new();
    for (i, unit) in units.iter().enumerate() {
        let Some(trail) = unit.trail() else {
            reports.push(UnitReport {
                unit: i,
                issue: UnitIssue::Defective,
                admitted: false,
            });
            continue;
        };
        if !base.contains(trail.id()) {
            reports.push(UnitReport {
                unit: i,
                issue: UnitIssue::NotInBaseField,
                admitted: false,
            });
            continue;
        }
        match unit.single_application() {
            SingleApplication::Mismatch => {
                reports.push(UnitReport {
                    unit: i,
                    issue: UnitIssue::TemplateMismatch,
                    admitted: false,
                });
                continue;
            }
            SingleApplication::Unverifiable => reports.push(UnitReport {
                unit: i,
                issue: UnitIssue::UnverifiableSingleApplication,
                admitted: true,
            }),
            SingleApplication::Verified => {}
        }
        let a = graph.intern(unit.initial());
        let b = graph.intern(unit.terminal());
        graph.push_edge(a, b, unit, i);
        if unit.is_two_way() {
            graph.push_edge(b, a, unit, i);
        }
    }
    Ok(GraphBuild { graph, reports })
}

fn check_waypoint_ids(units: &[RouteUnit]) -> Result<(), ModelError> {
    let mut seen: HashMap<&str, &Waypoint> = HashMap::new();
    for w in units.iter().flat_map(|u| [u.initial(), u.terminal()]) {
        match seen.get(w.id()) {
            Some(prev) if *prev != w => {
                return Err(ModelError::ConflictingWaypoint(w.id().to_string()))
            }
            Some(_) => {}
            None => {
                seen.insert(w.id(), w);
            }
        }
    }
    Ok(())
}

impl RouteGraph {
    pub fn empty(base: BaseField) -> Self {
        Self {
            base,
            vertices: Vec::new(),
            index: HashMap::new(),
            edges: Vec::new(),
            outgoing: Vec::new(),
            incoming: Vec::new(),
        }
    }

    fn intern(&mut self, w: &Waypoint) -> usize {
        if let Some(&i) = self.index.get(&w.key()) {
            return i;
        }
        let i = self.vertices.len();
        self.vertices.push(w.clone());
        self.index.insert(w.key(), i);
        self.outgoing.push(Vec::new());
        self.incoming.push(Vec::new());
        i
    }

    fn push_edge(&mut self, from: usize, to: usize, unit: &RouteUnit, source_unit: usize) {
        let trail = unit
            .trail()
            .expect("only non-defective units become edges")
            .clone();
        let e = self.edges.len();
        self.edges.push(Edge {
            from,
            to,
            trail,
            substitution: unit.substitution().cloned(),
            two_way: unit.is_two_way(),
            source_unit,
        });
        self.outgoing[from].push(e);
        self.incoming[to].push(e);
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[Waypoint] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &Waypoint {
        &self.vertices[i]
    }

    pub fn index_of(&self, w: &Waypoint) -> Option<usize> {
        self.index.get(&w.key()).copied()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, e: usize) -> &Edge {
        &self.edges[e]
    }

    /// Edge indices leaving vertex `v`.
    pub fn outgoing(&self, v: usize) -> &[usize] {
        &self.outgoing[v]
    }

    /// Edge indices entering vertex `v`.
    pub fn incoming(&self, v: usize) -> &[usize] {
        &self.incoming[v]
    }

    /// The edge as a route unit read in its own direction.
    pub fn edge_unit(&self, e: usize) -> RouteUnit {
        let edge = &self.edges[e];
        RouteUnit::from_parts(
            self.vertices[edge.from].clone(),
            self.vertices[edge.to].clone(),
            Some(edge.trail.clone()),
            edge.substitution.clone(),
            false,
        )
    }
}
