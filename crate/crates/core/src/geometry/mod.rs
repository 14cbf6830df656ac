//! Directed route geometry on a [`RouteGraph`].
//!
//! Every edge counts as one route unit, so distances come from breadth-first
//! search. Waypoints that are not vertices of the graph behave as isolated
//! vertices: distance zero to themselves and infinite to everything else.

mod distance;
mod filtration;
mod matrix;
mod search;

use std::collections::HashSet;

use serde::Serialize;
use thiserror::Error;

use crate::model::{RouteGraph, Routeway, Waypoint};
use search::Direction;

pub use distance::Distance;
pub use filtration::{filtration_report, FiltrationReport, FiltrationStage, FiltrationViolation};
pub use matrix::DistanceMatrix;

/// Which leg of an excess or interval query was infinite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Leg {
    #[serde(rename = "d(A,B)")]
    StartToEnd,
    #[serde(rename = "d(A,F)")]
    StartToVia,
    #[serde(rename = "d(F,B)")]
    ViaToEnd,
}

impl std::fmt::Display for Leg {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Leg::StartToEnd => "d(A,B)",
            Leg::StartToVia => "d(A,F)",
            Leg::ViaToEnd => "d(F,B)",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("{0} is infinite")]
    InfiniteDistance(Leg),
    #[error("anchor set is empty")]
    EmptyAnchorSet,
    #[error("base field `{earlier}` is not contained in `{later}`")]
    NonMonotoneBaseFields { earlier: String, later: String },
}

impl GeometryError {
    pub fn code(&self) -> &'static str {
        match self {
            GeometryError::InfiniteDistance(_) => "infinite-distance",
            GeometryError::EmptyAnchorSet => "empty-anchor-set",
            GeometryError::NonMonotoneBaseFields { .. } => "non-monotone-basefields",
        }
    }
}

fn pair(g: &RouteGraph, a: &Waypoint, b: &Waypoint) -> Option<(usize, usize)> {
    Some((g.index_of(a)?, g.index_of(b)?))
}

/// Minimal number of route units over all routeways `a ⇝ b`.
pub fn distance(g: &RouteGraph, a: &Waypoint, b: &Waypoint) -> Distance {
    if a == b {
        return Distance::ZERO;
    }
    match pair(g, a, b) {
        Some((i, j)) => search::forward(g, i)[j].into(),
        None => Distance::Infinite,
    }
}

/// A shortest routeway `a ⇝ b`, or `None` when `b` is unreachable.
///
/// Walking back from `b`, ties between equally short predecessors go to the
/// edge with the smallest (trail id, source waypoint id).
pub fn geodesic(g: &RouteGraph, a: &Waypoint, b: &Waypoint) -> Option<Routeway> {
    if a == b {
        return Some(Routeway::empty(
            g.index_of(a)
                .map_or_else(|| a.clone(), |i| g.vertex(i).clone()),
        ));
    }
    let (i, j) = pair(g, a, b)?;
    let dist = search::forward(g, i);
    let mut level = dist[j]?;
    let mut path = Vec::with_capacity(level);
    let mut v = j;
    while v != i {
        let e = g
            .incoming(v)
            .iter()
            .copied()
            .filter(|&e| dist[g.edge(e).from] == Some(level - 1))
            .min_by(|&x, &y| {
                let (ex, ey) = (g.edge(x), g.edge(y));
                (ex.trail.id(), g.vertex(ex.from).id(), x).cmp(&(
                    ey.trail.id(),
                    g.vertex(ey.from).id(),
                    y,
                ))
            })
            .expect("a labelled vertex has a predecessor one level closer");
        path.push(e);
        v = g.edge(e).from;
        level -= 1;
    }
    path.reverse();
    let units = path.into_iter().map(|e| g.edge_unit(e)).collect();
    Some(Routeway::new(g.vertex(i).clone(), units).expect("shortest-path edges chain"))
}

/// Whether `r` has the length of a geodesic between its endpoints in `g`.
pub fn is_geodesic(g: &RouteGraph, r: &Routeway) -> bool {
    distance(g, r.start(), r.end()) == Distance::Finite(r.len())
}

fn finite_pair_levels(
    g: &RouteGraph,
    a: &Waypoint,
    b: &Waypoint,
) -> Result<(usize, usize, search::Levels, search::Levels), GeometryError> {
    let (i, j) = pair(g, a, b).ok_or(GeometryError::InfiniteDistance(Leg::StartToEnd))?;
    let from_a = search::forward(g, i);
    if from_a[j].is_none() {
        return Err(GeometryError::InfiniteDistance(Leg::StartToEnd));
    }
    Ok((i, j, from_a, search::backward(g, j)))
}

/// `{F : d(a,F) + d(F,b) = d(a,b)}`, in vertex order.
pub fn interval(
    g: &RouteGraph,
    a: &Waypoint,
    b: &Waypoint,
) -> Result<Vec<Waypoint>, GeometryError> {
    if a == b {
        return Ok(vec![a.clone()]);
    }
    let (_, j, from_a, to_b) = finite_pair_levels(g, a, b)?;
    let d = from_a[j];
    Ok((0..g.vertex_count())
        .filter(|&f| match (from_a[f], to_b[f]) {
            (Some(x), Some(y)) => Some(x + y) == d,
            _ => false,
        })
        .map(|f| g.vertex(f).clone())
        .collect())
}

/// Vertices lying on at least one geodesic `a ⇝ b`, found by walking the
/// shortest-path edges back from `b`.
pub fn interval_by_geodesics(
    g: &RouteGraph,
    a: &Waypoint,
    b: &Waypoint,
) -> Result<Vec<Waypoint>, GeometryError> {
    if a == b {
        return Ok(vec![a.clone()]);
    }
    let (_, j, from_a, _) = finite_pair_levels(g, a, b)?;
    let mut on = vec![false; g.vertex_count()];
    on[j] = true;
    let mut stack = vec![j];
    while let Some(v) = stack.pop() {
        let Some(level) = from_a[v] else { continue };
        for &e in g.incoming(v) {
            let u = g.edge(e).from;
            if level > 0 && from_a[u] == Some(level - 1) && !on[u] {
                on[u] = true;
                stack.push(u);
            }
        }
    }
    Ok((0..g.vertex_count())
        .filter(|&v| on[v])
        .map(|v| g.vertex(v).clone())
        .collect())
}

/// `d(a,f) + d(f,b) − d(a,b)`.
pub fn excess(
    g: &RouteGraph,
    f: &Waypoint,
    a: &Waypoint,
    b: &Waypoint,
) -> Result<usize, GeometryError> {
    let ab = distance(g, a, b)
        .finite()
        .ok_or(GeometryError::InfiniteDistance(Leg::StartToEnd))?;
    let af = distance(g, a, f)
        .finite()
        .ok_or(GeometryError::InfiniteDistance(Leg::StartToVia))?;
    let fb = distance(g, f, b)
        .finite()
        .ok_or(GeometryError::InfiniteDistance(Leg::ViaToEnd))?;
    Ok(af + fb - ab)
}

/// `f` lies on some geodesic `a ⇝ b`.
pub fn is_perfect(
    g: &RouteGraph,
    f: &Waypoint,
    a: &Waypoint,
    b: &Waypoint,
) -> Result<bool, GeometryError> {
    Ok(interval(g, a, b)?.contains(f))
}

/// `f` lies on every geodesic `a ⇝ b`.
///
/// Decided by deleting `f`: some geodesic avoids `f` exactly when the
/// distance in `g − f` still equals `d(a,b)`.
pub fn is_essential(
    g: &RouteGraph,
    f: &Waypoint,
    a: &Waypoint,
    b: &Waypoint,
) -> Result<bool, GeometryError> {
    let d = distance(g, a, b);
    if !d.is_finite() {
        return Err(GeometryError::InfiniteDistance(Leg::StartToEnd));
    }
    if f == a || f == b {
        return Ok(true);
    }
    let (Some(i), Some(j), Some(k)) = (g.index_of(a), g.index_of(b), g.index_of(f)) else {
        return Ok(false);
    };
    let avoiding = search::levels(g, [i], Direction::Forward, Some(k));
    Ok(Distance::from(avoiding[j]) > d)
}

/// `min_{s ∈ anchors} d(s, x)`.
pub fn anchor_distance(
    g: &RouteGraph,
    anchors: &[Waypoint],
    x: &Waypoint,
) -> Result<Distance, GeometryError> {
    if anchors.is_empty() {
        return Err(GeometryError::EmptyAnchorSet);
    }
    if anchors.contains(x) {
        return Ok(Distance::ZERO);
    }
    let Some(target) = g.index_of(x) else {
        return Ok(Distance::Infinite);
    };
    let sources: Vec<usize> = anchors.iter().filter_map(|s| g.index_of(s)).collect();
    Ok(search::levels(g, sources, Direction::Forward, None)[target].into())
}

/// Everything reachable from some anchor, anchors included.
///
/// Graph vertices come first in vertex order, followed by any anchors that
/// are not vertices.
pub fn closure(g: &RouteGraph, anchors: &[Waypoint]) -> Vec<Waypoint> {
    let sources: Vec<usize> = anchors.iter().filter_map(|s| g.index_of(s)).collect();
    let reach = search::levels(g, sources, Direction::Forward, None);
    let mut out: Vec<Waypoint> = (0..g.vertex_count())
        .filter(|&v| reach[v].is_some())
        .map(|v| g.vertex(v).clone())
        .collect();
    let mut seen: HashSet<Waypoint> = HashSet::new();
    for s in anchors {
        if g.index_of(s).is_none() && seen.insert(s.clone()) {
            out.push(s.clone());
        }
    }
    out
}

/// Closures of many anchor sets, fanned out when the `parallel` feature is on.
pub fn closures(g: &RouteGraph, anchor_sets: &[Vec<Waypoint>]) -> Vec<Vec<Waypoint>> {
    crate::par::map(anchor_sets, |s| closure(g, s))
}
