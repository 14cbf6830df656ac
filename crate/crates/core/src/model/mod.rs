//! Waypoints, trails, route units, routeways, base fields, route graphs,
//! roadmaps and atlases.

mod atlas;
mod basefield;
mod graph;
mod routeway;
mod substitution;
mod trail;
mod unit;
mod waypoint;

use thiserror::Error;

pub use atlas::{atlas_coverage, Atlas, CoverageReport, CoverageWitness, Roadmap, TargetCoverage};
pub use basefield::BaseField;
pub use graph::{build_graph, Edge, GraphBuild, RouteGraph, UnitIssue, UnitReport};
pub use routeway::Routeway;
pub use substitution::{is_symbol, Substitution};
pub use trail::{Trail, TrailTemplate};
pub use unit::{RouteUnit, SingleApplication};
pub use waypoint::{normalize_statement, Waypoint, WaypointKey};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("waypoint `{0}` has no statements")]
    EmptyWaypoint(String),
    #[error("endpoint mismatch: `{left}` does not meet `{right}`")]
    EndpointMismatch { left: String, right: String },
    #[error("broken chain at unit {index}: expected to start at `{expected}`, found `{found}`")]
    BrokenChain {
        index: usize,
        expected: String,
        found: String,
    },
    #[error("a routeway built from units needs at least one unit")]
    EmptyUnitList,
    #[error("`{0}` is not a valid parameter symbol")]
    InvalidParameter(String),
    #[error("trail `{trail}` declares parameter `{param}` twice")]
    DuplicateParameter { trail: String, param: String },
    #[error("parameter `{0}` is bound twice")]
    DuplicateBinding(String),
    #[error("parameter `{0}` is bound to an empty term")]
    EmptyTerm(String),
    #[error("trail `{0}` has an empty premise or conclusion template")]
    EmptyTemplate(String),
    #[error("substitution for trail `{trail}` does not match its parameters (missing {missing:?}, extra {extra:?})")]
    SubstitutionDomain {
        trail: String,
        missing: Vec<String>,
        extra: Vec<String>,
    },
    #[error("a substitution needs a trail to bind")]
    SubstitutionWithoutTrail,
    #[error("a two-way unit needs a trail")]
    TwoWayWithoutTrail,
    #[error("waypoint id `{0}` is used with conflicting statements")]
    ConflictingWaypoint(String),
    #[error("a roadmap needs at least one routeway")]
    EmptyRoadmap,
    #[error("roadmap routeway {routeway} does not run between the roadmap's endpoints")]
    RoadmapEndpoints { routeway: usize },
}

impl ModelError {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            ModelError::EmptyWaypoint(_) => "empty-waypoint",
            ModelError::EndpointMismatch { .. } => "endpoint-mismatch",
            ModelError::BrokenChain { .. } => "broken-chain",
            ModelError::EmptyUnitList => "empty-unit-list",
            ModelError::InvalidParameter(_) => "invalid-parameter",
            ModelError::DuplicateParameter { .. } => "duplicate-parameter",
            ModelError::DuplicateBinding(_) => "duplicate-binding",
            ModelError::EmptyTerm(_) => "empty-term",
            ModelError::EmptyTemplate(_) => "empty-template",
            ModelError::SubstitutionDomain { .. } => "substitution-domain",
            ModelError::SubstitutionWithoutTrail => "substitution-without-trail",
            ModelError::TwoWayWithoutTrail => "two-way-without-trail",
            ModelError::ConflictingWaypoint(_) => "duplicate-waypoint-id",
            ModelError::EmptyRoadmap => "empty-roadmap",
            ModelError::RoadmapEndpoints { .. } => "roadmap-endpoints",
        }
    }
}
