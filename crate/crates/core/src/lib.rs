//! Routeways: explicit, step-by-step mathematical explanations and the
//! directed geometry of the graphs they form.
//!
//! A document in the `.rwy` format declares base fields of atomic trails,
//! waypoints, and routeways built from route units. [`dsl`] parses, lints
//! and serializes such documents; [`model`] holds the domain types and
//! route-graph construction; [`geometry`] answers distance, geodesic,
//! interval, excess and closure queries; [`refine`] decides the refinement
//! preorder; [`instantiate`] specializes parameterized routeways.
//!
//! With the default `parallel` feature, batch queries (distance matrices,
//! filtration reports, closures over many anchor sets) fan out over rayon.
//! Without it the same functions run sequentially.

pub mod dsl;
pub mod export;
pub mod geometry;
pub mod instantiate;
pub mod model;
pub mod refine;

pub(crate) mod par;

pub use model::{
    atlas_coverage, build_graph, Atlas, BaseField, ModelError, Roadmap, RouteGraph, RouteUnit,
    Routeway, Substitution, Trail, Waypoint,
};
