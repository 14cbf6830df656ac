use serde::Serialize;

use super::{distance, Distance, GeometryError};
use crate::model::{RouteGraph, Waypoint};

/// Distances for the queried pairs under one base field.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationStage {
    pub basefield: String,
    pub distances: Vec<Distance>,
}

/// A pair whose distance grew from `stage - 1` to `stage`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationViolation {
    pub pair: usize,
    pub stage: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FiltrationReport {
    pub pairs: Vec<(String, String)>,
    pub stages: Vec<FiltrationStage>,
    /// Should stay empty; anything here means a graph was built wrongly.
    pub violations: Vec<FiltrationViolation>,
}

impl FiltrationReport {
    pub fn is_monotone(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Distances of every pair at every stage of an increasing sequence of
/// base fields.
///
/// Each stage's base field must contain the previous one. Pairs are
/// evaluated in parallel with the `parallel` feature.
pub fn filtration_report(
    stages: &[&RouteGraph],
    pairs: &[(Waypoint, Waypoint)],
) -> Result<FiltrationReport, GeometryError> {
    for w in stages.windows(2) {
        if !w[0].base().is_subfield_of(w[1].base()) {
            return Err(GeometryError::NonMonotoneBaseFields {
                earlier: w[0].base().id().to_string(),
                later: w[1].base().id().to_string(),
            });
        }
    }
    let stages: Vec<FiltrationStage> = stages
        .iter()
        .map(|g| FiltrationStage {
            basefield: g.base().id().to_string(),
            distances: crate::par::map(pairs, |(a, b)| distance(g, a, b)),
        })
        .collect();
    let mut violations = Vec::new();
    for (t, w) in stages.windows(2).enumerate() {
        for p in 0..pairs.len() {
            if w[1].distances[p] > w[0].distances[p] {
                violations.push(FiltrationViolation {
                    pair: p,
                    stage: t + 1,
                });
            }
        }
    }
    Ok(FiltrationReport {
        pairs: pairs
            .iter()
            .map(|(a, b)| (a.id().to_string(), b.id().to_string()))
            .collect(),
        stages,
        violations,
    })
}
