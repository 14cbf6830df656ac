use serde::Serialize;

use super::{ModelError, Routeway, Waypoint};

/// A chosen collection of routeways sharing a start and a destination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Roadmap {
    start: Waypoint,
    destination: Waypoint,
    routeways: Vec<Routeway>,
}

impl Roadmap {
    pub fn new(
        start: Waypoint,
        destination: Waypoint,
        routeways: Vec<Routeway>,
    ) -> Result<Self, ModelError> {
        if routeways.is_empty() {
            return Err(ModelError::EmptyRoadmap);
        }
        if let Some(i) = routeways
            .iter()
            .position(|r| *r.start() != start || *r.end() != destination)
        {
            return Err(ModelError::RoadmapEndpoints { routeway: i });
        }
        Ok(Self {
            start,
            destination,
            routeways,
        })
    }

    pub fn start(&self) -> &Waypoint {
        &self.start
    }

    pub fn destination(&self) -> &Waypoint {
        &self.destination
    }

    pub fn routeways(&self) -> &[Routeway] {
        &self.routeways
    }
}

/// Roadmaps meant to cover a set of target waypoints.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Atlas {
    pub roadmaps: Vec<Roadmap>,
    pub targets: Vec<Waypoint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverageWitness {
    pub roadmap: usize,
    pub routeway: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TargetCoverage {
    pub target: String,
    /// First roadmap/routeway in which the target appears, if any.
    pub witness: Option<CoverageWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    pub targets: Vec<TargetCoverage>,
}

impl CoverageReport {
    pub fn is_covering(&self) -> bool {
        self.targets.iter().all(|t| t.witness.is_some())
    }

    pub fn uncovered(&self) -> impl Iterator<Item = &str> {
        self.targets
            .iter()
            .filter(|t| t.witness.is_none())
            .map(|t| t.target.as_str())
    }
}

/// For every target, the first routeway (in roadmap order) passing through it.
pub fn atlas_coverage(atlas: &Atlas) -> CoverageReport {
    let targets = atlas
        .targets
        .iter()
        .map(|x| {
            let witness = atlas.roadmaps.iter().enumerate().find_map(|(ri, map)| {
                map.routeways()
                    .iter()
                    .position(|r| r.contains_waypoint(x))
                    .map(|wi| CoverageWitness {
                        roadmap: ri,
                        routeway: wi,
                    })
            });
            TargetCoverage {
                target: x.id().to_string(),
                witness,
            }
        })
        .collect();
    CoverageReport { targets }
}
