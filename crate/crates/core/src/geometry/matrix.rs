use serde::Serialize;

use super::{search, Distance};
use crate::model::RouteGraph;

/// All-pairs route distances over the vertices of a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DistanceMatrix {
    n: usize,
    cells: Vec<Distance>,
}

impl DistanceMatrix {
    /// One BFS per source vertex; sources run in parallel with the
    /// `parallel` feature.
    pub fn compute(g: &RouteGraph) -> Self {
        Self::from_rows(
            g.vertex_count(),
            crate::par::map_range(g.vertex_count(), |s| row(g, s)),
        )
    }

    /// Same result as [`DistanceMatrix::compute`], always on the calling thread.
    pub fn compute_sequential(g: &RouteGraph) -> Self {
        Self::from_rows(
            g.vertex_count(),
            (0..g.vertex_count()).map(|s| row(g, s)).collect(),
        )
    }

    fn from_rows(n: usize, rows: Vec<Vec<Distance>>) -> Self {
        Self {
            n,
            cells: rows.into_iter().flatten().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Distance between vertex indices.
    pub fn get(&self, from: usize, to: usize) -> Distance {
        self.cells[from * self.n + to]
    }

    pub fn row(&self, from: usize) -> &[Distance] {
        &self.cells[from * self.n..(from + 1) * self.n]
    }
}

fn row(g: &RouteGraph, source: usize) -> Vec<Distance> {
    search::forward(g, source)
        .into_iter()
        .map(Distance::from)
        .collect()
}
