use std::collections::VecDeque;

use crate::model::RouteGraph;

/// BFS level of each vertex, `None` when unreached.
pub(crate) type Levels = Vec<Option<usize>>;

#[derive(Clone, Copy)]
pub(crate) enum Direction {
    Forward,
    Backward,
}

/// Unit-weight BFS levels from `sources`, skipping vertex `avoid`.
pub(crate) fn levels(
    g: &RouteGraph,
    sources: impl IntoIterator<Item = usize>,
    direction: Direction,
    avoid: Option<usize>,
) -> Levels {
    let mut dist = vec![None; g.vertex_count()];
    let mut queue = VecDeque::new();
    for s in sources {
        if Some(s) != avoid && dist[s].is_none() {
            dist[s] = Some(0);
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        let next = dist[v].expect("queued vertices are labelled") + 1;
        let edges = match direction {
            Direction::Forward => g.outgoing(v),
            Direction::Backward => g.incoming(v),
        };
        for &e in edges {
            let edge = g.edge(e);
            let w = match direction {
                Direction::Forward => edge.to,
                Direction::Backward => edge.from,
            };
            if Some(w) != avoid && dist[w].is_none() {
                dist[w] = Some(next);
                queue.push_back(w);
            }
        }
    }
    dist
}

pub(crate) fn forward(g: &RouteGraph, source: usize) -> Levels {
    levels(g, [source], Direction::Forward, None)
}

pub(crate) fn backward(g: &RouteGraph, target: usize) -> Levels {
    levels(g, [target], Direction::Backward, None)
}
