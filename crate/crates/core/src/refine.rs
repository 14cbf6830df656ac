//! The refinement preorder on routeways and irreducible refinements.
//!
//! `γ ⪯ η` when η arises from γ by replacing route units with nonempty
//! routeways between the same endpoints. Only the boundary waypoints have to
//! line up; trails and interior waypoints of the replacements are free.

use std::collections::BTreeMap;
use std::ops::Range;

use serde::Serialize;
use thiserror::Error;

use crate::model::{BaseField, ModelError, Routeway};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RefineError {
    #[error("routeways do not share start and destination")]
    EndpointMismatch,
    #[error("expansion for unit {unit} does not run between the unit's endpoints")]
    BlockEndpointMismatch { unit: usize },
    #[error("expansion for unit {unit} is empty")]
    EmptyBlock { unit: usize },
    #[error("expansion for unit {unit} has a reducible route unit at position {position}")]
    BlockNotIrreducible { unit: usize, position: usize },
    #[error("expansion refers to unit {unit}, but the routeway has {len} units")]
    NoSuchUnit { unit: usize, len: usize },
}

impl RefineError {
    pub fn code(&self) -> &'static str {
        match self {
            RefineError::EndpointMismatch | RefineError::BlockEndpointMismatch { .. } => {
                "endpoint-mismatch"
            }
            RefineError::EmptyBlock { .. } => "empty-block",
            RefineError::BlockNotIrreducible { .. } => "block-not-irreducible",
            RefineError::NoSuchUnit { .. } => "no-such-unit",
        }
    }
}

/// Unit `unit` of γ is replaced by the units `range` of η.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub unit: usize,
    pub range: Range<usize>,
}

/// Consecutive nonempty blocks partitioning η, one per unit of γ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RefinementWitness {
    pub blocks: Vec<Block>,
}

/// Decides `gamma ⪯ eta`, returning the greedy-leftmost witness.
///
/// Blocks are as short as possible from left to right among all
/// partitions that complete.
pub fn refines(gamma: &Routeway, eta: &Routeway) -> Result<Option<RefinementWitness>, RefineError> {
    if gamma.start() != eta.start() || gamma.end() != eta.end() {
        return Err(RefineError::EndpointMismatch);
    }
    let a = gamma.waypoints();
    let b = eta.waypoints();
    let (n, m) = (gamma.len(), eta.len());
    if n == 0 {
        // nothing to replace: η must be γ's empty routeway
        return Ok((m == 0).then(|| RefinementWitness { blocks: Vec::new() }));
    }
    // feasible[i][j]: boundary i of γ can sit at boundary j of η and the
    // remaining boundaries of γ can still be placed after it.
    let mut feasible = vec![vec![false; m + 1]; n + 1];
    feasible[n][m] = a[n] == b[m];
    for i in (0..n).rev() {
        // any_later[j] = some j' > j is feasible for boundary i + 1
        let mut any_later = false;
        for j in (0..=m).rev() {
            feasible[i][j] = any_later && a[i] == b[j];
            any_later |= feasible[i + 1][j];
        }
    }
    if !feasible[0][0] {
        return Ok(None);
    }
    let mut blocks = Vec::with_capacity(n);
    let mut at = 0;
    for (i, row) in feasible.iter().enumerate().skip(1) {
        let next = (at + 1..=m)
            .find(|&j| row[j])
            .expect("feasibility guarantees a next boundary");
        blocks.push(Block {
            unit: i - 1,
            range: at..next,
        });
        at = next;
    }
    Ok(Some(RefinementWitness { blocks }))
}

/// Mutual refinement.
pub fn presentation_equivalent(gamma: &Routeway, eta: &Routeway) -> Result<bool, RefineError> {
    Ok(refines(gamma, eta)?.is_some() && refines(eta, gamma)?.is_some())
}

/// Replaces each unit of `gamma` by its expansion and concatenates.
///
/// Units without an entry in `expansions` stand for themselves. Every
/// block must be nonempty, run between the unit's endpoints and be
/// irreducible relative to `base`; the result is then an irreducible
/// refinement of `gamma`.
pub fn irreducible_refinement(
    gamma: &Routeway,
    expansions: &BTreeMap<usize, Routeway>,
    base: &BaseField,
) -> Result<Routeway, RefineError> {
    if let Some((&unit, _)) = expansions.iter().find(|(&k, _)| k >= gamma.len()) {
        return Err(RefineError::NoSuchUnit {
            unit,
            len: gamma.len(),
        });
    }
    let mut units = Vec::new();
    for (i, unit) in gamma.units().iter().enumerate() {
        let block = match expansions.get(&i) {
            Some(r) => r.clone(),
            None => Routeway::single(unit.clone()),
        };
        if block.is_empty() {
            return Err(RefineError::EmptyBlock { unit: i });
        }
        if block.start() != unit.initial() || block.end() != unit.terminal() {
            return Err(RefineError::BlockEndpointMismatch { unit: i });
        }
        if let Some(position) = block.units().iter().position(|u| !u.is_irreducible(base)) {
            return Err(RefineError::BlockNotIrreducible { unit: i, position });
        }
        units.extend(block.into_units());
    }
    Ok(
        Routeway::new(gamma.start().clone(), units).unwrap_or_else(|e: ModelError| {
            unreachable!("blocks with matching endpoints always chain: {e}")
        }),
    )
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::model::{RouteUnit, Trail, Waypoint};

    fn wp(s: &str) -> Waypoint {
        Waypoint::single(s, s)
    }

    fn chain(points: &[&str], trail: &str) -> Routeway {
        let t = Arc::new(Trail::new(trail, trail));
        let units = points
            .windows(2)
            .map(|w| RouteUnit::new(wp(w[0]), wp(w[1]), t.clone()))
            .collect();
        Routeway::new(wp(points[0]), units).unwrap()
    }

    #[test]
    fn one_step_is_refined_by_two_steps() {
        let gamma = chain(&["A", "B"], "P");
        let eta = chain(&["A", "C", "B"], "P1");
        let w = refines(&gamma, &eta).unwrap().unwrap();
        assert_eq!(
            w.blocks,
            vec![Block {
                unit: 0,
                range: 0..2
            }]
        );
        assert_eq!(refines(&eta, &gamma).unwrap(), None);
        assert!(!presentation_equivalent(&gamma, &eta).unwrap());
    }

    #[test]
    fn reflexive_witness_is_identity() {
        let g = chain(&["A", "B", "C", "D"], "P");
        let w = refines(&g, &g).unwrap().unwrap();
        let ranges: Vec<_> = w.blocks.iter().map(|b| b.range.clone()).collect();
        assert_eq!(ranges, vec![0..1, 1..2, 2..3]);
        assert!(presentation_equivalent(&g, &g).unwrap());
    }

    #[test]
    fn trails_do_not_matter() {
        let g = chain(&["A", "C", "B"], "P");
        let h = chain(&["A", "C", "B"], "Q");
        assert!(presentation_equivalent(&g, &h).unwrap());
    }

    #[test]
    fn greedy_leftmost_with_repeated_waypoints() {
        // γ: A → B → C, η: A → B → X → B → C
        let gamma = chain(&["A", "B", "C"], "P");
        let eta = chain(&["A", "B", "X", "B", "C"], "Q");
        let w = refines(&gamma, &eta).unwrap().unwrap();
        assert_eq!(w.blocks[0].range, 0..1);
        assert_eq!(w.blocks[1].range, 1..4);
    }

    #[test]
    fn empty_routeways() {
        let e = Routeway::empty(wp("A"));
        assert_eq!(refines(&e, &e).unwrap().unwrap().blocks, vec![]);
        let loop_ = chain(&["A", "B", "A"], "P");
        assert_eq!(refines(&e, &loop_).unwrap(), None);
        assert_eq!(refines(&loop_, &e).unwrap(), None);
    }

    #[test]
    fn endpoint_mismatch() {
        assert_eq!(
            refines(&chain(&["A", "B"], "P"), &chain(&["A", "C"], "P")),
            Err(RefineError::EndpointMismatch)
        );
    }

    #[test]
    fn irreducible_refinement_replaces_reducible_unit() {
        let p = Arc::new(Trail::new("P", "p"));
        let big = Arc::new(Trail::new("Big", "big step"));
        let base = BaseField::new("B", [p.clone()]);
        let gamma = Routeway::from_units(vec![
            RouteUnit::new(wp("A"), wp("B"), p.clone()),
            RouteUnit::new(wp("B"), wp("D"), big),
        ])
        .unwrap();
        assert!(!gamma.is_irreducible(&base));
        let expansion = Routeway::from_units(vec![
            RouteUnit::new(wp("B"), wp("C"), p.clone()),
            RouteUnit::new(wp("C"), wp("D"), p.clone()),
        ])
        .unwrap();
        let out = irreducible_refinement(&gamma, &BTreeMap::from([(1, expansion)]), &base).unwrap();
        assert_eq!(out.len(), 3);
        assert!(out.is_irreducible(&base));
        assert!(refines(&gamma, &out).unwrap().is_some());
    }

    #[test]
    fn irreducible_refinement_errors() {
        let p = Arc::new(Trail::new("P", "p"));
        let base = BaseField::new("B", [p.clone()]);
        let gamma = Routeway::single(RouteUnit::new(wp("A"), wp("B"), p.clone()));
        let wrong = Routeway::single(RouteUnit::new(wp("A"), wp("C"), p.clone()));
        assert_eq!(
            irreducible_refinement(&gamma, &BTreeMap::from([(0, wrong)]), &base),
            Err(RefineError::BlockEndpointMismatch { unit: 0 })
        );
        let defective = Routeway::single(RouteUnit::defective(wp("A"), wp("B")));
        assert_eq!(
            irreducible_refinement(&gamma, &BTreeMap::from([(0, defective)]), &base),
            Err(RefineError::BlockNotIrreducible {
                unit: 0,
                position: 0
            })
        );
        assert_eq!(
            irreducible_refinement(&gamma, &BTreeMap::from([(3, gamma.clone())]), &base),
            Err(RefineError::NoSuchUnit { unit: 3, len: 1 })
        );
        assert_eq!(
            irreducible_refinement(&gamma, &BTreeMap::new(), &base).unwrap(),
            gamma
        );
    }
}
