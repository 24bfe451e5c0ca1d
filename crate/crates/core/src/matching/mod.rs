//! Minimum-cost perfect matching on multigraphs with signed rational costs.
//!
//! [`min_cost_perfect_matching`] rescales costs to a common denominator and
//! runs a weighted blossom solver over `i128`. [`brute_force_perfect_matching`]
//! is the exhaustive oracle used to test it.

mod blossom;
mod brute;
mod oddcut;
mod polytope;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::{require_cubic_bridgeless, MultiGraph};
use crate::rat::{self, Rat};
use crate::{Error, Result};

pub use brute::brute_force_perfect_matching;
pub use oddcut::{check_matching_polytope_by_separation, min_odd_cut};
pub use polytope::{check_matching_polytope_point, FractionalMatchingPoint, MatchingViolation, MAX_POLYTOPE_VERTICES};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerfectMatching {
    /// Edge ids, sorted.
    pub edges: Vec<usize>,
    #[serde(with = "rat::pair")]
    pub cost: Rat,
}

impl PerfectMatching {
    /// Builds the matching from edge ids and checks that it covers every
    /// vertex exactly once.
    pub fn from_edges(g: &MultiGraph, mut edges: Vec<usize>) -> Result<Self> {
        edges.sort_unstable();
        edges.dedup();
        let mut covered = vec![false; g.num_vertices()];
        for &id in &edges {
            let e = g.edge(id);
            for v in [e.u, e.v] {
                if covered[v] {
                    return Err(Error::invariant("matching", format!("vertex {v} covered twice")));
                }
                covered[v] = true;
            }
        }
        if let Some(v) = covered.iter().position(|c| !c) {
            return Err(Error::invariant("matching", format!("vertex {v} not covered")));
        }
        let cost = rat::sum(edges.iter().map(|&id| &g.edge(id).cost));
        Ok(PerfectMatching { edges, cost })
    }

    pub fn contains(&self, id: usize) -> bool {
        self.edges.binary_search(&id).is_ok()
    }

    /// Matched edge id per vertex.
    pub fn mate_edges(&self, g: &MultiGraph) -> Vec<usize> {
        let mut mate = vec![usize::MAX; g.num_vertices()];
        for &id in &self.edges {
            let e = g.edge(id);
            mate[e.u] = id;
            mate[e.v] = id;
        }
        mate
    }
}

/// Exact minimum-cost perfect matching.
///
/// Parallel edges collapse to the cheapest copy (lowest id on ties) before
/// solving. Ties between optimal matchings are broken deterministically by
/// the solver's scan order.
pub fn min_cost_perfect_matching(g: &MultiGraph) -> Result<PerfectMatching> {
    let n = g.num_vertices();
    if n == 0 {
        return Ok(PerfectMatching { edges: Vec::new(), cost: rat::zero() });
    }
    let mut cheapest: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (id, e) in g.edges().iter().enumerate() {
        let key = (e.u.min(e.v), e.u.max(e.v));
        match cheapest.get(&key) {
            Some(&best) if g.edge(best).cost <= e.cost => {}
            _ => {
                cheapest.insert(key, id);
            }
        }
    }
    let ids: Vec<usize> = {
        let mut v: Vec<usize> = cheapest.values().copied().collect();
        v.sort_unstable();
        v
    };
    let costs: Vec<&Rat> = ids.iter().map(|&id| &g.edge(id).cost).collect();
    let den = rat::common_denominator(costs.iter().copied());
    let scaled = rat::scale_to_i128(costs.iter().copied(), &den)
        .ok_or_else(|| Error::Overflow("matching costs do not fit in i128".into()))?;
    let max = scaled.iter().copied().max().unwrap_or(0);
    let min = scaled.iter().copied().min().unwrap_or(0);
    // Weights max - c + 1 are positive; duals reach a few times the largest
    // weight times n, so leave generous headroom.
    let span = (max as f64 - min as f64 + 1.0) * (4.0 * n as f64 + 4.0);
    if !span.is_finite() || span > 2f64.powi(120) {
        return Err(Error::Overflow("matching weight range too large for i128".into()));
    }
    let weighted: Vec<(usize, usize, i128)> = ids
        .iter()
        .zip(&scaled)
        .map(|(&id, &c)| {
            let e = g.edge(id);
            (e.u, e.v, max - c + 1)
        })
        .collect();
    let mate = blossom::max_weight_matching(n, &weighted, true);
    let unmatched: Vec<usize> = (0..n).filter(|&v| mate[v].is_none()).collect();
    if !unmatched.is_empty() {
        return Err(Error::NoPerfectMatching { unmatched });
    }
    let mut chosen = Vec::with_capacity(n / 2);
    for (k, &(u, v, _)) in weighted.iter().enumerate() {
        if mate[u] == Some(v) && mate[v] == Some(u) {
            chosen.push(ids[k]);
        }
    }
    let m = PerfectMatching::from_edges(g, chosen)?;
    Ok(m)
}

/// Solves the matching on a cubic 2-edge-connected graph and reports whether
/// its cost is at most a third of the total edge cost.
pub fn np_bound_check(g: &MultiGraph) -> Result<(PerfectMatching, bool)> {
    require_cubic_bridgeless(g)?;
    let m = min_cost_perfect_matching(g)?;
    let holds = m.cost.clone() * rat::int(3) <= g.total_cost();
    Ok((m, holds))
}
