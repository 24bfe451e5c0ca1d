use serde::{Deserialize, Serialize};

use crate::graph::MultiGraph;
use crate::rat::{self, Rat};
use crate::{Error, Result};

/// Odd-set enumeration visits `2^(n-1)` sets; beyond this it is refused.
pub const MAX_POLYTOPE_VERTICES: usize = 20;

/// A point indexed by edge id.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FractionalMatchingPoint {
    #[serde(with = "rat::pair::vec")]
    pub values: Vec<Rat>,
}

impl FractionalMatchingPoint {
    pub fn constant(g: &MultiGraph, value: Rat) -> Self {
        FractionalMatchingPoint { values: vec![value; g.num_edges()] }
    }

    pub fn cost(&self, g: &MultiGraph) -> Rat {
        self.values
            .iter()
            .zip(g.edges())
            .fold(rat::zero(), |acc, (x, e)| acc + x * &e.cost)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MatchingViolation {
    Negative {
        edge: usize,
        #[serde(with = "rat::text")]
        value: Rat,
    },
    Degree {
        vertex: usize,
        #[serde(with = "rat::text")]
        value: Rat,
    },
    OddSet {
        set: Vec<usize>,
        #[serde(with = "rat::text")]
        value: Rat,
    },
}

/// Checks `x` against the perfect matching polytope of `g`: nonnegativity,
/// degree equal to one, and `x(δ(S)) >= 1` for every odd `S`.
///
/// Constraints are checked in that order; within the odd sets, `S` runs over
/// bitmasks in increasing order. `Ok(None)` means the point is inside.
pub fn check_matching_polytope_point(g: &MultiGraph, x: &FractionalMatchingPoint) -> Result<Option<MatchingViolation>> {
    let n = g.num_vertices();
    if x.values.len() != g.num_edges() {
        return Err(Error::precondition(format!(
            "point has {} values for {} edges",
            x.values.len(),
            g.num_edges()
        )));
    }
    if n > MAX_POLYTOPE_VERTICES {
        return Err(Error::precondition(format!(
            "odd-set enumeration takes at most {MAX_POLYTOPE_VERTICES} vertices, got {n}"
        )));
    }
    if let Some(edge) = x.values.iter().position(|v| *v < rat::zero()) {
        return Ok(Some(MatchingViolation::Negative { edge, value: x.values[edge].clone() }));
    }
    let mut degree = vec![rat::zero(); n];
    for (v, e) in x.values.iter().zip(g.edges()) {
        degree[e.u] += v;
        degree[e.v] += v;
    }
    if let Some(vertex) = degree.iter().position(|d| *d != rat::one()) {
        return Ok(Some(MatchingViolation::Degree { vertex, value: degree[vertex].clone() }));
    }

    let den = rat::common_denominator(&x.values);
    let scaled = rat::scale_to_i128(&x.values, &den)
        .ok_or_else(|| Error::Overflow("matching point does not fit in i128".into()))?;
    let one = i128::try_from(den.clone()).map_err(|_| Error::Overflow("denominator too large".into()))?;
    let edges: Vec<(u32, u32, i128)> = g
        .edges()
        .iter()
        .zip(&scaled)
        .filter(|(_, &w)| w != 0)
        .map(|(e, &w)| (e.u as u32, e.v as u32, w))
        .collect();
    for mask in 1u32..(1u32 << n) {
        if mask.count_ones() % 2 == 0 {
            continue;
        }
        let cut: i128 = edges
            .iter()
            .filter(|(u, v, _)| ((mask >> u) ^ (mask >> v)) & 1 == 1)
            .map(|e| e.2)
            .sum();
        if cut < one {
            let set: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
            return Ok(Some(MatchingViolation::OddSet { set, value: Rat::new(cut.into(), den) }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    fn k4() -> MultiGraph {
        let mut g = MultiGraph::new(4);
        for (u, v) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
            g.add_edge(u, v, int(1));
        }
        g
    }

    #[test]
    fn third_point_on_k4_is_inside() {
        let g = k4();
        let x = FractionalMatchingPoint::constant(&g, rat(1, 3));
        assert_eq!(check_matching_polytope_point(&g, &x).unwrap(), None);
        assert_eq!(x.cost(&g), int(2));
    }

    #[test]
    fn third_point_with_a_bridge_violates_odd_set() {
        // Two blocks, each K4 with one edge subdivided, joined by a bridge
        // between the subdivision vertices.
        let mut h = MultiGraph::new(10);
        for base in [0, 5] {
            for (u, v) in [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (0, 4), (3, 4)] {
                h.add_edge(base + u, base + v, int(1));
            }
        }
        h.add_edge(4, 9, int(1));
        assert_eq!(h.non_cubic_vertex(), None);
        assert_eq!(h.bridges().len(), 1);
        let x = FractionalMatchingPoint::constant(&h, rat(1, 3));
        match check_matching_polytope_point(&h, &x).unwrap() {
            Some(MatchingViolation::OddSet { set, value }) => {
                assert_eq!(value, rat(1, 3));
                assert_eq!(set.len() % 2, 1);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn zero_point_fails_degree_at_first_vertex() {
        let g = k4();
        let x = FractionalMatchingPoint::constant(&g, rat::zero());
        assert_eq!(
            check_matching_polytope_point(&g, &x).unwrap(),
            Some(MatchingViolation::Degree { vertex: 0, value: rat::zero() })
        );
    }

    #[test]
    fn negative_values_are_reported_first() {
        let g = k4();
        let mut x = FractionalMatchingPoint::constant(&g, rat(1, 3));
        x.values[4] = rat(-1, 3);
        assert!(matches!(
            check_matching_polytope_point(&g, &x).unwrap(),
            Some(MatchingViolation::Negative { edge: 4, .. })
        ));
    }
}
