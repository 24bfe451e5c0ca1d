use serde::{Deserialize, Serialize};

use crate::rat::{self, Rat};
use crate::{Error, Result};

/// One of the three ways to thin a path of `ell` edges: drop the edges at
/// 1-based positions `p ≡ offset (mod 3)` and double the rest.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pattern {
    pub offset: u8,
    /// 0 or 2 per path edge, in path order.
    pub multiplicities: Vec<u8>,
    /// Vertex counts of the runs left after dropping edges, in path order.
    pub group_sizes: Vec<usize>,
    pub first_group_size: usize,
    pub last_group_size: usize,
    pub needs_first_endpoint_cycle_edges: bool,
    pub needs_last_endpoint_cycle_edges: bool,
    /// Cost of the pattern's edges, doubled ones counted twice.
    #[serde(with = "rat::pair")]
    pub cost_in_g: Rat,
    /// `cost_in_g` minus the cost of the whole path.
    #[serde(with = "rat::pair")]
    pub signed_cost: Rat,
}

pub fn make_patterns(ell: usize, costs: &[Rat]) -> Result<[Pattern; 3]> {
    if ell == 0 || costs.len() != ell {
        return Err(Error::precondition(format!(
            "pattern needs ell >= 1 and one cost per edge (ell = {ell}, {} costs)",
            costs.len()
        )));
    }
    let path_cost = rat::sum(costs);
    let make = |offset: u8| {
        let multiplicities: Vec<u8> = (1..=ell).map(|p| if p % 3 == offset as usize { 0 } else { 2 }).collect();
        let mut group_sizes = Vec::new();
        let mut run = 1;
        for &m in &multiplicities {
            if m == 0 {
                group_sizes.push(run);
                run = 1;
            } else {
                run += 1;
            }
        }
        group_sizes.push(run);
        let cost_in_g = multiplicities
            .iter()
            .zip(costs)
            .filter(|(m, _)| **m == 2)
            .fold(rat::zero(), |acc, (_, c)| acc + c * rat::int(2));
        let first = group_sizes[0];
        let last = *group_sizes.last().expect("at least one group");
        Pattern {
            offset,
            multiplicities,
            first_group_size: first,
            last_group_size: last,
            needs_first_endpoint_cycle_edges: first < 3,
            needs_last_endpoint_cycle_edges: last < 3,
            signed_cost: &cost_in_g - &path_cost,
            cost_in_g,
            group_sizes,
        }
    };
    Ok([make(0), make(1), make(2)])
}

/// Offset of the pattern wired to the middle chain vertex at the start of a
/// path: the one whose first group has three vertices.
pub fn start_middle(_ell: usize) -> u8 {
    0
}

/// Offset of the pattern wired to the middle chain vertex at the end of a
/// path. For `ell >= 2` its last group has three vertices; for `ell = 1` no
/// pattern has one and the same rule still gives a valid gadget.
pub fn end_middle(ell: usize) -> u8 {
    ((ell + 1) % 3) as u8
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::int;
    use proptest::prelude::*;

    #[test]
    fn nine_edge_groups() {
        let p = make_patterns(9, &vec![int(1); 9]).unwrap();
        assert_eq!(p[0].group_sizes, vec![3, 3, 3, 1]);
        assert_eq!(p[1].group_sizes, vec![1, 3, 3, 3]);
        assert_eq!(p[2].group_sizes, vec![2, 3, 3, 2]);
        for q in &p {
            assert_eq!(q.cost_in_g, int(12));
            assert_eq!(q.signed_cost, int(3));
        }
        assert_eq!(end_middle(9), 1);
    }

    #[test]
    fn middle_offsets_have_size_three_groups() {
        for ell in 2..30 {
            let p = make_patterns(ell, &vec![int(1); ell]).unwrap();
            let firsts: Vec<u8> = p.iter().filter(|q| q.first_group_size == 3).map(|q| q.offset).collect();
            let lasts: Vec<u8> = p.iter().filter(|q| q.last_group_size == 3).map(|q| q.offset).collect();
            assert_eq!(firsts, vec![start_middle(ell)], "ell={ell}");
            assert_eq!(lasts, vec![end_middle(ell)], "ell={ell}");
            let mut starts: Vec<usize> = p.iter().map(|q| q.first_group_size).collect();
            starts.sort_unstable();
            assert_eq!(starts, vec![1, 2, 3]);
        }
    }

    #[test]
    fn short_paths() {
        let p = make_patterns(1, &[int(5)]).unwrap();
        assert_eq!(p[0].multiplicities, vec![2]);
        assert_eq!(p[1].multiplicities, vec![0]);
        assert_eq!(p[2].multiplicities, vec![2]);
        assert!(p.iter().all(|q| q.needs_first_endpoint_cycle_edges));
        let p = make_patterns(2, &[int(1), int(1)]).unwrap();
        assert_eq!(p[0].group_sizes, vec![3]);
        assert!(make_patterns(0, &[]).is_err());
    }

    proptest! {
        #[test]
        fn pattern_identities(costs in prop::collection::vec((1i64..50, 1i64..6), 1..20)) {
            let costs: Vec<Rat> = costs.into_iter().map(|(a, b)| rat::rat(a, b)).collect();
            let p = make_patterns(costs.len(), &costs).unwrap();
            let path = rat::sum(&costs);
            let in_g = rat::sum(p.iter().map(|q| &q.cost_in_g));
            let signed = rat::sum(p.iter().map(|q| &q.signed_cost));
            prop_assert_eq!(in_g, &path * rat::int(4));
            prop_assert_eq!(signed, path);
            for a in 0..3 {
                for b in a + 1..3 {
                    prop_assert!(&p[a].signed_cost + &p[b].signed_cost >= rat::zero());
                }
            }
        }
    }
}
