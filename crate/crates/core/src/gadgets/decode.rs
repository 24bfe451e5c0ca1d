use serde::{Deserialize, Serialize};

use crate::f2m::Component;
use crate::g2m::{validate_g2m, GraphicalTwoMatching};
use crate::instance::MetricInstance;
use crate::matching::{FractionalMatchingPoint, PerfectMatching};
use crate::rat::{self, Rat};
use crate::{Error, Result};

use super::{Construction, Gadget, GadgetGraph, Provenance, Side};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormalizeMode {
    /// Each gadget keeps exactly one pattern edge.
    ExactlyOne,
    /// Each gadget keeps at most one pattern edge.
    ZeroOrOne,
}

/// Rewrites `m` so that every gadget uses the number of pattern edges the
/// mode allows, swapping surplus pattern edges for chain links. The result
/// is a perfect matching of no greater cost.
pub fn normalize_matching(gg: &GadgetGraph, m: &PerfectMatching, mode: NormalizeMode) -> Result<PerfectMatching> {
    let mut edges = m.edges.clone();
    let mut changed = false;
    for gadget in &gg.gadgets {
        let used: Vec<u8> = (0..3u8).filter(|&r| m.contains(gadget.pattern_edges[r as usize])).collect();
        let drop: Vec<u8> = match (used.len(), mode) {
            (1, _) | (0, NormalizeMode::ZeroOrOne) => continue,
            (3, _) => {
                let keep = keep_of_three(gg, gadget)?;
                used.into_iter().filter(|&r| r != keep).collect()
            }
            (2, NormalizeMode::ZeroOrOne) => used,
            (k, _) => {
                return Err(Error::invariant(
                    "normalize",
                    format!("gadget of path {} has {k} pattern edges in {mode:?} mode", gadget.path),
                ))
            }
        };
        for side in [Side::Start, Side::End] {
            let mut freed: Vec<usize> = drop.iter().map(|&r| gadget.position(side, r)).collect();
            freed.sort_unstable();
            let link = match freed[..] {
                [0, 1] => 0,
                [1, 2] => 1,
                _ => {
                    return Err(Error::invariant(
                        "normalize",
                        format!("freed chain positions {freed:?} of path {} are not adjacent", gadget.path),
                    ))
                }
            };
            let s = if side == Side::Start { 0 } else { 1 };
            edges.push(gadget.zero_edges[s][link]);
        }
        edges.retain(|id| !drop.iter().any(|&r| gadget.pattern_edges[r as usize] == *id));
        changed = true;
    }
    if !changed {
        return Ok(m.clone());
    }
    let out = PerfectMatching::from_edges(&gg.graph, edges)?;
    if out.cost > m.cost {
        return Err(Error::invariant(
            "normalize",
            format!("exchange raised cost from {} to {}", rat::fmt_rat(&m.cost), rat::fmt_rat(&out.cost)),
        ));
    }
    Ok(out)
}

/// Among the patterns off the middle on both sides, the cheapest, then the
/// lowest offset.
fn keep_of_three(gg: &GadgetGraph, gadget: &Gadget) -> Result<u8> {
    (0..3u8)
        .filter(|&r| gadget.position(Side::Start, r) != 1 && gadget.position(Side::End, r) != 1)
        .min_by(|&a, &b| {
            let ca = &gg.graph.edge(gadget.pattern_edges[a as usize]).cost;
            let cb = &gg.graph.edge(gadget.pattern_edges[b as usize]).cost;
            ca.cmp(cb).then(a.cmp(&b))
        })
        .ok_or_else(|| Error::invariant("normalize", format!("no off-middle pattern for path {}", gadget.path)))
}

/// Reads a graphical 2-matching on the component's vertices off a
/// normalized perfect matching of `gg`.
///
/// Cycle edges enter unless matched. A contracted path enters once, twice if
/// its edge is matched. A gadget path enters as its matched pattern, or once
/// if no pattern edge is matched.
pub fn decode_g2m(
    gg: &GadgetGraph,
    m: &PerfectMatching,
    comp: &Component,
    inst: &MetricInstance,
) -> Result<GraphicalTwoMatching> {
    let mut g = GraphicalTwoMatching::empty(inst.n(), comp.vertices.clone());
    for (id, prov) in gg.provenance.iter().enumerate() {
        match *prov {
            Provenance::Cycle { edge } if !m.contains(id) => {
                let (i, j) = inst.endpoints(edge);
                g.add(i, j, 1);
            }
            Provenance::Path { path } => {
                let copies = if m.contains(id) { 2 } else { 1 };
                for w in comp.paths[path].vertices.windows(2) {
                    g.add(w[0], w[1], copies);
                }
            }
            _ => {}
        }
    }
    for gadget in &gg.gadgets {
        let path = &comp.paths[gadget.path];
        let used: Vec<usize> = (0..3).filter(|&r| m.contains(gadget.pattern_edges[r])).collect();
        match used[..] {
            [] if gg.construction == Construction::AllPathGadgets => {
                for w in path.vertices.windows(2) {
                    g.add(w[0], w[1], 1);
                }
            }
            [r] => {
                for (w, &mult) in path.vertices.windows(2).zip(&gadget.patterns[r].multiplicities) {
                    if mult > 0 {
                        g.add(w[0], w[1], mult);
                    }
                }
            }
            _ => {
                return Err(Error::invariant(
                    "decode",
                    format!("gadget of path {} uses pattern edges {used:?}; normalize first", gadget.path),
                ))
            }
        }
    }
    if let Some(v) = validate_g2m(&g) {
        return Err(Error::invariant("decode", format!("decoded object is not a graphical 2-matching: {v:?}")));
    }
    let expected = &gg.p1 + &gg.p2 + &gg.c + &m.cost;
    let got = g.cost(inst);
    let p_all = &gg.p1 + &gg.p2;
    let ok = match gg.construction {
        Construction::CutPathGadgets => got == &gg.p1 + &gg.c + &m.cost,
        _ => got == expected,
    };
    if !ok {
        return Err(Error::invariant(
            "decode",
            format!(
                "G2M cost {} does not match the accounting (P = {}, C = {}, matching {})",
                rat::fmt_rat(&got),
                rat::fmt_rat(&p_all),
                rat::fmt_rat(&gg.c),
                rat::fmt_rat(&m.cost)
            ),
        ));
    }
    Ok(g)
}

/// The point with 1/9 on pattern edges and 4/9 elsewhere.
pub fn feasible_point_109(gg: &GadgetGraph) -> Result<FractionalMatchingPoint> {
    if gg.construction != Construction::AllPathGadgets {
        return Err(Error::precondition("the 1/9 point is defined on all-path gadget graphs"));
    }
    let values: Vec<Rat> = gg
        .provenance
        .iter()
        .map(|p| match p {
            Provenance::Pattern { .. } => rat::rat(1, 9),
            _ => rat::rat(4, 9),
        })
        .collect();
    let x = FractionalMatchingPoint { values };
    let p = &gg.p1 + &gg.p2;
    let want = p * rat::rat(1, 9) - &gg.c * rat::rat(4, 9);
    let got = x.cost(&gg.graph);
    if got != want {
        return Err(Error::invariant(
            "gadgets",
            format!("1/9 point costs {} instead of {}", rat::fmt_rat(&got), rat::fmt_rat(&want)),
        ));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::super::*;
    use super::*;
    use crate::f2m::decompose;
    use crate::generate;
    use crate::matching::{check_matching_polytope_point, min_cost_perfect_matching};
    use crate::rat::int;

    fn family(ell: usize) -> (MetricInstance, Component) {
        let (inst, x) = generate::worst_case_family(ell).unwrap();
        let d = decompose(&inst, &x).unwrap();
        (inst, d.components[0].clone())
    }

    fn edges_where(gg: &GadgetGraph, f: impl Fn(&Provenance) -> bool) -> Vec<usize> {
        (0..gg.provenance.len()).filter(|&id| f(&gg.provenance[id])).collect()
    }

    #[test]
    fn prism_with_all_paths_matched() {
        let (inst, comp) = family(1);
        let gg = build_contracted(&inst, &comp).unwrap();
        let m = PerfectMatching::from_edges(&gg.graph, edges_where(&gg, |p| matches!(p, Provenance::Path { .. })))
            .unwrap();
        let g = decode_g2m(&gg, &m, &comp, &inst).unwrap();
        assert_eq!(g.degrees()[..6], [4; 6]);
        assert_eq!(g.cost(&inst), int(12));
    }

    #[test]
    fn prism_with_mixed_matching() {
        let (inst, comp) = family(1);
        let gg = build_contracted(&inst, &comp).unwrap();
        // Triangle edge (1,2), triangle edge (4,5), path (0,3).
        let pick = |u: usize, v: usize| {
            (0..gg.graph.num_edges())
                .find(|&id| {
                    let e = gg.graph.edge(id);
                    (gg.origin[e.u], gg.origin[e.v]) == (u, v) || (gg.origin[e.v], gg.origin[e.u]) == (u, v)
                })
                .unwrap()
        };
        let m = PerfectMatching::from_edges(&gg.graph, vec![pick(1, 2), pick(4, 5), pick(0, 3)]).unwrap();
        let g = decode_g2m(&gg, &m, &comp, &inst).unwrap();
        assert_eq!(validate_g2m(&g), None);
    }

    /// Minimum-cost perfect matching of `gg` that avoids the `banned` edges.
    fn match_avoiding(gg: &GadgetGraph, banned: &[usize]) -> PerfectMatching {
        let mut sub = crate::graph::MultiGraph::new(gg.graph.num_vertices());
        let mut back = Vec::new();
        for (id, e) in gg.graph.edges().iter().enumerate() {
            if !banned.contains(&id) {
                sub.add_edge(e.u, e.v, e.cost.clone());
                back.push(id);
            }
        }
        let sm = min_cost_perfect_matching(&sub).unwrap();
        PerfectMatching::from_edges(&gg.graph, sm.edges.iter().map(|&k| back[k]).collect()).unwrap()
    }

    #[test]
    fn zero_pattern_gadget_decodes_to_the_path() {
        // An odd half-cycle cannot skip every gadget at once, but any single
        // gadget can be skipped.
        for ell in 1..=3 {
            let (inst, comp) = family(ell);
            let gg = build_all_path_gadgets(&inst, &comp).unwrap();
            for gadget in &gg.gadgets {
                let m = match_avoiding(&gg, &gadget.pattern_edges);
                let norm = normalize_matching(&gg, &m, NormalizeMode::ZeroOrOne).unwrap();
                assert!(gadget.pattern_edges.iter().all(|&id| !norm.contains(id)));
                let g = decode_g2m(&gg, &norm, &comp, &inst).unwrap();
                for w in comp.paths[gadget.path].vertices.windows(2) {
                    assert_eq!(g.get(w[0], w[1]), 1);
                }
            }
        }
    }

    #[test]
    fn three_patterns_collapse_to_one() {
        let (inst, x) = generate::dumbbell(4, 2).unwrap();
        let d = decompose(&inst, &x).unwrap();
        let comp = &d.components[0];
        let gg = build_cutpath_gadgets(&inst, comp).unwrap();
        let gadget = &gg.gadgets[0];
        let mut edges: Vec<usize> = gadget.pattern_edges.to_vec();
        let mut covered = vec![false; gg.graph.num_vertices()];
        for &id in &edges {
            covered[gg.graph.edge(id).u] = true;
            covered[gg.graph.edge(id).v] = true;
        }
        for (id, prov) in gg.provenance.iter().enumerate() {
            let e = gg.graph.edge(id);
            if !covered[e.u] && !covered[e.v] && matches!(prov, Provenance::Path { .. } | Provenance::Cycle { .. }) {
                covered[e.u] = true;
                covered[e.v] = true;
                edges.push(id);
            }
        }
        let m = PerfectMatching::from_edges(&gg.graph, edges).unwrap();
        let norm = normalize_matching(&gg, &m, NormalizeMode::ExactlyOne).unwrap();
        let kept: Vec<usize> = gadget.pattern_edges.iter().copied().filter(|&id| norm.contains(id)).collect();
        assert_eq!(kept.len(), 1);
        let offset = gadget.pattern_edges.iter().position(|&id| id == kept[0]).unwrap() as u8;
        assert_ne!(gadget.position(Side::Start, offset), 1);
        assert_ne!(gadget.position(Side::End, offset), 1);
        assert!(norm.cost <= m.cost);
        assert_eq!(normalize_matching(&gg, &norm, NormalizeMode::ExactlyOne).unwrap(), norm);
        decode_g2m(&gg, &norm, comp, &inst).unwrap();
    }

    #[test]
    fn two_patterns_drop_in_zero_or_one_mode() {
        let (inst, comp) = family(2);
        let gg = build_all_path_gadgets(&inst, &comp).unwrap();
        let gadget = &gg.gadgets[0];
        // ell = 2: offset 0 sits in the middle at both ends; pair it with the
        // pattern at position 0 on the start side.
        let other = (1..3u8).find(|&r| gadget.position(Side::Start, r) == 0).unwrap();
        let picks = [0u8, other];
        let mut edges: Vec<usize> = picks.iter().map(|&r| gadget.pattern_edges[r as usize]).collect();
        let mut covered = vec![false; gg.graph.num_vertices()];
        for &id in &edges {
            covered[gg.graph.edge(id).u] = true;
            covered[gg.graph.edge(id).v] = true;
        }
        // Complete greedily, then by brute force over what remains.
        let rest: Vec<usize> = (0..gg.graph.num_vertices()).filter(|&v| !covered[v]).collect();
        let mut sub = crate::graph::MultiGraph::new(rest.len());
        let mut back = Vec::new();
        for (id, e) in gg.graph.edges().iter().enumerate() {
            if gg.provenance[id] == (Provenance::Pattern { path: gadget.path, offset: 3 - other })
                || covered[e.u]
                || covered[e.v]
            {
                continue;
            }
            let (a, b) = (rest.binary_search(&e.u).unwrap(), rest.binary_search(&e.v).unwrap());
            sub.add_edge(a, b, e.cost.clone());
            back.push(id);
        }
        let sm = min_cost_perfect_matching(&sub).unwrap();
        edges.extend(sm.edges.iter().map(|&k| back[k]));
        let m = PerfectMatching::from_edges(&gg.graph, edges).unwrap();
        let norm = normalize_matching(&gg, &m, NormalizeMode::ZeroOrOne).unwrap();
        assert!(gadget.pattern_edges.iter().all(|&id| !norm.contains(id)));
        assert!(norm.cost <= m.cost);
        assert!(normalize_matching(&gg, &m, NormalizeMode::ExactlyOne).is_err());
        decode_g2m(&gg, &norm, &comp, &inst).unwrap();
    }

    #[test]
    fn ninth_point_is_feasible_and_bounds_the_matching() {
        for ell in 1..=3 {
            let (inst, comp) = family(ell);
            let gg = build_all_path_gadgets(&inst, &comp).unwrap();
            let x = feasible_point_109(&gg).unwrap();
            assert_eq!(check_matching_polytope_point(&gg.graph, &x).unwrap(), None);
            let m = min_cost_perfect_matching(&gg.graph).unwrap();
            assert!(m.cost <= x.cost(&gg.graph));
        }
        let (inst, comp) = family(1);
        let gg = build_contracted(&inst, &comp).unwrap();
        assert!(feasible_point_109(&gg).is_err());
    }
}
