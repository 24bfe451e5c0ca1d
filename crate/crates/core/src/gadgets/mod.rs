//! Auxiliary cubic graphs for a fractional component, and the translation of
//! their perfect matchings back into graphical 2-matchings.
//!
//! Every construction keeps the half-cycles, with each cycle edge costing the
//! negation of its original cost. Paths are handled in one of two ways:
//!
//! * contracted to a single edge costing the whole path, or
//! * replaced by a *gadget*: each endpoint becomes a chain of three vertices
//!   joined by two cost-0 edges, and three *pattern edges* (one per
//!   [`Pattern`]) run between the chains.
//!
//! The cycle edges of a gadget endpoint attach to chain positions 0 and 2,
//! the one toward the smaller neighbour at position 0. At each end, the
//! middle position takes the pattern whose group at that end has three
//! vertices; the other two take positions 0 and 2 in offset order.

mod decode;
mod pattern;

use serde::{Deserialize, Serialize};

use crate::f2m::{Component, ComponentKind};
use crate::graph::MultiGraph;
use crate::instance::MetricInstance;
use crate::rat::{self, Rat};
use crate::{Error, Result};

pub use decode::{decode_g2m, feasible_point_109, normalize_matching, NormalizeMode};
pub use pattern::{end_middle, make_patterns, start_middle, Pattern};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Construction {
    /// Every path contracted; requires no cut path.
    Contracted,
    /// Gadgets for cut paths, pattern edges costing `cost_in_g`.
    CutPathGadgets,
    /// Gadgets for every path, pattern edges costing `signed_cost`; requires
    /// no cut path.
    AllPathGadgets,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Start,
    End,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    /// A half-cycle edge; `edge` is the instance edge index.
    Cycle { edge: usize },
    /// A contracted path; `path` indexes the component's paths.
    Path { path: usize },
    Pattern { path: usize, offset: u8 },
    /// Chain link `link` (0 joins positions 0-1, 1 joins 1-2).
    Zero { path: usize, side: Side, link: u8 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gadget {
    pub path: usize,
    pub patterns: [Pattern; 3],
    pub start_chain: [usize; 3],
    pub end_chain: [usize; 3],
    /// Edge id per pattern offset.
    pub pattern_edges: [usize; 3],
    /// Edge ids of the chain links, start side then end side.
    pub zero_edges: [[usize; 2]; 2],
    pub start_middle: u8,
    pub end_middle: u8,
}

impl Gadget {
    /// Chain position of the pattern edge with `offset` on `side`.
    pub fn position(&self, side: Side, offset: u8) -> usize {
        let middle = match side {
            Side::Start => self.start_middle,
            Side::End => self.end_middle,
        };
        chain_position(middle, offset)
    }
}

fn chain_position(middle: u8, offset: u8) -> usize {
    if offset == middle {
        return 1;
    }
    let others: Vec<u8> = (0..3).filter(|&r| r != middle).collect();
    if offset == others[0] {
        0
    } else {
        2
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetGraph {
    pub construction: Construction,
    pub graph: MultiGraph,
    pub provenance: Vec<Provenance>,
    pub gadgets: Vec<Gadget>,
    /// Gadget index per component path, if the path has one.
    pub gadget_of_path: Vec<Option<usize>>,
    /// Original vertex per gadget-graph vertex.
    pub origin: Vec<usize>,
    /// Cost of contracted paths.
    #[serde(with = "rat::pair")]
    pub p1: Rat,
    /// Cost of paths replaced by gadgets.
    #[serde(with = "rat::pair")]
    pub p2: Rat,
    /// Cost of the cycle edges.
    #[serde(with = "rat::pair")]
    pub c: Rat,
}

impl GadgetGraph {
    /// The total edge cost the construction must produce.
    pub fn expected_total_cost(&self) -> Rat {
        match self.construction {
            Construction::Contracted | Construction::AllPathGadgets => &self.p1 + &self.p2 - &self.c,
            Construction::CutPathGadgets => &self.p1 + &self.p2 * rat::int(4) - &self.c,
        }
    }

    pub fn pattern_edge_ids(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = self.gadgets.iter().flat_map(|g| g.pattern_edges).collect();
        ids.sort_unstable();
        ids
    }

    pub fn to_dot(&self) -> String {
        self.graph.to_dot(|id| match self.provenance[id] {
            Provenance::Cycle { edge } => format!("cycle {edge}"),
            Provenance::Path { path } => format!("path {path}"),
            Provenance::Pattern { path, offset } => format!("pattern {path}/{offset}"),
            Provenance::Zero { path, side, link } => format!("zero {path} {side:?} {link}"),
        })
    }
}

pub fn build_contracted(inst: &MetricInstance, comp: &Component) -> Result<GadgetGraph> {
    if comp.has_cut_path() {
        return Err(Error::precondition("component has a cut path"));
    }
    build(inst, comp, Construction::Contracted)
}

pub fn build_cutpath_gadgets(inst: &MetricInstance, comp: &Component) -> Result<GadgetGraph> {
    build(inst, comp, Construction::CutPathGadgets)
}

pub fn build_all_path_gadgets(inst: &MetricInstance, comp: &Component) -> Result<GadgetGraph> {
    if comp.has_cut_path() {
        return Err(Error::precondition("component has a cut path"));
    }
    build(inst, comp, Construction::AllPathGadgets)
}

fn build(inst: &MetricInstance, comp: &Component, construction: Construction) -> Result<GadgetGraph> {
    if comp.kind != ComponentKind::Fractional {
        return Err(Error::precondition("gadget graphs are built for fractional components"));
    }
    if comp.paths.is_empty() {
        return Err(Error::invariant("gadgets", "fractional component without paths"));
    }
    let is_gadget: Vec<bool> = comp
        .paths
        .iter()
        .map(|p| match construction {
            Construction::Contracted => false,
            Construction::CutPathGadgets => p.is_cut,
            Construction::AllPathGadgets => true,
        })
        .collect();

    let n = inst.n();
    let mut chain_end = vec![false; n];
    for (p, path) in comp.paths.iter().enumerate() {
        if is_gadget[p] {
            chain_end[path.start()] = true;
            chain_end[path.end()] = true;
        }
    }
    let mut cycle_vertices: Vec<usize> = comp.cycles.iter().flatten().copied().collect();
    cycle_vertices.sort_unstable();

    // First gadget-graph vertex per original cycle vertex.
    let mut first = vec![usize::MAX; n];
    let mut origin = Vec::new();
    for &v in &cycle_vertices {
        first[v] = origin.len();
        let copies = if chain_end[v] { 3 } else { 1 };
        origin.extend(std::iter::repeat_n(v, copies));
    }
    let mut graph = MultiGraph::new(origin.len());
    let mut provenance = Vec::new();

    let mut neighbours = vec![Vec::new(); n];
    for cycle in &comp.cycles {
        let k = cycle.len();
        for i in 0..k {
            neighbours[cycle[i]].push(cycle[(i + 1) % k]);
            neighbours[cycle[i]].push(cycle[(i + k - 1) % k]);
        }
    }
    for list in &mut neighbours {
        list.sort_unstable();
    }
    let attach = |v: usize, toward: usize| -> usize {
        if chain_end[v] {
            let rank = neighbours[v].iter().position(|&w| w == toward).expect("cycle neighbour");
            first[v] + 2 * rank
        } else {
            first[v]
        }
    };

    let mut c = rat::zero();
    for &e in &comp.cycle_edges {
        let (i, j) = inst.endpoints(e);
        let cost = inst.edge_cost(e).clone();
        c += &cost;
        graph.add_edge(attach(i, j), attach(j, i), -cost);
        provenance.push(Provenance::Cycle { edge: e });
    }

    let mut p1 = rat::zero();
    let mut p2 = rat::zero();
    let mut gadgets = Vec::new();
    let mut gadget_of_path = vec![None; comp.paths.len()];
    for (p, path) in comp.paths.iter().enumerate() {
        if !is_gadget[p] {
            p1 += &path.cost;
            graph.add_edge(first[path.start()], first[path.end()], path.cost.clone());
            provenance.push(Provenance::Path { path: p });
            continue;
        }
        p2 += &path.cost;
        let costs: Vec<Rat> = path.edges.iter().map(|&e| inst.edge_cost(e).clone()).collect();
        let patterns = make_patterns(path.len(), &costs)?;
        let chain = |v: usize| [first[v], first[v] + 1, first[v] + 2];
        let start_chain = chain(path.start());
        let end_chain = chain(path.end());
        let mut zero_edges = [[0; 2]; 2];
        for (s, (side, ch)) in [(Side::Start, start_chain), (Side::End, end_chain)].into_iter().enumerate() {
            for link in 0..2u8 {
                let l = link as usize;
                zero_edges[s][l] = graph.add_edge(ch[l], ch[l + 1], rat::zero());
                provenance.push(Provenance::Zero { path: p, side, link });
            }
        }
        let mut gadget = Gadget {
            path: p,
            patterns,
            start_chain,
            end_chain,
            pattern_edges: [0; 3],
            zero_edges,
            start_middle: start_middle(path.len()),
            end_middle: end_middle(path.len()),
        };
        for offset in 0..3u8 {
            let pat = &gadget.patterns[offset as usize];
            let cost = match construction {
                Construction::AllPathGadgets => pat.signed_cost.clone(),
                _ => pat.cost_in_g.clone(),
            };
            let a = start_chain[gadget.position(Side::Start, offset)];
            let b = end_chain[gadget.position(Side::End, offset)];
            gadget.pattern_edges[offset as usize] = graph.add_edge(a, b, cost);
            provenance.push(Provenance::Pattern { path: p, offset });
        }
        gadget_of_path[p] = Some(gadgets.len());
        gadgets.push(gadget);
    }

    let gg = GadgetGraph { construction, graph, provenance, gadgets, gadget_of_path, origin, p1, p2, c };
    if let Some(v) = gg.graph.non_cubic_vertex() {
        return Err(Error::invariant("gadgets", format!("vertex {v} of G' is not cubic")));
    }
    if !gg.graph.is_two_edge_connected() {
        return Err(Error::invariant("gadgets", format!("G' has bridges {:?}", gg.graph.bridges())));
    }
    let total = gg.graph.total_cost();
    if total != gg.expected_total_cost() {
        return Err(Error::invariant(
            "gadgets",
            format!("total cost {} differs from the accounting formula", rat::fmt_rat(&total)),
        ));
    }
    Ok(gg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::f2m::decompose;
    use crate::generate;
    use crate::rat::int;

    fn family_component(ell: usize) -> (MetricInstance, Component) {
        let (inst, x) = generate::worst_case_family(ell).unwrap();
        let d = decompose(&inst, &x).unwrap();
        (inst, d.components[0].clone())
    }

    #[test]
    fn contracted_family_is_a_prism() {
        let (inst, comp) = family_component(1);
        let gg = build_contracted(&inst, &comp).unwrap();
        assert_eq!(gg.graph.num_vertices(), 6);
        assert_eq!(gg.graph.num_edges(), 9);
        let mut costs: Vec<Rat> = gg.graph.edges().iter().map(|e| e.cost.clone()).collect();
        costs.sort();
        assert_eq!(costs, [vec![int(-1); 6], vec![int(1); 3]].concat());
        // Prism: the cost-1 edges form a perfect matching between triangles.
        for e in gg.graph.edges().iter().filter(|e| e.cost == int(1)) {
            assert!(e.u < 3 && e.v >= 3);
        }
    }

    #[test]
    fn cutpath_gadgets_without_cut_paths_equal_contraction() {
        let (inst, comp) = family_component(2);
        assert_eq!(
            build_cutpath_gadgets(&inst, &comp).unwrap().graph,
            build_contracted(&inst, &comp).unwrap().graph
        );
    }

    #[test]
    fn all_path_gadgets_on_family() {
        let (inst, comp) = family_component(1);
        let gg = build_all_path_gadgets(&inst, &comp).unwrap();
        assert_eq!(gg.gadgets.len(), 3);
        assert_eq!(gg.graph.num_vertices(), 18);
        let pattern_total = rat::sum(gg.pattern_edge_ids().iter().map(|&id| &gg.graph.edge(id).cost));
        assert_eq!(pattern_total, int(3));

        let (inst, comp) = family_component(3);
        let gg = build_all_path_gadgets(&inst, &comp).unwrap();
        for g in &gg.gadgets {
            let sum = rat::sum(g.pattern_edges.iter().map(|&id| &gg.graph.edge(id).cost));
            assert_eq!(sum, int(3));
        }
    }

    #[test]
    fn cut_path_gadget_shape() {
        for ell in 1..=9 {
            let (inst, x) = generate::dumbbell(ell, 2).unwrap();
            let d = decompose(&inst, &x).unwrap();
            let comp = &d.components[0];
            let gg = build_cutpath_gadgets(&inst, comp).unwrap();
            assert_eq!(gg.gadgets.len(), 1);
            let zero = gg.provenance.iter().filter(|p| matches!(p, Provenance::Zero { .. })).count();
            assert_eq!(zero, 4);
            assert_eq!(gg.graph.num_vertices(), 6 + 4);
            assert!(matches!(build_contracted(&inst, comp), Err(Error::Precondition(_))));
            assert!(matches!(build_all_path_gadgets(&inst, comp), Err(Error::Precondition(_))));
        }
    }

    #[test]
    fn positions_are_a_permutation() {
        for middle in 0..3 {
            let mut pos: Vec<usize> = (0..3).map(|r| chain_position(middle, r)).collect();
            assert_eq!(pos[middle as usize], 1);
            pos.sort_unstable();
            assert_eq!(pos, vec![0, 1, 2]);
        }
    }
}
