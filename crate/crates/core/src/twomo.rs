//! 2-matchings with optional vertices (2MO).
//!
//! Mandatory vertices take degree exactly 2, optional ones degree 0 or 2.
//! A metric instance on `n` vertices splits into a 2MO instance on `2n`
//! vertices whose integral solutions are graphical 2-matchings with up to
//! three copies per edge. Fractional points are checked against the 2MO
//! polytope by enumeration, and integral optima come from a reduction to
//! perfect matching.

use serde::{Deserialize, Serialize};

use crate::g2m::{shortcut, validate_g2m, GraphicalTwoMatching, TwoMatching};
use crate::graph::MultiGraph;
use crate::instance::MetricInstance;
use crate::matching::{min_cost_perfect_matching, FractionalMatchingPoint, PerfectMatching};
use crate::rat::{self, Rat};
use crate::subtour::{solve_subtour_lp, SubtourSolution};
use crate::{Error, Result};

/// Largest vertex count accepted by [`check_2mo_polytope`].
pub const MAX_2MO_POLYTOPE_VERTICES: usize = 16;

/// Where a split-graph edge came from.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitOrigin {
    /// Vertex count of the metric instance; vertex `v` stands for `v % n`.
    pub n: usize,
    /// Instance edge index per 2MO edge.
    pub edge: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoMOInstance {
    pub optional: Vec<bool>,
    pub edges: Vec<(usize, usize)>,
    #[serde(with = "rat::pair::vec")]
    pub costs: Vec<Rat>,
    pub origin: Option<SplitOrigin>,
}

impl TwoMOInstance {
    pub fn new(optional: Vec<bool>, edges: Vec<(usize, usize)>, costs: Vec<Rat>) -> Result<Self> {
        let n = optional.len();
        if edges.len() != costs.len() {
            return Err(Error::Validation(format!("{} edges but {} costs", edges.len(), costs.len())));
        }
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= n || v >= n || u == v) {
            return Err(Error::Validation(format!("bad edge ({u}, {v}) on {n} vertices")));
        }
        Ok(TwoMOInstance { optional, edges, costs, origin: None })
    }

    pub fn num_vertices(&self) -> usize {
        self.optional.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn is_mandatory(&self, v: usize) -> bool {
        !self.optional[v]
    }

    pub fn mandatory(&self) -> Vec<usize> {
        (0..self.num_vertices()).filter(|&v| !self.optional[v]).collect()
    }

    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.num_vertices()];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            inc[u].push(e);
            inc[v].push(e);
        }
        inc
    }
}

/// Per-edge values of a fractional 2MO point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoMOPoint {
    #[serde(with = "rat::pair::vec")]
    pub values: Vec<Rat>,
}

impl TwoMOPoint {
    pub fn cost(&self, inst: &TwoMOInstance) -> Rat {
        self.values.iter().zip(&inst.costs).fold(rat::zero(), |acc, (y, c)| acc + y * c)
    }
}

/// Chosen 2MO edge ids, sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoMOSolution {
    pub edges: Vec<usize>,
}

impl TwoMOSolution {
    pub fn cost(&self, inst: &TwoMOInstance) -> Rat {
        rat::sum(self.edges.iter().map(|&e| &inst.costs[e]))
    }

    pub fn validate(&self, inst: &TwoMOInstance) -> Option<String> {
        if self.edges.windows(2).any(|w| w[0] >= w[1]) {
            return Some("edge ids not strictly increasing".into());
        }
        if let Some(&e) = self.edges.iter().find(|&&e| e >= inst.num_edges()) {
            return Some(format!("edge {e} out of range"));
        }
        let mut deg = vec![0usize; inst.num_vertices()];
        for &e in &self.edges {
            let (u, v) = inst.edges[e];
            deg[u] += 1;
            deg[v] += 1;
        }
        (0..inst.num_vertices()).find_map(|v| match (inst.optional[v], deg[v]) {
            (_, 2) | (true, 0) => None,
            (opt, d) => Some(format!("{} vertex {v} has degree {d}", if opt { "optional" } else { "mandatory" })),
        })
    }

    pub fn indicator(&self, inst: &TwoMOInstance) -> TwoMOPoint {
        let mut values = vec![rat::zero(); inst.num_edges()];
        for &e in &self.edges {
            values[e] = rat::one();
        }
        TwoMOPoint { values }
    }
}

/// Vertex `i` becomes mandatory `i` and optional `n + i`; instance edge
/// `e = (i, j)` becomes 2MO edges `3e, 3e + 1, 3e + 2` joining
/// `(i, j)`, `(i, n + j)` and `(n + i, j)`.
pub fn split_graph(inst: &MetricInstance) -> TwoMOInstance {
    let n = inst.n();
    let mut edges = Vec::with_capacity(3 * inst.num_edges());
    let mut costs = Vec::with_capacity(3 * inst.num_edges());
    let mut origin = Vec::with_capacity(3 * inst.num_edges());
    for (e, &(i, j)) in inst.edges().iter().enumerate() {
        for pair in [(i, j), (i, n + j), (n + i, j)] {
            edges.push(pair);
            costs.push(inst.edge_cost(e).clone());
            origin.push(e);
        }
    }
    let optional = (0..2 * n).map(|v| v >= n).collect();
    debug_assert!(edges.iter().all(|&(u, v)| u < n || v < n));
    TwoMOInstance { optional, edges, costs, origin: Some(SplitOrigin { n, edge: origin }) }
}

/// Spreads `x` over the split graph: `(1 - alpha) x` on the mandatory copy
/// and `alpha x` on each mixed copy.
pub fn map_subtour_to_2mo(x: &[Rat], alpha: &Rat) -> TwoMOPoint {
    let keep = rat::one() - alpha;
    let values = x
        .iter()
        .flat_map(|v| [&keep * v, alpha * v, alpha * v])
        .collect();
    TwoMOPoint { values }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TwoMOViolation {
    Bound {
        edge: usize,
        #[serde(with = "rat::text")]
        value: Rat,
    },
    MandatoryDegree {
        vertex: usize,
        #[serde(with = "rat::text")]
        value: Rat,
    },
    OptionalDegree {
        vertex: usize,
        #[serde(with = "rat::text")]
        value: Rat,
    },
    /// `y(δ(S) \ F) + Σ_F (1 - y) < 1` for an odd matching `F ⊆ δ(S)`.
    OddMatching {
        set: Vec<usize>,
        matching: Vec<usize>,
        #[serde(with = "rat::text")]
        value: Rat,
    },
}

fn check_local(inst: &TwoMOInstance, y: &TwoMOPoint) -> Result<Option<TwoMOViolation>> {
    let n = inst.num_vertices();
    if y.values.len() != inst.num_edges() {
        return Err(Error::precondition(format!(
            "point has {} values for {} edges",
            y.values.len(),
            inst.num_edges()
        )));
    }
    if n > MAX_2MO_POLYTOPE_VERTICES {
        return Err(Error::precondition(format!(
            "2MO enumeration takes at most {MAX_2MO_POLYTOPE_VERTICES} vertices, got {n}"
        )));
    }
    if let Some(e) = y.values.iter().position(|v| *v < rat::zero() || *v > rat::one()) {
        return Ok(Some(TwoMOViolation::Bound { edge: e, value: y.values[e].clone() }));
    }
    let mut deg = vec![rat::zero(); n];
    for (&(u, v), val) in inst.edges.iter().zip(&y.values) {
        deg[u] += val;
        deg[v] += val;
    }
    let two = rat::int(2);
    for v in 0..n {
        if inst.optional[v] && deg[v] > two {
            return Ok(Some(TwoMOViolation::OptionalDegree { vertex: v, value: deg[v].clone() }));
        }
        if !inst.optional[v] && deg[v] != two {
            return Ok(Some(TwoMOViolation::MandatoryDegree { vertex: v, value: deg[v].clone() }));
        }
    }
    Ok(None)
}

fn set_of(mask: u32, n: usize) -> Vec<usize> {
    (0..n).filter(|&v| mask >> v & 1 == 1).collect()
}

fn cut_edges(inst: &TwoMOInstance, mask: u32) -> Vec<usize> {
    (0..inst.num_edges())
        .filter(|&e| {
            let (u, v) = inst.edges[e];
            (mask >> u & 1) != (mask >> v & 1)
        })
        .collect()
}

/// Enumerates every matching inside `pool`, calling `visit(matching, used)`.
fn for_each_matching(inst: &TwoMOInstance, pool: &[usize], visit: &mut dyn FnMut(&[usize], u32)) {
    fn go(
        inst: &TwoMOInstance,
        pool: &[usize],
        k: usize,
        used: u32,
        chosen: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize], u32),
    ) {
        if k == pool.len() {
            visit(chosen, used);
            return;
        }
        go(inst, pool, k + 1, used, chosen, visit);
        let (u, v) = inst.edges[pool[k]];
        let bits = (1u32 << u) | (1u32 << v);
        if used & bits == 0 {
            chosen.push(pool[k]);
            go(inst, pool, k + 1, used | bits, chosen, visit);
            chosen.pop();
        }
    }
    go(inst, pool, 0, 0, &mut Vec::new(), visit);
}

/// Checks bounds, degrees, then the odd-matching inequality for every
/// `S ∋ 0` in mask order.
///
/// For each `S` the smallest left-hand side is found exactly: an edge in `F`
/// changes the sum by `1 - 2y(e)`, and an optimal `F` never holds two edges
/// with `1 - 2y(e) >= 0`, since dropping both keeps `|F|` odd. So `F` is a
/// matching of edges with `y > 1/2`, plus at most one other edge.
pub fn check_2mo_polytope(inst: &TwoMOInstance, y: &TwoMOPoint) -> Result<Option<TwoMOViolation>> {
    Ok(match check_local(inst, y)? {
        Some(v) => Some(v),
        None => odd_matching_violation(inst, y),
    })
}

fn odd_matching_violation(inst: &TwoMOInstance, y: &TwoMOPoint) -> Option<TwoMOViolation> {
    let n = inst.num_vertices();
    if n == 0 {
        return None;
    }
    let half = rat::half();
    let one = rat::one();
    let gain: Vec<Rat> = y.values.iter().map(|v| &one - v * rat::int(2)).collect();
    for mask in (0u32..1 << (n - 1)).map(|m| m << 1 | 1) {
        let cut = cut_edges(inst, mask);
        if cut.is_empty() {
            continue;
        }
        let base = rat::sum(cut.iter().map(|&e| &y.values[e]));
        let (heavy, light): (Vec<usize>, Vec<usize>) = cut.iter().partition(|&&e| y.values[e] > half);
        let floor = heavy.iter().fold(base.clone(), |acc, &e| acc + &gain[e]);
        if floor >= one {
            continue;
        }
        let mut best: Option<(Rat, Vec<usize>)> = None;
        for_each_matching(inst, &heavy, &mut |m, used| {
            let sum = rat::sum(m.iter().map(|&e| &gain[e]));
            let candidate = if m.len() % 2 == 1 {
                Some((sum, m.to_vec()))
            } else {
                light
                    .iter()
                    .filter(|&&e| {
                        let (u, v) = inst.edges[e];
                        used & ((1 << u) | (1 << v)) == 0
                    })
                    .min_by(|&&a, &&b| gain[a].cmp(&gain[b]))
                    .map(|&e| {
                        let mut f = m.to_vec();
                        f.push(e);
                        f.sort_unstable();
                        (sum + &gain[e], f)
                    })
            };
            if let Some((value, f)) = candidate {
                if best.as_ref().is_none_or(|(b, _)| value < *b) {
                    best = Some((value, f));
                }
            }
        });
        if let Some((delta, f)) = best {
            let value = &base + delta;
            if value < one {
                return Some(TwoMOViolation::OddMatching { set: set_of(mask, n), matching: f, value });
            }
        }
    }
    None
}

/// Same check, trying every odd matching in every cut. For testing.
pub fn check_2mo_polytope_exhaustive(inst: &TwoMOInstance, y: &TwoMOPoint) -> Result<Option<TwoMOViolation>> {
    Ok(match check_local(inst, y)? {
        Some(v) => Some(v),
        None => odd_matching_violation_exhaustive(inst, y),
    })
}

fn odd_matching_violation_exhaustive(inst: &TwoMOInstance, y: &TwoMOPoint) -> Option<TwoMOViolation> {
    let n = inst.num_vertices();
    if n == 0 {
        return None;
    }
    let one = rat::one();
    for mask in (0u32..1 << (n - 1)).map(|m| m << 1 | 1) {
        let cut = cut_edges(inst, mask);
        let base = rat::sum(cut.iter().map(|&e| &y.values[e]));
        let mut found = None;
        for_each_matching(inst, &cut, &mut |f, _| {
            if found.is_some() || f.len() % 2 == 0 {
                return;
            }
            let value = f.iter().fold(base.clone(), |acc, &e| acc + &one - &y.values[e] * rat::int(2));
            if value < one {
                found = Some(TwoMOViolation::OddMatching { set: set_of(mask, n), matching: f.to_vec(), value });
            }
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

/// Role of a matching-graph edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReducedEdge {
    /// Joins copy `copy` (0 or 1) of `vertex` to the edge node of `edge` at that vertex.
    Attach { edge: usize, vertex: usize, copy: u8 },
    /// Joins the two edge nodes of `edge`; in a matching it means `edge` is unused.
    Link { edge: usize },
    /// Joins the two copies of an optional vertex; in a matching it means the vertex is skipped.
    Skip { vertex: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedMatching {
    pub graph: MultiGraph,
    pub provenance: Vec<ReducedEdge>,
    /// Per 2MO edge `(u, v)`: the ids of `Attach(u,0)`, `Attach(u,1)`, `Link`, `Attach(v,0)`, `Attach(v,1)`.
    pub edge_ids: Vec<[usize; 5]>,
    pub skip_ids: Vec<Option<usize>>,
}

/// Vertex `i` gets copies `2i` and `2i + 1`; edge `k = (u, v)` gets nodes
/// `2N + 2k` (at `u`) and `2N + 2k + 1` (at `v`). Attach edges cost half the
/// 2MO edge's cost, so a perfect matching costs as much as the 2MO solution
/// it encodes.
pub fn reduce_2mo_to_matching(inst: &TwoMOInstance) -> ReducedMatching {
    let n = inst.num_vertices();
    let mut graph = MultiGraph::new(2 * n + 2 * inst.num_edges());
    let mut provenance = Vec::new();
    let mut edge_ids = Vec::with_capacity(inst.num_edges());
    for (k, &(u, v)) in inst.edges.iter().enumerate() {
        let half = &inst.costs[k] * rat::half();
        let (pu, pv) = (2 * n + 2 * k, 2 * n + 2 * k + 1);
        let mut ids = [0; 5];
        ids[0] = graph.add_edge(2 * u, pu, half.clone());
        ids[1] = graph.add_edge(2 * u + 1, pu, half.clone());
        ids[2] = graph.add_edge(pu, pv, rat::zero());
        ids[3] = graph.add_edge(2 * v, pv, half.clone());
        ids[4] = graph.add_edge(2 * v + 1, pv, half);
        provenance.extend([
            ReducedEdge::Attach { edge: k, vertex: u, copy: 0 },
            ReducedEdge::Attach { edge: k, vertex: u, copy: 1 },
            ReducedEdge::Link { edge: k },
            ReducedEdge::Attach { edge: k, vertex: v, copy: 0 },
            ReducedEdge::Attach { edge: k, vertex: v, copy: 1 },
        ]);
        edge_ids.push(ids);
    }
    let skip_ids = (0..n)
        .map(|i| {
            inst.optional[i].then(|| {
                provenance.push(ReducedEdge::Skip { vertex: i });
                graph.add_edge(2 * i, 2 * i + 1, rat::zero())
            })
        })
        .collect();
    ReducedMatching { graph, provenance, edge_ids, skip_ids }
}

/// Half of `y` on each attach edge, `1 - y` on links, and the unused degree
/// share on skips.
pub fn map_point_to_matching_polytope(
    red: &ReducedMatching,
    inst: &TwoMOInstance,
    y: &TwoMOPoint,
) -> Result<FractionalMatchingPoint> {
    if y.values.len() != inst.num_edges() {
        return Err(Error::precondition("one value per 2MO edge expected"));
    }
    let mut values = vec![rat::zero(); red.graph.num_edges()];
    let mut deg = vec![rat::zero(); inst.num_vertices()];
    for (k, ids) in red.edge_ids.iter().enumerate() {
        let yk = &y.values[k];
        let half = yk * rat::half();
        for &a in &[ids[0], ids[1], ids[3], ids[4]] {
            values[a] = half.clone();
        }
        values[ids[2]] = rat::one() - yk;
        let (u, v) = inst.edges[k];
        deg[u] += yk;
        deg[v] += yk;
    }
    for (i, id) in red.skip_ids.iter().enumerate() {
        if let Some(id) = id {
            values[*id] = rat::one() - &deg[i] * rat::half();
        }
    }
    Ok(FractionalMatchingPoint { values })
}

/// The 2MO solution made of every edge whose link is unmatched.
pub fn decode_matching_to_2mo(red: &ReducedMatching, inst: &TwoMOInstance, m: &PerfectMatching) -> Result<TwoMOSolution> {
    let edges: Vec<usize> = (0..inst.num_edges()).filter(|&k| !m.contains(red.edge_ids[k][2])).collect();
    let sol = TwoMOSolution { edges };
    if let Some(msg) = sol.validate(inst) {
        return Err(Error::invariant("twomo-decode", msg));
    }
    if sol.cost(inst) != m.cost {
        return Err(Error::invariant(
            "twomo-decode",
            format!("2MO cost {} differs from matching cost {}", sol.cost(inst), m.cost),
        ));
    }
    Ok(sol)
}

/// The perfect matching encoding a valid 2MO solution: at each vertex the
/// lower-numbered solution edge takes copy 0, or copy 1 when `swap` is set.
/// The matching-polytope image of the solution is the average of the two.
pub fn indicator_matching(
    red: &ReducedMatching,
    inst: &TwoMOInstance,
    sol: &TwoMOSolution,
    swap: bool,
) -> Result<PerfectMatching> {
    if let Some(msg) = sol.validate(inst) {
        return Err(Error::precondition(format!("invalid 2MO solution: {msg}")));
    }
    let mut used = vec![0u8; inst.num_vertices()];
    let mut ids = Vec::new();
    let mut chosen = vec![false; inst.num_edges()];
    for &k in &sol.edges {
        chosen[k] = true;
        let (u, v) = inst.edges[k];
        let copy = |c: u8| (c ^ swap as u8) as usize;
        ids.push(red.edge_ids[k][copy(used[u])]);
        ids.push(red.edge_ids[k][3 + copy(used[v])]);
        used[u] += 1;
        used[v] += 1;
    }
    for k in (0..inst.num_edges()).filter(|&k| !chosen[k]) {
        ids.push(red.edge_ids[k][2]);
    }
    for (i, id) in red.skip_ids.iter().enumerate() {
        if let (Some(id), 0) = (id, used[i]) {
            ids.push(*id);
        }
    }
    PerfectMatching::from_edges(&red.graph, ids)
}

/// Minimum-cost 2MO solution via the matching reduction.
pub fn min_cost_2mo(inst: &TwoMOInstance) -> Result<TwoMOSolution> {
    let red = reduce_2mo_to_matching(inst);
    let m = min_cost_perfect_matching(&red.graph)?;
    decode_matching_to_2mo(&red, inst, &m)
}

/// Every valid 2MO solution, by subset enumeration. For testing.
pub fn enumerate_2mo_solutions(inst: &TwoMOInstance) -> Result<Vec<TwoMOSolution>> {
    let m = inst.num_edges();
    if m > 24 {
        return Err(Error::precondition(format!("2MO enumeration takes at most 24 edges, got {m}")));
    }
    Ok((0u32..1 << m)
        .map(|mask| TwoMOSolution { edges: (0..m).filter(|&e| mask >> e & 1 == 1).collect() })
        .filter(|s| s.validate(inst).is_none())
        .collect())
}

/// Sums the copies of each instance edge and replaces a triple by a single
/// copy.
pub fn twomo_to_g2m(inst: &TwoMOInstance, sol: &TwoMOSolution) -> Result<GraphicalTwoMatching> {
    let origin = inst
        .origin
        .as_ref()
        .ok_or_else(|| Error::precondition("2MO instance is not a split graph"))?;
    let n = origin.n;
    let mut g = GraphicalTwoMatching::empty(n, (0..n).collect());
    for &k in &sol.edges {
        let (u, v) = inst.edges[k];
        g.add(u % n, v % n, 1);
    }
    for m in g.multiplicity.iter_mut() {
        if *m == 3 {
            *m = 1;
        }
    }
    if let Some(v) = validate_g2m(&g) {
        return Err(Error::invariant("twomo-to-g2m", format!("{v:?}")));
    }
    Ok(g)
}

/// The all-mandatory 2MO instance on the complete graph: its solutions are
/// exactly the 2-matchings.
pub fn two_matching_instance(inst: &MetricInstance) -> TwoMOInstance {
    TwoMOInstance {
        optional: vec![false; inst.n()],
        edges: inst.edges().to_vec(),
        costs: inst.costs().to_vec(),
        origin: None,
    }
}

/// Cycles of a set of complete-graph edges in which every vertex has degree 2.
/// Each cycle starts at its smallest vertex and heads to its smaller neighbour.
fn cycles_of(n: usize, edges: &[(usize, usize)]) -> Result<Vec<Vec<usize>>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    if let Some(v) = (0..n).find(|&v| adj[v].len() != 2) {
        return Err(Error::invariant("two-matching", format!("vertex {v} has degree {}", adj[v].len())));
    }
    let mut seen = vec![false; n];
    let mut cycles = Vec::new();
    for s in 0..n {
        if seen[s] {
            continue;
        }
        let mut cycle = vec![s];
        seen[s] = true;
        let mut prev = s;
        let mut cur = *adj[s].iter().min().expect("degree 2");
        while cur != s {
            seen[cur] = true;
            cycle.push(cur);
            let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
            prev = cur;
            cur = next;
        }
        cycles.push(cycle);
    }
    Ok(cycles)
}

/// Minimum-cost 2-matching through the matching reduction.
pub fn optimal_two_matching(inst: &MetricInstance) -> Result<TwoMatching> {
    let tmo = two_matching_instance(inst);
    let sol = min_cost_2mo(&tmo)?;
    let edges: Vec<(usize, usize)> = sol.edges.iter().map(|&k| tmo.edges[k]).collect();
    let tm = TwoMatching { n: inst.n(), cycles: cycles_of(inst.n(), &edges)? };
    if let Some(msg) = tm.validate() {
        return Err(Error::invariant("two-matching", msg));
    }
    Ok(tm)
}

/// Minimum 2-matching cost by dynamic programming over vertex subsets:
/// cheapest Hamiltonian cycle per subset, then the cheapest partition into
/// subsets of size at least three. For testing; `n <= 12`.
pub fn optimal_two_matching_cost_dp(inst: &MetricInstance) -> Result<Rat> {
    let n = inst.n();
    if !(3..=12).contains(&n) {
        return Err(Error::precondition(format!("subset DP needs 3 <= n <= 12, got {n}")));
    }
    let full = 1usize << n;
    // path[mask][v]: cheapest path from the lowest vertex of mask through mask ending at v.
    let mut path: Vec<Vec<Option<Rat>>> = vec![vec![None; n]; full];
    let mut cycle: Vec<Option<Rat>> = vec![None; full];
    for s in 0..n {
        path[1 << s][s] = Some(rat::zero());
    }
    for mask in 1..full {
        let low = mask.trailing_zeros() as usize;
        for v in 0..n {
            let Some(here) = path[mask][v].clone() else { continue };
            for w in low + 1..n {
                if mask >> w & 1 == 1 {
                    continue;
                }
                let next = mask | 1 << w;
                let cand = &here + inst.cost(v, w);
                if path[next][w].as_ref().is_none_or(|c| cand < *c) {
                    path[next][w] = Some(cand);
                }
            }
        }
        if mask.count_ones() >= 3 {
            cycle[mask] = (0..n)
                .filter_map(|v| path[mask][v].as_ref().map(|p| p + inst.cost(v, low)))
                .min();
        }
    }
    let mut best: Vec<Option<Rat>> = vec![None; full];
    best[0] = Some(rat::zero());
    for mask in 1..full {
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        let mut sub = rest;
        let mut out: Option<Rat> = None;
        loop {
            let part = sub | low;
            if let (Some(c), Some(b)) = (&cycle[part], &best[mask ^ part]) {
                let cand = c + b;
                if out.as_ref().is_none_or(|o| cand < *o) {
                    out = Some(cand);
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        best[mask] = out;
    }
    best[full - 1].clone().ok_or_else(|| Error::invariant("two-matching", "no 2-matching"))
}

/// Exact record of one run from a subtour solution to a 2-matching.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyhedralCertificate {
    #[serde(with = "rat::pair")]
    pub alpha: Rat,
    pub subtour: SubtourSolution,
    /// Cost of the mapped point, `(1 + alpha)` times the subtour objective.
    #[serde(with = "rat::pair")]
    pub mapped_cost: Rat,
    pub twomo: TwoMOSolution,
    #[serde(with = "rat::pair")]
    pub twomo_cost: Rat,
    pub g2m: GraphicalTwoMatching,
    #[serde(with = "rat::pair")]
    pub g2m_cost: Rat,
    pub two_matching: TwoMatching,
    #[serde(with = "rat::pair")]
    pub two_matching_cost: Rat,
    /// `10/9` times the subtour objective.
    #[serde(with = "rat::pair")]
    pub bound: Rat,
    pub g2m_within_bound: bool,
    pub twomo_within_mapped: bool,
    pub two_matching_within_g2m: bool,
}

impl PolyhedralCertificate {
    pub fn passed(&self) -> bool {
        self.g2m_within_bound && self.twomo_within_mapped && self.two_matching_within_g2m
    }
}

pub fn default_alpha() -> Rat {
    rat::rat(1, 9)
}

/// Subtour LP, split graph, cheapest 2MO solution, G2M, shortcut. Fails if
/// any bound does not hold.
pub fn g2m_from_subtour(inst: &MetricInstance) -> Result<PolyhedralCertificate> {
    let subtour = solve_subtour_lp(inst)?;
    g2m_from_subtour_solution(inst, subtour, &default_alpha())
}

/// As [`g2m_from_subtour`] with a given subtour solution and `alpha`. Bounds
/// are enforced only at `alpha = 1/9`; otherwise they are just recorded.
pub fn g2m_from_subtour_solution(
    inst: &MetricInstance,
    subtour: SubtourSolution,
    alpha: &Rat,
) -> Result<PolyhedralCertificate> {
    let split = split_graph(inst);
    let y = map_subtour_to_2mo(&subtour.values, alpha);
    let mapped_cost = y.cost(&split);
    let scale = rat::one() + alpha;
    if mapped_cost != &scale * &subtour.objective {
        return Err(Error::invariant("twomo-map", "mapped cost differs from (1 + alpha) x cost"));
    }
    let twomo = min_cost_2mo(&split).map_err(|e| Error::invariant("twomo-matching", e.to_string()))?;
    let twomo_cost = twomo.cost(&split);
    let g2m = twomo_to_g2m(&split, &twomo)?;
    let g2m_cost = g2m.cost(inst);
    let two_matching = shortcut(&g2m, inst)?;
    let two_matching_cost = two_matching.cost(inst);
    let bound = rat::rat(10, 9) * &subtour.objective;
    let cert = PolyhedralCertificate {
        alpha: alpha.clone(),
        g2m_within_bound: g2m_cost <= bound,
        twomo_within_mapped: twomo_cost <= mapped_cost,
        two_matching_within_g2m: two_matching_cost <= g2m_cost,
        subtour,
        mapped_cost,
        twomo,
        twomo_cost,
        g2m,
        g2m_cost,
        two_matching,
        two_matching_cost,
        bound,
    };
    if *alpha == default_alpha() && !cert.passed() {
        return Err(Error::invariant(
            "polyhedral",
            format!(
                "G2M cost {} against bound {}, 2MO cost {} against mapped {}",
                cert.g2m_cost, cert.bound, cert.twomo_cost, cert.mapped_cost
            ),
        ));
    }
    Ok(cert)
}
