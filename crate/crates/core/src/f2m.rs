//! Fractional 2-matchings: the degree-constrained LP and the component
//! structure of its half-integral vertex solutions.
//!
//! A vertex solution splits into *integer* components (cycles with value 1)
//! and *fractional* components. In a fractional component, the value-1/2
//! edges form vertex-disjoint odd cycles and the value-1 edges form paths
//! whose endpoints lie on those cycles. A path is a *cut path* when its edges
//! are bridges of the component.

use serde::{Deserialize, Serialize};

use crate::graph::{bridges_of, components_of};
use crate::instance::MetricInstance;
use crate::lp::{Constraint, LinearProgram, LpStatus, Relation};
use crate::rat::{self, Rat};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FractionalTwoMatching {
    pub n: usize,
    /// Value per instance edge index.
    #[serde(with = "rat::pair::vec")]
    pub values: Vec<Rat>,
    #[serde(with = "rat::pair")]
    pub objective: Rat,
}

impl FractionalTwoMatching {
    /// Checks that values lie in {0, 1/2, 1} and every degree is 2.
    pub fn new(inst: &MetricInstance, values: Vec<Rat>) -> Result<Self> {
        if values.len() != inst.num_edges() {
            return Err(Error::Validation(format!(
                "expected {} edge values, got {}",
                inst.num_edges(),
                values.len()
            )));
        }
        let allowed = [rat::zero(), rat::half(), rat::one()];
        if let Some(e) = values.iter().position(|v| !allowed.contains(v)) {
            let (i, j) = inst.endpoints(e);
            return Err(Error::Validation(format!(
                "x({i},{j}) = {} is not half-integral",
                rat::fmt_rat(&values[e])
            )));
        }
        let mut degree = vec![rat::zero(); inst.n()];
        for (e, v) in values.iter().enumerate() {
            let (i, j) = inst.endpoints(e);
            degree[i] += v;
            degree[j] += v;
        }
        if let Some(v) = degree.iter().position(|d| *d != rat::int(2)) {
            return Err(Error::Validation(format!(
                "vertex {v} has degree {}",
                rat::fmt_rat(&degree[v])
            )));
        }
        let objective = values.iter().zip(inst.costs()).fold(rat::zero(), |acc, (x, c)| acc + x * c);
        Ok(FractionalTwoMatching { n: inst.n(), values, objective })
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&e| self.values[e] > rat::zero()).collect()
    }
}

/// Solves `min c·x` subject to `x(δ(i)) = 2` and `0 <= x <= 1`.
pub fn solve_f2m(inst: &MetricInstance) -> Result<FractionalTwoMatching> {
    if inst.n() < 3 {
        return Err(Error::precondition(format!("need at least 3 vertices, got {}", inst.n())));
    }
    let lp = degree_lp(inst);
    let sol = crate::lp::solve_lp(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(Error::invariant("f2m", format!("degree LP is {:?}", sol.status)));
    }
    FractionalTwoMatching::new(inst, sol.values)
        .map_err(|e| Error::invariant("f2m", format!("LP vertex rejected: {e}")))
}

/// The LP with one `[0, 1]` variable per edge and degree equalities.
pub(crate) fn degree_lp(inst: &MetricInstance) -> LinearProgram {
    let mut lp = LinearProgram::new();
    for c in inst.costs() {
        lp.add_var(rat::zero(), Some(rat::one()), c.clone());
    }
    let mut rows = vec![Vec::new(); inst.n()];
    for (e, &(i, j)) in inst.edges().iter().enumerate() {
        rows[i].push((e, rat::one()));
        rows[j].push((e, rat::one()));
    }
    for coeffs in rows {
        lp.add_constraint(Constraint::new(coeffs, Relation::Eq, rat::int(2)));
    }
    lp
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ComponentKind {
    Integer,
    Fractional,
}

/// A maximal chain of value-1 edges, oriented from its smaller endpoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Path {
    pub vertices: Vec<usize>,
    /// Instance edge indices in walk order.
    pub edges: Vec<usize>,
    #[serde(with = "rat::pair")]
    pub cost: Rat,
    pub is_cut: bool,
}

impl Path {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn start(&self) -> usize {
        self.vertices[0]
    }

    pub fn end(&self) -> usize {
        *self.vertices.last().expect("path has vertices")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub kind: ComponentKind,
    pub vertices: Vec<usize>,
    /// Vertex sequences of the cycles: the value-1 cycle of an integer
    /// component, or the half-cycles of a fractional one.
    pub cycles: Vec<Vec<usize>>,
    /// Value-1/2 edges, sorted.
    pub cycle_edges: Vec<usize>,
    pub paths: Vec<Path>,
}

impl Component {
    /// Total cost of the path edges.
    pub fn path_cost(&self) -> Rat {
        rat::sum(self.paths.iter().map(|p| &p.cost))
    }

    pub fn cut_path_cost(&self) -> Rat {
        rat::sum(self.paths.iter().filter(|p| p.is_cut).map(|p| &p.cost))
    }

    /// Total cost of the half-value edges.
    pub fn cycle_cost(&self, inst: &MetricInstance) -> Rat {
        rat::sum(self.cycle_edges.iter().map(|&e| inst.edge_cost(e)))
    }

    /// Cost of the component under x.
    pub fn x_cost(&self, inst: &MetricInstance) -> Rat {
        match self.kind {
            ComponentKind::Integer => rat::sum(self.cycle_edge_ids(inst).iter().map(|&e| inst.edge_cost(e))),
            ComponentKind::Fractional => self.path_cost() + self.cycle_cost(inst) / rat::int(2),
        }
    }

    pub fn has_cut_path(&self) -> bool {
        self.paths.iter().any(|p| p.is_cut)
    }

    /// Edge indices along the cycles, in walk order.
    pub fn cycle_edge_ids(&self, inst: &MetricInstance) -> Vec<usize> {
        self.cycles
            .iter()
            .flat_map(|c| (0..c.len()).map(move |k| (c[k], c[(k + 1) % c.len()])))
            .map(|(a, b)| inst.edge_index(a, b))
            .collect()
    }

    /// Position of `v` on its half-cycle: (cycle index, position).
    pub fn cycle_position(&self, v: usize) -> Option<(usize, usize)> {
        self.cycles
            .iter()
            .enumerate()
            .find_map(|(ci, c)| c.iter().position(|&w| w == v).map(|p| (ci, p)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct F2MDecomposition {
    pub n: usize,
    pub components: Vec<Component>,
}

impl F2MDecomposition {
    pub fn fractional(&self) -> impl Iterator<Item = &Component> {
        self.components.iter().filter(|c| c.kind == ComponentKind::Fractional)
    }

    /// Rebuilds the edge values the decomposition came from.
    pub fn to_values(&self, inst: &MetricInstance) -> Vec<Rat> {
        let mut values = vec![rat::zero(); inst.num_edges()];
        for comp in &self.components {
            match comp.kind {
                ComponentKind::Integer => {
                    for e in comp.cycle_edge_ids(inst) {
                        values[e] = rat::one();
                    }
                }
                ComponentKind::Fractional => {
                    for &e in &comp.cycle_edges {
                        values[e] = rat::half();
                    }
                    for p in &comp.paths {
                        for &e in &p.edges {
                            values[e] = rat::one();
                        }
                    }
                }
            }
        }
        values
    }
}

pub fn has_cut_edge(d: &F2MDecomposition) -> bool {
    d.fractional().any(Component::has_cut_path)
}

/// Splits the support of `x` into components and classifies their edges.
pub fn decompose(inst: &MetricInstance, x: &FractionalTwoMatching) -> Result<F2MDecomposition> {
    let n = inst.n();
    let support = x.support();
    let label = components_of(n, support.iter().map(|&e| inst.endpoints(e)));
    let ncomp = label.iter().max().map_or(0, |m| m + 1);
    let mut comp_vertices = vec![Vec::new(); ncomp];
    for v in 0..n {
        comp_vertices[label[v]].push(v);
    }
    let mut half_adj = vec![Vec::new(); n];
    let mut unit_adj = vec![Vec::new(); n];
    for &e in &support {
        let (i, j) = inst.endpoints(e);
        let adj = if x.values[e] == rat::one() { &mut unit_adj } else { &mut half_adj };
        adj[i].push(j);
        adj[j].push(i);
    }
    for v in 0..n {
        half_adj[v].sort_unstable();
        unit_adj[v].sort_unstable();
    }

    let mut components = Vec::with_capacity(ncomp);
    for vertices in comp_vertices {
        let fractional = vertices.iter().any(|&v| !half_adj[v].is_empty());
        if !fractional {
            let cycle = trace_cycle(vertices[0], &unit_adj);
            if cycle.len() != vertices.len() {
                return Err(Error::invariant("f2m", format!("integer component at {} is not a cycle", vertices[0])));
            }
            components.push(Component {
                kind: ComponentKind::Integer,
                vertices,
                cycles: vec![cycle],
                cycle_edges: Vec::new(),
                paths: Vec::new(),
            });
            continue;
        }
        for &v in &vertices {
            let shape = (half_adj[v].len(), unit_adj[v].len());
            if shape != (2, 1) && shape != (0, 2) {
                return Err(Error::invariant(
                    "f2m",
                    format!("vertex {v} has {} half edges and {} unit edges", shape.0, shape.1),
                ));
            }
        }
        let mut on_cycle = vec![false; n];
        let mut cycles = Vec::new();
        for &v in &vertices {
            if half_adj[v].is_empty() || on_cycle[v] {
                continue;
            }
            let cycle = trace_cycle(v, &half_adj);
            if cycle.len().is_multiple_of(2) {
                return Err(Error::invariant("f2m", format!("half-cycle through {v} has even length {}", cycle.len())));
            }
            for &w in &cycle {
                on_cycle[w] = true;
            }
            cycles.push(cycle);
        }
        let mut cycle_edges: Vec<usize> = cycles
            .iter()
            .flat_map(|c| (0..c.len()).map(move |k| (c[k], c[(k + 1) % c.len()])))
            .map(|(a, b)| inst.edge_index(a, b))
            .collect();
        cycle_edges.sort_unstable();

        let mut paths = Vec::new();
        for &v in &vertices {
            if half_adj[v].is_empty() {
                continue;
            }
            let mut walk = vec![v];
            let mut prev = v;
            let mut cur = unit_adj[v][0];
            loop {
                walk.push(cur);
                if !half_adj[cur].is_empty() {
                    break;
                }
                let next = if unit_adj[cur][0] == prev { unit_adj[cur][1] } else { unit_adj[cur][0] };
                prev = cur;
                cur = next;
                if walk.len() > n + 1 {
                    return Err(Error::invariant("f2m", format!("unit walk from {v} does not reach a cycle")));
                }
            }
            if v < cur {
                let edges: Vec<usize> = walk.windows(2).map(|w| inst.edge_index(w[0], w[1])).collect();
                let cost = rat::sum(edges.iter().map(|&e| inst.edge_cost(e)));
                paths.push(Path { vertices: walk, edges, cost, is_cut: false });
            }
        }
        paths.sort_by_key(|a| (a.start(), a.end()));

        let local_edges: Vec<(usize, usize)> = cycle_edges
            .iter()
            .chain(paths.iter().flat_map(|p| p.edges.iter()))
            .map(|&e| inst.endpoints(e))
            .collect();
        let bridges = bridges_of(n, &local_edges);
        let mut offset = cycle_edges.len();
        for p in &mut paths {
            p.is_cut = bridges.binary_search(&offset).is_ok();
            offset += p.len();
        }
        if let Some(&b) = bridges.first() {
            if b < cycle_edges.len() {
                let (i, j) = local_edges[b];
                return Err(Error::invariant("f2m", format!("half edge ({i},{j}) is a bridge")));
            }
        }
        components.push(Component { kind: ComponentKind::Fractional, vertices, cycles, cycle_edges, paths });
    }

    let d = F2MDecomposition { n, components };
    if d.to_values(inst) != x.values {
        return Err(Error::invariant("f2m", "decomposition does not reproduce x"));
    }
    Ok(d)
}

/// Walks the 2-regular adjacency from `start`, toward the smaller neighbour
/// first.
fn trace_cycle(start: usize, adj: &[Vec<usize>]) -> Vec<usize> {
    let mut cycle = vec![start];
    let mut prev = start;
    let mut cur = adj[start][0];
    while cur != start {
        cycle.push(cur);
        let next = if adj[cur][0] == prev { adj[cur][1] } else { adj[cur][0] };
        prev = cur;
        cur = next;
        if cycle.len() > adj.len() {
            break;
        }
    }
    cycle
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::rat::int;

    fn unit(n: usize) -> MetricInstance {
        MetricInstance::from_fn(n, |_, _| int(1)).unwrap()
    }

    #[test]
    fn triangle_is_forced() {
        let x = solve_f2m(&unit(3)).unwrap();
        assert_eq!(x.values, vec![int(1); 3]);
        assert_eq!(x.objective, int(3));
    }

    #[test]
    fn k4_value_is_four() {
        let x = solve_f2m(&unit(4)).unwrap();
        assert_eq!(x.objective, int(4));
    }

    #[test]
    fn worst_case_family_optimum_matches_bundled_point() {
        let (inst, bundled) = generate::worst_case_family(1).unwrap();
        let x = solve_f2m(&inst).unwrap();
        assert_eq!(x.objective, int(6));
        assert_eq!(bundled.objective, int(6));
    }

    #[test]
    fn hamiltonian_cycle_is_one_integer_component() {
        let inst = unit(5);
        let mut values = vec![rat::zero(); inst.num_edges()];
        for k in 0..5 {
            values[inst.edge_index(k, (k + 1) % 5)] = int(1);
        }
        let x = FractionalTwoMatching::new(&inst, values).unwrap();
        let d = decompose(&inst, &x).unwrap();
        assert_eq!(d.components.len(), 1);
        assert_eq!(d.components[0].kind, ComponentKind::Integer);
        assert_eq!(d.components[0].cycles[0].len(), 5);
        assert!(!has_cut_edge(&d));
    }

    #[test]
    fn worst_case_family_structure() {
        for ell in 1..=4 {
            let (inst, x) = generate::worst_case_family(ell).unwrap();
            let d = decompose(&inst, &x).unwrap();
            assert_eq!(d.components.len(), 1);
            let c = &d.components[0];
            assert_eq!(c.kind, ComponentKind::Fractional);
            assert_eq!(c.cycles.len(), 2);
            assert_eq!(c.paths.len(), 3);
            assert!(c.paths.iter().all(|p| p.len() == ell && !p.is_cut));
            assert!(!has_cut_edge(&d));
            assert_eq!(c.x_cost(&inst), x.objective);
        }
    }

    #[test]
    fn dumbbell_has_one_cut_path() {
        let (inst, x) = generate::dumbbell(2, 2).unwrap();
        let d = decompose(&inst, &x).unwrap();
        assert_eq!(d.components.len(), 1);
        let c = &d.components[0];
        assert_eq!(c.paths.len(), 3);
        assert_eq!(c.paths.iter().filter(|p| p.is_cut).count(), 1);
        assert!(has_cut_edge(&d));
    }

    #[test]
    fn four_half_edges_at_a_vertex_are_rejected() {
        // Two half-triangles sharing vertex 0, padded with unit edges 1-3 and
        // 2-4 so every degree is 2.
        let inst = unit(5);
        let mut values = vec![rat::zero(); inst.num_edges()];
        for (a, b) in [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)] {
            values[inst.edge_index(a, b)] = rat::half();
        }
        for (a, b) in [(1, 3), (2, 4)] {
            values[inst.edge_index(a, b)] = int(1);
        }
        let x = FractionalTwoMatching::new(&inst, values).unwrap();
        let err = decompose(&inst, &x).unwrap_err().to_string();
        assert!(err.contains("vertex 0 has 4 half edges"), "{err}");
    }

    #[test]
    fn decomposition_reproduces_random_optima() {
        for seed in 0..15 {
            let inst = generate::random_metric(7 + (seed as usize % 3), seed).unwrap();
            let x = solve_f2m(&inst).unwrap();
            let d = decompose(&inst, &x).unwrap();
            let total = rat::sum(d.components.iter().map(|c| c.x_cost(&inst)).collect::<Vec<_>>().iter());
            assert_eq!(total, x.objective);
        }
    }
}
