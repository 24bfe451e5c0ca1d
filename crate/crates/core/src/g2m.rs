//! Graphical 2-matchings and their shortcutting to plain 2-matchings.

use serde::{Deserialize, Serialize};

use crate::graph::components_of;
use crate::instance::{edge_index, MetricInstance};
use crate::rat::{self, Rat};
use crate::{Error, Result};

/// Edge multiplicities over a complete graph on `n` vertices, spanning the
/// listed vertex set.
///
/// Valid when every spanned vertex has degree 2 or 4, unspanned vertices have
/// degree 0, no multiplicity exceeds 2, and every connected component of the
/// support has at least three vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphicalTwoMatching {
    pub n: usize,
    pub vertices: Vec<usize>,
    /// Multiplicity per instance edge index.
    pub multiplicity: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum G2MViolation {
    Multiplicity { edge: (usize, usize), value: u8 },
    Degree { vertex: usize, degree: usize },
    Stray { vertex: usize, degree: usize },
    SmallComponent { vertices: Vec<usize> },
}

impl GraphicalTwoMatching {
    pub fn empty(n: usize, mut vertices: Vec<usize>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        GraphicalTwoMatching { n, vertices, multiplicity: vec![0; n * n.saturating_sub(1) / 2] }
    }

    pub fn add(&mut self, i: usize, j: usize, copies: u8) {
        self.multiplicity[edge_index(self.n, i, j)] += copies;
    }

    pub fn get(&self, i: usize, j: usize) -> u8 {
        self.multiplicity[edge_index(self.n, i, j)]
    }

    /// `(i, j, multiplicity)` for every edge present, in edge-index order.
    pub fn edges(&self) -> Vec<(usize, usize, u8)> {
        let mut out = Vec::new();
        let mut k = 0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.multiplicity[k] > 0 {
                    out.push((i, j, self.multiplicity[k]));
                }
                k += 1;
            }
        }
        out
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for (i, j, m) in self.edges() {
            deg[i] += m as usize;
            deg[j] += m as usize;
        }
        deg
    }

    /// Disjoint union; vertex sets must not overlap.
    pub fn merge(&mut self, other: &GraphicalTwoMatching) {
        assert_eq!(self.n, other.n);
        for (a, b) in self.multiplicity.iter_mut().zip(&other.multiplicity) {
            *a += b;
        }
        self.vertices.extend(&other.vertices);
        self.vertices.sort_unstable();
        self.vertices.dedup();
    }

    pub fn cost(&self, inst: &MetricInstance) -> Rat {
        cost(self, inst)
    }
}

/// First violated condition, checking multiplicities, then degrees in vertex
/// order, then component sizes.
pub fn validate_g2m(g: &GraphicalTwoMatching) -> Option<G2MViolation> {
    let edges = g.edges();
    if let Some(&(i, j, m)) = edges.iter().find(|e| e.2 > 2) {
        return Some(G2MViolation::Multiplicity { edge: (i, j), value: m });
    }
    let deg = g.degrees();
    let mut spanned = vec![false; g.n];
    for &v in &g.vertices {
        spanned[v] = true;
    }
    for v in 0..g.n {
        if spanned[v] && deg[v] != 2 && deg[v] != 4 {
            return Some(G2MViolation::Degree { vertex: v, degree: deg[v] });
        }
        if !spanned[v] && deg[v] != 0 {
            return Some(G2MViolation::Stray { vertex: v, degree: deg[v] });
        }
    }
    let label = components_of(g.n, edges.iter().map(|e| (e.0, e.1)));
    let mut size = vec![0; g.n];
    for &v in &g.vertices {
        size[label[v]] += 1;
    }
    for &v in &g.vertices {
        if size[label[v]] < 3 {
            let vertices = g.vertices.iter().copied().filter(|&w| label[w] == label[v]).collect();
            return Some(G2MViolation::SmallComponent { vertices });
        }
    }
    None
}

pub fn cost(g: &GraphicalTwoMatching, inst: &MetricInstance) -> Rat {
    g.multiplicity
        .iter()
        .zip(inst.costs())
        .filter(|(m, _)| **m > 0)
        .fold(rat::zero(), |acc, (m, c)| acc + c * rat::int(*m as i64))
}

/// Vertex-disjoint simple cycles, each with at least three vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoMatching {
    pub n: usize,
    pub cycles: Vec<Vec<usize>>,
}

impl TwoMatching {
    /// Edge indices of all cycles, sorted.
    pub fn edges(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .cycles
            .iter()
            .flat_map(|c| (0..c.len()).map(move |k| edge_index(self.n, c[k], c[(k + 1) % c.len()])))
            .collect();
        out.sort_unstable();
        out
    }

    pub fn cost(&self, inst: &MetricInstance) -> Rat {
        rat::sum(self.edges().iter().map(|&e| inst.edge_cost(e)))
    }

    /// Checks that cycles are simple, disjoint and of length at least three.
    pub fn validate(&self) -> Option<String> {
        let mut seen = vec![false; self.n];
        for c in &self.cycles {
            if c.len() < 3 {
                return Some(format!("cycle {c:?} has fewer than three vertices"));
            }
            for &v in c {
                if std::mem::replace(&mut seen[v], true) {
                    return Some(format!("vertex {v} appears twice"));
                }
            }
        }
        None
    }

    pub fn vertices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.cycles.iter().flatten().copied().collect();
        v.sort_unstable();
        v
    }
}

/// Replaces each component of `g` by a simple cycle through its vertices:
/// an Euler circuit (Hierholzer, lowest edge first) with repeated vertices
/// skipped. Never increases cost on a metric instance.
pub fn shortcut(g: &GraphicalTwoMatching, inst: &MetricInstance) -> Result<TwoMatching> {
    if !inst.is_metric() {
        return Err(Error::precondition("shortcutting needs a metric instance"));
    }
    if let Some(v) = validate_g2m(g) {
        return Err(Error::precondition(format!("not a graphical 2-matching: {v:?}")));
    }
    let mut copies: Vec<(usize, usize)> = Vec::new();
    for (i, j, m) in g.edges() {
        for _ in 0..m {
            copies.push((i, j));
        }
    }
    let mut inc = vec![Vec::new(); g.n];
    for (id, &(i, j)) in copies.iter().enumerate() {
        inc[i].push(id);
        inc[j].push(id);
    }
    let mut used = vec![false; copies.len()];
    let mut next = vec![0usize; g.n];
    let mut visited = vec![false; g.n];
    let mut cycles = Vec::new();
    for &start in &g.vertices {
        if visited[start] {
            continue;
        }
        let mut circuit = Vec::new();
        let mut stack = vec![start];
        while let Some(&v) = stack.last() {
            while next[v] < inc[v].len() && used[inc[v][next[v]]] {
                next[v] += 1;
            }
            if next[v] < inc[v].len() {
                let id = inc[v][next[v]];
                used[id] = true;
                let (a, b) = copies[id];
                stack.push(if a == v { b } else { a });
            } else {
                circuit.push(v);
                stack.pop();
            }
        }
        circuit.reverse();
        let mut cycle = Vec::new();
        for v in circuit {
            if !visited[v] {
                visited[v] = true;
                cycle.push(v);
            }
        }
        cycles.push(cycle);
    }
    let t = TwoMatching { n: g.n, cycles };
    if let Some(msg) = t.validate() {
        return Err(Error::invariant("shortcut", msg));
    }
    if t.vertices() != g.vertices {
        return Err(Error::invariant("shortcut", "vertex set changed"));
    }
    let before = cost(g, inst);
    let after = t.cost(inst);
    if after > before {
        return Err(Error::invariant(
            "shortcut",
            format!("cost rose from {} to {}", rat::fmt_rat(&before), rat::fmt_rat(&after)),
        ));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::random_metric;
    use crate::rat::int;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};

    fn unit(n: usize) -> MetricInstance {
        MetricInstance::from_fn(n, |_, _| int(1)).unwrap()
    }

    #[test]
    fn validation_examples() {
        let mut tri = GraphicalTwoMatching::empty(3, vec![0, 1, 2]);
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            tri.add(i, j, 1);
        }
        assert_eq!(validate_g2m(&tri), None);
        assert_eq!(cost(&tri, &unit(3)), int(3));

        let mut path = GraphicalTwoMatching::empty(3, vec![0, 1, 2]);
        path.add(0, 1, 2);
        path.add(1, 2, 2);
        assert_eq!(validate_g2m(&path), None);
        assert_eq!(cost(&path, &unit(3)), int(4));

        let mut pair = GraphicalTwoMatching::empty(2, vec![0, 1]);
        pair.add(0, 1, 2);
        assert_eq!(validate_g2m(&pair), Some(G2MViolation::SmallComponent { vertices: vec![0, 1] }));

        assert_eq!(cost(&GraphicalTwoMatching::empty(4, vec![]), &unit(4)), int(0));
    }

    #[test]
    fn doubled_path_shortcuts_to_triangle() {
        let inst = MetricInstance::new(3, vec![int(2), int(3), int(4)]).unwrap();
        let mut path = GraphicalTwoMatching::empty(3, vec![0, 1, 2]);
        path.add(0, 1, 2);
        path.add(1, 2, 2);
        let t = shortcut(&path, &inst).unwrap();
        assert_eq!(t.cycles, vec![vec![0, 1, 2]]);
        assert_eq!(t.cost(&inst), int(9));
        assert!(t.cost(&inst) <= cost(&path, &inst));
    }

    #[test]
    fn simple_cycles_are_unchanged() {
        let inst = unit(6);
        let mut g = GraphicalTwoMatching::empty(6, (0..6).collect());
        for (i, j) in [(0, 2), (2, 4), (4, 0), (1, 3), (3, 5), (5, 1)] {
            g.add(i, j, 1);
        }
        let t = shortcut(&g, &inst).unwrap();
        let mut want: Vec<usize> = [(0, 2), (2, 4), (0, 4), (1, 3), (3, 5), (1, 5)]
            .iter()
            .map(|&(i, j)| inst.edge_index(i, j))
            .collect();
        want.sort_unstable();
        assert_eq!(t.edges(), want);
    }

    #[test]
    fn non_metric_is_rejected() {
        let inst = MetricInstance::new(3, vec![int(1), int(1), int(3)]).unwrap();
        let mut tri = GraphicalTwoMatching::empty(3, vec![0, 1, 2]);
        for (i, j) in [(0, 1), (1, 2), (0, 2)] {
            tri.add(i, j, 1);
        }
        assert!(matches!(shortcut(&tri, &inst), Err(Error::Precondition(_))));
    }

    /// Random G2M: split the vertices into groups of at least three; make
    /// each group a cycle and double some chords between cycle-adjacent
    /// pairs to create degree-4 vertices.
    fn random_g2m(n: usize, rng: &mut rand_chacha::ChaCha8Rng) -> GraphicalTwoMatching {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut g = GraphicalTwoMatching::empty(n, (0..n).collect());
        let mut rest = &order[..];
        while !rest.is_empty() {
            let take = if rest.len() < 6 { rest.len() } else { rng.gen_range(3..=rest.len() - 3) };
            let (grp, tail) = rest.split_at(take);
            rest = tail;
            if grp.len() >= 3 && rng.gen_bool(0.5) {
                // Doubled path through the group.
                for w in grp.windows(2) {
                    g.add(w[0], w[1], 2);
                }
            } else {
                for k in 0..grp.len() {
                    g.add(grp[k], grp[(k + 1) % grp.len()], 1);
                }
            }
        }
        g
    }

    #[test]
    fn shortcut_never_increases_cost() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        for seed in 0..40 {
            let n = rng.gen_range(3..12);
            let inst = random_metric(n, seed).unwrap();
            let g = random_g2m(n, &mut rng);
            assert_eq!(validate_g2m(&g), None, "{g:?}");
            let t = shortcut(&g, &inst).unwrap();
            assert!(t.cost(&inst) <= cost(&g, &inst));
            assert_eq!(t.vertices(), (0..n).collect::<Vec<_>>());
        }
    }
}
