//! Undirected multigraphs with exact edge costs.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::rat::{self, Rat};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    #[serde(with = "rat::pair")]
    pub cost: Rat,
}

impl Edge {
    /// The endpoint of the edge that is not `w`.
    pub fn other(&self, w: usize) -> usize {
        if self.u == w {
            self.v
        } else {
            self.u
        }
    }
}

/// Vertices are `0..n`; edge ids are positions in `edges`. Parallel edges are
/// allowed, self-loops are not.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiGraph {
    n: usize,
    edges: Vec<Edge>,
}

impl MultiGraph {
    pub fn new(n: usize) -> Self {
        MultiGraph { n, edges: Vec::new() }
    }

    pub fn add_vertex(&mut self) -> usize {
        self.n += 1;
        self.n - 1
    }

    /// Adds an edge and returns its id.
    pub fn add_edge(&mut self, u: usize, v: usize, cost: Rat) -> usize {
        assert!(u < self.n && v < self.n, "edge ({u},{v}) out of range for {} vertices", self.n);
        assert!(u != v, "self-loop at {u}");
        self.edges.push(Edge { u, v, cost });
        self.edges.len() - 1
    }

    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edge(&self, id: usize) -> &Edge {
        &self.edges[id]
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn set_cost(&mut self, id: usize, cost: Rat) {
        self.edges[id].cost = cost;
    }

    pub fn total_cost(&self) -> Rat {
        rat::sum(self.edges.iter().map(|e| &e.cost))
    }

    /// Incident edge ids per vertex, in increasing id order.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.n];
        for (id, e) in self.edges.iter().enumerate() {
            inc[e.u].push(id);
            inc[e.v].push(id);
        }
        inc
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for e in &self.edges {
            deg[e.u] += 1;
            deg[e.v] += 1;
        }
        deg
    }

    /// First vertex whose degree is not three, if any.
    pub fn non_cubic_vertex(&self) -> Option<usize> {
        self.degrees().iter().position(|&d| d != 3)
    }

    /// Connected component label per vertex, labels in order of first vertex.
    pub fn components(&self) -> Vec<usize> {
        components_of(self.n, self.edges.iter().map(|e| (e.u, e.v)))
    }

    pub fn is_connected(&self) -> bool {
        self.components().iter().all(|&c| c == 0)
    }

    /// Ids of all bridges, in increasing order. Parallel edges are never
    /// bridges.
    pub fn bridges(&self) -> Vec<usize> {
        bridges_of(self.n, &self.edges.iter().map(|e| (e.u, e.v)).collect::<Vec<_>>())
    }

    /// Connected and bridgeless.
    pub fn is_two_edge_connected(&self) -> bool {
        self.n > 0 && self.is_connected() && self.bridges().is_empty()
    }

    /// Graphviz rendering; `label` supplies per-edge annotations.
    pub fn to_dot(&self, label: impl Fn(usize) -> String) -> String {
        let mut out = String::from("graph G {\n");
        for v in 0..self.n {
            let _ = writeln!(out, "  {v};");
        }
        for (id, e) in self.edges.iter().enumerate() {
            let _ = writeln!(
                out,
                "  {} -- {} [label=\"e{} {} {}\"];",
                e.u,
                e.v,
                id,
                rat::fmt_rat(&e.cost),
                label(id).replace('"', "'")
            );
        }
        out.push_str("}\n");
        out
    }
}

/// Component labels for an arbitrary edge list on `0..n`.
pub fn components_of(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Vec<usize> {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for (u, v) in edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    let mut out = vec![0; n];
    for v in 0..n {
        let r = find(&mut parent, v);
        if label[r] == usize::MAX {
            label[r] = next;
            next += 1;
        }
        out[v] = label[r];
    }
    out
}

/// Bridge ids of a multigraph given as an edge list, via an iterative
/// lowpoint DFS that skips only the tree edge's own id (so parallel edges
/// count as back edges).
pub fn bridges_of(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut inc = vec![Vec::new(); n];
    for (id, &(u, v)) in edges.iter().enumerate() {
        inc[u].push(id);
        inc[v].push(id);
    }
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut bridges = BTreeSet::new();
    let mut timer = 0;
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        // (vertex, parent edge id, next incidence position)
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        while let Some(top) = stack.len().checked_sub(1) {
            let (v, pe, pos) = stack[top];
            if pos < inc[v].len() {
                let id = inc[v][pos];
                stack[top].2 += 1;
                if id == pe {
                    continue;
                }
                let (a, b) = edges[id];
                let w = if a == v { b } else { a };
                if disc[w] == usize::MAX {
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, id, 0));
                } else {
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&(p, _, _)) = stack.last() {
                    low[p] = low[p].min(low[v]);
                    if low[v] > disc[p] {
                        bridges.insert(pe);
                    }
                }
            }
        }
    }
    bridges.into_iter().collect()
}

/// Fails with a precondition error unless `g` is cubic and 2-edge-connected.
pub fn require_cubic_bridgeless(g: &MultiGraph) -> Result<()> {
    if let Some(v) = g.non_cubic_vertex() {
        return Err(Error::precondition(format!(
            "graph is not cubic: vertex {v} has degree {}",
            g.degrees()[v]
        )));
    }
    if !g.is_connected() {
        return Err(Error::precondition("graph is not connected"));
    }
    if let Some(&b) = g.bridges().first() {
        let e = g.edge(b);
        return Err(Error::precondition(format!("edge {b} ({}, {}) is a bridge", e.u, e.v)));
    }
    Ok(())
}
