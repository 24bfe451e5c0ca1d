use crate::graph::MultiGraph;
use crate::rat::Rat;
use crate::{Error, Result};

use super::PerfectMatching;

/// Largest vertex count accepted by the exhaustive search.
pub const MAX_BRUTE_FORCE_VERTICES: usize = 14;

/// Exhaustive minimum-cost perfect matching. Among optimal matchings the one
/// with the lexicographically smallest sorted edge-id list wins.
pub fn brute_force_perfect_matching(g: &MultiGraph) -> Result<PerfectMatching> {
    let n = g.num_vertices();
    if n > MAX_BRUTE_FORCE_VERTICES {
        return Err(Error::precondition(format!(
            "brute-force matching takes at most {MAX_BRUTE_FORCE_VERTICES} vertices, got {n}"
        )));
    }
    let inc = g.incidence();
    let mut search = Search { g, inc: &inc, covered: vec![false; n], chosen: Vec::new(), best: None };
    search.run(Rat::default());
    match search.best {
        Some((_, ids)) => PerfectMatching::from_edges(g, ids),
        None => {
            let isolated: Vec<usize> = (0..n).filter(|&v| inc[v].is_empty()).collect();
            let unmatched = if isolated.is_empty() { (0..n).collect() } else { isolated };
            Err(Error::NoPerfectMatching { unmatched })
        }
    }
}

struct Search<'a> {
    g: &'a MultiGraph,
    inc: &'a [Vec<usize>],
    covered: Vec<bool>,
    chosen: Vec<usize>,
    best: Option<(Rat, Vec<usize>)>,
}

impl Search<'_> {
    fn run(&mut self, cost: Rat) {
        let Some(v) = self.covered.iter().position(|c| !c) else {
            let mut ids = self.chosen.clone();
            ids.sort_unstable();
            let better = match &self.best {
                None => true,
                Some((c, b)) => cost < *c || (cost == *c && ids < *b),
            };
            if better {
                self.best = Some((cost, ids));
            }
            return;
        };
        self.covered[v] = true;
        for &id in &self.inc[v] {
            let w = self.g.edge(id).other(v);
            if self.covered[w] {
                continue;
            }
            self.covered[w] = true;
            self.chosen.push(id);
            self.run(cost.clone() + &self.g.edge(id).cost);
            self.chosen.pop();
            self.covered[w] = false;
        }
        self.covered[v] = false;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::int;

    #[test]
    fn k4_and_tie_break() {
        let mut g = MultiGraph::new(4);
        for (u, v, c) in [(0, 1, 1), (0, 2, 5), (0, 3, 5), (1, 2, 5), (1, 3, 5), (2, 3, 1)] {
            g.add_edge(u, v, int(c));
        }
        let m = brute_force_perfect_matching(&g).unwrap();
        assert_eq!((m.edges, m.cost), (vec![0, 5], int(2)));

        let mut square = MultiGraph::new(4);
        for (u, v) in [(2, 3), (0, 1), (1, 2), (3, 0)] {
            square.add_edge(u, v, int(1));
        }
        assert_eq!(brute_force_perfect_matching(&square).unwrap().edges, vec![0, 1]);
    }

    #[test]
    fn no_edges_is_an_error() {
        assert!(matches!(
            brute_force_perfect_matching(&MultiGraph::new(2)),
            Err(Error::NoPerfectMatching { .. })
        ));
    }

    #[test]
    fn k8_has_105_matchings() {
        // Distinct powers of two make every matching's cost unique.
        let mut g = MultiGraph::new(8);
        let mut count = 0;
        for u in 0..8 {
            for v in u + 1..8 {
                g.add_edge(u, v, int(1 << count));
                count += 1;
            }
        }
        let inc = g.incidence();
        let mut s = Search { g: &g, inc: &inc, covered: vec![false; 8], chosen: Vec::new(), best: None };
        let mut seen = 0;
        fn walk(s: &mut Search, seen: &mut usize) {
            let Some(v) = s.covered.iter().position(|c| !c) else {
                *seen += 1;
                return;
            };
            s.covered[v] = true;
            for &id in &s.inc[v].clone() {
                let w = s.g.edge(id).other(v);
                if !s.covered[w] {
                    s.covered[w] = true;
                    walk(s, seen);
                    s.covered[w] = false;
                }
            }
            s.covered[v] = false;
        }
        walk(&mut s, &mut seen);
        assert_eq!(seen, 105);
    }
}
