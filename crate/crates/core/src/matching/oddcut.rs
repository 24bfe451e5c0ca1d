//! Minimum odd cut by a Gomory–Hu tree (Padberg–Rao), on integer-scaled
//! weights.

use std::collections::VecDeque;

use crate::graph::MultiGraph;
use crate::rat::{self, Rat};
use crate::{Error, Result};

use super::polytope::{FractionalMatchingPoint, MatchingViolation};

struct Network {
    n: usize,
    cap: Vec<Vec<i128>>,
}

impl Network {
    /// Max flow from `s` to `t` (Dinic) and the source side of a minimum cut.
    fn min_cut(&self, s: usize, t: usize) -> (i128, Vec<bool>) {
        let n = self.n;
        let mut res = self.cap.clone();
        let mut total = 0i128;
        loop {
            let mut level = vec![usize::MAX; n];
            level[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for v in 0..n {
                    if res[u][v] > 0 && level[v] == usize::MAX {
                        level[v] = level[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            if level[t] == usize::MAX {
                let side = level.iter().map(|&l| l != usize::MAX).collect();
                return (total, side);
            }
            let mut next = vec![0usize; n];
            loop {
                let pushed = Self::push(&mut res, &level, &mut next, s, t, i128::MAX);
                if pushed == 0 {
                    break;
                }
                total += pushed;
            }
        }
    }

    fn push(res: &mut [Vec<i128>], level: &[usize], next: &mut [usize], u: usize, t: usize, limit: i128) -> i128 {
        if u == t {
            return limit;
        }
        let n = res.len();
        while next[u] < n {
            let v = next[u];
            if res[u][v] > 0 && level[v] == level[u] + 1 {
                let got = Self::push(res, level, next, v, t, limit.min(res[u][v]));
                if got > 0 {
                    res[u][v] -= got;
                    res[v][u] += got;
                    return got;
                }
            }
            next[u] += 1;
        }
        0
    }
}

/// Gomory–Hu tree by Gusfield's method: `(parent, weight)` per vertex, with
/// vertex 0 as the root.
fn gomory_hu(net: &Network) -> (Vec<usize>, Vec<i128>) {
    let n = net.n;
    let mut parent = vec![0usize; n];
    let mut weight = vec![0i128; n];
    for s in 1..n {
        let t = parent[s];
        let (f, side) = net.min_cut(s, t);
        weight[s] = f;
        for i in 0..n {
            if i != s && side[i] && parent[i] == t {
                parent[i] = s;
            }
        }
        if side[parent[t]] {
            parent[s] = parent[t];
            parent[t] = s;
            weight[s] = weight[t];
            weight[t] = f;
        }
    }
    (parent, weight)
}

/// Minimum of `x(δ(S))` over odd vertex sets `S`, with the side holding
/// vertex 0. Requires an even number of vertices and nonnegative `x`.
pub fn min_odd_cut(g: &MultiGraph, x: &FractionalMatchingPoint) -> Result<(Vec<usize>, Rat)> {
    let n = g.num_vertices();
    if n == 0 || n % 2 == 1 {
        return Err(Error::precondition(format!("odd cuts need a positive even vertex count, got {n}")));
    }
    if x.values.len() != g.num_edges() || x.values.iter().any(|v| *v < rat::zero()) {
        return Err(Error::precondition("need one nonnegative value per edge"));
    }
    let den = rat::common_denominator(&x.values);
    let scaled = rat::scale_to_i128(&x.values, &den)
        .ok_or_else(|| Error::Overflow("matching point does not fit in i128".into()))?;
    let mut cap = vec![vec![0i128; n]; n];
    for (e, &w) in g.edges().iter().zip(&scaled) {
        if e.u != e.v {
            cap[e.u][e.v] += w;
            cap[e.v][e.u] += w;
        }
    }
    let net = Network { n, cap };
    let (parent, weight) = gomory_hu(&net);
    let mut children = vec![Vec::new(); n];
    for v in 1..n {
        children[parent[v]].push(v);
    }
    let mut best: Option<(i128, usize)> = None;
    for v in 1..n {
        let size = subtree(&children, v).len();
        if size % 2 == 1 && best.is_none_or(|(w, _)| weight[v] < w) {
            best = Some((weight[v], v));
        }
    }
    let (w, v) = best.expect("a leaf gives an odd side");
    let mut inside = vec![false; n];
    for u in subtree(&children, v) {
        inside[u] = true;
    }
    let set = (0..n).filter(|&u| inside[u] == inside[0]).collect();
    Ok((set, Rat::new(w.into(), den)))
}

fn subtree(children: &[Vec<usize>], root: usize) -> Vec<usize> {
    let mut out = vec![root];
    let mut k = 0;
    while k < out.len() {
        out.extend(&children[out[k]]);
        k += 1;
    }
    out
}

/// Perfect matching polytope membership without enumeration: nonnegativity,
/// degrees, then one minimum odd cut.
pub fn check_matching_polytope_by_separation(
    g: &MultiGraph,
    x: &FractionalMatchingPoint,
) -> Result<Option<MatchingViolation>> {
    let n = g.num_vertices();
    if x.values.len() != g.num_edges() {
        return Err(Error::precondition(format!(
            "point has {} values for {} edges",
            x.values.len(),
            g.num_edges()
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
    if n == 0 {
        return Ok(None);
    }
    if n % 2 == 1 {
        return Ok(Some(MatchingViolation::OddSet { set: (0..n).collect(), value: rat::zero() }));
    }
    let (set, value) = min_odd_cut(g, x)?;
    Ok((value < rat::one()).then_some(MatchingViolation::OddSet { set, value }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::check_matching_polytope_point;
    use crate::rat::{int, rat};
    use rand::{Rng, SeedableRng};

    fn brute_min_odd_cut(g: &MultiGraph, x: &FractionalMatchingPoint) -> Rat {
        let n = g.num_vertices();
        (1u32..1 << n)
            .filter(|m| m.count_ones() % 2 == 1)
            .map(|mask| {
                g.edges()
                    .iter()
                    .zip(&x.values)
                    .filter(|(e, _)| ((mask >> e.u) ^ (mask >> e.v)) & 1 == 1)
                    .fold(rat::zero(), |acc, (_, v)| acc + v)
            })
            .min()
            .unwrap()
    }

    #[test]
    fn matches_enumeration_on_random_weights() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..200 {
            let n = 2 * rng.gen_range(1..=6);
            let mut g = MultiGraph::new(n);
            let mut values = Vec::new();
            for u in 0..n {
                for v in u + 1..n {
                    if rng.gen_bool(0.5) {
                        g.add_edge(u, v, int(0));
                        values.push(rat(rng.gen_range(0..7), rng.gen_range(1..4)));
                    }
                }
            }
            let x = FractionalMatchingPoint { values };
            let (set, value) = min_odd_cut(&g, &x).unwrap();
            assert_eq!(value, brute_min_odd_cut(&g, &x));
            assert!(set.len() % 2 == 1 && set.contains(&0));
        }
    }

    #[test]
    fn membership_agrees_with_enumeration() {
        let mut k4 = MultiGraph::new(4);
        for (u, v) in [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)] {
            k4.add_edge(u, v, int(1));
        }
        let x = FractionalMatchingPoint::constant(&k4, rat(1, 3));
        assert_eq!(check_matching_polytope_by_separation(&k4, &x).unwrap(), None);

        let mut h = MultiGraph::new(6);
        for (u, v) in [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)] {
            h.add_edge(u, v, int(1));
        }
        let x = FractionalMatchingPoint::constant(&h, rat(1, 2));
        let fast = check_matching_polytope_by_separation(&h, &x).unwrap();
        assert_eq!(fast, Some(MatchingViolation::OddSet { set: vec![0, 1, 2], value: int(0) }));
        assert!(check_matching_polytope_point(&h, &x).unwrap().is_some());
    }
}
