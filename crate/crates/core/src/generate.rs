//! Instance generators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::f2m::FractionalTwoMatching;
use crate::graph::MultiGraph;
use crate::instance::MetricInstance;
use crate::rat::{self, Rat};
use crate::{Error, Result};

/// Two triangles `a = {0,1,2}` and `b = {3,4,5}` joined by three disjoint
/// paths of `ell` edges, path `i` running from `a_i` to `b_i`. Interior
/// vertex `k` of path `i` is `6 + i*(ell-1) + k`.
///
/// Graph edges cost 1 and all other pairs cost 2. The returned fractional
/// 2-matching puts 1/2 on the triangle edges and 1 on the path edges.
pub fn worst_case_family(ell: usize) -> Result<(MetricInstance, FractionalTwoMatching)> {
    if ell == 0 {
        return Err(Error::precondition("path length must be at least 1"));
    }
    let n = 6 + 3 * (ell - 1);
    let mut unit = Vec::new();
    let mut half = Vec::new();
    for t in [0, 3] {
        for (a, b) in [(0, 1), (1, 2), (0, 2)] {
            half.push((t + a, t + b));
        }
    }
    for i in 0..3 {
        let mut walk = vec![i];
        walk.extend((0..ell - 1).map(|k| 6 + i * (ell - 1) + k));
        walk.push(3 + i);
        unit.extend(walk.windows(2).map(|w| (w[0], w[1])));
    }
    bundle(n, &unit, &half, |_| None)
}

/// Two half-triangles whose remaining vertices are paired by a loop path of
/// `ell_loop` edges each, joined by a single path of `ell_cut` edges between
/// vertices 0 and 3. That joining path is a cut path of the bundled point.
///
/// Costs are the shortest-path closure of the unit-cost support graph.
pub fn dumbbell(ell_cut: usize, ell_loop: usize) -> Result<(MetricInstance, FractionalTwoMatching)> {
    if ell_cut == 0 || ell_loop < 2 {
        return Err(Error::precondition("need ell_cut >= 1 and ell_loop >= 2"));
    }
    let mut half = Vec::new();
    for t in [0, 3] {
        for (a, b) in [(0, 1), (1, 2), (0, 2)] {
            half.push((t + a, t + b));
        }
    }
    let mut next = 6;
    let mut unit = Vec::new();
    let mut chain = |from: usize, to: usize, len: usize, unit: &mut Vec<(usize, usize)>| {
        let mut walk = vec![from];
        for _ in 0..len - 1 {
            walk.push(next);
            next += 1;
        }
        walk.push(to);
        unit.extend(walk.windows(2).map(|w| (w[0], w[1])));
    };
    chain(1, 2, ell_loop, &mut unit);
    chain(4, 5, ell_loop, &mut unit);
    chain(0, 3, ell_cut, &mut unit);
    let n = 6 + 2 * (ell_loop - 1) + (ell_cut - 1);
    let support: Vec<(usize, usize)> = unit.iter().chain(&half).copied().collect();
    let dist = closure(n, &support.iter().map(|&(a, b)| (a, b, rat::one())).collect::<Vec<_>>());
    bundle(n, &unit, &half, |(i, j)| Some(dist[i][j].clone()))
}

fn bundle(
    n: usize,
    unit: &[(usize, usize)],
    half: &[(usize, usize)],
    cost: impl Fn((usize, usize)) -> Option<Rat>,
) -> Result<(MetricInstance, FractionalTwoMatching)> {
    let is_edge = |i: usize, j: usize| {
        unit.iter().chain(half).any(|&(a, b)| (a, b) == (i, j) || (b, a) == (i, j))
    };
    let inst = MetricInstance::from_fn(n, |i, j| {
        cost((i, j)).unwrap_or_else(|| if is_edge(i, j) { rat::one() } else { rat::int(2) })
    })?;
    let mut values = vec![rat::zero(); inst.num_edges()];
    for &(a, b) in unit {
        values[inst.edge_index(a, b)] = rat::one();
    }
    for &(a, b) in half {
        values[inst.edge_index(a, b)] = rat::half();
    }
    let x = FractionalTwoMatching::new(&inst, values)?;
    Ok((inst, x))
}

/// All-pairs shortest paths over exact costs. The graph must be connected.
fn closure(n: usize, edges: &[(usize, usize, Rat)]) -> Vec<Vec<Rat>> {
    let mut dist: Vec<Vec<Option<Rat>>> = vec![vec![None; n]; n];
    for (v, row) in dist.iter_mut().enumerate() {
        row[v] = Some(rat::zero());
    }
    for (a, b, c) in edges {
        let better = dist[*a][*b].as_ref().is_none_or(|d| c < d);
        if better {
            dist[*a][*b] = Some(c.clone());
            dist[*b][*a] = Some(c.clone());
        }
    }
    for k in 0..n {
        for i in 0..n {
            let Some(ik) = dist[i][k].clone() else { continue };
            for j in 0..n {
                if let Some(kj) = &dist[k][j] {
                    let via = &ik + kj;
                    if dist[i][j].as_ref().is_none_or(|d| via < *d) {
                        dist[i][j] = Some(via);
                    }
                }
            }
        }
    }
    dist.into_iter()
        .map(|row| row.into_iter().map(|d| d.expect("connected graph")).collect())
        .collect()
}

/// A random metric instance, deterministic in `seed`.
///
/// Draws integer points in `[0, 100]^2`, joins them by a random spanning
/// path plus extra random pairs, weights each graph edge by
/// `(L1 length + 1) / d` with `d` drawn from {1, 2, 3}, and returns the
/// shortest-path closure.
pub fn random_metric(n: usize, seed: u64) -> Result<MetricInstance> {
    if n < 3 {
        return Err(Error::precondition(format!("random metric needs n >= 3, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points: Vec<(i64, i64)> = (0..n).map(|_| (rng.gen_range(0..=100), rng.gen_range(0..=100))).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut pairs: Vec<(usize, usize)> = order.windows(2).map(|w| (w[0], w[1])).collect();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(0.4) {
                pairs.push((i, j));
            }
        }
    }
    let edges: Vec<(usize, usize, Rat)> = pairs
        .into_iter()
        .map(|(a, b)| {
            let l1 = (points[a].0 - points[b].0).abs() + (points[a].1 - points[b].1).abs();
            let den = rng.gen_range(1..=3);
            (a, b, rat::rat(l1 + 1, den))
        })
        .collect();
    let dist = closure(n, &edges);
    let inst = MetricInstance::from_fn(n, |i, j| dist[i][j].clone())?;
    debug_assert!(inst.is_metric());
    Ok(inst)
}

/// A random multigraph on `n` vertices with up to two copies per pair and
/// signed rational costs in `[-5, 7.5)`.
pub fn random_multigraph(n: usize, seed: u64) -> MultiGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = MultiGraph::new(n);
    let p = rng.gen_range(0.3..1.0);
    for u in 0..n {
        for v in u + 1..n {
            let copies = if rng.gen_bool(p) { rng.gen_range(1..=2) } else { 0 };
            for _ in 0..copies {
                g.add_edge(u, v, rat::rat(rng.gen_range(-20..30), rng.gen_range(1..5)));
            }
        }
    }
    g
}

/// A random cubic 2-edge-connected multigraph on `n` vertices (even, at
/// least 2) with signed rational costs, by rejection from random pairings
/// of half-edges. Loops are never produced; parallel edges may be.
pub fn random_cubic_bridgeless(n: usize, seed: u64) -> Result<MultiGraph> {
    if n < 2 || n % 2 == 1 {
        return Err(Error::precondition(format!("cubic graphs need an even n >= 2, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..10_000 {
        let mut stubs: Vec<usize> = (0..3 * n).map(|k| k / 3).collect();
        stubs.shuffle(&mut rng);
        if stubs.chunks(2).any(|p| p[0] == p[1]) {
            continue;
        }
        let mut g = MultiGraph::new(n);
        for p in stubs.chunks(2) {
            g.add_edge(p[0].min(p[1]), p[0].max(p[1]), rat::rat(rng.gen_range(-30..60), rng.gen_range(1..7)));
        }
        if g.is_two_edge_connected() {
            return Ok(g);
        }
    }
    Err(Error::invariant("generate", "no cubic 2-edge-connected pairing found"))
}
