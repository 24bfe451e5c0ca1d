//! Global minimum cut (Stoer–Wagner) over exact nonnegative weights.

use crate::rat::{self, Rat};

/// Returns a minimum cut `(S, value)` of the graph on `0..n`, with `S` the
/// side containing vertex 0, sorted. Parallel edges add up. A disconnected
/// graph yields a cut of value 0.
///
/// Ties are broken toward the first phase reaching the minimum and, within a
/// phase, toward the lowest vertex index.
pub fn stoer_wagner(n: usize, edges: &[(usize, usize, Rat)]) -> (Vec<usize>, Rat) {
    assert!(n >= 2, "a cut needs two vertices");
    let mut w = vec![vec![rat::zero(); n]; n];
    for (u, v, c) in edges {
        debug_assert!(*c >= rat::zero(), "negative weight");
        if u != v {
            w[*u][*v] += c;
            w[*v][*u] += c;
        }
    }
    let mut groups: Vec<Vec<usize>> = (0..n).map(|v| vec![v]).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut best: Option<(Vec<usize>, Rat)> = None;
    while active.len() > 1 {
        let mut in_a = vec![false; n];
        let mut key = vec![rat::zero(); n];
        let mut prev = active[0];
        let mut last = active[0];
        in_a[last] = true;
        for &v in &active {
            key[v] = w[last][v].clone();
        }
        let mut cut_of_phase = rat::zero();
        for _ in 1..active.len() {
            let next = active
                .iter()
                .copied()
                .filter(|&v| !in_a[v])
                .fold(None::<usize>, |acc, v| match acc {
                    Some(b) if key[b] >= key[v] => Some(b),
                    _ => Some(v),
                })
                .expect("vertex outside A");
            prev = last;
            last = next;
            in_a[next] = true;
            cut_of_phase = key[next].clone();
            for &v in &active {
                if !in_a[v] {
                    let add = w[next][v].clone();
                    key[v] += add;
                }
            }
        }
        if best.as_ref().is_none_or(|(_, b)| cut_of_phase < *b) {
            best = Some((groups[last].clone(), cut_of_phase));
        }
        let moved = std::mem::take(&mut groups[last]);
        groups[prev].extend(moved);
        for v in 0..n {
            let add = w[last][v].clone();
            w[prev][v] += &add;
            w[v][prev] += add;
        }
        w[prev][prev] = rat::zero();
        active.retain(|&v| v != last);
    }
    let (side, value) = best.expect("at least one phase");
    let mut s = if side.contains(&0) {
        side
    } else {
        let mut mark = vec![false; n];
        for &v in &side {
            mark[v] = true;
        }
        (0..n).filter(|&v| !mark[v]).collect()
    };
    s.sort_unstable();
    (s, value)
}

/// Weight of the edges with exactly one endpoint in `s`.
pub fn cut_value(n: usize, edges: &[(usize, usize, Rat)], s: &[usize]) -> Rat {
    let mut inside = vec![false; n];
    for &v in s {
        inside[v] = true;
    }
    edges
        .iter()
        .filter(|(u, v, _)| inside[*u] != inside[*v])
        .fold(rat::zero(), |acc, (_, _, c)| acc + c)
}
