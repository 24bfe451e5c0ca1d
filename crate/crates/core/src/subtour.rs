//! The subtour LP: degree equalities, `0 <= x <= 1`, and `x(δ(S)) >= 2` for
//! every proper vertex set `S`, solved by cutting planes.

use serde::{Deserialize, Serialize};

use crate::f2m::degree_lp;
use crate::instance::MetricInstance;
use crate::lp::{add_constraint_and_resolve, solve_lp, Constraint, LinearProgram, LpSolution, LpStatus, Relation};
use crate::mincut::{cut_value, stoer_wagner};
use crate::rat::{self, Rat};
use crate::{Error, Result};

/// Largest `n` accepted by the enumerating routines.
pub const MAX_ENUMERATED_VERTICES: usize = 16;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubtourSolution {
    pub n: usize,
    /// One value per instance edge.
    #[serde(with = "rat::pair::vec")]
    pub values: Vec<Rat>,
    #[serde(with = "rat::pair")]
    pub objective: Rat,
    /// Sets `S` whose cut constraints were added, in order. Each contains vertex 0.
    pub cut_pool: Vec<Vec<usize>>,
    /// Objective after each LP solve.
    #[serde(with = "rat::pair::vec")]
    pub history: Vec<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubtourViolation {
    Bound {
        edge: usize,
        #[serde(with = "rat::text")]
        value: Rat,
    },
    Degree {
        vertex: usize,
        #[serde(with = "rat::text")]
        value: Rat,
    },
    Cut {
        set: Vec<usize>,
        #[serde(with = "rat::text")]
        value: Rat,
    },
}

fn cut_constraint(inst: &MetricInstance, s: &[usize]) -> Constraint {
    let mut inside = vec![false; inst.n()];
    for &v in s {
        inside[v] = true;
    }
    let coeffs = inst
        .edges()
        .iter()
        .enumerate()
        .filter(|(_, &(i, j))| inside[i] != inside[j])
        .map(|(e, _)| (e, rat::one()))
        .collect();
    Constraint::new(coeffs, Relation::Ge, rat::int(2))
}

fn optimal(sol: LpSolution, stage: &'static str) -> Result<LpSolution> {
    if sol.status == LpStatus::Optimal {
        Ok(sol)
    } else {
        Err(Error::invariant(stage, format!("LP is {:?}", sol.status)))
    }
}

/// Global minimum cut of the complete graph weighted by `x`.
pub fn separate_min_cut(inst: &MetricInstance, x: &[Rat]) -> Result<(Vec<usize>, Rat)> {
    if x.len() != inst.num_edges() {
        return Err(Error::precondition("one value per edge expected"));
    }
    if let Some(e) = x.iter().position(|v| *v < rat::zero()) {
        return Err(Error::precondition(format!("negative weight on edge {e}")));
    }
    let edges: Vec<(usize, usize, Rat)> = inst
        .edges()
        .iter()
        .zip(x)
        .filter(|(_, v)| **v > rat::zero())
        .map(|(&(i, j), v)| (i, j, v.clone()))
        .collect();
    Ok(stoer_wagner(inst.n(), &edges))
}

/// Cutting planes: one minimum cut per round until every cut carries at
/// least 2.
pub fn solve_subtour_lp(inst: &MetricInstance) -> Result<SubtourSolution> {
    let n = inst.n();
    if n < 3 {
        return Err(Error::precondition(format!("need at least 3 vertices, got {n}")));
    }
    let mut lp = degree_lp(inst);
    let mut sol = optimal(solve_lp(&lp)?, "subtour")?;
    let mut history = vec![sol.objective.clone()];
    let mut cut_pool = Vec::new();
    loop {
        let (s, value) = separate_min_cut(inst, &sol.values)?;
        if value >= rat::int(2) {
            break;
        }
        if s.len() < 3 || s.len() > n - 3 {
            return Err(Error::invariant(
                "subtour",
                format!("violated cut of size {} is implied by degree constraints", s.len()),
            ));
        }
        if cut_pool.contains(&s) {
            return Err(Error::invariant("subtour", format!("cut {s:?} separated twice")));
        }
        let c = cut_constraint(inst, &s);
        cut_pool.push(s);
        sol = optimal(add_constraint_and_resolve(&mut lp, &sol, c)?, "subtour")?;
        if &sol.objective < history.last().expect("nonempty") {
            return Err(Error::invariant("subtour", "objective decreased after adding a cut"));
        }
        history.push(sol.objective.clone());
    }
    Ok(SubtourSolution { n, values: sol.values, objective: sol.objective, cut_pool, history })
}

/// Every `S` containing vertex 0 with `3 <= |S| <= n - 3`, as sorted lists,
/// ordered by bit mask.
fn nontrivial_sets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (0u32..(1 << (n - 1))).filter_map(move |mask| {
        let s: Vec<usize> = std::iter::once(0).chain((1..n).filter(|&v| mask >> (v - 1) & 1 == 1)).collect();
        (s.len() >= 3 && s.len() + 3 <= n).then_some(s)
    })
}

/// One LP with every subtour constraint written out. For testing.
pub fn solve_subtour_lp_enumerated(inst: &MetricInstance) -> Result<SubtourSolution> {
    let n = inst.n();
    if !(3..=10).contains(&n) {
        return Err(Error::precondition(format!("enumerated subtour LP needs 3 <= n <= 10, got {n}")));
    }
    let mut lp: LinearProgram = degree_lp(inst);
    let sets: Vec<Vec<usize>> = nontrivial_sets(n).collect();
    for s in &sets {
        lp.add_constraint(cut_constraint(inst, s));
    }
    let sol = optimal(solve_lp(&lp)?, "subtour")?;
    Ok(SubtourSolution {
        n,
        history: vec![sol.objective.clone()],
        values: sol.values,
        objective: sol.objective,
        cut_pool: sets,
    })
}

/// Checks bounds, degrees, then every cut `δ(S)` with `0 ∈ S`, by mask order.
pub fn verify_subtour_feasible(inst: &MetricInstance, x: &[Rat]) -> Result<Option<SubtourViolation>> {
    let n = inst.n();
    if n > MAX_ENUMERATED_VERTICES {
        return Err(Error::precondition(format!(
            "cut enumeration supports at most {MAX_ENUMERATED_VERTICES} vertices, got {n}"
        )));
    }
    if x.len() != inst.num_edges() {
        return Err(Error::precondition("one value per edge expected"));
    }
    if let Some(e) = x.iter().position(|v| *v < rat::zero() || *v > rat::one()) {
        return Ok(Some(SubtourViolation::Bound { edge: e, value: x[e].clone() }));
    }
    let mut degree = vec![rat::zero(); n];
    for (&(i, j), v) in inst.edges().iter().zip(x) {
        degree[i] += v;
        degree[j] += v;
    }
    if let Some(v) = degree.iter().position(|d| *d != rat::int(2)) {
        return Ok(Some(SubtourViolation::Degree { vertex: v, value: degree[v].clone() }));
    }
    let edges: Vec<(usize, usize, Rat)> =
        inst.edges().iter().zip(x).map(|(&(i, j), v)| (i, j, v.clone())).collect();
    let two = rat::int(2);
    for mask in 0u32..(1 << (n - 1)) {
        let s: Vec<usize> = std::iter::once(0).chain((1..n).filter(|&v| mask >> (v - 1) & 1 == 1)).collect();
        if s.len() == n {
            continue;
        }
        let value = cut_value(n, &edges, &s);
        if value < two {
            return Ok(Some(SubtourViolation::Cut { set: s, value }));
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{random_metric, worst_case_family};
    use crate::rat::{int, rat};

    fn unit(n: usize) -> MetricInstance {
        MetricInstance::from_fn(n, |_, _| int(1)).unwrap()
    }

    fn two_triangles() -> (MetricInstance, Vec<Rat>) {
        let inst = MetricInstance::from_fn(6, |i, j| if (i < 3) == (j < 3) { int(1) } else { int(2) }).unwrap();
        let x = inst.edges().iter().map(|&(i, j)| if (i < 3) == (j < 3) { int(1) } else { int(0) }).collect();
        (inst, x)
    }

    #[test]
    fn triangle_value_three() {
        let s = solve_subtour_lp(&unit(3)).unwrap();
        assert_eq!(s.objective, int(3));
        assert!(s.cut_pool.is_empty());
    }

    #[test]
    fn two_triangles_violate_the_triangle_cut() {
        let (inst, x) = two_triangles();
        assert_eq!(
            verify_subtour_feasible(&inst, &x).unwrap(),
            Some(SubtourViolation::Cut { set: vec![0, 1, 2], value: int(0) })
        );
        let (s, value) = separate_min_cut(&inst, &x).unwrap();
        assert_eq!((s, value), (vec![0, 1, 2], int(0)));
        let sol = solve_subtour_lp(&inst).unwrap();
        assert_eq!(sol.cut_pool, vec![vec![0, 1, 2]]);
        assert_eq!(sol.objective, int(8));
        assert_eq!(verify_subtour_feasible(&inst, &sol.values).unwrap(), None);
    }

    #[test]
    fn hamiltonian_cycle_is_feasible() {
        let inst = unit(7);
        let x: Vec<Rat> =
            inst.edges().iter().map(|&(i, j)| if j - i == 1 || j - i == 6 { int(1) } else { int(0) }).collect();
        assert_eq!(verify_subtour_feasible(&inst, &x).unwrap(), None);
        assert_eq!(separate_min_cut(&inst, &x).unwrap().1, int(2));
    }

    #[test]
    fn family_one_bundled_point_is_optimal() {
        let (inst, x) = worst_case_family(1).unwrap();
        assert_eq!(verify_subtour_feasible(&inst, &x.values).unwrap(), None);
        let s = solve_subtour_lp(&inst).unwrap();
        assert_eq!(s.objective, int(6));
        assert_eq!(s.objective, x.objective);
    }

    #[test]
    fn small_cuts_are_implied() {
        for seed in 0..10 {
            let inst = random_metric(7, seed).unwrap();
            let sol = crate::f2m::solve_f2m(&inst).unwrap();
            let edges: Vec<(usize, usize, Rat)> =
                inst.edges().iter().zip(&sol.values).map(|(&(i, j), v)| (i, j, v.clone())).collect();
            for a in 0..7 {
                assert_eq!(cut_value(7, &edges, &[a]), int(2));
                for b in a + 1..7 {
                    assert!(cut_value(7, &edges, &[a, b]) >= int(2));
                }
            }
        }
    }

    #[test]
    fn cutting_planes_match_enumeration() {
        for seed in 0..6 {
            let n = 6 + (seed as usize % 2);
            let inst = random_metric(n, seed).unwrap();
            let a = solve_subtour_lp(&inst).unwrap();
            let b = solve_subtour_lp_enumerated(&inst).unwrap();
            assert_eq!(a.objective, b.objective, "seed {seed}");
            assert!(a.history.windows(2).all(|w| w[0] <= w[1]));
            assert_eq!(verify_subtour_feasible(&inst, &a.values).unwrap(), None);
            assert!(a.objective >= crate::f2m::solve_f2m(&inst).unwrap().objective);
        }
    }

    #[test]
    fn bound_violation_reported_first() {
        let inst = unit(4);
        let mut x = vec![int(1); 6];
        x[2] = rat(3, 2);
        assert!(matches!(verify_subtour_feasible(&inst, &x).unwrap(), Some(SubtourViolation::Bound { edge: 2, .. })));
    }
}
