//! Simplex against exhaustive vertex enumeration on small bounded LPs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twomatch::lp::{add_constraint_and_resolve, solve_lp, Constraint, LinearProgram, LpStatus, Relation};
use twomatch::rat::{int, rat, zero};
use twomatch::Rat;

/// Hyperplane `a·x = b`.
type Row = (Vec<Rat>, Rat);

fn solve_square(rows: &[Row]) -> Option<Vec<Rat>> {
    let n = rows.len();
    let mut m: Vec<Vec<Rat>> = rows.iter().map(|(a, b)| a.iter().cloned().chain([b.clone()]).collect()).collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| m[r][col] != zero())?;
        m.swap(col, piv);
        let p = m[col][col].clone();
        for v in m[col].iter_mut() {
            *v = &*v / &p;
        }
        for r in 0..n {
            if r != col && m[r][col] != zero() {
                let f = m[r][col].clone();
                for c in 0..=n {
                    let d = &f * &m[col][c];
                    m[r][c] -= d;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

fn subsets(k: usize, n: usize, start: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if cur.len() == k {
        out.push(cur.clone());
        return;
    }
    for i in start..n {
        cur.push(i);
        subsets(k, n, i + 1, cur, out);
        cur.pop();
    }
}

/// Minimum over all basic feasible points; `None` if there is none. Every
/// variable must be bounded on both sides.
fn enumerate_vertices(lp: &LinearProgram) -> Option<Rat> {
    let n = lp.num_vars();
    let mut planes: Vec<Row> = Vec::new();
    for c in lp.constraints() {
        let mut a = vec![zero(); n];
        for (j, v) in &c.coeffs {
            a[*j] += v;
        }
        planes.push((a, c.rhs.clone()));
    }
    for (j, v) in lp.vars().iter().enumerate() {
        let mut a = vec![zero(); n];
        a[j] = int(1);
        planes.push((a.clone(), v.lower.clone()));
        planes.push((a, v.upper.clone().expect("bounded")));
    }
    let mut picks = Vec::new();
    subsets(n, planes.len(), 0, &mut Vec::new(), &mut picks);
    picks
        .into_iter()
        .filter_map(|pick| {
            let rows: Vec<Row> = pick.iter().map(|&i| planes[i].clone()).collect();
            solve_square(&rows)
        })
        .filter(|x| lp.is_feasible(x))
        .map(|x| lp.objective_value(&x))
        .min()
}

fn random_lp(rng: &mut ChaCha8Rng) -> LinearProgram {
    let mut lp = LinearProgram::new();
    let nv = rng.gen_range(1..=5);
    for _ in 0..nv {
        let lo = rng.gen_range(-3..=1);
        let hi = lo + rng.gen_range(0..=4);
        lp.add_var(int(lo), Some(int(hi)), rat(rng.gen_range(-6..=6), rng.gen_range(1..=3)));
    }
    for _ in 0..rng.gen_range(0..=4) {
        let mut coeffs = Vec::new();
        for j in 0..nv {
            if rng.gen_bool(0.7) {
                coeffs.push((j, rat(rng.gen_range(-4..=4), rng.gen_range(1..=2))));
            }
        }
        let relation = [Relation::Le, Relation::Ge, Relation::Eq][rng.gen_range(0..3)];
        lp.add_constraint(Constraint::new(coeffs, relation, int(rng.gen_range(-4..=6))));
    }
    lp
}

#[test]
fn simplex_matches_vertex_enumeration() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut optimal, mut infeasible) = (0, 0);
    for round in 0..400 {
        let lp = random_lp(&mut rng);
        let sol = solve_lp(&lp).unwrap();
        match enumerate_vertices(&lp) {
            Some(best) => {
                assert_eq!(sol.status, LpStatus::Optimal, "round {round}");
                assert_eq!(sol.objective, best, "round {round}");
                assert!(lp.is_feasible(&sol.values));
                let dual = sol.duals.as_ref().unwrap().verify(&lp).unwrap();
                assert_eq!(dual, sol.objective, "round {round}");
                optimal += 1;
            }
            None => {
                assert_eq!(sol.status, LpStatus::Infeasible, "round {round}");
                infeasible += 1;
            }
        }
    }
    assert!(optimal > 100 && infeasible > 10, "{optimal} optimal, {infeasible} infeasible");
}

#[test]
fn resolve_equals_cold_solve() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    for _ in 0..200 {
        let mut lp = random_lp(&mut rng);
        let first = solve_lp(&lp).unwrap();
        if !first.is_optimal() {
            continue;
        }
        let nv = lp.num_vars();
        let coeffs: Vec<(usize, Rat)> = (0..nv).map(|j| (j, int(rng.gen_range(-2..=2)))).collect();
        let cut = Constraint::new(coeffs, Relation::Le, int(rng.gen_range(-2..=3)));
        let mut cold = lp.clone();
        cold.add_constraint(cut.clone());
        let warm = add_constraint_and_resolve(&mut lp, &first, cut).unwrap();
        let cold = solve_lp(&cold).unwrap();
        assert_eq!(warm.status, cold.status);
        if warm.is_optimal() {
            assert_eq!(warm.objective, cold.objective);
            assert!(warm.objective >= first.objective);
        }
        checked += 1;
    }
    assert!(checked > 50);
}
