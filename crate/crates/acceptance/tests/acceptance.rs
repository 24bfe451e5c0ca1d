//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Every comparison is an exact rational inequality; the tolerance is zero
//! throughout. Criterion 7's monotonicity clause fails on the family as
//! constructed (see README), and is reported rather than suppressed.

use std::time::Instant;

use twomatch::f2m::{decompose, has_cut_edge, solve_f2m};
use twomatch::generate::{dumbbell, random_cubic_bridgeless, random_metric, random_multigraph, worst_case_family};
use twomatch::matching::{
    brute_force_perfect_matching, check_matching_polytope_point, min_cost_perfect_matching, np_bound_check,
    FractionalMatchingPoint,
};
use twomatch::pipeline::{g2m109_with, g2m43_with, Applicability, GadgetRun};
use twomatch::rat::{fmt_rat, rat, Rat};
use twomatch::subtour::{solve_subtour_lp, solve_subtour_lp_enumerated};
use twomatch::twomo::{
    check_2mo_polytope_exhaustive, default_alpha, g2m_from_subtour_solution, map_subtour_to_2mo,
    optimal_two_matching, split_graph,
};
use twomatch::{Error, Result};

/// Slack allowed in every bound check.
fn tolerance() -> Rat {
    rat(0, 1)
}

/// Optimal 2-matching over subtour value for ell = 1..=5, pinned after the
/// first exact computation.
fn pinned_family_ratios() -> Vec<Rat> {
    vec![rat(1, 1), rat(10, 9), rat(13, 12), rat(16, 15), rat(19, 18)]
}

fn within(value: &Rat, factor: Rat, reference: &Rat) -> bool {
    *value <= factor * reference + tolerance()
}

struct Outcome {
    id: &'static str,
    passed: bool,
}

struct Suite {
    outcomes: Vec<Outcome>,
    gadget_runs: Vec<GadgetRun>,
}

impl Suite {
    fn record(&mut self, id: &'static str, started: Instant, result: Result<(bool, String)>) {
        let (passed, detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
        let detail = format!("{detail} [{:.1}s]", started.elapsed().as_secs_f64());
        println!("{} criterion {id}: {detail}", if passed { "PASS" } else { "FAIL" });
        self.outcomes.push(Outcome { id, passed });
    }
}

/// `(n, seed)` for the shared random metric set.
fn random_set() -> Vec<(usize, u64)> {
    (0..50u64).map(|k| (5 + (k % 5) as usize, 1000 + k)).collect()
}

fn polyhedral_ten_ninths() -> Result<(bool, String)> {
    let mut worst = rat(0, 1);
    let mut ok = 0;
    for (n, seed) in random_set() {
        let inst = random_metric(n, seed)?;
        let sub = solve_subtour_lp(&inst)?;
        let obj = sub.objective.clone();
        let cert = g2m_from_subtour_solution(&inst, sub, &default_alpha())?;
        let pass = within(&cert.g2m_cost, rat(10, 9), &obj) && within(&cert.two_matching_cost, rat(10, 9), &obj);
        ok += pass as usize;
        worst = worst.max(&cert.g2m_cost / &obj);
    }
    Ok((ok == 50, format!("{ok}/50 within 10/9 of subtour; worst G2M ratio {}", fmt_rat(&worst))))
}

fn four_thirds(suite: &mut Suite) -> Result<(bool, String)> {
    let mut cases = Vec::new();
    for (n, seed) in random_set() {
        let inst = random_metric(n, seed)?;
        let x = solve_f2m(&inst)?;
        cases.push((inst, x));
    }
    for (cut, lp) in [(1, 2), (1, 3), (2, 2), (3, 2), (2, 4)] {
        cases.push(dumbbell(cut, lp)?);
    }
    for ell in 1..=6 {
        cases.push(worst_case_family(ell)?);
    }
    let (mut ok, mut with_cut) = (0, 0);
    for (inst, x) in &cases {
        with_cut += has_cut_edge(&decompose(inst, x)?) as usize;
        let run = g2m43_with(inst, x)?;
        ok += (within(&run.g2m_cost, rat(4, 3), &run.f2m_cost) && run.two_matching_cost <= run.g2m_cost) as usize;
        suite.gadget_runs.push(run);
    }
    let total = cases.len();
    Ok((ok == total && with_cut >= 5, format!("{ok}/{total} within 4/3 of F2M; {with_cut} with cut paths")))
}

fn ten_ninths(suite: &mut Suite) -> Result<(bool, String)> {
    let mut cases = Vec::new();
    for (n, seed) in random_set() {
        let inst = random_metric(n, seed)?;
        let x = solve_f2m(&inst)?;
        cases.push((inst, x));
    }
    for ell in 1..=6 {
        cases.push(worst_case_family(ell)?);
    }
    cases.push(dumbbell(1, 2)?);
    let (mut ran, mut ok, mut family) = (0, 0, 0);
    for (k, (inst, x)) in cases.iter().enumerate() {
        let cut = has_cut_edge(&decompose(inst, x)?);
        match g2m109_with(inst, x)? {
            Applicability::Ran(run) => {
                if cut {
                    return Ok((false, format!("case {k} ran despite a cut edge")));
                }
                ran += 1;
                family += (50..56).contains(&k) as usize;
                ok += (within(&run.g2m_cost, rat(10, 9), &run.f2m_cost) && run.two_matching_cost <= run.g2m_cost) as usize;
                suite.gadget_runs.push(run);
            }
            Applicability::NotApplicable { .. } if cut => {}
            Applicability::NotApplicable { reason } => return Ok((false, format!("case {k} refused: {reason}"))),
        }
    }
    Ok((ok == ran && family == 6, format!("{ok}/{ran} cut-free F2Ms within 10/9, family ell 1..6 included")))
}

fn third_point_bound() -> Result<(bool, String)> {
    let (mut ok, mut mixed) = (0, 0);
    let total = 120;
    for k in 0..total {
        let n = 4 + 2 * (k % 6);
        let g = random_cubic_bridgeless(n, 500 + k as u64)?;
        let zero = rat(0, 1);
        mixed += (g.edges().iter().any(|e| e.cost < zero) && g.edges().iter().any(|e| e.cost > zero)) as usize;
        let (_, bound) = np_bound_check(&g)?;
        let x = FractionalMatchingPoint::constant(&g, rat(1, 3));
        let member = check_matching_polytope_point(&g, &x)?.is_none();
        ok += (bound && member) as usize;
    }
    Ok((ok == total, format!("{ok}/{total} cubic graphs (4..14 vertices, {mixed} with mixed signs)")))
}

fn oracle_equivalence() -> Result<(bool, String)> {
    let (mut ok, mut matched) = (0, 0);
    let total = 220;
    for k in 0..total {
        let n = 2 + k % 11;
        let g = random_multigraph(n, 7000 + k as u64);
        let agree = match (min_cost_perfect_matching(&g), brute_force_perfect_matching(&g)) {
            (Ok(a), Ok(b)) => {
                matched += 1;
                a.cost == b.cost
            }
            (Err(Error::NoPerfectMatching { .. }), Err(Error::NoPerfectMatching { .. })) => true,
            _ => false,
        };
        ok += agree as usize;
    }
    Ok((ok == total, format!("{ok}/{total} multigraphs (2..12 vertices, {matched} with a perfect matching)")))
}

fn twomo_membership() -> Result<(bool, String)> {
    let (mut ok, total) = (0, 24);
    for k in 0..total {
        let n = 3 + k % 4;
        let inst = random_metric(n, 300 + k as u64)?;
        let x = solve_subtour_lp(&inst)?;
        let y = map_subtour_to_2mo(&x.values, &default_alpha());
        ok += check_2mo_polytope_exhaustive(&split_graph(&inst), &y)?.is_none() as usize;
    }
    Ok((ok == total, format!("{ok}/{total} alpha=1/9 images pass full enumeration (n 3..6)")))
}

fn family_ratios() -> Result<Vec<Rat>> {
    (1..=5)
        .map(|ell| {
            let (inst, _) = worst_case_family(ell)?;
            let best = optimal_two_matching(&inst)?.cost(&inst);
            Ok(best / solve_subtour_lp(&inst)?.objective)
        })
        .collect()
}

fn cutting_planes() -> Result<(bool, String)> {
    let (mut ok, mut cut_runs, total) = (0, 0, 35);
    for k in 0..total {
        let n = 4 + k % 5;
        let inst = random_metric(n, 900 + k as u64)?;
        let a = solve_subtour_lp(&inst)?;
        let b = solve_subtour_lp_enumerated(&inst)?;
        cut_runs += !a.cut_pool.is_empty() as usize;
        ok += (a.objective == b.objective) as usize;
    }
    Ok((ok == total, format!("{ok}/{total} equal to the full LP (n 4..8, {cut_runs} needed cuts)")))
}

fn accounting(suite: &Suite) -> (bool, String) {
    let comps: Vec<_> = suite.gadget_runs.iter().flat_map(|r| &r.components).collect();
    let bad = comps
        .iter()
        .filter(|c| !(c.identities_hold() && c.pattern_pairs_nonnegative && c.matching_bound))
        .count();
    let point = comps.iter().filter(|c| c.point_cost_identity.is_some()).count();
    (
        bad == 0 && !comps.is_empty(),
        format!("{} gadget graphs from {} runs, {point} with the 1/9 point, {bad} violations", comps.len(), suite.gadget_runs.len()),
    )
}

fn main() {
    let mut suite = Suite { outcomes: Vec::new(), gadget_runs: Vec::new() };

    let t = Instant::now();
    suite.record("1", t, polyhedral_ten_ninths());

    let t = Instant::now();
    let r = four_thirds(&mut suite);
    suite.record("2", t, r);

    let t = Instant::now();
    let r = ten_ninths(&mut suite);
    suite.record("3", t, r);

    let t = Instant::now();
    suite.record("4", t, third_point_bound());

    let t = Instant::now();
    suite.record("5", t, oracle_equivalence());

    let t = Instant::now();
    suite.record("6", t, twomo_membership());

    let t = Instant::now();
    match family_ratios() {
        Ok(ratios) => {
            let shown: Vec<String> = ratios.iter().map(fmt_rat).collect();
            let shown = shown.join(", ");
            let bound = ratios.iter().all(|r| within(r, rat(10, 9), &rat(1, 1)));
            suite.record("7 (<= 10/9)", t, Ok((bound, format!("ratios {shown}"))));
            let pinned = ratios == pinned_family_ratios();
            suite.record("7 (pinned)", t, Ok((pinned, format!("ratios {shown}"))));
            let monotone = ratios.windows(2).all(|w| w[0] <= w[1]);
            suite.record("7 (monotone)", t, Ok((monotone, format!("ratios {shown}; peak at ell=2"))));
        }
        Err(e) => suite.record("7", t, Err(e)),
    }

    let t = Instant::now();
    suite.record("8", t, cutting_planes());

    let t = Instant::now();
    let (passed, detail) = accounting(&suite);
    suite.record("9", t, Ok((passed, detail)));

    let failed: Vec<&str> = suite.outcomes.iter().filter(|o| !o.passed).map(|o| o.id).collect();
    println!(
        "acceptance: {}/{} passed{}",
        suite.outcomes.len() - failed.len(),
        suite.outcomes.len(),
        if failed.is_empty() { String::new() } else { format!("; failing: {}", failed.join(", ")) }
    );
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
