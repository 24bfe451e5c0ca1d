//! Randomized verification suites behind `twomatch verify`.

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::generate::{random_cubic_bridgeless, random_metric, random_multigraph, worst_case_family};
use crate::matching::{
    brute_force_perfect_matching, check_matching_polytope_by_separation, check_matching_polytope_point,
    min_cost_perfect_matching, np_bound_check, FractionalMatchingPoint,
};
use crate::mincut::{cut_value, stoer_wagner};
use crate::pipeline::{g2m109_with, g2m43_with};
use crate::rat::{self, Rat};
use crate::report::ExactValue;
use crate::subtour::{solve_subtour_lp, solve_subtour_lp_enumerated};
use crate::twomo::{
    check_2mo_polytope, g2m_from_subtour_solution, map_point_to_matching_polytope, map_subtour_to_2mo,
    optimal_two_matching, reduce_2mo_to_matching, split_graph,
};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Oracles,
    Polytopes,
    Ratios,
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "oracles" => Ok(Suite::Oracles),
            "polytopes" => Ok(Suite::Polytopes),
            "ratios" => Ok(Suite::Ratios),
            other => Err(Error::Validation(format!("unknown suite {other:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub alpha: Rat,
    /// Worst-case family lengths `1..=ell` to tabulate in the ratios suite.
    pub ell: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteLine {
    pub check: String,
    pub passed: usize,
    pub total: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub check: String,
    pub seed: u64,
    pub detail: String,
}

/// One row of the worst-case family table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyRow {
    pub ell: usize,
    pub n: usize,
    pub f2m: ExactValue,
    pub subtour: ExactValue,
    pub optimal_2m: ExactValue,
    /// Optimal 2-matching over subtour value.
    pub ratio: ExactValue,
    pub g2m109: Option<ExactValue>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub suite: Suite,
    pub n: usize,
    pub trials: usize,
    pub seed: u64,
    pub lines: Vec<SuiteLine>,
    pub counterexamples: Vec<Counterexample>,
    pub family: Vec<FamilyRow>,
    pub passed: bool,
}

impl SuiteSummary {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("check,passed,total\n");
        for l in &self.lines {
            out.push_str(&format!("{},{},{}\n", l.check, l.passed, l.total));
        }
        if !self.family.is_empty() {
            out.push_str("\nell,n,f2m,subtour,optimal_2m,ratio,ratio_decimal,g2m109\n");
            for r in &self.family {
                out.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    r.ell,
                    r.n,
                    r.f2m.exact,
                    r.subtour.exact,
                    r.optimal_2m.exact,
                    r.ratio.exact,
                    r.ratio.decimal,
                    r.g2m109.as_ref().map_or(String::new(), |v| v.exact.clone())
                ));
            }
        }
        out
    }
}

#[derive(Default)]
struct Tally {
    lines: Vec<SuiteLine>,
    counterexamples: Vec<Counterexample>,
}

impl Tally {
    fn record(&mut self, check: &str, seed: u64, outcome: Result<Option<String>>) {
        let pos = match self.lines.iter().position(|l| l.check == check) {
            Some(p) => p,
            None => {
                self.lines.push(SuiteLine { check: check.to_string(), passed: 0, total: 0 });
                self.lines.len() - 1
            }
        };
        self.lines[pos].total += 1;
        let failure = match outcome {
            Ok(None) => None,
            Ok(Some(detail)) => Some(detail),
            Err(e) => Some(format!("error: {e}")),
        };
        match failure {
            None => self.lines[pos].passed += 1,
            Some(detail) => self.counterexamples.push(Counterexample { check: check.to_string(), seed, detail }),
        }
    }
}

fn oracle_blossom(n: usize, seed: u64) -> Result<Option<String>> {
    let g = random_multigraph(n, seed);
    Ok(match (min_cost_perfect_matching(&g), brute_force_perfect_matching(&g)) {
        (Ok(a), Ok(b)) if a.cost == b.cost => None,
        (Err(Error::NoPerfectMatching { .. }), Err(Error::NoPerfectMatching { .. })) => None,
        (a, b) => Some(format!("blossom {:?} vs brute force {:?}", a.map(|m| m.cost), b.map(|m| m.cost))),
    })
}

fn oracle_mincut(n: usize, seed: u64) -> Result<Option<String>> {
    let g = random_multigraph(n, seed);
    let edges: Vec<(usize, usize, Rat)> = g.edges().iter().map(|e| (e.u, e.v, rat::rat(1, 1) + e.cost.abs())).collect();
    let (_, value) = stoer_wagner(n, &edges);
    let best = (1u32..1 << (n - 1))
        .map(|mask| {
            let s: Vec<usize> = (1..n).filter(|&v| mask >> (v - 1) & 1 == 1).collect();
            cut_value(n, &edges, &s)
        })
        .min()
        .expect("n >= 2");
    Ok((value != best).then(|| format!("Stoer-Wagner {value} vs exhaustive {best}")))
}

fn oracle_subtour(n: usize, seed: u64) -> Result<Option<String>> {
    let inst = random_metric(n, seed)?;
    let a = solve_subtour_lp(&inst)?;
    let b = solve_subtour_lp_enumerated(&inst)?;
    Ok((a.objective != b.objective).then(|| format!("cutting planes {} vs enumerated {}", a.objective, b.objective)))
}

fn polytope_twomo_image(n: usize, seed: u64, alpha: &Rat) -> Result<Option<String>> {
    let inst = random_metric(n, seed)?;
    let x = solve_subtour_lp(&inst)?;
    let split = split_graph(&inst);
    let y = map_subtour_to_2mo(&x.values, alpha);
    Ok(check_2mo_polytope(&split, &y)?.map(|v| format!("{v:?}")))
}

fn polytope_matching_image(n: usize, seed: u64, alpha: &Rat) -> Result<Option<String>> {
    let inst = random_metric(n, seed)?;
    let x = solve_subtour_lp(&inst)?;
    let split = split_graph(&inst);
    let y = map_subtour_to_2mo(&x.values, alpha);
    let red = reduce_2mo_to_matching(&split);
    let p = map_point_to_matching_polytope(&red, &split, &y)?;
    Ok(check_matching_polytope_by_separation(&red.graph, &p)?.map(|v| format!("{v:?}")))
}

fn polytope_third_point(n: usize, seed: u64) -> Result<Option<String>> {
    let g = random_cubic_bridgeless(n, seed)?;
    let (m, ok) = np_bound_check(&g)?;
    if !ok {
        return Ok(Some(format!("matching cost {} above a third of {}", m.cost, g.total_cost())));
    }
    let x = FractionalMatchingPoint::constant(&g, rat::rat(1, 3));
    Ok(check_matching_polytope_point(&g, &x)?.map(|v| format!("{v:?}")))
}

fn ratio_boydcarr(n: usize, seed: u64, alpha: &Rat) -> Result<Option<String>> {
    let inst = random_metric(n, seed)?;
    let cert = g2m_from_subtour_solution(&inst, solve_subtour_lp(&inst)?, alpha)?;
    Ok((!cert.g2m_within_bound || !cert.two_matching_within_g2m)
        .then(|| format!("G2M {} / 2M {} against bound {}", cert.g2m_cost, cert.two_matching_cost, cert.bound)))
}

fn ratio_g2m43(n: usize, seed: u64) -> Result<Option<String>> {
    let inst = random_metric(n, seed)?;
    let run = g2m43_with(&inst, &crate::f2m::solve_f2m(&inst)?)?;
    Ok((!run.passed()).then(|| format!("G2M {} against bound {}", run.g2m_cost, run.bound)))
}

fn ratio_g2m109(n: usize, seed: u64) -> Result<Option<String>> {
    let inst = random_metric(n, seed)?;
    Ok(g2m109_with(&inst, &crate::f2m::solve_f2m(&inst)?)?
        .ran()
        .filter(|run| !run.passed())
        .map(|run| format!("G2M {} against bound {}", run.g2m_cost, run.bound)))
}

/// Optimal 2-matching against the subtour value on the worst-case family.
pub fn family_table(max_ell: usize) -> Result<Vec<FamilyRow>> {
    (1..=max_ell)
        .map(|ell| {
            let (inst, x) = worst_case_family(ell)?;
            let subtour = solve_subtour_lp(&inst)?;
            let best = optimal_two_matching(&inst)?.cost(&inst);
            let g2m109 = g2m109_with(&inst, &x)?.ran().map(|r| ExactValue::new(&r.g2m_cost));
            Ok(FamilyRow {
                ell,
                n: inst.n(),
                f2m: ExactValue::new(&x.objective),
                ratio: ExactValue::new(&(&best / &subtour.objective)),
                subtour: ExactValue::new(&subtour.objective),
                optimal_2m: ExactValue::new(&best),
                g2m109,
            })
        })
        .collect()
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> Result<SuiteSummary> {
    let n = cfg.n;
    let mut t = Tally::default();
    let mut family = Vec::new();
    let seeds = (0..cfg.trials as u64).map(|k| cfg.seed.wrapping_add(k));
    match suite {
        Suite::Oracles => {
            if !(2..=14).contains(&n) {
                return Err(Error::precondition(format!("oracles suite needs 2 <= n <= 14, got {n}")));
            }
            for s in seeds {
                t.record("blossom=bruteforce", s, oracle_blossom(n, s));
                if n <= 12 {
                    t.record("stoer-wagner=exhaustive", s, oracle_mincut(n, s));
                }
                if (3..=8).contains(&n) {
                    t.record("cutting-planes=enumerated-lp", s, oracle_subtour(n, s));
                }
            }
        }
        Suite::Polytopes => {
            if !(3..=8).contains(&n) {
                return Err(Error::precondition(format!("polytopes suite needs 3 <= n <= 8, got {n}")));
            }
            for s in seeds {
                t.record("2mo-membership", s, polytope_twomo_image(n, s, &cfg.alpha));
                t.record("matching-image-membership", s, polytope_matching_image(n, s, &cfg.alpha));
                t.record("third-point-membership", s, polytope_third_point(2 * n.div_ceil(2), s));
            }
        }
        Suite::Ratios => {
            if n < 3 {
                return Err(Error::precondition(format!("ratios suite needs n >= 3, got {n}")));
            }
            for s in seeds {
                t.record("boydcarr<=10/9", s, ratio_boydcarr(n, s, &cfg.alpha));
                t.record("g2m43<=4/3", s, ratio_g2m43(n, s));
                t.record("g2m109<=10/9", s, ratio_g2m109(n, s));
            }
            if let Some(ell) = cfg.ell {
                family = family_table(ell)?;
            }
        }
    }
    let passed = t.counterexamples.is_empty();
    Ok(SuiteSummary {
        suite,
        n,
        trials: cfg.trials,
        seed: cfg.seed,
        lines: t.lines,
        counterexamples: t.counterexamples,
        family,
        passed,
    })
}
