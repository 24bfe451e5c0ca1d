//! End-to-end runs over generated instances.

use twomatch::f2m::{decompose, has_cut_edge, solve_f2m};
use twomatch::g2m::validate_g2m;
use twomatch::generate::{dumbbell, random_metric, worst_case_family};
use twomatch::instance::parse_instance;
use twomatch::pipeline::{g2m109_with, g2m43_with, run_all, Applicability};
use twomatch::rat::{rat, Rat};
use twomatch::report::run_report;
use twomatch::subtour::{solve_subtour_lp, verify_subtour_feasible};
use twomatch::twomo::{default_alpha, optimal_two_matching_cost_dp};

#[test]
fn instance_json_round_trips() {
    for seed in 0..5 {
        let inst = random_metric(7, seed).unwrap();
        let back = parse_instance(&inst.to_json()).unwrap();
        assert_eq!(back, inst);
        assert_eq!(back.digest(), inst.digest());
    }
}

#[test]
fn every_pipeline_on_random_metrics() {
    for seed in 0..12 {
        let inst = random_metric(6 + (seed as usize % 3), seed).unwrap();
        let all = run_all(&inst, &default_alpha()).unwrap();
        assert!(all.f2m.objective <= all.subtour.objective);
        assert!(all.g2m43.passed(), "seed {seed}");
        if let Applicability::Ran(run) = &all.g2m109 {
            assert!(run.passed(), "seed {seed}");
        }
        assert!(all.boydcarr.passed(), "seed {seed}");
        assert_eq!(validate_g2m(&all.boydcarr.g2m), None);
        assert_eq!(verify_subtour_feasible(&inst, &all.subtour.values).unwrap(), None);
        let best = optimal_two_matching_cost_dp(&inst).unwrap();
        assert!(best <= all.boydcarr.two_matching_cost);
        assert!(best <= &all.subtour.objective * rat(10, 9));
    }
}

#[test]
fn reports_are_reproducible() {
    let inst = random_metric(8, 99).unwrap();
    let a = run_report(&inst, twomatch::pipeline::Pipeline::All, &default_alpha()).unwrap();
    let b = run_report(&inst, twomatch::pipeline::Pipeline::All, &default_alpha()).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.to_csv(), b.to_csv());
    assert!(a.passed);
}

#[test]
fn bundled_family_points_have_no_cut_edge() {
    for ell in 1..=4 {
        let (inst, x) = worst_case_family(ell).unwrap();
        assert!(!has_cut_edge(&decompose(&inst, &x).unwrap()));
        let run = g2m109_with(&inst, &x).unwrap();
        let run = run.ran().expect("no cut edge");
        assert!(run.g2m_cost <= &x.objective * rat(10, 9));
    }
}

#[test]
fn dumbbells_exercise_cut_paths() {
    for (cut, lp) in [(1, 2), (1, 3), (3, 2)] {
        let (inst, x) = dumbbell(cut, lp).unwrap();
        let d = decompose(&inst, &x).unwrap();
        assert!(has_cut_edge(&d));
        let run = g2m43_with(&inst, &x).unwrap();
        assert!(run.passed());
        assert!(matches!(g2m109_with(&inst, &x).unwrap(), Applicability::NotApplicable { .. }));
    }
}

#[test]
fn subtour_is_at_least_f2m() {
    for seed in 20..30 {
        let inst = random_metric(7, seed).unwrap();
        let f: Rat = solve_f2m(&inst).unwrap().objective;
        assert!(f <= solve_subtour_lp(&inst).unwrap().objective);
    }
}
