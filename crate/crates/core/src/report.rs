//! Run reports: exact costs, ratios and bound checks, as JSON or CSV.
//!
//! Every pass flag compares exact rationals. The `decimal` fields are
//! annotations rendered from those rationals.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::f2m::solve_f2m;
use crate::instance::MetricInstance;
use crate::pipeline::{boydcarr, g2m109_with, g2m43_with, run_all, Applicability, GadgetRun, Pipeline};
use crate::rat::{self, Rat};
use crate::subtour::solve_subtour_lp;
use crate::twomo::{optimal_two_matching_cost_dp, PolyhedralCertificate};
use crate::Result;

pub const SCHEMA_VERSION: u32 = 1;

/// Largest instance for which reports include the exact optimal 2-matching.
pub const BRUTE_FORCE_MAX_N: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactValue {
    pub exact: String,
    pub decimal: String,
}

impl ExactValue {
    pub fn new(r: &Rat) -> Self {
        ExactValue { exact: rat::fmt_rat(r), decimal: format!("{:.9}", rat::to_f64(r)) }
    }
}

/// `value <= factor * reference`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    pub value: ExactValue,
    pub reference_name: String,
    pub reference: ExactValue,
    /// `value / reference`; absent when the reference is zero.
    pub ratio: Option<ExactValue>,
    pub factor: String,
    pub passed: bool,
}

impl BoundCheck {
    pub fn new(name: &str, value: &Rat, reference_name: &str, reference: &Rat, factor: &Rat) -> Self {
        BoundCheck {
            name: name.to_string(),
            value: ExactValue::new(value),
            reference_name: reference_name.to_string(),
            reference: ExactValue::new(reference),
            ratio: (*reference != rat::zero()).then(|| ExactValue::new(&(value / reference))),
            factor: rat::fmt_rat(factor),
            passed: *value <= factor * reference,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub digest: String,
    pub n: usize,
    pub pipeline: Pipeline,
    pub alpha: String,
    pub costs: BTreeMap<String, ExactValue>,
    pub checks: Vec<BoundCheck>,
    pub not_applicable: BTreeMap<String, String>,
    pub passed: bool,
}

#[derive(Default)]
struct Builder {
    costs: BTreeMap<String, ExactValue>,
    checks: Vec<BoundCheck>,
    not_applicable: BTreeMap<String, String>,
}

impl Builder {
    fn cost(&mut self, name: &str, r: &Rat) {
        self.costs.insert(name.to_string(), ExactValue::new(r));
    }

    fn gadget(&mut self, name: &str, run: &GadgetRun) {
        self.cost(&format!("{name}_g2m"), &run.g2m_cost);
        self.cost(&format!("{name}_shortcut_2m"), &run.two_matching_cost);
        self.checks.push(BoundCheck::new(&format!("{name}_g2m"), &run.g2m_cost, "f2m", &run.f2m_cost, &run.factor));
        self.checks.push(BoundCheck::new(
            &format!("{name}_shortcut_2m"),
            &run.two_matching_cost,
            &format!("{name}_g2m"),
            &run.g2m_cost,
            &rat::one(),
        ));
        let identities = run.components.iter().all(|c| c.identities_hold());
        self.checks.push(BoundCheck {
            name: format!("{name}_accounting_identities"),
            value: ExactValue::new(&rat::int(run.components.len() as i64)),
            reference_name: "components".into(),
            reference: ExactValue::new(&rat::int(run.components.len() as i64)),
            ratio: None,
            factor: "1".into(),
            passed: identities,
        });
    }

    fn boydcarr(&mut self, cert: &PolyhedralCertificate) {
        self.cost("subtour", &cert.subtour.objective);
        self.cost("boydcarr_2mo", &cert.twomo_cost);
        self.cost("polyhedral_g2m", &cert.g2m_cost);
        self.cost("boydcarr_shortcut_2m", &cert.two_matching_cost);
        let sub = &cert.subtour.objective;
        self.checks.push(BoundCheck::new("polyhedral_g2m", &cert.g2m_cost, "subtour", sub, &rat::rat(10, 9)));
        self.checks.push(BoundCheck::new("boydcarr_shortcut_2m", &cert.two_matching_cost, "subtour", sub, &rat::rat(10, 9)));
        self.checks.push(BoundCheck::new("boydcarr_2mo", &cert.twomo_cost, "subtour", sub, &(rat::one() + &cert.alpha)));
    }
}

/// Runs `pipeline` on `inst` and records every bound it is meant to meet.
pub fn run_report(inst: &MetricInstance, pipeline: Pipeline, alpha: &Rat) -> Result<RunReport> {
    let mut b = Builder::default();
    match pipeline {
        Pipeline::F2m => {
            let x = solve_f2m(inst)?;
            b.cost("f2m", &x.objective);
        }
        Pipeline::Subtour => {
            let x = solve_f2m(inst)?;
            let s = solve_subtour_lp(inst)?;
            b.cost("f2m", &x.objective);
            b.cost("subtour", &s.objective);
            b.checks.push(BoundCheck::new("f2m", &x.objective, "subtour", &s.objective, &rat::one()));
        }
        Pipeline::G2m43 => {
            let x = solve_f2m(inst)?;
            b.cost("f2m", &x.objective);
            b.gadget("g2m43", &g2m43_with(inst, &x)?);
        }
        Pipeline::G2m109 => {
            let x = solve_f2m(inst)?;
            b.cost("f2m", &x.objective);
            match g2m109_with(inst, &x)? {
                Applicability::Ran(run) => b.gadget("g2m109", &run),
                Applicability::NotApplicable { reason } => {
                    b.not_applicable.insert("g2m109".into(), reason);
                }
            }
        }
        Pipeline::Boydcarr => b.boydcarr(&boydcarr(inst, alpha)?),
        Pipeline::All => {
            let all = run_all(inst, alpha)?;
            b.cost("f2m", &all.f2m.objective);
            b.checks.push(BoundCheck::new("f2m", &all.f2m.objective, "subtour", &all.subtour.objective, &rat::one()));
            b.gadget("g2m43", &all.g2m43);
            match &all.g2m109 {
                Applicability::Ran(run) => b.gadget("g2m109", run),
                Applicability::NotApplicable { reason } => {
                    b.not_applicable.insert("g2m109".into(), reason.clone());
                }
            }
            b.boydcarr(&all.boydcarr);
            if inst.n() <= BRUTE_FORCE_MAX_N {
                let best = optimal_two_matching_cost_dp(inst)?;
                b.cost("brute_force_2m", &best);
                let produced = all.boydcarr.two_matching_cost.clone();
                b.checks.push(BoundCheck::new("brute_force_2m", &best, "boydcarr_shortcut_2m", &produced, &rat::one()));
                b.checks.push(BoundCheck::new(
                    "brute_force_2m_over_subtour",
                    &best,
                    "subtour",
                    &all.subtour.objective,
                    &rat::rat(10, 9),
                ));
            }
        }
    }
    let passed = b.checks.iter().all(|c| c.passed);
    Ok(RunReport {
        schema_version: SCHEMA_VERSION,
        digest: inst.digest(),
        n: inst.n(),
        pipeline,
        alpha: rat::fmt_rat(alpha),
        costs: b.costs,
        checks: b.checks,
        not_applicable: b.not_applicable,
        passed,
    })
}

pub const CSV_HEADER: &str = "digest,n,pipeline,check,value,reference_name,reference,ratio,ratio_decimal,factor,passed";

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// One row per check, without the header.
    pub fn csv_rows(&self) -> Vec<String> {
        self.checks
            .iter()
            .map(|c| {
                let (ratio, decimal) = c.ratio.as_ref().map_or((String::new(), String::new()), |r| (r.exact.clone(), r.decimal.clone()));
                format!(
                    "{},{},{},{},{},{},{},{},{},{},{}",
                    self.digest,
                    self.n,
                    self.pipeline,
                    c.name,
                    c.value.exact,
                    c.reference_name,
                    c.reference.exact,
                    ratio,
                    decimal,
                    c.factor,
                    c.passed
                )
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for row in self.csv_rows() {
            out.push_str(&row);
            out.push('\n');
        }
        out
    }
}
