//! End-to-end runs from an instance to a graphical 2-matching, each with an
//! exact record of the quantities its bound depends on.

use serde::{Deserialize, Serialize};

use crate::f2m::{decompose, has_cut_edge, solve_f2m, ComponentKind, F2MDecomposition, FractionalTwoMatching};
use crate::g2m::{shortcut, validate_g2m, GraphicalTwoMatching, TwoMatching};
use crate::gadgets::{
    build_all_path_gadgets, build_cutpath_gadgets, decode_g2m, feasible_point_109, normalize_matching, Construction,
    GadgetGraph, NormalizeMode, Provenance,
};
use crate::instance::MetricInstance;
use crate::matching::min_cost_perfect_matching;
use crate::rat::{self, Rat};
use crate::subtour::{solve_subtour_lp, SubtourSolution};
use crate::twomo::{g2m_from_subtour_solution, PolyhedralCertificate};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pipeline {
    F2m,
    Subtour,
    G2m43,
    G2m109,
    Boydcarr,
    All,
}

impl std::str::FromStr for Pipeline {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "f2m" => Pipeline::F2m,
            "subtour" => Pipeline::Subtour,
            "g2m43" => Pipeline::G2m43,
            "g2m109" => Pipeline::G2m109,
            "boydcarr" => Pipeline::Boydcarr,
            "all" => Pipeline::All,
            other => return Err(Error::Validation(format!("unknown pipeline {other:?}"))),
        })
    }
}

impl std::fmt::Display for Pipeline {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Pipeline::F2m => "f2m",
            Pipeline::Subtour => "subtour",
            Pipeline::G2m43 => "g2m43",
            Pipeline::G2m109 => "g2m109",
            Pipeline::Boydcarr => "boydcarr",
            Pipeline::All => "all",
        };
        f.write_str(s)
    }
}

/// Accounting for one fractional component's gadget graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentRecord {
    pub construction: Construction,
    pub vertices: usize,
    pub gadget_vertices: usize,
    pub gadgets: usize,
    #[serde(with = "rat::pair")]
    pub x_cost: Rat,
    #[serde(with = "rat::pair")]
    pub total_cost: Rat,
    #[serde(with = "rat::pair")]
    pub matching_cost: Rat,
    #[serde(with = "rat::pair")]
    pub g2m_cost: Rat,
    /// `G'` costs what the construction's formula says.
    pub total_cost_identity: bool,
    /// Pattern edges of each gadget sum to `4P` (cut-path gadgets) or `P` (all-path gadgets).
    pub pattern_sum_identity: bool,
    /// Every two patterns of a gadget have nonnegative summed signed cost. Guaranteed only for nonnegative costs.
    pub pattern_pairs_nonnegative: bool,
    /// The 1/9 point costs `P/9 - 4C/9`; all-path gadgets only.
    pub point_cost_identity: Option<bool>,
    /// Matching cost at most a third of `G'` (cut-path) or at most the 1/9 point's cost (all-path).
    pub matching_bound: bool,
}

impl ComponentRecord {
    pub fn identities_hold(&self) -> bool {
        self.total_cost_identity && self.pattern_sum_identity && self.point_cost_identity.unwrap_or(true)
    }
}

/// Result of the 4/3 or 10/9 construction on a whole instance.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetRun {
    pub construction: Construction,
    #[serde(with = "rat::pair")]
    pub f2m_cost: Rat,
    pub components: Vec<ComponentRecord>,
    pub g2m: GraphicalTwoMatching,
    #[serde(with = "rat::pair")]
    pub g2m_cost: Rat,
    pub two_matching: TwoMatching,
    #[serde(with = "rat::pair")]
    pub two_matching_cost: Rat,
    #[serde(with = "rat::pair")]
    pub factor: Rat,
    #[serde(with = "rat::pair")]
    pub bound: Rat,
    pub within_bound: bool,
}

impl GadgetRun {
    pub fn passed(&self) -> bool {
        self.within_bound && self.two_matching_cost <= self.g2m_cost && self.components.iter().all(|c| c.identities_hold())
    }
}

fn pattern_records(gg: &GadgetGraph, decomp_paths: &[crate::f2m::Path]) -> (bool, bool) {
    let mut sums = true;
    let mut pairs = true;
    for gadget in &gg.gadgets {
        let p = &decomp_paths[gadget.path].cost;
        let total = rat::sum(gadget.pattern_edges.iter().map(|&e| &gg.graph.edge(e).cost));
        let want = match gg.construction {
            Construction::CutPathGadgets => p * rat::int(4),
            _ => p.clone(),
        };
        sums &= total == want;
        for a in 0..3 {
            for b in a + 1..3 {
                pairs &= &gadget.patterns[a].signed_cost + &gadget.patterns[b].signed_cost >= rat::zero();
            }
        }
    }
    (sums, pairs)
}

fn integer_part(inst: &MetricInstance, decomp: &F2MDecomposition) -> GraphicalTwoMatching {
    let mut g = GraphicalTwoMatching::empty(inst.n(), Vec::new());
    for comp in decomp.components.iter().filter(|c| c.kind == ComponentKind::Integer) {
        let mut part = GraphicalTwoMatching::empty(inst.n(), comp.vertices.clone());
        for e in comp.cycle_edge_ids(inst) {
            let (i, j) = inst.endpoints(e);
            part.add(i, j, 1);
        }
        g.merge(&part);
    }
    g
}

fn run_gadgets(inst: &MetricInstance, x: &FractionalTwoMatching, construction: Construction) -> Result<GadgetRun> {
    let decomp = decompose(inst, x)?;
    let mut g2m = integer_part(inst, &decomp);
    let mut components = Vec::new();
    for comp in decomp.fractional() {
        let gg = match construction {
            Construction::CutPathGadgets => build_cutpath_gadgets(inst, comp)?,
            Construction::AllPathGadgets => build_all_path_gadgets(inst, comp)?,
            Construction::Contracted => return Err(Error::precondition("contracted graphs are not a pipeline")),
        };
        let raw = min_cost_perfect_matching(&gg.graph).map_err(|e| Error::invariant("gadget-matching", e.to_string()))?;
        let mode = match construction {
            Construction::CutPathGadgets => NormalizeMode::ExactlyOne,
            _ => NormalizeMode::ZeroOrOne,
        };
        let m = normalize_matching(&gg, &raw, mode)?;
        if m.cost > raw.cost {
            return Err(Error::invariant("normalize", "normalization raised the matching cost"));
        }
        let part = decode_g2m(&gg, &m, comp, inst)?;
        let total_cost = gg.graph.total_cost();
        let (pattern_sum_identity, pattern_pairs_nonnegative) = pattern_records(&gg, &comp.paths);
        let (point_cost_identity, matching_bound) = match construction {
            Construction::AllPathGadgets => {
                let point = feasible_point_109(&gg);
                let ok = point.is_ok();
                let bound = point.map(|p| m.cost <= p.cost(&gg.graph)).unwrap_or(false);
                (Some(ok), bound)
            }
            _ => (None, &m.cost * rat::int(3) <= total_cost),
        };
        debug_assert!(gg.provenance.iter().any(|p| matches!(p, Provenance::Cycle { .. })));
        components.push(ComponentRecord {
            construction,
            vertices: comp.vertices.len(),
            gadget_vertices: gg.graph.num_vertices(),
            gadgets: gg.gadgets.len(),
            x_cost: comp.x_cost(inst),
            total_cost_identity: total_cost == gg.expected_total_cost(),
            total_cost,
            matching_cost: m.cost.clone(),
            g2m_cost: part.cost(inst),
            pattern_sum_identity,
            pattern_pairs_nonnegative,
            point_cost_identity,
            matching_bound,
        });
        g2m.merge(&part);
    }
    if let Some(v) = validate_g2m(&g2m) {
        return Err(Error::invariant("pipeline", format!("merged G2M is invalid: {v:?}")));
    }
    let factor = match construction {
        Construction::CutPathGadgets => rat::rat(4, 3),
        _ => rat::rat(10, 9),
    };
    let g2m_cost = g2m.cost(inst);
    let bound = &factor * &x.objective;
    let two_matching = shortcut(&g2m, inst)?;
    let two_matching_cost = two_matching.cost(inst);
    Ok(GadgetRun {
        construction,
        f2m_cost: x.objective.clone(),
        components,
        within_bound: g2m_cost <= bound,
        g2m,
        g2m_cost,
        two_matching,
        two_matching_cost,
        factor,
        bound,
    })
}

/// The 4/3 construction on a given fractional 2-matching.
pub fn g2m43_with(inst: &MetricInstance, x: &FractionalTwoMatching) -> Result<GadgetRun> {
    run_gadgets(inst, x, Construction::CutPathGadgets)
}

/// The 4/3 construction on the LP optimum.
pub fn g2m43(inst: &MetricInstance) -> Result<GadgetRun> {
    g2m43_with(inst, &solve_f2m(inst)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Applicability<T> {
    Ran(T),
    NotApplicable { reason: String },
}

impl<T> Applicability<T> {
    pub fn ran(&self) -> Option<&T> {
        match self {
            Applicability::Ran(t) => Some(t),
            Applicability::NotApplicable { .. } => None,
        }
    }
}

/// The 10/9 construction on a given fractional 2-matching, skipped when it
/// has a cut edge.
pub fn g2m109_with(inst: &MetricInstance, x: &FractionalTwoMatching) -> Result<Applicability<GadgetRun>> {
    let decomp = decompose(inst, x)?;
    if has_cut_edge(&decomp) {
        return Ok(Applicability::NotApplicable { reason: "the fractional 2-matching has a cut edge".into() });
    }
    run_gadgets(inst, x, Construction::AllPathGadgets).map(Applicability::Ran)
}

pub fn g2m109(inst: &MetricInstance) -> Result<Applicability<GadgetRun>> {
    g2m109_with(inst, &solve_f2m(inst)?)
}

/// Subtour LP, then the 2MO route at the given `alpha`.
pub fn boydcarr(inst: &MetricInstance, alpha: &Rat) -> Result<PolyhedralCertificate> {
    g2m_from_subtour_solution(inst, solve_subtour_lp(inst)?, alpha)
}

/// Everything the `all` pipeline computes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AllRuns {
    pub f2m: FractionalTwoMatching,
    pub subtour: SubtourSolution,
    pub g2m43: GadgetRun,
    pub g2m109: Applicability<GadgetRun>,
    pub boydcarr: PolyhedralCertificate,
}

pub fn run_all(inst: &MetricInstance, alpha: &Rat) -> Result<AllRuns> {
    let f2m = solve_f2m(inst)?;
    let subtour = solve_subtour_lp(inst)?;
    if subtour.objective < f2m.objective {
        return Err(Error::invariant("subtour", "subtour value below the fractional 2-matching value"));
    }
    let g2m43 = g2m43_with(inst, &f2m)?;
    let g2m109 = g2m109_with(inst, &f2m)?;
    let boydcarr = g2m_from_subtour_solution(inst, subtour.clone(), alpha)?;
    Ok(AllRuns { f2m, subtour, g2m43, g2m109, boydcarr })
}
