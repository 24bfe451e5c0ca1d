//! Exact linear programming over [`Rat`].
//!
//! A dense-tableau, bounded-variable primal simplex. Phase one minimizes the
//! sum of artificial variables; phase two minimizes the objective. Pivoting
//! follows Bland's rule (lowest eligible index enters, ties in the ratio test
//! go to the lowest variable index), which rules out cycling without any
//! perturbation. Every optimal answer is a basic solution and comes with a
//! dual certificate that can be checked against the original data.

use num_traits::{Signed, Zero};

use crate::rat::{self, Rat};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Le,
    Eq,
    Ge,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Constraint {
    pub coeffs: Vec<(usize, Rat)>,
    pub relation: Relation,
    pub rhs: Rat,
}

impl Constraint {
    pub fn new(coeffs: Vec<(usize, Rat)>, relation: Relation, rhs: Rat) -> Self {
        Constraint { coeffs, relation, rhs }
    }

    pub fn activity(&self, x: &[Rat]) -> Rat {
        self.coeffs.iter().fold(rat::zero(), |acc, (j, a)| acc + a * &x[*j])
    }

    pub fn is_satisfied(&self, x: &[Rat]) -> bool {
        let lhs = self.activity(x);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Eq => lhs == self.rhs,
            Relation::Ge => lhs >= self.rhs,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Variable {
    pub lower: Rat,
    /// `None` is +∞.
    pub upper: Option<Rat>,
}

/// `min c·x` subject to the constraints and the variable bounds.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LinearProgram {
    vars: Vec<Variable>,
    cost: Vec<Rat>,
    constraints: Vec<Constraint>,
}

impl LinearProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_var(&mut self, lower: Rat, upper: Option<Rat>, cost: Rat) -> usize {
        self.vars.push(Variable { lower, upper });
        self.cost.push(cost);
        self.vars.len() - 1
    }

    pub fn add_constraint(&mut self, c: Constraint) -> usize {
        self.constraints.push(c);
        self.constraints.len() - 1
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn vars(&self) -> &[Variable] {
        &self.vars
    }

    pub fn cost(&self) -> &[Rat] {
        &self.cost
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn objective_value(&self, x: &[Rat]) -> Rat {
        self.cost.iter().zip(x).fold(rat::zero(), |acc, (c, v)| acc + c * v)
    }

    /// Whether `x` satisfies every bound and constraint exactly.
    pub fn is_feasible(&self, x: &[Rat]) -> bool {
        x.len() == self.vars.len()
            && self.vars.iter().zip(x).all(|(v, xj)| *xj >= v.lower && v.upper.as_ref().is_none_or(|u| xj <= u))
            && self.constraints.iter().all(|c| c.is_satisfied(x))
    }

    fn validate(&self) -> Result<()> {
        for (j, v) in self.vars.iter().enumerate() {
            if let Some(u) = &v.upper {
                if *u < v.lower {
                    return Err(Error::InvalidLp(format!("variable {j} has lower bound above upper bound")));
                }
            }
        }
        for (i, c) in self.constraints.iter().enumerate() {
            if let Some((j, _)) = c.coeffs.iter().find(|(j, _)| *j >= self.vars.len()) {
                return Err(Error::InvalidLp(format!("constraint {i} references undeclared variable {j}")));
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

/// Multipliers proving optimality: `row_duals[i]` per constraint and the
/// reduced cost `c_j - y·A_j` per variable.
#[derive(Clone, Debug, PartialEq)]
pub struct DualCertificate {
    pub row_duals: Vec<Rat>,
    pub reduced_costs: Vec<Rat>,
    pub objective: Rat,
}

impl DualCertificate {
    /// Recomputes the reduced costs from the original data, checks dual
    /// feasibility and returns the dual objective
    /// `y·b + Σ max(d,0)·l + Σ min(d,0)·u`.
    pub fn verify(&self, lp: &LinearProgram) -> std::result::Result<Rat, String> {
        if self.row_duals.len() != lp.constraints.len() {
            return Err("wrong number of row duals".into());
        }
        let mut d = lp.cost.clone();
        for (c, y) in lp.constraints.iter().zip(&self.row_duals) {
            match c.relation {
                Relation::Le if y.is_positive() => return Err("positive dual on a <= row".into()),
                Relation::Ge if y.is_negative() => return Err("negative dual on a >= row".into()),
                _ => {}
            }
            for (j, a) in &c.coeffs {
                d[*j] -= a * y;
            }
        }
        if d != self.reduced_costs {
            return Err("reduced costs do not match y".into());
        }
        let mut obj = rat::zero();
        for (c, y) in lp.constraints.iter().zip(&self.row_duals) {
            obj += &c.rhs * y;
        }
        for (dj, v) in d.iter().zip(&lp.vars) {
            if dj.is_positive() {
                obj += dj * &v.lower;
            } else if dj.is_negative() {
                match &v.upper {
                    Some(u) => obj += dj * u,
                    None => return Err("negative reduced cost on a variable without upper bound".into()),
                }
            }
        }
        Ok(obj)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Structural variable values; meaningful only when optimal.
    pub values: Vec<Rat>,
    pub objective: Rat,
    /// Basic column per row. Columns `0..n` are structural variables, then one
    /// slack per inequality row, then artificials.
    pub basis: Vec<usize>,
    pub duals: Option<DualCertificate>,
    pub pivots: usize,
}

impl LpSolution {
    pub fn is_optimal(&self) -> bool {
        self.status == LpStatus::Optimal
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum ColStatus {
    Basic,
    AtLower,
    AtUpper,
}

struct Tableau {
    rows: Vec<Vec<Rat>>,
    beta: Vec<Rat>,
    basis: Vec<usize>,
    status: Vec<ColStatus>,
    lower: Vec<Rat>,
    upper: Vec<Option<Rat>>,
    /// Column holding `coef · e_i` initially, and that coefficient, per row.
    initial: Vec<(usize, Rat)>,
    pivots: usize,
}

enum Step {
    Optimal,
    Unbounded,
    Moved,
}

impl Tableau {
    fn value(&self, j: usize) -> Rat {
        match self.status[j] {
            ColStatus::AtLower => self.lower[j].clone(),
            ColStatus::AtUpper => self.upper[j].clone().expect("at upper implies finite"),
            ColStatus::Basic => {
                let r = self.basis.iter().position(|&b| b == j).expect("basic column has a row");
                self.beta[r].clone()
            }
        }
    }

    fn reduced_cost(&self, cost: &[Rat], costed_rows: &[usize], j: usize) -> Rat {
        let mut d = cost[j].clone();
        for &i in costed_rows {
            let a = &self.rows[i][j];
            if !a.is_zero() {
                d -= &cost[self.basis[i]] * a;
            }
        }
        d
    }

    fn step(&mut self, cost: &[Rat], can_enter: &dyn Fn(usize) -> bool) -> Step {
        let costed_rows: Vec<usize> = (0..self.basis.len()).filter(|&i| !cost[self.basis[i]].is_zero()).collect();
        let ncols = self.status.len();
        let mut entering = None;
        for j in 0..ncols {
            if self.status[j] == ColStatus::Basic || !can_enter(j) {
                continue;
            }
            if let Some(u) = &self.upper[j] {
                if *u == self.lower[j] {
                    continue;
                }
            }
            let d = self.reduced_cost(cost, &costed_rows, j);
            let improving = match self.status[j] {
                ColStatus::AtLower => d.is_negative(),
                ColStatus::AtUpper => d.is_positive(),
                ColStatus::Basic => false,
            };
            if improving {
                entering = Some(j);
                break;
            }
        }
        let Some(j) = entering else { return Step::Optimal };
        let increasing = self.status[j] == ColStatus::AtLower;

        // Ratio test. Candidate = (step length, variable index, row or None for a bound flip).
        let mut best: Option<(Rat, usize, Option<usize>, ColStatus)> = None;
        let mut consider = |t: Rat, var: usize, row: Option<usize>, to: ColStatus| {
            let better = match &best {
                None => true,
                Some((bt, bv, _, _)) => t < *bt || (t == *bt && var < *bv),
            };
            if better {
                best = Some((t, var, row, to));
            }
        };
        if let Some(u) = &self.upper[j] {
            let to = if increasing { ColStatus::AtUpper } else { ColStatus::AtLower };
            consider(u - &self.lower[j], j, None, to);
        }
        for (i, row) in self.rows.iter().enumerate() {
            let a = &row[j];
            if a.is_zero() {
                continue;
            }
            let b = self.basis[i];
            // Basic value moves by -a·dir per unit of step.
            let falling = a.is_positive() == increasing;
            if falling {
                consider((&self.beta[i] - &self.lower[b]) / a.abs(), b, Some(i), ColStatus::AtLower);
            } else if let Some(ub) = &self.upper[b] {
                consider((ub - &self.beta[i]) / a.abs(), b, Some(i), ColStatus::AtUpper);
            }
        }
        let Some((t, _, row, to)) = best else { return Step::Unbounded };

        let entering_old = self.value(j);
        if !t.is_zero() {
            for i in 0..self.rows.len() {
                let a = &self.rows[i][j];
                if a.is_zero() {
                    continue;
                }
                let delta = a * &t;
                if increasing {
                    self.beta[i] -= delta;
                } else {
                    self.beta[i] += delta;
                }
            }
        }
        match row {
            None => self.status[j] = to,
            Some(r) => {
                let leaving = self.basis[r];
                self.status[leaving] = to;
                self.pivot(r, j);
                self.beta[r] = if increasing { entering_old + t } else { entering_old - t };
            }
        }
        Step::Moved
    }

    fn pivot(&mut self, r: usize, j: usize) {
        let p = self.rows[r][j].clone();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v /= &p;
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let nz: Vec<usize> = (0..pivot_row.len()).filter(|&k| !pivot_row[k].is_zero()).collect();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[j].is_zero() {
                continue;
            }
            let f = row[j].clone();
            for &k in &nz {
                row[k] -= &f * &pivot_row[k];
            }
        }
        self.rows[r] = pivot_row;
        self.basis[r] = j;
        self.status[j] = ColStatus::Basic;
        self.pivots += 1;
    }

    fn run(&mut self, cost: &[Rat], can_enter: &dyn Fn(usize) -> bool) -> bool {
        loop {
            match self.step(cost, can_enter) {
                Step::Optimal => return true,
                Step::Unbounded => return false,
                Step::Moved => {}
            }
        }
    }
}

/// Solves `lp` exactly. Errors only on malformed input; infeasibility and
/// unboundedness are reported through [`LpSolution::status`].
pub fn solve_lp(lp: &LinearProgram) -> Result<LpSolution> {
    lp.validate()?;
    let n = lp.vars.len();
    let m = lp.constraints.len();
    let n_slack = lp.constraints.iter().filter(|c| c.relation != Relation::Eq).count();

    // Residual of each row with all structurals at their lower bound.
    let residual: Vec<Rat> = lp
        .constraints
        .iter()
        .map(|c| &c.rhs - c.coeffs.iter().fold(rat::zero(), |acc, (j, a)| acc + a * &lp.vars[*j].lower))
        .collect();

    // Decide each row's initial basic column.
    let mut slack_col = vec![usize::MAX; m];
    let mut next_slack = n;
    for (i, c) in lp.constraints.iter().enumerate() {
        if c.relation != Relation::Eq {
            slack_col[i] = next_slack;
            next_slack += 1;
        }
    }
    let artificial_from = n + n_slack;
    let mut initial = Vec::with_capacity(m);
    let mut n_art = 0;
    for (i, c) in lp.constraints.iter().enumerate() {
        let r = &residual[i];
        let entry = match c.relation {
            Relation::Le if !r.is_negative() => (slack_col[i], rat::one()),
            Relation::Ge if !r.is_positive() => (slack_col[i], -rat::one()),
            _ => {
                n_art += 1;
                let sign = if r.is_negative() { -rat::one() } else { rat::one() };
                (artificial_from + n_art - 1, sign)
            }
        };
        initial.push(entry);
    }
    let ncols = artificial_from + n_art;

    let mut rows = vec![vec![rat::zero(); ncols]; m];
    for (i, c) in lp.constraints.iter().enumerate() {
        for (j, a) in &c.coeffs {
            rows[i][*j] += a;
        }
        match c.relation {
            Relation::Le => rows[i][slack_col[i]] = rat::one(),
            Relation::Ge => rows[i][slack_col[i]] = -rat::one(),
            Relation::Eq => {}
        }
        let (col, coef) = &initial[i];
        if *col >= artificial_from {
            rows[i][*col] = coef.clone();
        }
        // Scale so the initial basic column reads as +e_i.
        if coef.is_negative() {
            for v in rows[i].iter_mut() {
                *v = -v.clone();
            }
        }
    }
    let beta: Vec<Rat> = residual.iter().zip(&initial).map(|(r, (_, coef))| r * coef).collect();

    let mut lower = Vec::with_capacity(ncols);
    let mut upper = Vec::with_capacity(ncols);
    for v in &lp.vars {
        lower.push(v.lower.clone());
        upper.push(v.upper.clone());
    }
    for _ in n..ncols {
        lower.push(rat::zero());
        upper.push(None);
    }
    let mut status = vec![ColStatus::AtLower; ncols];
    let basis: Vec<usize> = initial.iter().map(|(c, _)| *c).collect();
    for &b in &basis {
        status[b] = ColStatus::Basic;
    }
    let mut tab = Tableau { rows, beta, basis, status, lower, upper, initial, pivots: 0 };

    // Phase one.
    if n_art > 0 {
        let mut phase1 = vec![rat::zero(); ncols];
        for c in phase1.iter_mut().skip(artificial_from) {
            *c = rat::one();
        }
        tab.run(&phase1, &|_| true);
        let infeasibility = rat::sum(
            (0..m).filter(|&i| tab.basis[i] >= artificial_from).map(|i| &tab.beta[i]),
        );
        if infeasibility.is_positive() {
            return Ok(LpSolution {
                status: LpStatus::Infeasible,
                values: Vec::new(),
                objective: rat::zero(),
                basis: tab.basis,
                duals: None,
                pivots: tab.pivots,
            });
        }
        // Drive zero-valued artificials out of the basis where possible.
        for i in 0..m {
            if tab.basis[i] < artificial_from {
                continue;
            }
            if let Some(j) = (0..artificial_from).find(|&j| tab.status[j] != ColStatus::Basic && !tab.rows[i][j].is_zero()) {
                let v = tab.value(j);
                let leaving = tab.basis[i];
                tab.status[leaving] = ColStatus::AtLower;
                tab.pivot(i, j);
                tab.beta[i] = v;
            }
        }
        for j in artificial_from..ncols {
            tab.upper[j] = Some(rat::zero());
        }
    }

    // Phase two.
    let mut cost = lp.cost.clone();
    cost.resize(ncols, rat::zero());
    let bounded = tab.run(&cost, &|j| j < artificial_from);
    if !bounded {
        return Ok(LpSolution {
            status: LpStatus::Unbounded,
            values: Vec::new(),
            objective: rat::zero(),
            basis: tab.basis,
            duals: None,
            pivots: tab.pivots,
        });
    }

    let values: Vec<Rat> = (0..n).map(|j| tab.value(j)).collect();
    let objective = lp.objective_value(&values);

    // y_i = coef_i · (c_B · B⁻¹ column of the row's initial basic column).
    let row_duals: Vec<Rat> = (0..m)
        .map(|i| {
            let (col, coef) = &tab.initial[i];
            let mut y = rat::zero();
            for k in 0..m {
                let c = &cost[tab.basis[k]];
                if !c.is_zero() {
                    y += c * &tab.rows[k][*col];
                }
            }
            y * coef
        })
        .collect();
    let mut reduced_costs = lp.cost.clone();
    for (c, y) in lp.constraints.iter().zip(&row_duals) {
        for (j, a) in &c.coeffs {
            reduced_costs[*j] -= a * y;
        }
    }
    let duals = DualCertificate { row_duals, reduced_costs, objective: objective.clone() };

    Ok(LpSolution {
        status: LpStatus::Optimal,
        values,
        objective,
        basis: tab.basis,
        duals: Some(duals),
        pivots: tab.pivots,
    })
}

/// Appends `constraint` to `lp` and re-solves.
///
/// The re-solve is cold, so the answer is identical to solving the augmented
/// program from scratch.
pub fn add_constraint_and_resolve(
    lp: &mut LinearProgram,
    previous: &LpSolution,
    constraint: Constraint,
) -> Result<LpSolution> {
    if !previous.is_optimal() {
        return Err(Error::precondition("previous solution is not optimal"));
    }
    lp.add_constraint(constraint);
    solve_lp(lp)
}
