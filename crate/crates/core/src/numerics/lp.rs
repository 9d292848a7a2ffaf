//! A dense two-phase simplex over [`Rational`] with Bland's pivot rule.
//!
//! Problems here have a handful of variables and a few dozen rows, so the
//! tableau is kept dense and every pivot is exact. Bland's rule guarantees
//! termination and makes the returned vertex a pure function of the input.

use serde::{Deserialize, Serialize};

use super::rational::{dot, Rational};
use crate::error::{check_dim, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Relation {
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "=")]
    Eq,
    #[serde(rename = ">=")]
    Ge,
}

impl Relation {
    pub fn holds(self, lhs: &Rational, rhs: &Rational) -> bool {
        match self {
            Relation::Le => lhs <= rhs,
            Relation::Eq => lhs == rhs,
            Relation::Ge => lhs >= rhs,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sense {
    Minimize,
    Maximize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub coefficients: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// Per-variable bounds; `None` means unbounded on that side.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VarBounds {
    pub lower: Option<Rational>,
    pub upper: Option<Rational>,
}

/// `min`/`max objective·x` subject to linear rows and variable bounds.
/// Variables are free unless bounded explicitly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearProgram {
    pub sense: Sense,
    pub objective: Vec<Rational>,
    pub constraints: Vec<Constraint>,
    pub bounds: Vec<VarBounds>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status")]
pub enum LpOutcome {
    Optimal {
        value: Rational,
        point: Vec<Rational>,
    },
    Infeasible,
    Unbounded,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn status(&self) -> LpStatus {
        match self {
            LpOutcome::Optimal { .. } => LpStatus::Optimal,
            LpOutcome::Infeasible => LpStatus::Infeasible,
            LpOutcome::Unbounded => LpStatus::Unbounded,
        }
    }

    pub fn is_optimal(&self) -> bool {
        matches!(self, LpOutcome::Optimal { .. })
    }

    pub fn is_infeasible(&self) -> bool {
        matches!(self, LpOutcome::Infeasible)
    }

    pub fn is_feasible(&self) -> bool {
        !self.is_infeasible()
    }

    pub fn value(&self) -> Option<&Rational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }

    pub fn point(&self) -> Option<&[Rational]> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }

    pub fn into_point(self) -> Option<Vec<Rational>> {
        match self {
            LpOutcome::Optimal { point, .. } => Some(point),
            _ => None,
        }
    }
}

impl LinearProgram {
    pub fn new(sense: Sense, objective: Vec<Rational>) -> Self {
        let n = objective.len();
        LinearProgram {
            sense,
            objective,
            constraints: Vec::new(),
            bounds: vec![VarBounds::default(); n],
        }
    }

    pub fn minimize(objective: Vec<Rational>) -> Self {
        Self::new(Sense::Minimize, objective)
    }

    pub fn maximize(objective: Vec<Rational>) -> Self {
        Self::new(Sense::Maximize, objective)
    }

    /// A zero-objective program; only the status matters.
    pub fn feasibility(num_vars: usize) -> Self {
        Self::minimize(vec![Rational::zero(); num_vars])
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn add_constraint(
        &mut self,
        coefficients: Vec<Rational>,
        relation: Relation,
        rhs: Rational,
    ) {
        self.constraints.push(Constraint {
            coefficients,
            relation,
            rhs,
        });
    }

    pub fn with_constraint(
        mut self,
        coefficients: Vec<Rational>,
        relation: Relation,
        rhs: Rational,
    ) -> Self {
        self.add_constraint(coefficients, relation, rhs);
        self
    }

    pub fn set_bounds(&mut self, var: usize, lower: Option<Rational>, upper: Option<Rational>) {
        self.bounds[var] = VarBounds { lower, upper };
    }

    /// Sets `x_j >= 0` for every variable.
    pub fn nonnegative(mut self) -> Self {
        for b in &mut self.bounds {
            b.lower = Some(Rational::zero());
        }
        self
    }

    fn validate(&self) -> Result<()> {
        let n = self.objective.len();
        check_dim(n, self.bounds.len())?;
        for c in &self.constraints {
            check_dim(n, c.coefficients.len())?;
        }
        Ok(())
    }

    /// Exact check that `x` satisfies every row and bound.
    pub fn is_satisfied_by(&self, x: &[Rational]) -> bool {
        x.len() == self.num_vars()
            && self
                .constraints
                .iter()
                .all(|c| c.relation.holds(&dot(&c.coefficients, x), &c.rhs))
            && self.bounds.iter().zip(x).all(|(b, v)| {
                b.lower.as_ref().is_none_or(|l| v >= l) && b.upper.as_ref().is_none_or(|u| v <= u)
            })
    }

    pub fn solve(&self) -> Result<LpOutcome> {
        lp_solve(self)
    }
}

/// How an original variable is recovered from standard-form columns.
enum VarMap {
    /// `x = offset + s`
    Shifted { offset: Rational, col: usize },
    /// `x = offset - s`
    Reflected { offset: Rational, col: usize },
    /// `x = s⁺ - s⁻`
    Split { pos: usize, neg: usize },
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    /// Reduced costs; the last entry holds minus the current objective value.
    cost: Vec<Rational>,
    basis: Vec<usize>,
}

enum Pivoting {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn width(&self) -> usize {
        self.cost.len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            if !v.is_zero() {
                *v = &*v * &p;
            }
        }
        let pivot_row = std::mem::take(&mut self.rows[r]);
        let nonzero: Vec<usize> = (0..pivot_row.len())
            .filter(|&j| !pivot_row[j].is_zero())
            .collect();
        let eliminate = |row: &mut Vec<Rational>| {
            let factor = row[c].clone();
            if factor.is_zero() {
                return;
            }
            for &j in &nonzero {
                row[j] -= &(&factor * &pivot_row[j]);
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(&mut self.cost);
        self.rows[r] = pivot_row;
        self.basis[r] = c;
    }

    /// Minimizes with Bland's rule: lowest-index entering column, ties in the
    /// ratio test broken by lowest basic variable index.
    fn run(&mut self) -> Pivoting {
        let rhs = self.width();
        loop {
            let Some(enter) = (0..rhs).find(|&j| self.cost[j].is_negative()) else {
                return Pivoting::Optimal;
            };
            let mut leave: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[enter].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => {
                        ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li])
                    }
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            match leave {
                Some((r, _)) => self.pivot(r, enter),
                None => return Pivoting::Unbounded,
            }
        }
    }
}

/// Solves `lp` exactly. Deterministic: identical input gives an identical
/// outcome, including the returned vertex.
pub fn lp_solve(lp: &LinearProgram) -> Result<LpOutcome> {
    lp.validate()?;
    let n = lp.num_vars();

    // Map each original variable onto nonnegative standard-form columns.
    let mut maps = Vec::with_capacity(n);
    let mut ncols = 0usize;
    let mut extra_rows: Vec<(usize, Rational)> = Vec::new();
    for b in &lp.bounds {
        let map = match (&b.lower, &b.upper) {
            (Some(l), upper) => {
                if let Some(u) = upper {
                    extra_rows.push((ncols, u - l));
                }
                VarMap::Shifted {
                    offset: l.clone(),
                    col: ncols,
                }
            }
            (None, Some(u)) => VarMap::Reflected {
                offset: u.clone(),
                col: ncols,
            },
            (None, None) => {
                ncols += 1;
                VarMap::Split {
                    pos: ncols - 1,
                    neg: ncols,
                }
            }
        };
        ncols += 1;
        maps.push(map);
    }
    let nstruct = ncols;

    // Rows over structural columns: (coefficients, relation, rhs).
    let mut rows: Vec<(Vec<Rational>, Relation, Rational)> = Vec::new();
    for c in &lp.constraints {
        let mut coeffs = vec![Rational::zero(); nstruct];
        let mut rhs = c.rhs.clone();
        for (a, map) in c.coefficients.iter().zip(&maps) {
            if a.is_zero() {
                continue;
            }
            match map {
                VarMap::Shifted { offset, col } => {
                    rhs -= &(a * offset);
                    coeffs[*col] += a;
                }
                VarMap::Reflected { offset, col } => {
                    rhs -= &(a * offset);
                    coeffs[*col] -= a;
                }
                VarMap::Split { pos, neg } => {
                    coeffs[*pos] += a;
                    coeffs[*neg] -= a;
                }
            }
        }
        rows.push((coeffs, c.relation, rhs));
    }
    for (col, width) in extra_rows {
        let mut coeffs = vec![Rational::zero(); nstruct];
        coeffs[col] = Rational::one();
        rows.push((coeffs, Relation::Le, width));
    }

    let m = rows.len();
    let nslack = rows.iter().filter(|r| r.1 != Relation::Eq).count();
    // Decide which rows need an artificial variable.
    let mut slack_col = vec![None; m];
    let mut next_slack = nstruct;
    let mut needs_artificial = vec![false; m];
    for (i, (_, rel, rhs)) in rows.iter().enumerate() {
        let sign_flip = rhs.is_negative();
        match rel {
            Relation::Eq => needs_artificial[i] = true,
            Relation::Le | Relation::Ge => {
                slack_col[i] = Some(next_slack);
                next_slack += 1;
                // Slack coefficient after normalizing rhs >= 0.
                let plus_one = (*rel == Relation::Le) != sign_flip;
                needs_artificial[i] = !plus_one;
            }
        }
    }
    let nart = needs_artificial.iter().filter(|&&a| a).count();
    let width = nstruct + nslack + nart;

    let mut tableau = Tableau {
        rows: Vec::with_capacity(m),
        cost: vec![Rational::zero(); width + 1],
        basis: Vec::with_capacity(m),
    };
    let mut next_art = nstruct + nslack;
    for (i, (coeffs, rel, rhs)) in rows.into_iter().enumerate() {
        let mut row = coeffs;
        row.resize(width + 1, Rational::zero());
        if let Some(s) = slack_col[i] {
            row[s] = if rel == Relation::Le {
                Rational::one()
            } else {
                -Rational::one()
            };
        }
        row[width] = rhs;
        if row[width].is_negative() {
            for v in row.iter_mut() {
                *v = -&*v;
            }
        }
        if needs_artificial[i] {
            row[next_art] = Rational::one();
            tableau.basis.push(next_art);
            next_art += 1;
            // Phase-one cost: sum of artificials, priced out against this row.
            for (j, v) in row.iter().enumerate() {
                if j < nstruct + nslack || j == width {
                    tableau.cost[j] -= v;
                }
            }
        } else {
            tableau
                .basis
                .push(slack_col[i].expect("row without artificial has a slack"));
        }
        tableau.rows.push(row);
    }

    if nart > 0 {
        tableau.run();
        if !tableau.cost[width].is_zero() {
            return Ok(LpOutcome::Infeasible);
        }
        // Drive zero-level artificials out of the basis; drop redundant rows.
        let first_art = nstruct + nslack;
        let mut i = 0;
        while i < tableau.rows.len() {
            if tableau.basis[i] >= first_art {
                match (0..first_art).find(|&j| !tableau.rows[i][j].is_zero()) {
                    Some(j) => tableau.pivot(i, j),
                    None => {
                        tableau.rows.remove(i);
                        tableau.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        for row in tableau.rows.iter_mut() {
            let rhs = row[width].clone();
            row.truncate(first_art);
            row.push(rhs);
        }
    }

    // Phase two on the real objective, expressed as a minimization.
    let w = nstruct + nslack;
    let mut cost = vec![Rational::zero(); w + 1];
    let sign = match lp.sense {
        Sense::Minimize => Rational::one(),
        Sense::Maximize => -Rational::one(),
    };
    for (c, map) in lp.objective.iter().zip(&maps) {
        let c = c * &sign;
        match map {
            VarMap::Shifted { col, .. } => cost[*col] += &c,
            VarMap::Reflected { col, .. } => cost[*col] -= &c,
            VarMap::Split { pos, neg } => {
                cost[*pos] += &c;
                cost[*neg] -= &c;
            }
        }
    }
    let mut reduced = cost.clone();
    for (row, &b) in tableau.rows.iter().zip(&tableau.basis) {
        let cb = &cost[b];
        if cb.is_zero() {
            continue;
        }
        for (j, v) in row.iter().enumerate() {
            if !v.is_zero() {
                reduced[j] -= &(cb * v);
            }
        }
    }
    tableau.cost = reduced;
    if let Pivoting::Unbounded = tableau.run() {
        return Ok(LpOutcome::Unbounded);
    }

    let mut values = vec![Rational::zero(); w];
    for (row, &b) in tableau.rows.iter().zip(&tableau.basis) {
        values[b] = row[w].clone();
    }
    let point: Vec<Rational> = maps
        .iter()
        .map(|map| match map {
            VarMap::Shifted { offset, col } => offset + &values[*col],
            VarMap::Reflected { offset, col } => offset - &values[*col],
            VarMap::Split { pos, neg } => &values[*pos] - &values[*neg],
        })
        .collect();
    debug_assert!(
        lp.is_satisfied_by(&point),
        "simplex returned an infeasible point"
    );
    let value = dot(&lp.objective, &point);
    Ok(LpOutcome::Optimal { value, point })
}
