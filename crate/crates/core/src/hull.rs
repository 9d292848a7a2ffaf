//! Membership classifiers for the nondominated structure of `conv(W)`.
//!
//! A convex hull is compact and convex, so every theorem that needs a
//! cone-convex image holds exactly here. Each classifier is a single LP over
//! the convex weights `μ` of the generators.

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::numerics::{LinearProgram, Rational, Relation};
use crate::order::Point;

/// A finite generator list `W`; the set analyzed is `conv(W)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HullSet {
    generators: Vec<Point>,
}

#[derive(Deserialize)]
struct RawHull {
    generators: Vec<Point>,
}

impl<'de> Deserialize<'de> for HullSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawHull::deserialize(deserializer)?;
        HullSet::new(raw.generators).map_err(serde::de::Error::custom)
    }
}

impl HullSet {
    pub fn new(generators: Vec<Point>) -> Result<Self> {
        let first = generators.first().ok_or(Error::EmptySet)?;
        let dim = first.dim();
        for g in &generators {
            check_dim(dim, g.dim())?;
        }
        Ok(HullSet { generators })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| Point::from_ints(r)).collect())
    }

    pub fn dim(&self) -> usize {
        self.generators[0].dim()
    }

    pub fn generators(&self) -> &[Point] {
        &self.generators
    }

    /// The hull of the projected generators, `proj_ρ conv(W) = conv(proj_ρ W)`.
    pub fn project(&self, indices: &[usize]) -> HullSet {
        HullSet {
            generators: self.generators.iter().map(|g| g.project(indices)).collect(),
        }
    }

    pub fn translate(&self, shift: &[Rational]) -> HullSet {
        HullSet {
            generators: self.generators.iter().map(|g| g.translate(shift)).collect(),
        }
    }

    /// An LP over `(μ_1..μ_n, extra..)` with `μ >= 0` and `Σμ = 1`; the
    /// caller adds rows and bounds for any trailing variables.
    fn weights_lp(&self, objective: Vec<Rational>) -> LinearProgram {
        let n = self.generators.len();
        let mut lp = LinearProgram::new(crate::numerics::Sense::Minimize, objective);
        for k in 0..n {
            lp.set_bounds(k, Some(Rational::zero()), None);
        }
        let mut row = vec![Rational::one(); n];
        row.resize(lp.num_vars(), Rational::zero());
        lp.add_constraint(row, Relation::Eq, Rational::one());
        lp
    }

    /// Coefficients of `z_j = Σ μ_k w_kj` padded to `width` variables.
    fn coordinate_row(&self, j: usize, width: usize) -> Vec<Rational> {
        let mut row: Vec<Rational> = self.generators.iter().map(|g| g[j].clone()).collect();
        row.resize(width, Rational::zero());
        row
    }

    fn require_member(&self, y0: &Point) -> Result<()> {
        if hull_contains(self, y0)? {
            Ok(())
        } else {
            Err(Error::NotInHull)
        }
    }
}

/// Whether `y0 = Σ μ_k w_k` for some convex weights `μ`.
pub fn hull_contains(hull: &HullSet, y0: &Point) -> Result<bool> {
    check_dim(hull.dim(), y0.dim())?;
    let n = hull.generators.len();
    let mut lp = hull.weights_lp(vec![Rational::zero(); n]);
    for j in 0..hull.dim() {
        lp.add_constraint(hull.coordinate_row(j, n), Relation::Eq, y0[j].clone());
    }
    Ok(lp.solve()?.is_feasible())
}

/// No `z ∈ conv(W)` with `z < y0`: the largest uniform margin `δ` with
/// `z_j <= y0_j − δ` for all `j` is at most zero.
pub fn hull_is_weakly_nondominated(hull: &HullSet, y0: &Point) -> Result<bool> {
    hull.require_member(y0)?;
    let n = hull.generators.len();
    let mut objective = vec![Rational::zero(); n + 1];
    // minimize −δ
    objective[n] = -Rational::one();
    let mut lp = hull.weights_lp(objective);
    for j in 0..hull.dim() {
        let mut row = hull.coordinate_row(j, n + 1);
        row[n] = Rational::one();
        lp.add_constraint(row, Relation::Le, y0[j].clone());
    }
    let best = lp.solve()?;
    let delta = best
        .point()
        .expect("bounded: the hull is compact and contains y0")[n]
        .clone();
    Ok(!delta.is_positive())
}

/// No `z ∈ conv(W)` with `z ≤ y0`: the largest total improvement
/// `Σ_j (y0_j − z_j)` over `z ≦ y0` in the hull is zero.
pub fn hull_is_nondominated(hull: &HullSet, y0: &Point) -> Result<bool> {
    hull.require_member(y0)?;
    let n = hull.generators.len();
    // Σ_j z_j = Σ_k μ_k (Σ_j w_kj); minimizing it maximizes the improvement.
    let objective = hull.generators.iter().map(Point::sum).collect();
    let mut lp = hull.weights_lp(objective);
    for j in 0..hull.dim() {
        lp.add_constraint(hull.coordinate_row(j, n), Relation::Le, y0[j].clone());
    }
    let best = lp.solve()?;
    let lowest = best
        .value()
        .expect("y0 itself is feasible and the hull is compact");
    Ok(lowest == &y0.sum())
}

/// Verdict of the proper-nondominance test with its weight witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProperVerdict {
    pub verdict: bool,
    /// `λ` with `λ_j >= 1` and `λ·(w − y0) >= 0` for every generator `w`.
    pub witness: Option<Vec<Rational>>,
}

/// `y0` minimizes some strictly positive weighting `λ·y` over the hull.
/// Strict positivity is normalized to `λ >= 1`, which loses nothing because
/// the conditions are positively homogeneous in `λ`.
pub fn hull_is_properly_nondominated(hull: &HullSet, y0: &Point) -> Result<ProperVerdict> {
    hull.require_member(y0)?;
    let p = hull.dim();
    let mut lp = LinearProgram::minimize(vec![Rational::one(); p]);
    for j in 0..p {
        lp.set_bounds(j, Some(Rational::one()), None);
    }
    for w in &hull.generators {
        lp.add_constraint((w - y0).into_coords(), Relation::Ge, Rational::zero());
    }
    let witness = lp.solve()?.into_point();
    Ok(ProperVerdict {
        verdict: witness.is_some(),
        witness,
    })
}
