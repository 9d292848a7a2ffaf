//! Recession analysis of polyhedral image sets `Y = {y : A y <= b}`.
//!
//! A nonempty polyhedron is closed and convex, and so are its lower sections
//! `(y0 − R^p_≧) ∩ Y`. Under those hypotheses five properties coincide: `Y_N`
//! is nonempty; every lower section is bounded; `Y` is `R^p_≧`-compact;
//! `Y` is `R^p_≧`-semicompact; `Y_N` is externally stable.
//! [`theorem_full_report`] decides the first two by independent LP routes and
//! fails loudly if they ever disagree.

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::numerics::{dot, LinearProgram, LpOutcome, Rational, Relation};
use crate::order::Point;

/// `{y ∈ R^p : A y <= b}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Polyhedron {
    #[serde(rename = "A")]
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
}

#[derive(Deserialize)]
struct RawPolyhedron {
    #[serde(rename = "A")]
    a: Vec<Vec<Rational>>,
    b: Vec<Rational>,
}

impl<'de> Deserialize<'de> for Polyhedron {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawPolyhedron::deserialize(deserializer)?;
        Polyhedron::new(raw.a, raw.b).map_err(serde::de::Error::custom)
    }
}

impl Polyhedron {
    pub fn new(a: Vec<Vec<Rational>>, b: Vec<Rational>) -> Result<Self> {
        let first = a
            .first()
            .ok_or_else(|| Error::InvalidInstance("a polyhedron needs at least one row".into()))?;
        let p = first.len();
        if p == 0 {
            return Err(Error::InvalidInstance(
                "a polyhedron needs at least one coordinate".into(),
            ));
        }
        for row in &a {
            check_dim(p, row.len())?;
        }
        check_dim(a.len(), b.len())?;
        Ok(Polyhedron { a, b })
    }

    pub fn from_ints(a: &[&[i64]], b: &[i64]) -> Result<Self> {
        Self::new(
            a.iter()
                .map(|r| r.iter().map(|&v| Rational::from_integer(v)).collect())
                .collect(),
            b.iter().map(|&v| Rational::from_integer(v)).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.a[0].len()
    }

    pub fn rows(&self) -> &[Vec<Rational>] {
        &self.a
    }

    pub fn rhs(&self) -> &[Rational] {
        &self.b
    }

    pub fn contains(&self, y: &Point) -> bool {
        y.dim() == self.dim()
            && self
                .a
                .iter()
                .zip(&self.b)
                .all(|(row, bi)| &dot(row, y.coords()) <= bi)
    }

    /// An LP in `y` with the rows of `A y <= b` already added.
    fn lp_over(&self, objective: Vec<Rational>) -> LinearProgram {
        let mut lp = LinearProgram::minimize(objective);
        for (row, bi) in self.a.iter().zip(&self.b) {
            lp.add_constraint(row.clone(), Relation::Le, bi.clone());
        }
        lp
    }

    /// Adds `y <= y0` as variable bounds, restricting to the lower section.
    fn below(mut lp: LinearProgram, y0: &Point) -> LinearProgram {
        for j in 0..y0.dim() {
            lp.set_bounds(j, None, Some(y0[j].clone()));
        }
        lp
    }

    /// Some point of the polyhedron, or `None` when it is empty.
    pub fn feasible_point(&self) -> Result<Option<Point>> {
        Ok(self
            .lp_over(vec![Rational::zero(); self.dim()])
            .solve()?
            .into_point()
            .map(Point::new))
    }

    fn require_nonempty(&self) -> Result<Point> {
        self.feasible_point()?.ok_or(Error::EmptyPolyhedron)
    }

    fn require_member(&self, y0: &Point) -> Result<()> {
        check_dim(self.dim(), y0.dim())?;
        if self.contains(y0) {
            Ok(())
        } else {
            Err(Error::NotMember)
        }
    }

    /// `min weights·y` over the lower section at `anchor`.
    pub(crate) fn minimize_on_section(
        &self,
        weights: &[Rational],
        anchor: &Point,
    ) -> Result<LpOutcome> {
        Self::below(self.lp_over(weights.to_vec()), anchor).solve()
    }
}

/// `{d : A d <= 0}`, the recession cone of a nonempty polyhedron. Unlike the
/// set of recession directions it contains `0`; callers ask for nonzero
/// members explicitly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecessionCone {
    #[serde(rename = "A")]
    a: Vec<Vec<Rational>>,
    /// Nonzero members found by maximizing `±d_j` over `|d| <= 1`; empty
    /// exactly when the cone is `{0}`.
    pub samples: Vec<Point>,
}

impl RecessionCone {
    pub fn contains(&self, d: &Point) -> bool {
        self.a.iter().all(|row| !dot(row, d.coords()).is_positive())
    }

    /// Whether the polyhedron is unbounded.
    pub fn has_nonzero_member(&self) -> bool {
        !self.samples.is_empty()
    }
}

pub fn recession_cone(poly: &Polyhedron) -> Result<RecessionCone> {
    poly.require_nonempty()?;
    let p = poly.dim();
    let mut samples: Vec<Point> = Vec::new();
    for j in 0..p {
        for sign in [Rational::one(), -Rational::one()] {
            let mut objective = vec![Rational::zero(); p];
            objective[j] = -sign;
            let mut lp = LinearProgram::minimize(objective);
            for row in &poly.a {
                lp.add_constraint(row.clone(), Relation::Le, Rational::zero());
            }
            for k in 0..p {
                lp.set_bounds(k, Some(-Rational::one()), Some(Rational::one()));
            }
            let d = Point::new(lp.solve()?.into_point().expect("the box keeps it bounded"));
            if !d.is_zero() && !samples.contains(&d) {
                samples.push(d);
            }
        }
    }
    Ok(RecessionCone {
        a: poly.a.clone(),
        samples,
    })
}

/// A recession direction `d` with `d ≦ 0`, `d != 0`, normalized to
/// `Σ d_j = −1`. Its existence means every point of `Y` is dominated by
/// `y + d ∈ Y`, so `Y_N` is empty.
pub fn negative_recession_direction(poly: &Polyhedron) -> Result<Option<Point>> {
    poly.require_nonempty()?;
    let p = poly.dim();
    let mut lp = LinearProgram::feasibility(p);
    for row in &poly.a {
        lp.add_constraint(row.clone(), Relation::Le, Rational::zero());
    }
    for j in 0..p {
        lp.set_bounds(j, None, Some(Rational::zero()));
    }
    lp.add_constraint(vec![Rational::one(); p], Relation::Eq, -Rational::one());
    Ok(lp.solve()?.into_point().map(Point::new))
}

/// Whether the lower section `(y0 − R^p_≧) ∩ Y` is bounded. The section lies
/// below `y0`, so it is bounded iff each coordinate is bounded below on it.
pub fn lower_section_bounded(poly: &Polyhedron, y0: &Point) -> Result<bool> {
    poly.require_nonempty()?;
    poly.require_member(y0)?;
    let p = poly.dim();
    for j in 0..p {
        let mut e = vec![Rational::zero(); p];
        e[j] = Rational::one();
        if poly.minimize_on_section(&e, y0)? == LpOutcome::Unbounded {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether no `z ∈ Y` satisfies `z ≤ y`.
pub fn is_nondominated_in(poly: &Polyhedron, y: &Point) -> Result<bool> {
    poly.require_member(y)?;
    let best = poly.minimize_on_section(&vec![Rational::one(); poly.dim()], y)?;
    Ok(best.value() == Some(&y.sum()))
}

/// Label attached to the three properties that are derived rather than
/// computed.
pub const DERIVED_FROM_BOUNDED_SECTIONS: &str =
    "equivalent to bounded lower sections for nonempty closed convex sets with closed sections";

/// The five equivalent properties of a polyhedral image set, with evidence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub y_n_nonempty: bool,
    /// Optimum of `min Σ y_j` over the lower section at `anchor`, certified
    /// nondominated by a second LP.
    pub witness: Option<Point>,
    /// `d ≦ 0`, `d != 0`, `A d <= 0`; certifies `Y_N = ∅`.
    pub negative_direction: Option<Point>,
    pub anchor: Point,
    pub sections_bounded: bool,
    pub cone_compact: bool,
    pub cone_semicompact: bool,
    pub externally_stable: bool,
    pub derived_by: &'static str,
}

impl EquivalenceReport {
    pub fn all_true(&self) -> bool {
        self.y_n_nonempty
            && self.sections_bounded
            && self.cone_compact
            && self.cone_semicompact
            && self.externally_stable
    }

    pub fn all_false(&self) -> bool {
        !(self.y_n_nonempty
            || self.sections_bounded
            || self.cone_compact
            || self.cone_semicompact
            || self.externally_stable)
    }
}

fn anchor_for(poly: &Polyhedron, samples: &[Point]) -> Result<Point> {
    let fallback = poly.require_nonempty()?;
    for s in samples {
        poly.require_member(s)?;
    }
    Ok(samples.first().cloned().unwrap_or(fallback))
}

/// Decides nonemptiness of `Y_N` twice, by the sign of the recession cone and
/// by solving the sum-minimization over a lower section, and boundedness of
/// the lower section at every sample. Any disagreement is reported as
/// [`Error::InternalInconsistency`].
pub fn theorem_full_report(poly: &Polyhedron, samples: &[Point]) -> Result<EquivalenceReport> {
    let anchor = anchor_for(poly, samples)?;

    let negative_direction = negative_recession_direction(poly)?;
    let route_a = negative_direction.is_none();

    let ones = vec![Rational::one(); poly.dim()];
    let witness = match poly.minimize_on_section(&ones, &anchor)? {
        LpOutcome::Optimal { point, .. } => {
            let y = Point::new(point);
            if !is_nondominated_in(poly, &y)? {
                return Err(Error::InternalInconsistency(format!(
                    "section minimizer {y} is dominated"
                )));
            }
            Some(y)
        }
        LpOutcome::Unbounded => None,
        LpOutcome::Infeasible => {
            return Err(Error::InternalInconsistency(
                "anchor section is empty".into(),
            ));
        }
    };
    let route_b = witness.is_some();
    if route_a != route_b {
        return Err(Error::InternalInconsistency(format!(
            "recession test says Y_N nonempty = {route_a}, section minimization says {route_b}"
        )));
    }

    let mut bounded = lower_section_bounded(poly, &anchor)?;
    for s in samples {
        let here = lower_section_bounded(poly, s)?;
        if here != bounded {
            return Err(Error::InternalInconsistency(format!(
                "lower section boundedness differs between {anchor} and {s}"
            )));
        }
        bounded = here;
    }
    if bounded != route_a {
        return Err(Error::InternalInconsistency(format!(
            "Y_N nonempty = {route_a} but lower sections bounded = {bounded}"
        )));
    }

    Ok(EquivalenceReport {
        y_n_nonempty: route_a,
        witness,
        negative_direction,
        anchor,
        sections_bounded: bounded,
        cone_compact: bounded,
        cone_semicompact: bounded,
        externally_stable: bounded,
        derived_by: DERIVED_FROM_BOUNDED_SECTIONS,
    })
}

/// Checks, on one instance, that compactness of lower sections follows from
/// `Y_N != ∅` for a closed convex set instead of having to be assumed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RedundancyReport {
    pub y_n_nonempty: bool,
    /// Whether `Y` itself is bounded; the interesting instances are not.
    pub polyhedron_bounded: bool,
    /// Lower sections bounded at every sample point.
    pub sections_bounded: bool,
    pub cone_compact: bool,
    pub cone_semicompact: bool,
    pub externally_stable: bool,
    /// Connectedness of `Y_N` holds for closed convex `Y` once the above do.
    pub connected: bool,
    /// `Y_N = ∅`: nothing to check.
    pub vacuous: bool,
    pub pass: bool,
}

pub fn redundancy_demonstration(poly: &Polyhedron, samples: &[Point]) -> Result<RedundancyReport> {
    let anchor = anchor_for(poly, samples)?;
    let nonempty = negative_recession_direction(poly)?.is_none();
    let polyhedron_bounded = !recession_cone(poly)?.has_nonzero_member();
    let mut bounded = lower_section_bounded(poly, &anchor)?;
    for s in samples {
        bounded &= lower_section_bounded(poly, s)?;
    }
    let derived = nonempty && bounded;
    Ok(RedundancyReport {
        y_n_nonempty: nonempty,
        polyhedron_bounded,
        sections_bounded: bounded,
        cone_compact: derived,
        cone_semicompact: derived,
        externally_stable: derived,
        connected: nonempty,
        vacuous: !nonempty,
        pass: !nonempty || bounded,
    })
}
