//! Pareto reducibility: comparing the weakly efficient set of a problem with
//! the efficient and properly efficient sets of its objective subproblems.
//!
//! On finite instances only the inclusion `∪_ρ X_E(f^ρ) ⊆ X_WE(f)` is
//! guaranteed; the report shows where equality fails. On hull instances the
//! image is convex and the equality with properly efficient sets holds
//! exactly, which [`hull_reducibility_check`] verifies query by query.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::finite::{nondominated_set, properly_nondominated_set, weakly_nondominated_set};
use crate::hull::{
    hull_contains, hull_is_properly_nondominated, hull_is_weakly_nondominated, HullSet,
};
use crate::numerics::Rational;
use crate::order::{Point, PointSet};

/// Default cap on the number of objectives for subset enumeration.
pub const DEFAULT_MAX_OBJECTIVES: usize = 16;

/// A finite multi-objective instance: decision labels and the objective row
/// `f(x)` of each decision.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MopInstance {
    labels: Vec<String>,
    objectives: Vec<Point>,
}

#[derive(Deserialize)]
struct RawInstance {
    #[serde(default)]
    labels: Option<Vec<String>>,
    objectives: Vec<Point>,
}

impl<'de> Deserialize<'de> for MopInstance {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawInstance::deserialize(deserializer)?;
        let labels = raw
            .labels
            .unwrap_or_else(|| default_labels(raw.objectives.len()));
        MopInstance::new(labels, raw.objectives).map_err(serde::de::Error::custom)
    }
}

fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

impl MopInstance {
    /// Requires `n >= 1` decisions and `p >= 2` objectives of equal length.
    pub fn new(labels: Vec<String>, objectives: Vec<Point>) -> Result<Self> {
        let first = objectives.first().ok_or(Error::EmptySet)?;
        let p = first.dim();
        if p < 2 {
            return Err(Error::InvalidInstance(format!(
                "a multi-objective instance needs at least 2 objectives, found {p}"
            )));
        }
        for row in &objectives {
            check_dim(p, row.dim())?;
        }
        check_dim(objectives.len(), labels.len())?;
        Ok(MopInstance { labels, objectives })
    }

    /// Labels the rows `x1, x2, …`.
    pub fn from_rows(objectives: Vec<Point>) -> Result<Self> {
        Self::new(default_labels(objectives.len()), objectives)
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::from_rows(rows.iter().map(|r| Point::from_ints(r)).collect())
    }

    pub fn num_objectives(&self) -> usize {
        self.objectives[0].dim()
    }

    pub fn len(&self) -> usize {
        self.objectives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.objectives.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn objectives(&self) -> &[Point] {
        &self.objectives
    }

    /// The image `Y = f(X)` as a point set, one point per decision.
    pub fn image(&self) -> PointSet {
        PointSet::new(self.objectives.clone()).expect("rows validated")
    }

    fn projected_image(&self, rho: &Selector) -> PointSet {
        PointSet::new(
            self.objectives
                .iter()
                .map(|r| r.project(rho.indices()))
                .collect(),
        )
        .expect("rows validated")
    }

    fn label_list(&self, indices: &[usize]) -> Vec<String> {
        indices.iter().map(|&i| self.labels[i].clone()).collect()
    }
}

/// A nonempty, sorted set of objective indices (zero-based).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Selector(Vec<usize>);

impl Selector {
    pub fn new(mut indices: Vec<usize>, num_objectives: usize) -> Result<Self> {
        indices.sort_unstable();
        indices.dedup();
        if indices.is_empty() {
            return Err(Error::EmptySelector);
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= num_objectives) {
            return Err(Error::SelectorOutOfRange {
                index: bad,
                dim: num_objectives,
            });
        }
        Ok(Selector(indices))
    }

    pub fn full(num_objectives: usize) -> Self {
        Selector((0..num_objectives).collect())
    }

    fn from_mask(mask: u32, num_objectives: usize) -> Self {
        Selector((0..num_objectives).filter(|j| mask >> j & 1 == 1).collect())
    }

    /// All `2^p − 1` nonempty selectors in bitmask order: `{0}`, `{1}`,
    /// `{0,1}`, `{2}`, …
    pub fn all(num_objectives: usize, cap: usize) -> Result<Vec<Selector>> {
        if num_objectives > cap || num_objectives >= 32 {
            return Err(Error::TooManyObjectives {
                found: num_objectives,
                cap,
            });
        }
        Ok((1u32..1 << num_objectives)
            .map(|mask| Selector::from_mask(mask, num_objectives))
            .collect())
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

fn check_selector(inst: &MopInstance, rho: &Selector) -> Result<()> {
    if rho.is_empty() {
        return Err(Error::EmptySelector);
    }
    match rho.0.iter().find(|&&i| i >= inst.num_objectives()) {
        Some(&index) => Err(Error::SelectorOutOfRange {
            index,
            dim: inst.num_objectives(),
        }),
        None => Ok(()),
    }
}

/// `X_E(f^ρ)`: decisions whose projected rows are nondominated among all
/// projected rows. Decisions with identical projected rows share a verdict.
pub fn efficient_solutions(inst: &MopInstance, rho: &Selector) -> Result<Vec<usize>> {
    check_selector(inst, rho)?;
    nondominated_set(&inst.projected_image(rho))
}

/// `X_WE(f)` for the full objective vector.
pub fn weakly_efficient_solutions(inst: &MopInstance) -> Result<Vec<usize>> {
    weakly_nondominated_set(&inst.image())
}

/// `X_PE(f^ρ)` together with each member's least Geoffrion bound.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProperSolutions {
    pub members: Vec<usize>,
    pub bounds: BTreeMap<usize, Rational>,
}

/// `X_PE(f^ρ)`. A finite image has finite trade-off bounds everywhere, so this
/// coincides with the efficient set. For `|ρ| = 1` it is the argmin set of
/// the single objective, with bound zero.
pub fn properly_efficient_solutions(inst: &MopInstance, rho: &Selector) -> Result<ProperSolutions> {
    check_selector(inst, rho)?;
    let report = properly_nondominated_set(&inst.projected_image(rho))?;
    Ok(ProperSolutions {
        members: report.properly_nondominated,
        bounds: report.bounds,
    })
}

/// A decision label with the first selector (in canonical order) whose
/// subproblem contains it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witnessed {
    pub label: String,
    pub selector: Selector,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReducibilityReport {
    pub we_set: Vec<String>,
    pub union_e: Vec<Witnessed>,
    pub union_pe: Vec<Witnessed>,
    pub equality_e: bool,
    pub equality_pe: bool,
    /// Weakly efficient decisions outside `∪_ρ X_E(f^ρ)`.
    pub strict_witnesses: Vec<String>,
}

impl ReducibilityReport {
    pub fn union_e_labels(&self) -> Vec<&str> {
        self.union_e.iter().map(|w| w.label.as_str()).collect()
    }

    pub fn union_pe_labels(&self) -> Vec<&str> {
        self.union_pe.iter().map(|w| w.label.as_str()).collect()
    }
}

/// Enumerates every subproblem and compares the unions with `X_WE(f)`.
pub fn reducibility_report(
    inst: &MopInstance,
    max_objectives: usize,
) -> Result<ReducibilityReport> {
    let selectors = Selector::all(inst.num_objectives(), max_objectives)?;
    let per_selector: Vec<(Vec<usize>, Vec<usize>)> = selectors
        .par_iter()
        .map(|rho| {
            Ok((
                efficient_solutions(inst, rho)?,
                properly_efficient_solutions(inst, rho)?.members,
            ))
        })
        .collect::<Result<_>>()?;

    let n = inst.len();
    let mut witness_e: Vec<Option<&Selector>> = vec![None; n];
    let mut witness_pe: Vec<Option<&Selector>> = vec![None; n];
    for (rho, (eff, proper)) in selectors.iter().zip(&per_selector) {
        for &i in eff {
            witness_e[i].get_or_insert(rho);
        }
        for &i in proper {
            witness_pe[i].get_or_insert(rho);
        }
    }
    let collect = |w: &[Option<&Selector>]| -> Vec<Witnessed> {
        w.iter()
            .enumerate()
            .filter_map(|(i, s)| {
                s.map(|s| Witnessed {
                    label: inst.labels[i].clone(),
                    selector: s.clone(),
                })
            })
            .collect()
    };

    let we = weakly_efficient_solutions(inst)?;
    let in_union_e: Vec<usize> = (0..n).filter(|&i| witness_e[i].is_some()).collect();
    let in_union_pe: Vec<usize> = (0..n).filter(|&i| witness_pe[i].is_some()).collect();
    let strict: Vec<usize> = we
        .iter()
        .copied()
        .filter(|i| witness_e[*i].is_none())
        .collect();
    Ok(ReducibilityReport {
        equality_e: in_union_e == we,
        equality_pe: in_union_pe == we,
        we_set: inst.label_list(&we),
        union_e: collect(&witness_e),
        union_pe: collect(&witness_pe),
        strict_witnesses: inst.label_list(&strict),
    })
}

/// Decisions minimizing `λ·f(x)`, for `λ >= 0`, `λ != 0`.
pub fn weighted_sum_argmin(inst: &MopInstance, weights: &[Rational]) -> Result<Vec<usize>> {
    check_dim(inst.num_objectives(), weights.len())?;
    if weights.iter().any(Rational::is_negative) {
        return Err(Error::NegativeWeight);
    }
    if weights.iter().all(Rational::is_zero) {
        return Err(Error::ZeroWeights);
    }
    let values: Vec<Rational> = inst.objectives.iter().map(|row| row.dot(weights)).collect();
    let best = values.iter().min().expect("instance is nonempty");
    Ok((0..values.len()).filter(|&i| &values[i] == best).collect())
}

/// The selector `{j : λ_j > 0}`.
pub fn support(weights: &[Rational]) -> Result<Selector> {
    Selector::new(
        (0..weights.len())
            .filter(|&j| weights[j].is_positive())
            .collect(),
        weights.len(),
    )
}

/// Outcome of checking `y0 ∈ Y_WN ⟺ ∃ρ: proj_ρ y0 ∈ (proj_ρ Y)_PN` on a hull.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HullReducibilityRecord {
    pub query: Point,
    pub lhs: bool,
    pub rhs: bool,
    /// First selector (canonical order) under which the projection is
    /// properly nondominated.
    pub witness: Option<Selector>,
    /// Weights certifying proper nondominance of the projection.
    pub weights: Option<Vec<Rational>>,
}

impl HullReducibilityRecord {
    pub fn agrees(&self) -> bool {
        self.lhs == self.rhs
    }
}

pub fn hull_reducibility_check(
    hull: &HullSet,
    queries: &[Point],
    max_objectives: usize,
) -> Result<Vec<HullReducibilityRecord>> {
    let selectors = Selector::all(hull.dim(), max_objectives)?;
    let projections: Vec<HullSet> = selectors
        .iter()
        .map(|rho| hull.project(rho.indices()))
        .collect();
    queries
        .par_iter()
        .map(|y0| {
            if !hull_contains(hull, y0)? {
                return Err(Error::NotInHull);
            }
            let lhs = hull_is_weakly_nondominated(hull, y0)?;
            let mut found = None;
            for (rho, projected) in selectors.iter().zip(&projections) {
                let v = hull_is_properly_nondominated(projected, &y0.project(rho.indices()))?;
                if v.verdict {
                    found = Some((rho.clone(), v.witness));
                    break;
                }
            }
            let (witness, weights) = match found {
                Some((rho, w)) => (Some(rho), w),
                None => (None, None),
            };
            Ok(HullReducibilityRecord {
                query: y0.clone(),
                lhs,
                rhs: witness.is_some(),
                witness,
                weights,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::q;

    fn sel(ix: &[usize], p: usize) -> Selector {
        Selector::new(ix.to_vec(), p).unwrap()
    }

    fn triangle() -> MopInstance {
        MopInstance::from_ints(&[&[1, 0], &[0, 1], &[1, 1]]).unwrap()
    }

    #[test]
    fn selectors() {
        assert_eq!(Selector::new(vec![], 2), Err(Error::EmptySelector));
        assert!(matches!(
            Selector::new(vec![2], 2),
            Err(Error::SelectorOutOfRange { .. })
        ));
        let all = Selector::all(2, 16).unwrap();
        assert_eq!(all, vec![sel(&[0], 2), sel(&[1], 2), sel(&[0, 1], 2)]);
        assert_eq!(
            Selector::all(17, 16),
            Err(Error::TooManyObjectives { found: 17, cap: 16 })
        );
        assert_eq!(
            Selector::all(4, 3),
            Err(Error::TooManyObjectives { found: 4, cap: 3 })
        );
        assert_eq!(sel(&[1, 0], 2).to_string(), "{0,1}");
    }

    #[test]
    fn instances_need_two_objectives() {
        assert!(MopInstance::from_ints(&[&[1], &[2]]).is_err());
        assert!(MopInstance::from_rows(vec![]).is_err());
    }

    #[test]
    fn efficient_sets_per_selector() {
        let inst = triangle();
        assert_eq!(
            efficient_solutions(&inst, &sel(&[0, 1], 2)).unwrap(),
            vec![0, 1]
        );
        assert_eq!(efficient_solutions(&inst, &sel(&[0], 2)).unwrap(), vec![1]);
        assert_eq!(efficient_solutions(&inst, &sel(&[1], 2)).unwrap(), vec![0]);
    }

    #[test]
    fn weakly_efficient_examples() {
        assert_eq!(
            weakly_efficient_solutions(&triangle()).unwrap(),
            vec![0, 1, 2]
        );
        let two = MopInstance::from_ints(&[&[0, 0], &[1, 1]]).unwrap();
        assert_eq!(weakly_efficient_solutions(&two).unwrap(), vec![0]);
        let dup = MopInstance::from_ints(&[&[0, 0], &[0, 0]]).unwrap();
        assert_eq!(weakly_efficient_solutions(&dup).unwrap(), vec![0, 1]);
    }

    #[test]
    fn properly_efficient_examples() {
        let inst = MopInstance::from_ints(&[&[0, 2], &[1, 0]]).unwrap();
        let pe = properly_efficient_solutions(&inst, &sel(&[0, 1], 2)).unwrap();
        assert_eq!(pe.members, vec![0, 1]);
        assert_eq!(pe.bounds, BTreeMap::from([(0, q("2")), (1, q("1/2"))]));
        let scalar = properly_efficient_solutions(&triangle(), &sel(&[0], 2)).unwrap();
        assert_eq!(scalar.members, vec![1]);
        assert_eq!(
            properly_efficient_solutions(&triangle(), &sel(&[0, 1], 2))
                .unwrap()
                .members,
            vec![0, 1]
        );
    }

    #[test]
    fn report_on_the_nonconvex_triangle() {
        let r = reducibility_report(&triangle(), DEFAULT_MAX_OBJECTIVES).unwrap();
        assert_eq!(r.we_set, vec!["x1", "x2", "x3"]);
        assert_eq!(r.union_e_labels(), vec!["x1", "x2"]);
        assert!(!r.equality_e);
        assert!(!r.equality_pe);
        assert_eq!(r.strict_witnesses, vec!["x3"]);
        // x1 = (1,0) is first found by ρ = {1}
        assert_eq!(r.union_e[0].selector, sel(&[1], 2));
    }

    #[test]
    fn report_when_equality_holds() {
        let inst = MopInstance::from_ints(&[&[0, 5], &[5, 0]]).unwrap();
        let r = reducibility_report(&inst, DEFAULT_MAX_OBJECTIVES).unwrap();
        assert_eq!(r.we_set, vec!["x1", "x2"]);
        assert_eq!(r.union_e_labels(), vec!["x1", "x2"]);
        assert_eq!(r.union_pe_labels(), vec!["x1", "x2"]);
        assert!(r.equality_e && r.equality_pe);
        assert!(r.strict_witnesses.is_empty());

        let single = MopInstance::from_ints(&[&[3, 4]]).unwrap();
        let r = reducibility_report(&single, DEFAULT_MAX_OBJECTIVES).unwrap();
        assert!(r.equality_e && r.equality_pe);
        assert_eq!(r.we_set, vec!["x1"]);
    }

    #[test]
    fn weighted_sums() {
        let inst = triangle();
        assert_eq!(
            weighted_sum_argmin(&inst, &[q("1"), q("1")]).unwrap(),
            vec![0, 1]
        );
        assert_eq!(
            weighted_sum_argmin(&inst, &[q("1"), q("0")]).unwrap(),
            vec![1]
        );
        assert_eq!(
            weighted_sum_argmin(&inst, &[q("0"), q("0")]),
            Err(Error::ZeroWeights)
        );
        assert_eq!(
            weighted_sum_argmin(&inst, &[q("-1"), q("1")]),
            Err(Error::NegativeWeight)
        );
        assert_eq!(support(&[q("0"), q("2")]).unwrap(), sel(&[1], 2));
    }

    #[test]
    fn hull_reducibility_examples() {
        let tri = HullSet::from_ints(&[&[1, 0], &[0, 1], &[1, 1]]).unwrap();
        let queries = vec![Point::from_ints(&[1, 1]), Point::from_ints(&[1, 0])];
        let recs = hull_reducibility_check(&tri, &queries, DEFAULT_MAX_OBJECTIVES).unwrap();
        assert!(!recs[0].lhs && !recs[0].rhs);
        assert!(recs[1].lhs && recs[1].rhs);
        assert_eq!(recs[1].witness, Some(sel(&[1], 2)));

        let seg = HullSet::from_ints(&[&[1, 0], &[0, 1]]).unwrap();
        let recs = hull_reducibility_check(&seg, &[Point::parse(&["1/2", "1/2"])], 16).unwrap();
        assert!(recs[0].lhs && recs[0].rhs);
        assert_eq!(recs[0].witness, Some(sel(&[0, 1], 2)));
        assert_eq!(recs[0].weights, Some(vec![q("1"), q("1")]));

        assert_eq!(
            hull_reducibility_check(&seg, &[Point::from_ints(&[0, 0])], 16),
            Err(Error::NotInHull)
        );
    }
}
