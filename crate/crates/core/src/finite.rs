//! Exact classification of finite point sets into nondominated, weakly
//! nondominated and properly nondominated points.
//!
//! All routines compare every pair of points. Results are index lists in
//! input order, so exact duplicates of an undominated value are reported at
//! each of their positions: a point never dominates an equal point.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::cone::{cone_contains, PolyhedralCone};
use crate::error::{check_dim, Error, Result};
use crate::numerics::Rational;
use crate::order::{dominates, strictly_dominates, Point, PointSet};

/// Indices `i` such that no `y ∈ Y` satisfies `y ≤ y^i`.
pub fn nondominated_set(y: &PointSet) -> Result<Vec<usize>> {
    y.require_nonempty()?;
    let pts = y.points();
    Ok((0..pts.len())
        .filter(|&i| !pts.iter().any(|other| dominates(other, &pts[i])))
        .collect())
}

/// Indices `i` such that no `y ∈ Y` satisfies `y < y^i` in every coordinate.
pub fn weakly_nondominated_set(y: &PointSet) -> Result<Vec<usize>> {
    y.require_nonempty()?;
    let pts = y.points();
    Ok((0..pts.len())
        .filter(|&i| !pts.iter().any(|other| strictly_dominates(other, &pts[i])))
        .collect())
}

/// Least trade-off bound of a nondominated point: the largest, over all
/// `y` and `i` with `y_i < y0_i`, of the smallest ratio
/// `(y0_i − y_i) / (y_j − y0_j)` over `j` with `y_j > y0_j`.
fn least_tradeoff_bound(points: &[Point], y0: &Point) -> Rational {
    let mut best = Rational::zero();
    for y in points {
        let gains: Vec<usize> = (0..y0.dim()).filter(|&j| y[j] > y0[j]).collect();
        for i in (0..y0.dim()).filter(|&i| y[i] < y0[i]) {
            let improvement = &y0[i] - &y[i];
            let smallest = gains
                .iter()
                .map(|&j| &improvement / &(&y[j] - &y0[j]))
                .min()
                .expect("a nondominated point is beaten elsewhere by every improving point");
            if smallest > best {
                best = smallest;
            }
        }
    }
    best
}

/// The smallest `M` certifying that `y0` is properly nondominated in the
/// sense of Geoffrion. Zero when no point of `Y` improves on `y0` anywhere.
pub fn geoffrion_bound(y: &PointSet, y0: &Point) -> Result<Rational> {
    y.require_nonempty()?;
    check_dim(y.dim(), y0.dim())?;
    if y.position(y0).is_none() {
        return Err(Error::NotMember);
    }
    if y.iter().any(|other| dominates(other, y0)) {
        return Err(Error::NotNondominated);
    }
    Ok(least_tradeoff_bound(y.points(), y0))
}

/// Classification of a finite point set.
///
/// For finite input every nondominated point has a finite trade-off bound,
/// so `properly_nondominated == nondominated`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DominanceReport {
    pub nondominated: Vec<usize>,
    pub weakly_nondominated: Vec<usize>,
    pub properly_nondominated: Vec<usize>,
    /// Least Geoffrion bound `M*` of each properly nondominated index.
    pub bounds: BTreeMap<usize, Rational>,
}

pub fn properly_nondominated_set(y: &PointSet) -> Result<DominanceReport> {
    let nondominated = nondominated_set(y)?;
    let weakly_nondominated = weakly_nondominated_set(y)?;
    let bounds: BTreeMap<usize, Rational> = nondominated
        .par_iter()
        .map(|&i| (i, least_tradeoff_bound(y.points(), y.get(i))))
        .collect();
    Ok(DominanceReport {
        properly_nondominated: bounds.keys().copied().collect(),
        nondominated,
        weakly_nondominated,
        bounds,
    })
}

/// Indices `i` such that no `y ∈ Y`, `y != y^i`, has `y^i − y ∈ C`.
pub fn cone_nondominated_set(y: &PointSet, cone: &PolyhedralCone) -> Result<Vec<usize>> {
    y.require_nonempty()?;
    check_dim(cone.dim(), y.dim())?;
    cone.require_ordering()?;
    let pts = y.points();
    let flags: Vec<bool> = (0..pts.len())
        .into_par_iter()
        .map(|i| {
            for other in pts {
                if other != &pts[i] && cone_contains(cone, &(&pts[i] - other))? {
                    return Ok(false);
                }
            }
            Ok(true)
        })
        .collect::<Result<_>>()?;
    Ok(flags
        .iter()
        .enumerate()
        .filter(|(_, &keep)| keep)
        .map(|(i, _)| i)
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::q;
    use crate::oracle::naive_dominance;
    use proptest::prelude::*;

    fn set(rows: &[&[i64]]) -> PointSet {
        PointSet::from_ints(rows).unwrap()
    }

    #[test]
    fn nondominated_examples() {
        assert_eq!(
            nondominated_set(&set(&[&[1, 2], &[2, 1], &[2, 2]])).unwrap(),
            vec![0, 1]
        );
        assert_eq!(nondominated_set(&set(&[&[5, 5]])).unwrap(), vec![0]);
        assert_eq!(
            nondominated_set(&set(&[&[3], &[1], &[2]])).unwrap(),
            vec![1]
        );
        assert_eq!(
            nondominated_set(&PointSet::new(vec![]).unwrap()),
            Err(Error::EmptySet)
        );
    }

    #[test]
    fn duplicates_are_all_reported() {
        assert_eq!(
            nondominated_set(&set(&[&[1, 1], &[2, 0], &[1, 1]])).unwrap(),
            vec![0, 1, 2]
        );
    }

    #[test]
    fn weakly_nondominated_examples() {
        assert_eq!(
            weakly_nondominated_set(&set(&[&[0, 1], &[0, 2]])).unwrap(),
            vec![0, 1]
        );
        assert_eq!(
            weakly_nondominated_set(&set(&[&[1, 0], &[0, 1], &[1, 1]])).unwrap(),
            vec![0, 1, 2]
        );
        assert_eq!(
            weakly_nondominated_set(&set(&[&[0, 0], &[1, 1]])).unwrap(),
            vec![0]
        );
    }

    #[test]
    fn geoffrion_bound_examples() {
        let y = set(&[&[0, 2], &[1, 0]]);
        assert_eq!(
            geoffrion_bound(&y, &Point::from_ints(&[1, 0])).unwrap(),
            q("1/2")
        );
        assert_eq!(
            geoffrion_bound(&y, &Point::from_ints(&[0, 2])).unwrap(),
            q("2")
        );
        let single = set(&[&[4, 4]]);
        assert_eq!(
            geoffrion_bound(&single, &Point::from_ints(&[4, 4])).unwrap(),
            q("0")
        );
    }

    #[test]
    fn geoffrion_bound_errors() {
        let y = set(&[&[1, 2], &[2, 1], &[2, 2]]);
        assert_eq!(
            geoffrion_bound(&y, &Point::from_ints(&[9, 9])),
            Err(Error::NotMember)
        );
        assert_eq!(
            geoffrion_bound(&y, &Point::from_ints(&[2, 2])),
            Err(Error::NotNondominated)
        );
    }

    #[test]
    fn proper_report_examples() {
        let r = properly_nondominated_set(&set(&[&[1, 2], &[2, 1], &[2, 2]])).unwrap();
        assert_eq!(r.properly_nondominated, vec![0, 1]);
        assert_eq!(r.properly_nondominated, r.nondominated);
        let r = properly_nondominated_set(&set(&[&[7, 7]])).unwrap();
        assert_eq!(r.bounds, BTreeMap::from([(0, q("0"))]));
        let r = properly_nondominated_set(&set(&[&[0, 2], &[1, 0]])).unwrap();
        assert_eq!(r.bounds, BTreeMap::from([(0, q("2")), (1, q("1/2"))]));
    }

    #[test]
    fn cone_nondominated_examples() {
        let y = set(&[&[1, 2], &[2, 1], &[2, 2], &[0, 5]]);
        assert_eq!(
            cone_nondominated_set(&y, &PolyhedralCone::natural(2)).unwrap(),
            nondominated_set(&y).unwrap()
        );
        let skew = PolyhedralCone::from_ints(&[&[1, 0], &[1, 1]]).unwrap();
        let y = set(&[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(cone_nondominated_set(&y, &skew).unwrap(), vec![0, 2]);
        let line = PolyhedralCone::from_ints(&[&[1, 0], &[-1, 0]]).unwrap();
        assert_eq!(cone_nondominated_set(&y, &line), Err(Error::NotPointed));
        assert!(matches!(
            cone_nondominated_set(&y, &PolyhedralCone::natural(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    /// Smallest M satisfying Geoffrion's condition, checked from the
    /// definition: M works, and any slightly smaller M fails.
    fn bound_is_least_valid(points: &[Point], y0: &Point, m: &Rational) -> bool {
        let valid = |m: &Rational| {
            points.iter().all(|y| {
                (0..y0.dim()).filter(|&i| y[i] < y0[i]).all(|i| {
                    (0..y0.dim())
                        .any(|j| y[j] > y0[j] && &(&(&y0[i] - &y[i]) / &(&y[j] - &y0[j])) <= m)
                })
            })
        };
        let slightly_less = m * &q("999/1000");
        valid(m) && (m.is_zero() || !valid(&slightly_less))
    }

    fn random_set() -> impl Strategy<Value = PointSet> {
        (1usize..=4).prop_flat_map(|p| {
            prop::collection::vec(prop::collection::vec(0i64..6, p), 1..30).prop_map(|rows| {
                PointSet::new(rows.iter().map(|r| Point::from_ints(r)).collect()).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn classifiers_match_pairwise_oracle(y in random_set()) {
            let rows: Vec<Vec<Rational>> = y.iter().map(|p| p.coords().to_vec()).collect();
            let (nd, wnd) = naive_dominance(&rows);
            prop_assert_eq!(nondominated_set(&y).unwrap(), nd);
            prop_assert_eq!(weakly_nondominated_set(&y).unwrap(), wnd);
        }

        #[test]
        fn chain_and_least_bounds(y in random_set()) {
            let r = properly_nondominated_set(&y).unwrap();
            prop_assert!(r.properly_nondominated.iter().all(|i| r.nondominated.contains(i)));
            prop_assert!(r.nondominated.iter().all(|i| r.weakly_nondominated.contains(i)));
            prop_assert_eq!(&r.properly_nondominated, &r.nondominated);
            for (&i, m) in &r.bounds {
                prop_assert!(bound_is_least_valid(y.points(), y.get(i), m));
            }
        }

        #[test]
        fn invariant_under_permutation_and_dominated_additions(y in random_set(), seed in 0usize..1000) {
            let nd = nondominated_set(&y).unwrap();
            let n = y.len();
            let perm: Vec<usize> = (0..n).map(|k| (k * 7 + seed) % n).collect();
            let mut distinct = perm.clone();
            distinct.sort();
            distinct.dedup();
            if distinct.len() == n {
                let shuffled = PointSet::new(perm.iter().map(|&k| y.get(k).clone()).collect()).unwrap();
                let mut mapped: Vec<usize> = nondominated_set(&shuffled).unwrap().iter().map(|&k| perm[k]).collect();
                mapped.sort();
                prop_assert_eq!(&mapped, &nd);
            }
            // push a point strictly above an existing one
            let base = y.get(seed % n);
            let mut worse = base.coords().to_vec();
            worse[0] += &Rational::one();
            let mut pts = y.points().to_vec();
            pts.push(Point::new(worse));
            prop_assert_eq!(nondominated_set(&PointSet::new(pts).unwrap()).unwrap(), nd);
        }
    }

    #[test]
    fn larger_cone_gives_fewer_nondominated_points() {
        let small = PolyhedralCone::natural(2);
        let large = PolyhedralCone::from_ints(&[&[1, 0], &[0, 1], &[2, -1], &[-1, 2]]).unwrap();
        assert!(large.pointed());
        let y = set(&[&[0, 3], &[1, 1], &[3, 0], &[2, 2], &[4, -1], &[-1, 4]]);
        let in_small = cone_nondominated_set(&y, &small).unwrap();
        let in_large = cone_nondominated_set(&y, &large).unwrap();
        assert!(in_large.iter().all(|i| in_small.contains(i)));
        assert!(in_large.len() < in_small.len());
    }
}
