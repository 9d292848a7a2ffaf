//! Constructive external stability.
//!
//! For each `y0 ∈ Y` the auxiliary problem `min Σ_j y_j s.t. y ≦ y0, y ∈ Y`
//! (or `min d·y s.t. y0 − y ∈ C` for a general ordering cone with
//! `d ∈ C^{++}`) has an optimum, and every optimum is nondominated. Solving it
//! for every point yields a certificate of `Y ⊆ Y_N + C` that can be checked
//! without rerunning any optimization.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use crate::cone::{cone_contains, strictly_positive_direction, Direction, PolyhedralCone};
use crate::error::{check_dim, Error, Result};
use crate::numerics::Rational;
use crate::order::{dominates, weakly_below, Point, PointSet};

/// Picks the best candidate by `key`, breaking ties by the lexicographically
/// smallest point and then preferring `source` itself among equal points.
fn best_candidate(
    y: &PointSet,
    source: usize,
    candidates: impl Iterator<Item = (usize, Rational)>,
) -> usize {
    let pts = y.points();
    candidates
        .min_by(|(a, ka), (b, kb)| {
            ka.cmp(kb)
                .then_with(|| pts[*a].cmp(&pts[*b]))
                .then_with(|| match (*a == source, *b == source) {
                    (true, false) => Ordering::Less,
                    (false, true) => Ordering::Greater,
                    _ => a.cmp(b),
                })
        })
        .map(|(i, _)| i)
        .expect("the source point is always feasible")
}

fn dominator_index(y: &PointSet, source: usize) -> usize {
    let y0 = y.get(source);
    let feasible = y
        .iter()
        .enumerate()
        .filter(|(_, p)| weakly_below(p, y0))
        .map(|(i, p)| (i, p.sum()));
    best_candidate(y, source, feasible)
}

fn cone_dominator_index(
    y: &PointSet,
    cone: &PolyhedralCone,
    d: &Direction,
    source: usize,
) -> Result<usize> {
    let y0 = y.get(source);
    let mut feasible = Vec::new();
    for (i, p) in y.iter().enumerate() {
        if cone_contains(cone, &(y0 - p))? {
            feasible.push((i, p.dot(d.point().coords())));
        }
    }
    Ok(best_candidate(y, source, feasible.into_iter()))
}

fn source_index(y: &PointSet, y0: &Point) -> Result<usize> {
    y.require_nonempty()?;
    check_dim(y.dim(), y0.dim())?;
    y.position(y0).ok_or(Error::NotMember)
}

/// Index of an optimal solution of `min Σ y_j s.t. y ≦ y0, y ∈ Y`. Ties on the
/// sum go to the lexicographically smallest point.
pub fn find_dominator(y: &PointSet, y0: &Point) -> Result<usize> {
    Ok(dominator_index(y, source_index(y, y0)?))
}

/// Index of a minimizer of `d·y` over `{y ∈ Y : y0 − y ∈ C}`. When `direction`
/// is `None` one is synthesized with [`strictly_positive_direction`].
pub fn find_dominator_cone(
    y: &PointSet,
    cone: &PolyhedralCone,
    y0: &Point,
    direction: Option<&Direction>,
) -> Result<usize> {
    let source = source_index(y, y0)?;
    check_dim(y.dim(), cone.dim())?;
    let d = resolve_direction(cone, direction)?;
    cone_dominator_index(y, cone, &d, source)
}

fn resolve_direction(cone: &PolyhedralCone, direction: Option<&Direction>) -> Result<Direction> {
    cone.require_ordering()?;
    match direction {
        Some(d) if d.is_strictly_positive_on(cone) => Ok(d.clone()),
        Some(_) => Err(Error::InvalidInstance(
            "direction is not strictly positive on the cone".into(),
        )),
        None => strictly_positive_direction(cone),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Assignment {
    pub from: usize,
    pub to: usize,
}

/// A total map from each point of `Y` to a nondominated point that
/// dominates it or equals it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DominatorCertificate {
    /// `None` for the natural ordering cone.
    pub cone: Option<PolyhedralCone>,
    pub assignments: Vec<Assignment>,
}

impl DominatorCertificate {
    pub fn dominator(&self, i: usize) -> usize {
        self.assignments[i].to
    }

    /// Rechecks every assignment from scratch: the target is nondominated
    /// (under the certificate's cone), it dominates or equals its source, and
    /// it is its own target.
    pub fn verify(&self, y: &PointSet) -> Result<()> {
        let reject = |msg: String| Err(Error::InvalidCertificate(msg));
        if self.assignments.len() != y.len() {
            return reject(format!(
                "{} assignments for {} points",
                self.assignments.len(),
                y.len()
            ));
        }
        let pts = y.points();
        for (i, a) in self.assignments.iter().enumerate() {
            if a.from != i || a.to >= pts.len() {
                return reject(format!("malformed assignment {a:?} at position {i}"));
            }
            let (src, dom) = (&pts[a.from], &pts[a.to]);
            let (below, undominated) = match &self.cone {
                None => (
                    weakly_below(dom, src),
                    pts.iter().all(|other| !dominates(other, dom)),
                ),
                Some(c) => {
                    let mut undominated = true;
                    for other in pts {
                        if other != dom && cone_contains(c, &(dom - other))? {
                            undominated = false;
                            break;
                        }
                    }
                    (cone_contains(c, &(src - dom))?, undominated)
                }
            };
            if !below {
                return reject(format!("point {} does not dominate point {}", a.to, a.from));
            }
            if !undominated {
                return reject(format!(
                    "dominator {} of point {} is itself dominated",
                    a.to, a.from
                ));
            }
            if self.assignments[a.to].to != a.to {
                return reject(format!("dominator {} is not assigned to itself", a.to));
            }
        }
        Ok(())
    }
}

/// Solves the auxiliary problem for every point of `Y`. A finite set is
/// compact and semicompact in the cone order, so the optimum always exists.
pub fn external_stability_certificate(
    y: &PointSet,
    cone: Option<&PolyhedralCone>,
) -> Result<DominatorCertificate> {
    y.require_nonempty()?;
    let targets: Vec<usize> = match cone {
        None => (0..y.len())
            .into_par_iter()
            .map(|i| dominator_index(y, i))
            .collect(),
        Some(c) => {
            check_dim(y.dim(), c.dim())?;
            let d = resolve_direction(c, None)?;
            (0..y.len())
                .into_par_iter()
                .map(|i| cone_dominator_index(y, c, &d, i))
                .collect::<Result<_>>()?
        }
    };
    Ok(DominatorCertificate {
        cone: cone.cloned(),
        assignments: targets
            .into_iter()
            .enumerate()
            .map(|(from, to)| Assignment { from, to })
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::{cone_nondominated_set, nondominated_set};
    use proptest::prelude::*;

    fn set(rows: &[&[i64]]) -> PointSet {
        PointSet::from_ints(rows).unwrap()
    }

    #[test]
    fn dominator_examples() {
        let y = set(&[&[1, 2], &[2, 1], &[2, 2]]);
        assert_eq!(find_dominator(&y, &Point::from_ints(&[2, 2])).unwrap(), 0);
        assert_eq!(find_dominator(&y, &Point::from_ints(&[2, 1])).unwrap(), 1);
        assert_eq!(
            find_dominator(&set(&[&[0, 0]]), &Point::from_ints(&[0, 0])).unwrap(),
            0
        );
        assert_eq!(
            find_dominator(&y, &Point::from_ints(&[0, 0])),
            Err(Error::NotMember)
        );
    }

    #[test]
    fn cone_dominator_examples() {
        let skew = PolyhedralCone::from_ints(&[&[1, 0], &[1, 1]]).unwrap();
        let y = set(&[&[0, 0], &[1, 0], &[0, 1]]);
        let d = Direction(Point::from_ints(&[1, 0]));
        let i = find_dominator_cone(&y, &skew, &Point::from_ints(&[1, 0]), Some(&d)).unwrap();
        assert_eq!(i, 0);
        assert!(cone_nondominated_set(&y, &skew).unwrap().contains(&i));

        let line = PolyhedralCone::from_ints(&[&[1, 0], &[-1, 0]]).unwrap();
        assert_eq!(
            find_dominator_cone(&y, &line, &Point::from_ints(&[1, 0]), None),
            Err(Error::NotPointed)
        );
        let bad = Direction(Point::from_ints(&[0, 1]));
        assert!(find_dominator_cone(&y, &skew, &Point::from_ints(&[1, 0]), Some(&bad)).is_err());
    }

    #[test]
    fn certificate_examples() {
        let y = set(&[&[1, 2], &[2, 1], &[2, 2]]);
        let cert = external_stability_certificate(&y, None).unwrap();
        assert_eq!(
            cert.assignments.iter().map(|a| a.to).collect::<Vec<_>>(),
            vec![0, 1, 0]
        );
        cert.verify(&y).unwrap();

        let antichain = set(&[&[0, 3], &[1, 2], &[2, 1], &[3, 0]]);
        let cert = external_stability_certificate(&antichain, None).unwrap();
        assert!(cert.assignments.iter().all(|a| a.from == a.to));

        let chain = set(&[&[3, 3], &[2, 2], &[1, 1]]);
        let cert = external_stability_certificate(&chain, None).unwrap();
        assert!(cert.assignments.iter().all(|a| a.to == 2));
        assert_eq!(
            external_stability_certificate(&PointSet::new(vec![]).unwrap(), None),
            Err(Error::EmptySet)
        );
    }

    #[test]
    fn duplicates_keep_their_own_index() {
        let y = set(&[&[1, 1], &[2, 2], &[1, 1]]);
        let cert = external_stability_certificate(&y, None).unwrap();
        assert_eq!(
            cert.assignments.iter().map(|a| a.to).collect::<Vec<_>>(),
            vec![0, 0, 2]
        );
        cert.verify(&y).unwrap();
    }

    #[test]
    fn tampered_certificates_are_rejected() {
        let y = set(&[&[1, 2], &[2, 1], &[2, 2]]);
        let mut cert = external_stability_certificate(&y, None).unwrap();
        cert.assignments[2].to = 2; // (2,2) is dominated
        assert!(matches!(cert.verify(&y), Err(Error::InvalidCertificate(_))));
        let mut cert = external_stability_certificate(&y, None).unwrap();
        cert.assignments[0].to = 1; // (2,1) does not dominate (1,2)
        assert!(matches!(cert.verify(&y), Err(Error::InvalidCertificate(_))));
    }

    fn random_set() -> impl Strategy<Value = PointSet> {
        (2usize..=4).prop_flat_map(|p| {
            prop::collection::vec(prop::collection::vec(0i64..6, p), 1..25).prop_map(|rows| {
                PointSet::new(rows.iter().map(|r| Point::from_ints(r)).collect()).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn certificates_verify_and_solve_the_auxiliary_problem(y in random_set()) {
            let cert = external_stability_certificate(&y, None).unwrap();
            prop_assert!(cert.verify(&y).is_ok());
            let nd = nondominated_set(&y).unwrap();
            for a in &cert.assignments {
                prop_assert!(nd.contains(&a.to));
                prop_assert_eq!(cert.dominator(a.to), a.to);
                let best = y.get(a.to).sum();
                for z in y.iter().filter(|z| weakly_below(z, y.get(a.from))) {
                    prop_assert!(best <= z.sum());
                }
            }
        }

        #[test]
        fn natural_cone_reduces_to_the_componentwise_case(y in random_set()) {
            let natural = PolyhedralCone::natural(y.dim());
            let ones = Direction(Point::new(vec![Rational::one(); y.dim()]));
            for p in y.iter() {
                prop_assert_eq!(
                    find_dominator_cone(&y, &natural, p, Some(&ones)).unwrap(),
                    find_dominator(&y, p).unwrap()
                );
            }
        }
    }
}
