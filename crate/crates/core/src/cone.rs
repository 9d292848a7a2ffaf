//! Finitely generated ordering cones.
//!
//! A cone is stored by its generators only; membership, pointedness and
//! strictly positive directions are each a small LP over the generator
//! weights.

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::numerics::{LinearProgram, Rational, Relation};
use crate::order::Point;

/// `cone{g_1, …, g_m}`, all nonnegative combinations of the generators.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PolyhedralCone {
    #[serde(skip)]
    dim: usize,
    generators: Vec<Point>,
    #[serde(skip)]
    pointed: bool,
    #[serde(skip)]
    proper: bool,
}

#[derive(Deserialize)]
struct RawCone {
    generators: Vec<Point>,
    #[serde(default)]
    dim: Option<usize>,
}

impl<'de> Deserialize<'de> for PolyhedralCone {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawCone::deserialize(deserializer)?;
        let dim = raw
            .dim
            .or_else(|| raw.generators.first().map(Point::dim))
            .ok_or_else(|| serde::de::Error::custom("a cone without generators needs \"dim\""))?;
        PolyhedralCone::new(dim, raw.generators).map_err(serde::de::Error::custom)
    }
}

impl PolyhedralCone {
    /// Every generator must be nonzero and `dim`-dimensional. An empty list
    /// gives the trivial cone `{0}`, which is not proper.
    pub fn new(dim: usize, generators: Vec<Point>) -> Result<Self> {
        for g in &generators {
            check_dim(dim, g.dim())?;
            if g.is_zero() {
                return Err(Error::InvalidInstance("cone generator is zero".into()));
            }
        }
        let mut cone = PolyhedralCone {
            dim,
            generators,
            pointed: false,
            proper: false,
        };
        cone.pointed = is_pointed(&cone);
        cone.proper = compute_proper(&cone, cone.pointed);
        Ok(cone)
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        let dim = rows.first().map_or(0, |r| r.len());
        Self::new(dim, rows.iter().map(|r| Point::from_ints(r)).collect())
    }

    /// The natural ordering cone `R^p_≧`, generated by the unit vectors.
    pub fn natural(dim: usize) -> Self {
        let generators = (0..dim)
            .map(|j| {
                let mut e = Point::zeros(dim).into_coords();
                e[j] = Rational::one();
                Point::new(e)
            })
            .collect();
        PolyhedralCone {
            dim,
            generators,
            pointed: true,
            proper: dim > 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> &[Point] {
        &self.generators
    }

    /// Cached result of [`is_pointed`].
    pub fn pointed(&self) -> bool {
        self.pointed
    }

    /// Cached: `C != {0}` and `C != R^p`.
    pub fn proper(&self) -> bool {
        self.proper
    }

    /// Errors unless the cone is pointed and proper, the standing assumption
    /// for cone-ordered dominance.
    pub fn require_ordering(&self) -> Result<()> {
        if !self.pointed {
            Err(Error::NotPointed)
        } else if !self.proper {
            Err(Error::ImproperCone)
        } else {
            Ok(())
        }
    }
}

/// Whether `y = Σ μ_k g_k` for some `μ >= 0`.
pub fn cone_contains(cone: &PolyhedralCone, y: &Point) -> Result<bool> {
    check_dim(cone.dim, y.dim())?;
    if y.is_zero() {
        return Ok(true);
    }
    let m = cone.generators.len();
    if m == 0 {
        return Ok(false);
    }
    let mut lp = LinearProgram::feasibility(m).nonnegative();
    for j in 0..cone.dim {
        let row = cone.generators.iter().map(|g| g[j].clone()).collect();
        lp.add_constraint(row, Relation::Eq, y[j].clone());
    }
    Ok(lp.solve()?.is_feasible())
}

/// `C ∩ (−C) = {0}`, checked generator by generator: the cone contains a
/// line exactly when some `−g_k` lies in it.
pub fn is_pointed(cone: &PolyhedralCone) -> bool {
    cone.generators.iter().all(|g| {
        let neg = Point::new(g.coords().iter().map(|c| -c).collect());
        !cone_contains(cone, &neg).expect("generator dimensions were validated")
    })
}

fn compute_proper(cone: &PolyhedralCone, pointed: bool) -> bool {
    if cone.generators.is_empty() {
        return false;
    }
    if pointed {
        return true;
    }
    // C != R^p iff C lies in a closed half-space {x : d·x >= 0}, d != 0.
    // Any such d can be rescaled so that some coordinate equals ±1.
    let p = cone.dim;
    (0..p).any(|j| {
        [Rational::one(), -Rational::one()].into_iter().any(|s| {
            let mut lp = LinearProgram::feasibility(p);
            lp.set_bounds(j, Some(s.clone()), Some(s));
            for g in &cone.generators {
                lp.add_constraint(g.coords().to_vec(), Relation::Ge, Rational::zero());
            }
            lp.solve().expect("well-formed LP").is_feasible()
        })
    })
}

/// A direction `d` with `d·x > 0` for every nonzero `x` in a cone.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Direction(pub Point);

impl Direction {
    pub fn new(d: Point) -> Self {
        Direction(d)
    }

    pub fn point(&self) -> &Point {
        &self.0
    }

    /// `d·g_k > 0` for every generator; for a finitely generated cone this is
    /// equivalent to `d ∈ C^{++}`.
    pub fn is_strictly_positive_on(&self, cone: &PolyhedralCone) -> bool {
        self.0.dim() == cone.dim
            && cone
                .generators
                .iter()
                .all(|g| g.dot(self.0.coords()).is_positive())
    }
}

/// Finds `d` with `d·g_k > 0` for all generators by maximizing the smallest
/// inner product over the box `|d_j| <= 1`.
pub fn strictly_positive_direction(cone: &PolyhedralCone) -> Result<Direction> {
    cone.require_ordering()?;
    let p = cone.dim;
    // variables: d_1..d_p, delta
    let mut objective = vec![Rational::zero(); p + 1];
    objective[p] = Rational::one();
    let mut lp = LinearProgram::maximize(objective);
    for g in &cone.generators {
        let mut row = g.coords().to_vec();
        row.push(-Rational::one());
        lp.add_constraint(row, Relation::Ge, Rational::zero());
    }
    for j in 0..p {
        lp.set_bounds(j, Some(-Rational::one()), Some(Rational::one()));
    }
    lp.set_bounds(p, None, Some(Rational::one()));
    let mut point = lp.solve()?.into_point().ok_or(Error::NotPointed)?;
    let delta = point.pop().expect("delta variable");
    if !delta.is_positive() {
        return Err(Error::NotPointed);
    }
    let d = Direction(Point::new(point));
    debug_assert!(d.is_strictly_positive_on(cone));
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cone(rows: &[&[i64]]) -> PolyhedralCone {
        PolyhedralCone::from_ints(rows).unwrap()
    }

    #[test]
    fn membership_examples() {
        let natural = cone(&[&[1, 0], &[0, 1]]);
        assert!(cone_contains(&natural, &Point::from_ints(&[2, 3])).unwrap());
        let skew = cone(&[&[1, 0], &[1, 1]]);
        assert!(!cone_contains(&skew, &Point::from_ints(&[0, 1])).unwrap());
        assert!(cone_contains(&skew, &Point::from_ints(&[0, 0])).unwrap());
        assert!(cone_contains(&PolyhedralCone::new(2, vec![]).unwrap(), &Point::zeros(2)).unwrap());
        assert!(cone_contains(&skew, &Point::from_ints(&[1])).is_err());
    }

    #[test]
    fn pointedness_examples() {
        assert!(is_pointed(&cone(&[&[1, 0], &[0, 1]])));
        assert!(!is_pointed(&cone(&[&[1, 0], &[-1, 0]])));
        assert!(is_pointed(&cone(&[&[1, 0], &[1, 1], &[0, 1]])));
    }

    #[test]
    fn properness() {
        assert!(cone(&[&[1, 0], &[0, 1]]).proper());
        // half-plane: not pointed, still proper
        let half = cone(&[&[0, 1], &[0, -1], &[1, 0]]);
        assert!(!half.pointed());
        assert!(half.proper());
        let whole = cone(&[&[1, 0], &[-1, 0], &[0, 1], &[0, -1]]);
        assert!(!whole.proper());
        assert!(!PolyhedralCone::new(2, vec![]).unwrap().proper());
        assert!(PolyhedralCone::natural(3).proper());
    }

    #[test]
    fn zero_generator_rejected() {
        assert!(PolyhedralCone::from_ints(&[&[0, 0]]).is_err());
    }

    #[test]
    fn positive_direction_examples() {
        let natural = PolyhedralCone::natural(2);
        let d = strictly_positive_direction(&natural).unwrap();
        assert_eq!(d.point(), &Point::from_ints(&[1, 1]));

        let skew = cone(&[&[1, 0], &[1, 1]]);
        let d = strictly_positive_direction(&skew).unwrap();
        assert!(d.is_strictly_positive_on(&skew));
        assert!(Direction(Point::from_ints(&[1, 0])).is_strictly_positive_on(&skew));

        let half = cone(&[&[0, 1], &[0, -1], &[1, 0]]);
        assert_eq!(strictly_positive_direction(&half), Err(Error::NotPointed));
        assert_eq!(
            strictly_positive_direction(&PolyhedralCone::new(2, vec![]).unwrap()),
            Err(Error::ImproperCone)
        );
    }

    #[test]
    fn json_form() {
        let c: PolyhedralCone =
            serde_json::from_str(r#"{"generators": [["1","0"],["1","1"]]}"#).unwrap();
        assert_eq!(c, cone(&[&[1, 0], &[1, 1]]));
        assert_eq!(
            serde_json::to_string(&c).unwrap(),
            r#"{"generators":[["1","0"],["1","1"]]}"#
        );
    }

    fn random_cone() -> impl Strategy<Value = PolyhedralCone> {
        (2usize..=3).prop_flat_map(|d| {
            prop::collection::vec(prop::collection::vec(-3i64..=3, d), 1..=4).prop_filter_map(
                "zero generator",
                move |gs| {
                    let pts: Vec<Point> = gs.iter().map(|g| Point::from_ints(g)).collect();
                    PolyhedralCone::new(d, pts).ok()
                },
            )
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(150))]

        #[test]
        fn generators_are_members_and_membership_scales(c in random_cone(), scale in 1i64..7) {
            for g in c.generators() {
                prop_assert!(cone_contains(&c, g).unwrap());
                let scaled = Point::new(g.coords().iter().map(|x| x * Rational::from_integer(scale)).collect());
                prop_assert!(cone_contains(&c, &scaled).unwrap());
            }
        }

        #[test]
        fn cached_flags_agree_and_directions_are_positive(c in random_cone()) {
            prop_assert_eq!(c.pointed(), is_pointed(&c));
            match strictly_positive_direction(&c) {
                Ok(d) => {
                    prop_assert!(c.pointed());
                    prop_assert!(d.is_strictly_positive_on(&c));
                }
                Err(Error::NotPointed) => prop_assert!(!c.pointed()),
                Err(e) => prop_assert!(false, "unexpected {e}"),
            }
        }
    }
}
