//! Seeded random instances for fuzzing. The same arguments always produce the
//! same instance, and every instance survives a JSON or CSV round trip.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hull::HullSet;
use crate::numerics::{dot, Rational};
use crate::order::{Point, PointSet};
use crate::polyhedral::Polyhedron;
use crate::reducibility::MopInstance;

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 6;
pub const MAX_POINTS: usize = 10_000;
pub const MAX_ROWS: usize = 64;

/// Families of generated polyhedra. All but `Random` have a known verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolyFamily {
    /// A box around the center; bounded, so every property holds.
    Box,
    /// `{y : y_p >= 0}`; `−e_1` recedes, so every property fails.
    HalfPlane,
    /// `center + {d : Λ d >= 0}` with strictly positive rows in `Λ`; the
    /// recession cone meets `−R^p_≧` only at 0.
    ConeShift,
    /// Integer rows in `[−5, 5]` with the center strictly or weakly inside.
    Random,
}

impl PolyFamily {
    pub const ALL: [PolyFamily; 4] = [
        PolyFamily::Box,
        PolyFamily::HalfPlane,
        PolyFamily::ConeShift,
        PolyFamily::Random,
    ];

    /// Whether `Y_N` is known to be nonempty, when the family decides it.
    pub fn expected(self) -> Option<bool> {
        match self {
            PolyFamily::Box | PolyFamily::ConeShift => Some(true),
            PolyFamily::HalfPlane => Some(false),
            PolyFamily::Random => None,
        }
    }
}

impl std::str::FromStr for PolyFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "box" => Ok(PolyFamily::Box),
            "half-plane" => Ok(PolyFamily::HalfPlane),
            "cone-shift" => Ok(PolyFamily::ConeShift),
            "random" => Ok(PolyFamily::Random),
            _ => Err(Error::InvalidInstance(format!(
                "unknown polyhedron family {s:?}"
            ))),
        }
    }
}

/// A polyhedron tagged with its family, a point inside it and the expected
/// verdict. Reads as a plain [`Polyhedron`] too, since extra keys are ignored.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratedPolyhedron {
    pub family: PolyFamily,
    #[serde(flatten)]
    pub polyhedron: Polyhedron,
    pub center: Point,
    pub expected: Option<bool>,
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn check_dim_range(p: usize) -> Result<()> {
    if (MIN_DIM..=MAX_DIM).contains(&p) {
        Ok(())
    } else {
        Err(Error::SizeCap(format!(
            "dimension {p} outside [{MIN_DIM}, {MAX_DIM}]"
        )))
    }
}

fn check_count(n: usize, cap: usize, what: &str) -> Result<()> {
    if (1..=cap).contains(&n) {
        Ok(())
    } else {
        Err(Error::SizeCap(format!("{n} {what} outside [1, {cap}]")))
    }
}

/// Coordinates `a / b` with `a ∈ [0, 24]` and `b ∈ {1, 2, 4}`; the small range
/// keeps ties and dominance frequent.
fn random_point(rng: &mut ChaCha8Rng, p: usize) -> Point {
    Point::new(
        (0..p)
            .map(|_| {
                let den = *[1i64, 2, 4].choose(rng).expect("nonempty");
                Rational::new(rng.gen_range(0..=24), den).expect("nonzero denominator")
            })
            .collect(),
    )
}

fn random_points(p: usize, n: usize, seed: u64) -> Result<Vec<Point>> {
    check_dim_range(p)?;
    check_count(n, MAX_POINTS, "points")?;
    let mut rng = rng(seed);
    Ok((0..n).map(|_| random_point(&mut rng, p)).collect())
}

pub fn generate_points(p: usize, n: usize, seed: u64) -> Result<PointSet> {
    PointSet::new(random_points(p, n, seed)?)
}

pub fn generate_hull(p: usize, n: usize, seed: u64) -> Result<HullSet> {
    HullSet::new(random_points(p, n, seed)?)
}

pub fn generate_instance(p: usize, n: usize, seed: u64) -> Result<MopInstance> {
    MopInstance::from_rows(random_points(p, n, seed)?)
}

fn int(v: i64) -> Rational {
    Rational::from_integer(v)
}

/// `m` is the row count for `ConeShift` and `Random`; the other families have
/// a fixed shape.
pub fn generate_polyhedron(
    p: usize,
    m: usize,
    family: PolyFamily,
    seed: u64,
) -> Result<GeneratedPolyhedron> {
    check_dim_range(p)?;
    check_count(m, MAX_ROWS, "rows")?;
    let mut rng = rng(seed);
    let center: Vec<Rational> = (0..p).map(|_| int(rng.gen_range(-5..=5))).collect();
    let (a, b): (Vec<Vec<Rational>>, Vec<Rational>) = match family {
        PolyFamily::Box => {
            let mut a = Vec::new();
            let mut b = Vec::new();
            for j in 0..p {
                let radius = int(rng.gen_range(1..=5));
                let mut e = vec![Rational::zero(); p];
                e[j] = Rational::one();
                a.push(e.clone());
                b.push(&center[j] + &radius);
                a.push(e.into_iter().map(|v| -v).collect());
                b.push(&radius - &center[j]);
            }
            (a, b)
        }
        PolyFamily::HalfPlane => {
            let mut row = vec![Rational::zero(); p];
            row[p - 1] = -Rational::one();
            (vec![row], vec![Rational::zero()])
        }
        PolyFamily::ConeShift => {
            let a: Vec<Vec<Rational>> = (0..m)
                .map(|_| (0..p).map(|_| int(-rng.gen_range(1..=5))).collect())
                .collect();
            let b = a.iter().map(|row| dot(row, &center)).collect();
            (a, b)
        }
        PolyFamily::Random => {
            let a: Vec<Vec<Rational>> = (0..m)
                .map(|_| (0..p).map(|_| int(rng.gen_range(-5..=5))).collect())
                .collect();
            let b = a
                .iter()
                .map(|row| dot(row, &center) + int(rng.gen_range(0..=3)))
                .collect();
            (a, b)
        }
    };
    let center = if family == PolyFamily::HalfPlane {
        Point::new(center.into_iter().map(|v| v.abs()).collect())
    } else {
        Point::new(center)
    };
    let polyhedron = Polyhedron::new(a, b)?;
    debug_assert!(polyhedron.contains(&center));
    Ok(GeneratedPolyhedron {
        family,
        polyhedron,
        center,
        expected: family.expected(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finite::nondominated_set;
    use crate::hull::{
        hull_is_nondominated, hull_is_properly_nondominated, hull_is_weakly_nondominated,
    };
    use crate::io::{read_json, read_points_csv, to_json_string, write_points_csv};
    use crate::polyhedral::theorem_full_report;

    #[test]
    fn deterministic_and_seed_sensitive() {
        assert_eq!(
            generate_points(3, 20, 1).unwrap(),
            generate_points(3, 20, 1).unwrap()
        );
        assert_ne!(
            generate_points(3, 20, 1).unwrap(),
            generate_points(3, 20, 2).unwrap()
        );
    }

    #[test]
    fn singleton_is_its_own_frontier() {
        let y = generate_points(2, 1, 7).unwrap();
        assert_eq!(nondominated_set(&y).unwrap(), vec![0]);
    }

    #[test]
    fn size_caps() {
        assert!(matches!(generate_points(1, 5, 0), Err(Error::SizeCap(_))));
        assert!(matches!(generate_points(7, 5, 0), Err(Error::SizeCap(_))));
        assert!(matches!(generate_points(2, 0, 0), Err(Error::SizeCap(_))));
        assert!(matches!(
            generate_polyhedron(2, MAX_ROWS + 1, PolyFamily::Random, 0),
            Err(Error::SizeCap(_))
        ));
    }

    #[test]
    fn half_plane_family_fails_everything() {
        for seed in 0..5 {
            let g = generate_polyhedron(2, 3, PolyFamily::HalfPlane, seed).unwrap();
            assert_eq!(
                g.polyhedron,
                Polyhedron::from_ints(&[&[0, -1]], &[0]).unwrap()
            );
            let r = theorem_full_report(&g.polyhedron, std::slice::from_ref(&g.center)).unwrap();
            assert!(r.all_false());
            assert_eq!(r.negative_direction, Some(Point::from_ints(&[-1, 0])));
        }
    }

    #[test]
    fn tagged_families_match_their_verdict() {
        for family in PolyFamily::ALL {
            for p in MIN_DIM..=4 {
                for seed in 0..10 {
                    let g = generate_polyhedron(p, 4, family, seed).unwrap();
                    assert!(g.polyhedron.contains(&g.center));
                    let r = theorem_full_report(&g.polyhedron, std::slice::from_ref(&g.center))
                        .unwrap();
                    if let Some(expected) = g.expected {
                        assert_eq!(r.y_n_nonempty, expected, "{family:?} p={p} seed={seed}");
                    }
                }
            }
        }
    }

    #[test]
    fn hull_chain_on_generators() {
        let hull = generate_hull(2, 3, 11).unwrap();
        assert_eq!(hull.generators().len(), 3);
        for g in hull.generators() {
            let pn = hull_is_properly_nondominated(&hull, g).unwrap().verdict;
            let n = hull_is_nondominated(&hull, g).unwrap();
            let wn = hull_is_weakly_nondominated(&hull, g).unwrap();
            assert!(!pn || n);
            assert!(!n || wn);
        }
    }

    #[test]
    fn round_trips() {
        let y = generate_points(4, 30, 3).unwrap();
        let mut csv = Vec::new();
        write_points_csv(&y, &mut csv).unwrap();
        assert_eq!(read_points_csv(csv.as_slice()).unwrap(), y);

        let h = generate_hull(3, 8, 3).unwrap();
        assert_eq!(
            read_json::<HullSet, _>(to_json_string(&h).as_bytes()).unwrap(),
            h
        );

        let inst = generate_instance(3, 8, 3).unwrap();
        assert_eq!(
            read_json::<MopInstance, _>(to_json_string(&inst).as_bytes()).unwrap(),
            inst
        );

        for family in PolyFamily::ALL {
            let g = generate_polyhedron(3, 5, family, 3).unwrap();
            let text = to_json_string(&g);
            assert_eq!(
                read_json::<GeneratedPolyhedron, _>(text.as_bytes()).unwrap(),
                g
            );
            assert_eq!(
                read_json::<Polyhedron, _>(text.as_bytes()).unwrap(),
                g.polyhedron
            );
        }
    }
}
