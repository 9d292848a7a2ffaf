//! Seeded invariant suite covering every module. Each check runs on freshly
//! generated instances and records the first failure it meets; the report
//! holds no timings, so equal seeds give byte-identical JSON.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cone::{strictly_positive_direction, Direction, PolyhedralCone};
use crate::connectivity::{frontier_sample_connected, FrontierSource};
use crate::finite::{
    cone_nondominated_set, nondominated_set, properly_nondominated_set, weakly_nondominated_set,
};
use crate::generate::{
    generate_hull, generate_instance, generate_points, generate_polyhedron, PolyFamily,
};
use crate::hull::{
    hull_is_nondominated, hull_is_properly_nondominated, hull_is_weakly_nondominated, HullSet,
};
use crate::io::{read_json, read_points_csv, to_json_string, write_points_csv};
use crate::numerics::{rational_parse, LinearProgram, Rational, Relation};
use crate::oracle::{lp_by_vertex_enumeration, naive_dominance};
use crate::order::{order_relation, Point, PointSet};
use crate::polyhedral::{redundancy_demonstration, theorem_full_report, Polyhedron};
use crate::reducibility::{
    hull_reducibility_check, reducibility_report, weakly_efficient_solutions, MopInstance,
    DEFAULT_MAX_OBJECTIVES,
};
use crate::stability::{external_stability_certificate, find_dominator, find_dominator_cone};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelftestCheck {
    pub name: &'static str,
    pub cases: usize,
    pub passed: bool,
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub seed: u64,
    pub pass: bool,
    pub checks: Vec<SelftestCheck>,
}

type CheckResult = std::result::Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> CheckResult {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T>(r: crate::error::Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

struct Runner {
    rng: ChaCha8Rng,
    checks: Vec<SelftestCheck>,
}

impl Runner {
    /// Runs `cases` instances of `body`, each with its own derived seed.
    fn check(
        &mut self,
        name: &'static str,
        cases: usize,
        mut body: impl FnMut(u64) -> CheckResult,
    ) {
        let mut failure = None;
        for _ in 0..cases {
            let seed: u64 = self.rng.gen();
            if let Err(msg) = body(seed) {
                failure = Some(format!("seed {seed}: {msg}"));
                break;
            }
        }
        self.checks.push(SelftestCheck {
            name,
            cases,
            passed: failure.is_none(),
            failure,
        });
    }
}

fn dims(seed: u64, lo: usize, hi: usize) -> (usize, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (rng.gen_range(lo..=hi), rng)
}

fn subset(small: &[usize], big: &[usize]) -> bool {
    small.iter().all(|i| big.contains(i))
}

fn hull_queries(hull: &HullSet) -> Vec<Point> {
    let g = hull.generators();
    let two = Rational::from_integer(2);
    let mut out: Vec<Point> = g.to_vec();
    for a in 0..g.len() {
        for b in a + 1..g.len().min(a + 3) {
            out.push(Point::new(
                g[a].coords()
                    .iter()
                    .zip(g[b].coords())
                    .map(|(x, y)| (x + y) / &two)
                    .collect(),
            ));
        }
    }
    out
}

pub fn run_selftest(seed: u64) -> SelftestReport {
    let mut r = Runner {
        rng: ChaCha8Rng::seed_from_u64(seed),
        checks: Vec::new(),
    };

    r.check("numerics.rational_round_trip", 200, |s| {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let x =
            Rational::new(rng.gen_range(-1000..=1000), rng.gen_range(1..=1000)).expect("nonzero");
        ensure(rational_parse(&x.to_string()).as_ref() == Ok(&x), || {
            format!("{x} did not round-trip")
        })
    });

    r.check("numerics.lp_matches_vertex_enumeration", 100, |s| {
        let (n, mut rng) = dims(s, 1, 3);
        let mut lp = LinearProgram::minimize(
            (0..n)
                .map(|_| Rational::from_integer(rng.gen_range(-4..=4)))
                .collect(),
        );
        for _ in 0..rng.gen_range(0..=4) {
            let row = (0..n)
                .map(|_| Rational::from_integer(rng.gen_range(-3..=3)))
                .collect();
            let rel = [Relation::Le, Relation::Ge, Relation::Eq][rng.gen_range(0..3)];
            lp.add_constraint(row, rel, Rational::from_integer(rng.gen_range(-5..=5)));
        }
        for j in 0..n {
            lp.set_bounds(
                j,
                Some(Rational::from_integer(-5)),
                Some(Rational::from_integer(5)),
            );
        }
        let simplex = ok(lp.solve())?;
        let brute = lp_by_vertex_enumeration(&lp);
        ensure(simplex.value() == brute.as_ref(), || {
            format!("simplex {simplex:?} vs enumeration {brute:?}")
        })
    });

    r.check("orders.partial_order", 200, |s| {
        let (p, _) = dims(s, 2, 4);
        let y = ok(generate_points(p, 3, s))?;
        let (a, b, c) = (y.get(0), y.get(1), y.get(2));
        let ab = ok(order_relation(a, b))?;
        let ba = ok(order_relation(b, a))?;
        let bc = ok(order_relation(b, c))?;
        let ac = ok(order_relation(a, c))?;
        ensure(!(ab.leqq && ba.leqq) || a == b, || "antisymmetry".into())?;
        ensure(!(ab.leqq && bc.leqq) || ac.leqq, || "transitivity".into())?;
        ensure(!ab.lt || ab.leq, || "< implies <=".into())?;
        ensure(!ab.leq || ab.leqq, || "<= implies ≦".into())
    });

    r.check("cones.direction_strictly_positive", 60, |s| {
        let (p, mut rng) = dims(s, 2, 4);
        let gens: Vec<Vec<i64>> = (0..rng.gen_range(1..=5))
            .map(|_| {
                let mut g: Vec<i64> = (0..p).map(|_| rng.gen_range(0..=3)).collect();
                g[rng.gen_range(0..p)] += 1;
                g
            })
            .collect();
        let refs: Vec<&[i64]> = gens.iter().map(Vec::as_slice).collect();
        let cone = ok(PolyhedralCone::from_ints(&refs))?;
        ensure(cone.pointed() && cone.proper(), || {
            "nonnegative cone should be pointed and proper".into()
        })?;
        let d = ok(strictly_positive_direction(&cone))?;
        ensure(d.is_strictly_positive_on(&cone), || {
            format!("{:?} not strictly positive", d.point())
        })
    });

    r.check("finite.dominance_chain", 100, |s| {
        let (p, mut rng) = dims(s, 2, 4);
        let y = ok(generate_points(p, rng.gen_range(1..=50), s))?;
        let rep = ok(properly_nondominated_set(&y))?;
        ensure(
            subset(&rep.properly_nondominated, &rep.nondominated),
            || "PN ⊄ N".into(),
        )?;
        ensure(subset(&rep.nondominated, &rep.weakly_nondominated), || {
            "N ⊄ WN".into()
        })?;
        ensure(rep.properly_nondominated == rep.nondominated, || {
            "PN != N on a finite set".into()
        })?;
        ensure(rep.bounds.len() == rep.nondominated.len(), || {
            "missing bounds".into()
        })
    });

    r.check("finite.matches_pairwise_oracle", 100, |s| {
        let (p, mut rng) = dims(s, 2, 4);
        let y = ok(generate_points(p, rng.gen_range(1..=50), s))?;
        let coords: Vec<Vec<Rational>> = y.iter().map(|p| p.coords().to_vec()).collect();
        let (nd, wnd) = naive_dominance(&coords);
        ensure(ok(nondominated_set(&y))? == nd, || {
            "N differs from oracle".into()
        })?;
        ensure(ok(weakly_nondominated_set(&y))? == wnd, || {
            "WN differs from oracle".into()
        })
    });

    r.check("stability.certificates_verify", 100, |s| {
        let (p, mut rng) = dims(s, 2, 4);
        let y = ok(generate_points(p, rng.gen_range(1..=50), s))?;
        let cert = ok(external_stability_certificate(&y, None))?;
        ok(cert.verify(&y))
    });

    r.check("stability.cone_certificates_verify", 30, |s| {
        let (p, mut rng) = dims(s, 2, 3);
        let y = ok(generate_points(p, rng.gen_range(1..=30), s))?;
        let mut gens: Vec<Point> = (0..p)
            .map(|j| {
                let mut g = vec![Rational::zero(); p];
                g[j] = Rational::one();
                g[(j + 1) % p] = Rational::new(rng.gen_range(-1..=2), 2).expect("nonzero");
                Point::new(g)
            })
            .collect();
        gens.dedup();
        let cone = ok(PolyhedralCone::new(p, gens))?;
        if !cone.pointed() {
            return Ok(());
        }
        let cert = ok(external_stability_certificate(&y, Some(&cone)))?;
        ok(cert.verify(&y))?;
        let nd = ok(cone_nondominated_set(&y, &cone))?;
        ensure(cert.assignments.iter().all(|a| nd.contains(&a.to)), || {
            "target not cone-nondominated".into()
        })
    });

    r.check("stability.natural_cone_reduction", 30, |s| {
        let (p, mut rng) = dims(s, 2, 4);
        let y = ok(generate_points(p, rng.gen_range(1..=30), s))?;
        let natural = PolyhedralCone::natural(p);
        let ones = Direction(Point::new(vec![Rational::one(); p]));
        for q in y.iter() {
            let a = ok(find_dominator_cone(&y, &natural, q, Some(&ones)))?;
            let b = ok(find_dominator(&y, q))?;
            ensure(a == b, || format!("cone dominator {a} vs natural {b}"))?;
        }
        Ok(())
    });

    r.check("reducibility.union_within_weakly_efficient", 100, |s| {
        let (p, mut rng) = dims(s, 2, 4);
        let inst = ok(generate_instance(p, rng.gen_range(1..=30), s))?;
        let rep = ok(reducibility_report(&inst, DEFAULT_MAX_OBJECTIVES))?;
        let we: BTreeSet<&str> = rep.we_set.iter().map(String::as_str).collect();
        ensure(rep.union_e_labels().iter().all(|l| we.contains(l)), || {
            "∪ X_E ⊄ X_WE".into()
        })?;
        ensure(rep.union_pe_labels().iter().all(|l| we.contains(l)), || {
            "∪ X_PE ⊄ X_WE".into()
        })?;
        let direct = ok(weakly_efficient_solutions(&inst))?;
        ensure(direct.len() == we.len(), || {
            "we_set disagrees with direct computation".into()
        })
    });

    r.check("reducibility.finite_counterexample", 1, |_| {
        let inst = ok(MopInstance::from_ints(&[&[1, 0], &[0, 1], &[1, 1]]))?;
        let rep = ok(reducibility_report(&inst, DEFAULT_MAX_OBJECTIVES))?;
        ensure(rep.strict_witnesses == ["x3"] && !rep.equality_e, || {
            format!("{rep:?}")
        })
    });

    r.check("hull.classifier_chain", 20, |s| {
        let (p, mut rng) = dims(s, 2, 3);
        let hull = ok(generate_hull(p, rng.gen_range(1..=8), s))?;
        for q in hull_queries(&hull) {
            let pn = ok(hull_is_properly_nondominated(&hull, &q))?.verdict;
            let n = ok(hull_is_nondominated(&hull, &q))?;
            let wn = ok(hull_is_weakly_nondominated(&hull, &q))?;
            ensure((!pn || n) && (!n || wn), || format!("chain broken at {q}"))?;
        }
        Ok(())
    });

    r.check("reducibility.hull_equality", 15, |s| {
        let (p, mut rng) = dims(s, 2, 4);
        let hull = ok(generate_hull(p, rng.gen_range(1..=10), s))?;
        let records = ok(hull_reducibility_check(
            &hull,
            &hull_queries(&hull),
            DEFAULT_MAX_OBJECTIVES,
        ))?;
        match records.iter().find(|rec| !rec.agrees()) {
            Some(rec) => Err(format!(
                "lhs {} != rhs {} at {}",
                rec.lhs, rec.rhs, rec.query
            )),
            None => Ok(()),
        }
    });

    r.check("polyhedral.routes_agree", 100, |s| {
        let (p, mut rng) = dims(s, 2, 4);
        let family = PolyFamily::ALL[rng.gen_range(0..PolyFamily::ALL.len())];
        let g = ok(generate_polyhedron(p, rng.gen_range(1..=12), family, s))?;
        let rep = ok(theorem_full_report(
            &g.polyhedron,
            std::slice::from_ref(&g.center),
        ))?;
        ensure(rep.all_true() || rep.all_false(), || {
            "properties split".into()
        })?;
        match g.expected {
            Some(e) => ensure(rep.y_n_nonempty == e, || {
                format!("{family:?} classified {}", rep.y_n_nonempty)
            }),
            None => Ok(()),
        }
    });

    r.check("polyhedral.hand_pair", 1, |_| {
        let diagonal = ok(Polyhedron::from_ints(&[&[-1, -1]], &[0]))?;
        let half = ok(Polyhedron::from_ints(&[&[0, -1]], &[0]))?;
        let a = ok(theorem_full_report(&diagonal, &[Point::from_ints(&[0, 0])]))?;
        let b = ok(theorem_full_report(&half, &[Point::from_ints(&[0, 0])]))?;
        ensure(a.all_true(), || {
            "diagonal half-plane should be all-true".into()
        })?;
        ensure(
            b.all_false() && b.negative_direction == Some(Point::from_ints(&[-1, 0])),
            || "upper half-plane should be all-false with d = (-1, 0)".into(),
        )
    });

    r.check("polyhedral.redundancy", 50, |s| {
        let (p, mut rng) = dims(s, 2, 4);
        let family = PolyFamily::ALL[rng.gen_range(0..PolyFamily::ALL.len())];
        let g = ok(generate_polyhedron(p, rng.gen_range(1..=12), family, s))?;
        let rep = ok(redundancy_demonstration(
            &g.polyhedron,
            std::slice::from_ref(&g.center),
        ))?;
        ensure(rep.pass, || format!("{rep:?}"))
    });

    r.check("connectivity.single_component", 20, |s| {
        let (p, mut rng) = dims(s, 2, 3);
        let source = if rng.gen_bool(0.5) {
            FrontierSource::Hull(ok(generate_hull(p, rng.gen_range(1..=10), s))?)
        } else {
            let family = [PolyFamily::Box, PolyFamily::ConeShift][rng.gen_range(0..2)];
            let g = ok(generate_polyhedron(p, rng.gen_range(1..=6), family, s))?;
            FrontierSource::Polyhedron {
                polyhedron: g.polyhedron,
                anchor: Some(g.center),
            }
        };
        for k in [4, 8] {
            let rep = ok(frontier_sample_connected(&source, k, None))?;
            ensure(rep.component_count == 1, || {
                format!("k = {k}: {} components", rep.component_count)
            })?;
        }
        Ok(())
    });

    r.check("connectivity.two_point_contrast", 1, |_| {
        let hull = ok(HullSet::from_ints(&[&[0, 10], &[10, 0]]))?;
        let rep = ok(frontier_sample_connected(
            &FrontierSource::Hull(hull),
            8,
            Some(&Rational::one()),
        ))?;
        ensure(rep.component_count == 2, || {
            format!("{} components", rep.component_count)
        })
    });

    r.check("generate.round_trip", 20, |s| {
        let (p, mut rng) = dims(s, 2, 6);
        let y = ok(generate_points(p, rng.gen_range(1..=20), s))?;
        let mut csv = Vec::new();
        write_points_csv(&y, &mut csv).map_err(|e| e.to_string())?;
        let back: PointSet = read_points_csv(csv.as_slice()).map_err(|e| e.to_string())?;
        ensure(back == y, || "points".into())?;
        let family = PolyFamily::ALL[rng.gen_range(0..PolyFamily::ALL.len())];
        let g = ok(generate_polyhedron(p, rng.gen_range(1..=12), family, s))?;
        let back = read_json(to_json_string(&g).as_bytes()).map_err(|e| e.to_string())?;
        ensure(g == back, || "polyhedron".into())
    });

    let pass = r.checks.iter().all(|c| c.passed);
    SelftestReport {
        seed,
        pass,
        checks: r.checks,
    }
}
