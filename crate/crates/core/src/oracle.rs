//! Brute-force reference computations.
//!
//! Nothing here shares code with the main analyses: dominance is decided by
//! plain pairwise loops and linear programs by enumerating every basic
//! solution. `selftest` and the test suites compare the real implementations
//! against these.

use crate::numerics::{dot, LinearProgram, Rational, Relation, Sense};

/// Solves the square system `a x = b` by Gauss-Jordan elimination; `None` if
/// the matrix is singular.
pub fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = a[col][col].recip();
        for v in a[col][col..].iter_mut() {
            *v = &*v * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            let pivot_row = a[col].clone();
            for (v, p) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                *v -= &(&factor * p);
            }
            let delta = &factor * &b[col];
            b[r] -= &delta;
        }
    }
    Some(b)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Every vertex of `{x : rows}`, found by intersecting each choice of `n`
/// hyperplanes and keeping the feasible intersections.
pub fn vertices(n: usize, rows: &[(Vec<Rational>, Relation, Rational)]) -> Vec<Vec<Rational>> {
    let feasible = |x: &[Rational]| rows.iter().all(|(a, rel, b)| rel.holds(&dot(a, x), b));
    let mut out: Vec<Vec<Rational>> = Vec::new();
    for pick in subsets(rows.len(), n) {
        let a = pick.iter().map(|&i| rows[i].0.clone()).collect();
        let b = pick.iter().map(|&i| rows[i].2.clone()).collect();
        if let Some(x) = solve_square(a, b) {
            if feasible(&x) && !out.contains(&x) {
                out.push(x);
            }
        }
    }
    out
}

/// Optimal value of an LP whose variables all carry finite lower and upper
/// bounds, by exhaustive vertex enumeration. `None` when infeasible.
pub fn lp_by_vertex_enumeration(lp: &LinearProgram) -> Option<Rational> {
    let n = lp.num_vars();
    let mut rows: Vec<(Vec<Rational>, Relation, Rational)> = lp
        .constraints
        .iter()
        .map(|c| (c.coefficients.clone(), c.relation, c.rhs.clone()))
        .collect();
    for (j, b) in lp.bounds.iter().enumerate() {
        let mut e = vec![Rational::zero(); n];
        e[j] = Rational::one();
        let (Some(lo), Some(hi)) = (&b.lower, &b.upper) else {
            panic!("vertex enumeration needs every variable boxed");
        };
        rows.push((e.clone(), Relation::Ge, lo.clone()));
        rows.push((e, Relation::Le, hi.clone()));
    }
    let values = vertices(n, &rows)
        .into_iter()
        .map(|x| dot(&lp.objective, &x));
    match lp.sense {
        Sense::Minimize => values.min(),
        Sense::Maximize => values.max(),
    }
}

/// `(nondominated, weakly nondominated)` index lists by direct pairwise
/// comparison.
pub fn naive_dominance(points: &[Vec<Rational>]) -> (Vec<usize>, Vec<usize>) {
    let mut nd = Vec::new();
    let mut wnd = Vec::new();
    for (i, a) in points.iter().enumerate() {
        let mut dominated = false;
        let mut strictly = false;
        for b in points {
            let le = b.iter().zip(a).all(|(x, y)| x <= y);
            if le && b != a {
                dominated = true;
            }
            if b.iter().zip(a).all(|(x, y)| x < y) {
                strictly = true;
            }
        }
        if !dominated {
            nd.push(i);
        }
        if !strictly {
            wnd.push(i);
        }
    }
    (nd, wnd)
}

/// Whether `{y : a y <= b, y <= y0}` is bounded, decided by boxing it with
/// `|y_j| <= big` and checking that no vertex of the boxed set touches the
/// lower box face. `big` must exceed every vertex coordinate of the section.
pub fn section_bounded_by_vertices(
    a: &[Vec<Rational>],
    b: &[Rational],
    y0: &[Rational],
    big: &Rational,
) -> bool {
    let p = y0.len();
    let mut rows: Vec<(Vec<Rational>, Relation, Rational)> = a
        .iter()
        .zip(b)
        .map(|(r, v)| (r.clone(), Relation::Le, v.clone()))
        .collect();
    for j in 0..p {
        let mut e = vec![Rational::zero(); p];
        e[j] = Rational::one();
        rows.push((e.clone(), Relation::Le, y0[j].clone()));
        rows.push((e, Relation::Ge, -big));
    }
    vertices(p, &rows)
        .iter()
        .all(|v| v.iter().all(|c| c != &-big))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::q;

    #[test]
    fn square_solver() {
        let a = vec![vec![q("2"), q("1")], vec![q("1"), q("3")]];
        assert_eq!(
            solve_square(a, vec![q("3"), q("5")]),
            Some(vec![q("4/5"), q("7/5")])
        );
        let singular = vec![vec![q("1"), q("2")], vec![q("2"), q("4")]];
        assert_eq!(solve_square(singular, vec![q("1"), q("2")]), None);
    }

    #[test]
    fn unit_square_vertices() {
        let rows = vec![
            (vec![q("1"), q("0")], Relation::Ge, q("0")),
            (vec![q("1"), q("0")], Relation::Le, q("1")),
            (vec![q("0"), q("1")], Relation::Ge, q("0")),
            (vec![q("0"), q("1")], Relation::Le, q("1")),
        ];
        assert_eq!(vertices(2, &rows).len(), 4);
    }

    #[test]
    fn naive_dominance_small() {
        let pts = vec![
            vec![q("1"), q("0")],
            vec![q("0"), q("1")],
            vec![q("1"), q("1")],
        ];
        assert_eq!(naive_dominance(&pts), (vec![0, 1], vec![0, 1, 2]));
    }
}
