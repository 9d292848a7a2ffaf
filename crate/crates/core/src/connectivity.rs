//! Sampled connectedness of the nondominated frontier.
//!
//! Each strictly positive weight `λ` on the grid `{n / k : n_i >= 1, Σ n_i = k}`
//! yields a nondominated point by weighted-sum minimization. Samples are joined
//! whenever they lie within `ε` of each other and the components of the
//! resulting graph are reported.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hull::HullSet;
use crate::numerics::{LpOutcome, Rational};
use crate::order::Point;
use crate::polyhedral::{negative_recession_direction, Polyhedron};

/// Largest number of grid weights a single call may evaluate.
pub const MAX_GRID_WEIGHTS: usize = 200_000;

pub enum FrontierSource {
    Hull(HullSet),
    /// Samples are drawn from the lower section at `anchor`, or at a feasible
    /// point of the polyhedron when no anchor is given. The section is compact
    /// whenever `Y_N` is nonempty, so every weight has an optimum there.
    Polyhedron {
        polyhedron: Polyhedron,
        anchor: Option<Point>,
    },
}

impl FrontierSource {
    fn dim(&self) -> usize {
        match self {
            FrontierSource::Hull(h) => h.dim(),
            FrontierSource::Polyhedron { polyhedron, .. } => polyhedron.dim(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConnectivityReport {
    /// Distinct optima in order of first appearance on the grid.
    pub samples: Vec<Point>,
    /// Threshold supplied by the caller, if any.
    pub epsilon: Option<Rational>,
    /// Squared threshold actually used; distances are compared squared so
    /// that everything stays rational.
    pub epsilon_squared: Rational,
    pub component_count: usize,
    /// Component id of each sample; ids are numbered by first sample.
    pub components: Vec<usize>,
}

/// Positive integer compositions of `k` into `p` parts, lexicographically.
fn compositions(k: usize, p: usize) -> Vec<Vec<usize>> {
    fn rec(left: usize, parts: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 1 {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for first in 1..=left - (parts - 1) {
            prefix.push(first);
            rec(left - first, parts - 1, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if p >= 1 && k >= p {
        rec(k, p, &mut Vec::with_capacity(p), &mut out);
    }
    out
}

fn binomial(n: usize, r: usize) -> Option<usize> {
    let r = r.min(n.saturating_sub(r));
    (0..r).try_fold(1usize, |acc, i| acc.checked_mul(n - i).map(|v| v / (i + 1)))
}

/// Grid-adjacent pairs: compositions differing by moving one unit between two
/// coordinates.
fn adjacent_pairs(grid: &[Vec<usize>]) -> Vec<(usize, usize)> {
    let index: HashMap<&[usize], usize> = grid
        .iter()
        .enumerate()
        .map(|(i, n)| (n.as_slice(), i))
        .collect();
    let mut pairs = Vec::new();
    for (a, n) in grid.iter().enumerate() {
        for i in 0..n.len() {
            for j in 0..n.len() {
                if i == j || n[j] == 1 {
                    continue;
                }
                let mut m = n.clone();
                m[i] += 1;
                m[j] -= 1;
                if let Some(&b) = index.get(m.as_slice()) {
                    if a < b {
                        pairs.push((a, b));
                    }
                }
            }
        }
    }
    pairs
}

fn hull_argmin(hull: &HullSet, weights: &[Rational]) -> Point {
    hull.generators()
        .iter()
        .min_by(|a, b| a.dot(weights).cmp(&b.dot(weights)).then_with(|| a.cmp(b)))
        .expect("hulls are nonempty")
        .clone()
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.0[hi] = lo;
        }
    }
}

/// Samples the frontier on the weight grid with resolution `grid` and counts
/// `ε`-components. Without an explicit `ε` the threshold is four times the
/// largest distance between optima of grid-adjacent weights.
pub fn frontier_sample_connected(
    source: &FrontierSource,
    grid: usize,
    epsilon: Option<&Rational>,
) -> Result<ConnectivityReport> {
    if let Some(e) = epsilon {
        if !e.is_positive() {
            return Err(Error::InvalidEpsilon);
        }
    }
    let p = source.dim();
    match binomial(grid.saturating_sub(1), p - 1) {
        Some(n) if n <= MAX_GRID_WEIGHTS => {}
        _ => return Err(Error::SizeCap(format!("grid {grid} in dimension {p}"))),
    }
    let weights = compositions(grid, p);
    if weights.is_empty() {
        return Err(Error::EmptyFrontier);
    }

    let k = Rational::from_integer(grid as i64);
    let optima: Vec<Point> = match source {
        FrontierSource::Hull(hull) => weights
            .iter()
            .map(|n| {
                let lambda: Vec<Rational> = n
                    .iter()
                    .map(|&v| Rational::from_integer(v as i64) / &k)
                    .collect();
                hull_argmin(hull, &lambda)
            })
            .collect(),
        FrontierSource::Polyhedron { polyhedron, anchor } => {
            let anchor = match anchor {
                Some(a) => {
                    if !polyhedron.contains(a) {
                        return Err(Error::NotMember);
                    }
                    a.clone()
                }
                None => polyhedron.feasible_point()?.ok_or(Error::EmptyPolyhedron)?,
            };
            if negative_recession_direction(polyhedron)?.is_some() {
                return Ok(ConnectivityReport {
                    samples: Vec::new(),
                    epsilon: epsilon.cloned(),
                    epsilon_squared: epsilon.map(|e| e * e).unwrap_or_default(),
                    component_count: 0,
                    components: Vec::new(),
                });
            }
            let mut out = Vec::with_capacity(weights.len());
            for n in &weights {
                let lambda: Vec<Rational> = n
                    .iter()
                    .map(|&v| Rational::from_integer(v as i64) / &k)
                    .collect();
                match polyhedron.minimize_on_section(&lambda, &anchor)? {
                    LpOutcome::Optimal { point, .. } => out.push(Point::new(point)),
                    other => {
                        return Err(Error::InternalInconsistency(format!(
                            "weighted section problem is {:?} although Y_N is nonempty",
                            other.status()
                        )))
                    }
                }
            }
            out
        }
    };

    let epsilon_squared = match epsilon {
        Some(e) => e * e,
        None => {
            let max_gap = adjacent_pairs(&weights)
                .into_iter()
                .map(|(a, b)| optima[a].dist_sq(&optima[b]))
                .max()
                .unwrap_or_default();
            max_gap * Rational::from_integer(16)
        }
    };

    let mut samples: Vec<Point> = Vec::new();
    for y in optima {
        if !samples.contains(&y) {
            samples.push(y);
        }
    }
    let mut uf = UnionFind((0..samples.len()).collect());
    for a in 0..samples.len() {
        for b in a + 1..samples.len() {
            if samples[a].dist_sq(&samples[b]) <= epsilon_squared {
                uf.union(a, b);
            }
        }
    }
    let mut ids: HashMap<usize, usize> = HashMap::new();
    let components: Vec<usize> = (0..samples.len())
        .map(|i| {
            let root = uf.find(i);
            let next = ids.len();
            *ids.entry(root).or_insert(next)
        })
        .collect();

    Ok(ConnectivityReport {
        samples,
        epsilon: epsilon.cloned(),
        epsilon_squared,
        component_count: ids.len(),
        components,
    })
}
