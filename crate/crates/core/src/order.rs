//! Points of objective space and the three componentwise orders on them.

use std::fmt;
use std::ops::{Index, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::numerics::{dot, q, Rational};

/// A vector of `R^p` with exact coordinates.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Point(Vec<Rational>);

impl Point {
    pub fn new(coords: Vec<Rational>) -> Self {
        Point(coords)
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Point(coords.iter().map(|&c| Rational::from_integer(c)).collect())
    }

    /// Parses every coordinate with [`crate::numerics::rational_parse`].
    /// Panics on malformed input; meant for literals in tests and docs.
    pub fn parse(coords: &[&str]) -> Self {
        Point(coords.iter().map(|c| q(c)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        Point(vec![Rational::zero(); dim])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Rational::is_zero)
    }

    pub fn sum(&self) -> Rational {
        self.0.iter().sum()
    }

    pub fn dot(&self, other: &[Rational]) -> Rational {
        dot(&self.0, other)
    }

    /// Coordinates selected by `indices`, in that order.
    pub fn project(&self, indices: &[usize]) -> Point {
        Point(indices.iter().map(|&i| self.0[i].clone()).collect())
    }

    pub fn translate(&self, shift: &[Rational]) -> Point {
        Point(self.0.iter().zip(shift).map(|(a, b)| a + b).collect())
    }

    /// Squared Euclidean distance, exact.
    pub fn dist_sq(&self, other: &Point) -> Rational {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| {
                let d = a - b;
                &d * &d
            })
            .sum()
    }
}

impl Index<usize> for Point {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl Sub for &Point {
    type Output = Point;
    fn sub(self, rhs: &Point) -> Point {
        Point(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl From<Vec<Rational>> for Point {
    fn from(v: Vec<Rational>) -> Self {
        Point(v)
    }
}

/// The result of comparing two points under `≦`, `≤` and `<`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OrderRelation {
    /// `a_j <= b_j` for every `j`.
    pub leqq: bool,
    /// `a ≦ b` and `a != b`.
    pub leq: bool,
    /// `a_j < b_j` for every `j`.
    pub lt: bool,
}

pub fn order_relation(a: &Point, b: &Point) -> Result<OrderRelation> {
    check_dim(a.dim(), b.dim())?;
    let mut leqq = true;
    let mut lt = true;
    let mut equal = true;
    for (x, y) in a.coords().iter().zip(b.coords()) {
        leqq &= x <= y;
        lt &= x < y;
        equal &= x == y;
    }
    Ok(OrderRelation {
        leqq,
        leq: leqq && !equal,
        lt,
    })
}

/// `a ≦ b`. Dimensions are assumed equal.
pub(crate) fn weakly_below(a: &Point, b: &Point) -> bool {
    a.coords().iter().zip(b.coords()).all(|(x, y)| x <= y)
}

/// `a ≤ b`: below or equal in every coordinate, and not equal.
pub(crate) fn dominates(a: &Point, b: &Point) -> bool {
    weakly_below(a, b) && a != b
}

/// `a < b` in every coordinate.
pub(crate) fn strictly_dominates(a: &Point, b: &Point) -> bool {
    a.coords().iter().zip(b.coords()).all(|(x, y)| x < y)
}

/// A finite set `Y ⊆ R^p`, kept as an ordered list so that results can be
/// reported by index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointSet {
    dim: usize,
    points: Vec<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl PointSet {
    /// Builds a set of equal-dimension points. An empty list is accepted here;
    /// the analyses reject it with [`Error::EmptySet`].
    pub fn new(points: Vec<Point>) -> Result<Self> {
        let dim = points.first().map_or(0, Point::dim);
        for p in &points {
            check_dim(dim, p.dim())?;
        }
        Ok(PointSet {
            dim,
            points,
            labels: None,
        })
    }

    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        Self::new(rows.iter().map(|r| Point::from_ints(r)).collect())
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        check_dim(self.points.len(), labels.len())?;
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn get(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }

    /// First index holding a point equal to `y`.
    pub fn position(&self, y: &Point) -> Option<usize> {
        self.points.iter().position(|p| p == y)
    }

    pub(crate) fn require_nonempty(&self) -> Result<()> {
        if self.points.is_empty() {
            Err(Error::EmptySet)
        } else {
            Ok(())
        }
    }

    /// Index pairs `(i, j)`, `i < j`, holding equal points. Duplicates are
    /// allowed; this only flags them.
    pub fn duplicates(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.points.len() {
            for j in i + 1..self.points.len() {
                if self.points[i] == self.points[j] {
                    out.push((i, j));
                }
            }
        }
        out
    }
}
