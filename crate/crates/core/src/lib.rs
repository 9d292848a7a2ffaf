//! Exact analysis of nondominated points in multiobjective optimization.
//!
//! Everything is computed over the rationals: a two-phase simplex with
//! Bland's rule backs every LP, so classifications are exact booleans and
//! every certificate can be rechecked.
//!
//! Three image modes are supported:
//!
//! * finite point sets ([`order::PointSet`]), analysed by pairwise comparison
//!   ([`finite`], [`stability`], [`reducibility`]);
//! * convex hulls of finitely many points ([`hull::HullSet`]), analysed by LPs
//!   over convex weights ([`hull`], [`reducibility::hull_reducibility_check`]);
//! * polyhedra `{y : A y <= b}` ([`polyhedral::Polyhedron`]), analysed through
//!   their recession cones ([`polyhedral`], [`connectivity`]).
//!
//! ```
//! use pareto_kit::finite::{nondominated_set, properly_nondominated_set};
//! use pareto_kit::order::PointSet;
//!
//! let y = PointSet::from_ints(&[&[1, 2], &[2, 1], &[2, 2]]).unwrap();
//! assert_eq!(nondominated_set(&y).unwrap(), vec![0, 1]);
//! let report = properly_nondominated_set(&y).unwrap();
//! assert_eq!(report.properly_nondominated, report.nondominated);
//! ```

pub mod cone;
pub mod connectivity;
pub mod error;
pub mod finite;
pub mod generate;
pub mod hull;
pub mod io;
pub mod numerics;
pub mod oracle;
pub mod order;
pub mod polyhedral;
pub mod reducibility;
pub mod selftest;
pub mod stability;

pub use error::{Error, Result};
