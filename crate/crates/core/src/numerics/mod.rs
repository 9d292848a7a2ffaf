//! Exact scalars and the linear-programming kernel behind every geometric test.

pub mod lp;
pub mod rational;

pub use lp::{
    lp_solve, Constraint, LinearProgram, LpOutcome, LpStatus, Relation, Sense, VarBounds,
};
pub use rational::{dot, q, rational_parse, Rational};
