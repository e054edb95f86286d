//! Norm-generic minimum-norm solver algebra.
//!
//! An [`ApproxSolver`] for `A` returns, for demand `b`, a vector `x` with
//! `‖x‖ ≤ α‖x_opt‖` and `‖Ax − b‖ ≤ β‖A‖‖x_opt‖`. Solvers compose by
//! residual recursion; the declared parameters of the result follow from
//! the non-linear condition number κ̃ of `A`, which callers pass in
//! explicitly since it cannot be computed exactly.

mod condition;
mod norm;
mod operator;
mod solver;

pub use condition::{estimate_kappa_tilde, ConditionEstimate, OptOracle};
pub use norm::{CutFamily, NormTag};
pub use operator::{Diagonal, Identity, LinearMap, NormedOperator};
pub use solver::{
    chain_terminate, compose, iterate, measure_quality, refine, residual, ApproxSolver, CostModel,
    SolveFn,
};
