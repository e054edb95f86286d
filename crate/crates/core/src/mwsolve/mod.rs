//! Multiplicative-weights solvers for `ℓ1` and `ℓ∞` minimum-norm problems.
//!
//! A probe at radius `R` runs a two-player game whose value is zero iff the
//! problem is feasible within the ball of radius `R`; the averaged players
//! give either a point with small residual or a dual certificate that the
//! optimum exceeds `R`. A geometric search over `R` and a residual recursion
//! on top of it produce the `(1+ε, δ)` guarantee.

mod engine;
mod problems;
mod search;
mod solve;

pub use engine::{
    iteration_bound, mw_run, Checkpoint, MatrixGame, MwOptions, MwOutcome, SaddleProblem,
    SimplexPoint, StopRule, TraceRecord,
};
pub use problems::{L1Saddle, LinfSaddle};
pub use search::{bisection_probes, mu_search, MuSearch, Probe, ProbeRecord, ProbeStatus};
pub use solve::{
    opnorm, InducedNorm,
    min_norm_solver, solve_l1, solve_linf, solve_min_norm, DualCandidate, MinNormKind,
    MinNormOptions, MinNormProblem, MinNormSolution, PrimalDualPair, ProbeOutcome, StageOutcome,
    StageReport, Target,
};
