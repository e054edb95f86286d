//! Hierarchical demand reduction on the dyadic lattices `V_t = (2^{-t}ℤ)^k`
//! and the preconditioner `P` it induces.
//!
//! A demand `b_T` on `V_T ∩ [0,1]^k` is reduced level by level: each point
//! spreads its demand uniformly over its nearest neighbours in `V_{t-1}`.
//! The weighted masses `Σ_t k·2^{-t}‖b_t‖₁` sandwich the ℓ1 transport cost
//! of `b_T` within a factor `2k(T+1)`. Supports are kept sparse in ordered
//! maps, so only reachable lattice points are ever stored.

mod chain;
mod demands;
mod precond;

pub use chain::{
    build_chain, chain_bounds_check, corner_route_bound, ChainBoundsReport, ReductionChain,
};
pub use demands::{reduce_level, LatticeDemands, LatticePoint, LevelSummary};
pub use precond::PreconditionerP;
