//! Undirected length graphs, the discrete derivative and divergence, cost
//! and stretch norms, shortest paths and the spanning-tree router.
//!
//! Sign convention: `(𝒟j)(x)` is inflow minus outflow, so a unit flow on
//! edge `u → v` has divergence `−1` at `u` and `+1` at `v`, and `𝒟` is the
//! transpose of the derivative `(𝒟*φ)(e) = φ(head) − φ(tail)`.

mod cuts;
pub mod dimacs;
mod model;
mod ops;
mod paths;
mod tree;

pub use cuts::{cut_family, cut_family_norm, dyadic_grid_family, power_set_family};
pub use model::{DemandVector, DualPotential, Flow, LengthGraph};
pub use ops::{adjoint_defect, cost, derivative, divergence, lipschitz_constant, stretch};
pub use paths::{all_pairs, shortest_paths};
pub use tree::{minimum_spanning_tree, mst_route, MstRouter};
