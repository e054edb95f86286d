//! Exact small-scale oracles: min-cost flow by successive shortest paths,
//! ℓ1 transport by the transportation simplex (and, as a cross-check, by
//! min-cost flow on the bipartite support graph), LP formulations, and
//! seeded instance generators.

mod gen;
pub mod lp;
mod mcf;
mod transport;

pub use gen::{gen_instance, InstanceKind};
pub use mcf::{exact_mcf, McfSolution, MCF_VERTEX_LIMIT};
pub use transport::{
    emd_l1, emd_l1_via_mcf, emd_l1_with_limit, transport_opt, TransportSolution,
    TransportationInstance, EMD_POINT_LIMIT,
};
