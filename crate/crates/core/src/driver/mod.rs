//! End-to-end min-cost flow: embedding, lattice preconditioner, MW solve,
//! tree repair and a certified dual potential.

mod config;
mod dual;
mod pipeline;

pub use config::{default_dim, PipelineConfig};
pub use dual::{certify, extract_dual, normalize_potential, GapReport};
pub use pipeline::{
    solve_min_cost, EmbeddingStats, OracleCheck, PreconditionStats, PreconditionedSystem,
    SolveReport, SolveStats, TerminalStats,
};
