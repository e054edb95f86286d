pub mod driver;
pub mod embed;
pub mod error;
pub mod graph;
pub mod lattice;
pub mod minnorm;
pub mod mwsolve;
pub mod oracle;
pub mod scalar;
pub mod sparse;

pub use error::{Error, Result};

/// Double-precision instantiations, used by the command-line tool.
pub type Graph = graph::LengthGraph<f64>;
pub type Demands = graph::DemandVector<f64>;
pub type Report = driver::SolveReport<f64>;

/// Exact arithmetic for the combinatorial oracles.
pub type Rational = num_rational::Rational64;
pub type ExactGraph = graph::LengthGraph<Rational>;
pub type ExactDemands = graph::DemandVector<Rational>;
