use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("divergent schedule: relative beta {0} must be < 1")]
    DivergentSchedule(f64),
    #[error("oracle inconsistency: {0}")]
    OracleInconsistency(String),
    #[error("infeasible demand: total {total:e} exceeds tolerance {tolerance:e}")]
    InfeasibleDemand { total: f64, tolerance: f64 },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("radius search did not bracket the optimum: {0}")]
    Unbracketed(String),
    #[error("payoff {payoff:e} exceeds declared width {width:e} at iteration {iteration}")]
    WidthViolated {
        payoff: f64,
        width: f64,
        iteration: usize,
    },
    #[error("support oracle returned a point of norm {norm:e} outside the ball of radius {radius:e}")]
    OracleOutsideBall { norm: f64, radius: f64 },
    #[error("problem size {size} exceeds the {what} budget of {limit}")]
    BudgetExceeded {
        what: &'static str,
        size: usize,
        limit: usize,
    },
    #[error("lattice point {0:?} is not registered with the preconditioner")]
    UnregisteredPoint(Vec<i64>),
    #[error("demand at {0:?} is not on a unit-cube corner")]
    OffCorner(Vec<i64>),
    #[error("weak duality violated: dual {dual:e} exceeds primal {primal:e}")]
    WeakDualityViolated { primal: f64, dual: f64 },
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("stage {stage} failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// Innermost error, looking through stage tags.
    pub fn root(&self) -> &Error {
        match self {
            Error::Stage { source, .. } => source.root(),
            other => other,
        }
    }

    /// Input problems (as opposed to internal contract failures).
    pub fn is_input_error(&self) -> bool {
        matches!(
            self.root(),
            Error::InfeasibleDemand { .. }
                | Error::InvalidGraph(_)
                | Error::Parse { .. }
                | Error::Io(_)
                | Error::Json(_)
                | Error::Config(_)
                | Error::BudgetExceeded { .. }
        )
    }
}

pub(crate) fn check_dim(context: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch {
            context,
            expected,
            got,
        });
    }
    Ok(())
}
