use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("empty pool: nothing is wagered on either outcome")]
    EmptyPool,

    /// No pure-strategy equilibrium exists unless more than half the pool is paid out.
    #[error("no equilibrium: kappa must exceed 0.5 (got {kappa})")]
    NoEquilibrium { kappa: f64 },

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("quadrature failed to reach tolerance on [{lo}, {hi}]")]
    Quadrature { lo: f64, hi: f64 },

    #[error("{what} did not converge within {iterations} iterations")]
    IterationLimit {
        what: &'static str,
        iterations: usize,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
