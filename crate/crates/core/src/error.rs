use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[non_exhaustive]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("{value} lies outside the domain of {what}")]
    Domain { what: &'static str, value: f64 },

    #[error("quadrature did not converge (estimate {estimate}, error estimate {error})")]
    Quadrature { estimate: f64, error: f64 },

    #[error("{what} did not converge after {iterations} iterations")]
    NonConvergence { what: &'static str, iterations: usize },

    #[error("degenerate sample: {0}")]
    DegenerateSample(&'static str),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unknown {kind} `{name}` (expected one of: {expected})")]
    Unknown {
        kind: &'static str,
        name: String,
        expected: &'static str,
    },

    #[error("bootstrap aborted: {failed} of {attempted} replicates failed to fit")]
    BootstrapAborted { failed: usize, attempted: usize },
}

impl Error {
    pub(crate) fn domain(what: &'static str, value: f64) -> Self {
        Error::Domain { what, value }
    }

    pub(crate) fn param(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }
}
