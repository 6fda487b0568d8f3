use alloc::boxed::Box;
use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid state: density {rho}, pressure {pressure}")]
    InvalidState { rho: f64, pressure: f64 },

    #[error("vacuum generated by Riemann data (pressure positivity {margin} <= 0)")]
    Vacuum { margin: f64 },

    #[error("exact Riemann solver did not converge in {iterations} iterations (last p = {pressure})")]
    NoConvergence { iterations: usize, pressure: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{0}")]
    Unavailable(String),

    #[error("crash at step {step}, t = {time}, cell ({i}, {j}): {cause}")]
    Crash {
        step: usize,
        time: f64,
        i: isize,
        j: isize,
        cause: Box<Error>,
    },

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    /// True for errors that count as a simulation crash rather than a
    /// misconfiguration.
    pub fn is_crash(&self) -> bool {
        matches!(
            self,
            Error::Crash { .. } | Error::InvalidState { .. } | Error::Vacuum { .. } | Error::NoConvergence { .. }
        )
    }
}
