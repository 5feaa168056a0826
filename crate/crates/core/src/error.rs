use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the domain where the formula is defined.
    #[error("domain error: {0}")]
    Domain(String),

    /// The operation needs walls (or needs a torus) and got the other topology.
    #[error("operation `{op}` requires a {required} grid")]
    Topology { op: &'static str, required: &'static str },

    #[error("fields live on different grids")]
    GridMismatch,

    #[error("solution blew up at t = {time:.6e}: {reason}")]
    BlowUp { time: f64, reason: String },

    #[error("reference not smooth: gradient grew by a factor {growth:.2} (limit 10)")]
    NotSmooth { growth: f64 },

    #[error("invalid test pair: {0}")]
    InvalidTestPair(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("malformed snapshot file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
