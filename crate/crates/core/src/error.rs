use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("index {index} outside {lo}..={hi}")]
    IndexOutOfRange { index: i64, lo: i64, hi: i64 },

    #[error("point x = {x} outside the mesh [{a}, {b}]")]
    OutOfDomain { x: f64, a: f64, b: f64 },

    /// Zero pivot while factoring the step matrix. `node` is the mesh node
    /// owning the offending column.
    #[error("singular step matrix at node {node} (column {column})")]
    SingularSystem { node: usize, column: usize },

    #[error("initial fit system is singular at row {row}")]
    SingularFit { row: usize },

    #[error("non-finite value produced at step {step}")]
    NonFinite { step: usize },

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Process exit status: 1 for configuration and i/o problems, 2 for
    /// numerical failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::Io(_) | Error::InvalidParameter(_) => 1,
            _ => 2,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
