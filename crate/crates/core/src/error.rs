use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error in {op}: {msg}")]
    Domain { op: &'static str, msg: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("unsupported precision: {0} bits")]
    Precision(u32),

    #[error("integration failure: {0}")]
    Integration(String),

    #[error("cohomology right-hand side has non-zero mean: {0}")]
    NonZeroMean(String),

    #[error("degenerate linear system: {0}")]
    Degenerate(String),

    #[error("no drift solves the frequency equation: {0}")]
    NoSolution(String),

    #[error("orbit left the rotational regime: {0}")]
    NonRotational(String),

    #[error("orbit is not a graph over the angle: {0}")]
    NonGraph(String),

    #[error("rotation number estimate did not converge: {0}")]
    NoRotationNumber(String),

    #[error("Newton iteration did not converge after {iters} iterations (best error {best:e})")]
    NewtonDiverged {
        iters: usize,
        best: f64,
        /// Sup norm of the invariance error at each iterate.
        history: Vec<f64>,
    },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("bad torus file: {0}")]
    Format(String),
}

impl Error {
    pub fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { op, msg: msg.into() }
    }

    /// Short machine-readable tag for failure records.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Domain { .. } => "domain",
            Error::Parse(_) => "parse",
            Error::Precision(_) => "precision",
            Error::Integration(_) => "integration",
            Error::NonZeroMean(_) => "nonzero-mean",
            Error::Degenerate(_) => "degenerate",
            Error::NoSolution(_) => "no-solution",
            Error::NonRotational(_) => "non-rotational",
            Error::NonGraph(_) => "non-graph",
            Error::NoRotationNumber(_) => "no-rotation-number",
            Error::NewtonDiverged { .. } => "newton-diverged",
            Error::Io(_) => "io",
            Error::Format(_) => "format",
        }
    }
}
