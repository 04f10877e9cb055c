use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("FCIDUMP line {line}: {message}")]
    Fcidump { line: usize, message: String },

    #[error("amplitude file line {line}: {message}")]
    AmplitudeFile { line: usize, message: String },

    #[error("sample counts line {line}: {message}")]
    CountsFile { line: usize, message: String },

    #[error("particle-number mismatch: ({0}, {1}) vs ({2}, {3})")]
    ParticleMismatch(u32, u32, u32, u32),

    #[error("duplicate configuration in subspace at position {0}")]
    DuplicateConfiguration(usize),

    #[error("empty configuration set")]
    EmptySubspace,

    #[error("matrix is not unitary (deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("matrix is not symmetric (deviation {0:.3e})")]
    NotSymmetric(f64),

    #[error("state is not normalized (norm deviation {0:.3e})")]
    NotNormalized(f64),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("superposition branch norm {0:.3e} below threshold")]
    DestructiveInterference(f64),

    #[error("overlap matrix has no eigenvalue above threshold")]
    DegenerateBasis,

    #[error("all branch weights have non-positive real part")]
    NoPositiveWeights,

    #[error("invalid probability vector: {0}")]
    InvalidProbabilities(String),

    #[error("no configuration survived postselection")]
    EmptyPostselection,

    #[error("eigensolver failed to converge: {0}")]
    Convergence(String),

    #[error("sector dimension {0} exceeds limit {1}")]
    SectorTooLarge(usize, usize),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// True for errors caused by bad user input (as opposed to numerical failure).
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Convergence(_))
    }
}
