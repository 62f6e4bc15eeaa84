use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("basis needs at least one atom")]
    EmptyBasis,
    #[error("duplicate atom id {0}")]
    DuplicateAtom(usize),
    #[error("atom {atom}: duplicate level label {label:?}")]
    DuplicateLevel { atom: usize, label: String },
    #[error("atom {0}: at least two levels are required")]
    TooFewLevels(usize),
    #[error("product dimension {dim} exceeds the cap of {cap}")]
    DimensionCap { dim: usize, cap: usize },
    #[error("unknown atom id {0}")]
    UnknownAtom(usize),
    #[error("unknown level label {label:?} on atom {atom}")]
    UnknownLabel { atom: usize, label: String },
    #[error("configuration has {got} labels, basis has {expected} atoms")]
    ConfigurationLength { expected: usize, got: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("operator is not Hermitian (max |H - H^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("operands live in different bases")]
    BasisMismatch,
    #[error("evolution time must be finite and non-negative, got {0}")]
    InvalidTime(f64),
    #[error("Hermitian eigendecomposition did not converge")]
    EigenFailure,
    #[error("state vector has zero norm")]
    ZeroNorm,
    #[error("invalid value for `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },
    #[error("no spacing given for interacting pair ({0}, {1})")]
    MissingGeometry(usize, usize),
    #[error("no lifetime configured for populated Rydberg level {0:?}")]
    MissingLifetime(String),
    #[error("trajectory data missing: {0}")]
    MissingTrace(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// True for errors caused by user configuration rather than numerics.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidParameter { .. } | Error::Config(_) | Error::Io(_)
        )
    }
}
