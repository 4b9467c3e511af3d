use num_rational::BigRational;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Truncated data could not certify the requested quantity. `hint` is the
    /// exponent at which certification failed; refining past it may help.
    #[error("precision loss: {context} (refine past exponent {hint})")]
    PrecisionLoss { hint: BigRational, context: String },

    #[error("negative valuation: residue undefined")]
    NegativeValuation,

    #[error("subgroup not contained in the ambient group")]
    NotContained,

    #[error("infinite subgroup index")]
    InfiniteIndex,

    #[error("unsupported tower: {0}")]
    UnsupportedTower(String),

    #[error("field F_{p}^{m} exceeds the supported table size")]
    FieldTooLarge { p: u32, m: u32 },

    #[error("no candidate qualifies for the pair of definition")]
    EmptyFamily,

    #[error("pair already value transcendental (gamma has an infinitesimal part)")]
    AlreadyTranscendental,

    #[error("augmentation value {beta} does not exceed w(f) = {wf}")]
    BetaNotLarger { beta: String, wf: String },

    #[error("no complete distinguished chain: {0}")]
    NoChain(String),

    #[error("chain verification failed at link {link}: {reason}")]
    VerificationFailed { link: usize, reason: String },

    #[error("pair of definition is not certified minimal")]
    NotMinimalPair,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error: {0}")]
    Validation(String),

    #[error("check failed: {0}")]
    CheckFailed(String),

    #[error("property violated: {0}")]
    PropertyViolated(String),
}

impl Error {
    pub fn precision(hint: BigRational, context: impl Into<String>) -> Self {
        Error::PrecisionLoss {
            hint,
            context: context.into(),
        }
    }

    pub fn is_precision_loss(&self) -> bool {
        matches!(self, Error::PrecisionLoss { .. })
    }
}
