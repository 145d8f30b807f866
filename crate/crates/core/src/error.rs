use thiserror::Error;

/// Every failure the library can report.
///
/// The variant name is part of the command-line contract: the `sl2` binary
/// prints it on stderr for domain errors, so renaming a variant is a
/// breaking change.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields: {0}")]
    FieldMismatch(String),
    #[error("p-adic precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("argument must be nonzero")]
    ZeroArgument,
    #[error("square root of a negative element requested under the real embedding")]
    NegativeUnderRealEmbedding,
    #[error("cannot factor {0} by trial division")]
    FactorizationLimit(String),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix does not have determinant 1")]
    NotSL2,
    #[error("involution parameter m must be nonzero")]
    ZeroM,
    #[error("tau_m is not used in characteristic 2 over finite fields; use tau0")]
    CharTwoUnsupported,
    #[error("matrix does not define an involution: {0}")]
    NotAnInvolution(String),
    #[error("involution kinds differ")]
    KindMismatch,
    #[error("fixed-point group is {{+Id, -Id}}")]
    OnlyCentralFixedPoints,
    #[error("postcondition violated: {0}")]
    PostconditionViolation(String),
    #[error("field does not have characteristic 2")]
    NotChar2,
    #[error("field is not an infinite field of characteristic 2")]
    NotChar2Infinite,
    #[error("matrix is not in the extended symmetric space")]
    NotInExtendedSymmetricSpace,
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("enumeration too large: {0}")]
    TooLarge(String),
    #[error("search budget exhausted: {0}")]
    BudgetExhausted(String),
    #[error("operation not supported: {0}")]
    Unsupported(String),
}

impl Error {
    /// Stable variant name, used by the CLI diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::FieldMismatch(_) => "FieldMismatch",
            Error::PrecisionExhausted(_) => "PrecisionExhausted",
            Error::ZeroArgument => "ZeroArgument",
            Error::NegativeUnderRealEmbedding => "NegativeUnderRealEmbedding",
            Error::FactorizationLimit(_) => "FactorizationLimit",
            Error::InvalidField(_) => "InvalidField",
            Error::Parse(_) => "Parse",
            Error::SingularMatrix => "SingularMatrix",
            Error::NotSL2 => "NotSL2",
            Error::ZeroM => "ZeroM",
            Error::CharTwoUnsupported => "CharTwoUnsupported",
            Error::NotAnInvolution(_) => "NotAnInvolution",
            Error::KindMismatch => "KindMismatch",
            Error::OnlyCentralFixedPoints => "OnlyCentralFixedPoints",
            Error::PostconditionViolation(_) => "PostconditionViolation",
            Error::NotChar2 => "NotChar2",
            Error::NotChar2Infinite => "NotChar2Infinite",
            Error::NotInExtendedSymmetricSpace => "NotInExtendedSymmetricSpace",
            Error::BadParameter(_) => "BadParameter",
            Error::TooLarge(_) => "TooLarge",
            Error::BudgetExhausted(_) => "BudgetExhausted",
            Error::Unsupported(_) => "Unsupported",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
