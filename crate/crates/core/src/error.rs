use mwl_algebra::AlgebraError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),

    #[error("singular model: the discriminant vanishes identically")]
    SingularModel,

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("not an elliptic surface: {0}")]
    NotEllipticSurface(String),

    #[error("model is not minimal at {place}; minimalize it first")]
    NonMinimal { place: String },

    #[error("fiber type {kind} is irreducible and has no intersection matrix")]
    IrreducibleFiber { kind: String },

    #[error("locating a section on a fiber of type {kind} at {place} is not supported")]
    UnsupportedFiberType { kind: String, place: String },

    #[error("sections belong to different models")]
    ModelMismatch,

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("section is not in the span of the presentation: {0}")]
    NotInSpan(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("branch curve must have degree exactly 3 in x, found {found}")]
    WrongPencilShape { found: usize },

    #[error("curves {0} and {1} share a component")]
    CommonComponent(String, String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("scenario error: {0}")]
    Scenario(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;

/// Exit-code classes used by the command-line tool.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Validation,
    Computation,
    Unsupported,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Validation => 2,
            ErrorClass::Computation => 3,
            ErrorClass::Unsupported => 4,
        }
    }
}

impl CoreError {
    pub fn class(&self) -> ErrorClass {
        match self {
            CoreError::Algebra(e) => match e {
                AlgebraError::Parse { .. }
                | AlgebraError::InvalidMinimalPolynomial(_)
                | AlgebraError::FieldMismatch { .. } => ErrorClass::Validation,
                AlgebraError::FieldDegreeCap { .. } | AlgebraError::Unsupported(_) => {
                    ErrorClass::Unsupported
                }
                AlgebraError::DivisionByZero | AlgebraError::FactorizationFailure { .. } => {
                    ErrorClass::Computation
                }
            },
            CoreError::SingularModel
            | CoreError::InvalidModel(_)
            | CoreError::NotEllipticSurface(_)
            | CoreError::NonMinimal { .. }
            | CoreError::ModelMismatch
            | CoreError::Precondition(_)
            | CoreError::WrongPencilShape { .. }
            | CoreError::CommonComponent(..)
            | CoreError::Scenario(_) => ErrorClass::Validation,
            CoreError::UnsupportedFiberType { .. }
            | CoreError::Unsupported(_)
            | CoreError::IrreducibleFiber { .. } => ErrorClass::Unsupported,
            CoreError::InternalInconsistency(_) | CoreError::NotInSpan(_) => ErrorClass::Computation,
        }
    }
}
