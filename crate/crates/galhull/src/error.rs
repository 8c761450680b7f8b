use galhull_core::algebra::AlgebraError;
use galhull_core::codes::CodeError;
use galhull_core::gf::FieldError;
use galhull_core::hulldim::HullDimError;
use galhull_core::matrix::MatrixError;
use galhull_core::polyring::PolyError;
use galhull_core::quantum::QuantumError;
use thiserror::Error;

/// One differing cell of a reproduced table.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct RowMismatch {
    pub row: usize,
    pub field: String,
    pub expected: String,
    pub got: String,
}

impl std::fmt::Display for RowMismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "row {} {}: expected {}, got {}", self.row, self.field, self.expected, self.got)
    }
}

#[derive(Debug, Error)]
pub enum AppError {
    #[error("invalid configuration:\n{}", .0.iter().map(|e| format!("  {e}")).collect::<Vec<_>>().join("\n"))]
    Config(Vec<String>),
    #[error("{stage}: hypothesis violated: {message}")]
    Hypothesis { stage: &'static str, message: String },
    #[error("{stage}: budget exceeded: {message}")]
    Budget { stage: &'static str, message: String },
    #[error("golden mismatch:\n{}", .0.iter().map(|m| format!("  {m}")).collect::<Vec<_>>().join("\n"))]
    GoldenMismatch(Vec<RowMismatch>),
    #[error("{stage}: {message}")]
    Failure { stage: &'static str, message: String },
    #[error("{0}")]
    Io(String),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Hypothesis { .. } => 2,
            AppError::GoldenMismatch(_) => 3,
            AppError::Budget { .. } => 4,
            _ => 1,
        }
    }

    pub fn failure(stage: &'static str, message: impl Into<String>) -> AppError {
        AppError::Failure { stage, message: message.into() }
    }
}

#[derive(Clone, Copy)]
pub enum Kind {
    Hypothesis,
    Budget,
    Other,
}

fn build(stage: &'static str, kind: Kind, message: String) -> AppError {
    match kind {
        Kind::Hypothesis => AppError::Hypothesis { stage, message },
        Kind::Budget => AppError::Budget { stage, message },
        Kind::Other => AppError::Failure { stage, message },
    }
}

/// Sorts a library error into the exit-code classes.
pub trait Staged {
    fn kind(&self) -> Kind;
}

impl Staged for PolyError {
    fn kind(&self) -> Kind {
        match self {
            PolyError::HypothesisViolation(_) | PolyError::GaloisParameter { .. } => Kind::Hypothesis,
            _ => Kind::Other,
        }
    }
}

impl Staged for FieldError {
    fn kind(&self) -> Kind {
        Kind::Other
    }
}

impl Staged for HullDimError {
    fn kind(&self) -> Kind {
        match self {
            HullDimError::HypothesisViolation(_)
            | HullDimError::NotCoprime { .. }
            | HullDimError::NoClassFound { .. } => Kind::Hypothesis,
            HullDimError::SearchSpaceTooLarge { .. } => Kind::Budget,
            HullDimError::Poly(e) => e.kind(),
            _ => Kind::Other,
        }
    }
}

impl Staged for MatrixError {
    fn kind(&self) -> Kind {
        match self {
            MatrixError::BudgetExceeded { .. } => Kind::Budget,
            MatrixError::ZeroCode => Kind::Hypothesis,
            _ => Kind::Other,
        }
    }
}

impl Staged for AlgebraError {
    fn kind(&self) -> Kind {
        match self {
            AlgebraError::NotSquareFree(_)
            | AlgebraError::Constant(_)
            | AlgebraError::EmptyGeneratorList
            | AlgebraError::NotInSplitSubring => Kind::Hypothesis,
            AlgebraError::TooManyVariables { .. } | AlgebraError::DimensionTooLarge { .. } => Kind::Budget,
            AlgebraError::Poly(e) => e.kind(),
            _ => Kind::Other,
        }
    }
}

impl Staged for CodeError {
    fn kind(&self) -> Kind {
        match self {
            CodeError::ZeroLambda
            | CodeError::NotAUnit
            | CodeError::NotADivisor(_)
            | CodeError::GaloisParameter { .. }
            | CodeError::HullNotConstacyclic { .. }
            | CodeError::NotSelfDualInput(_) => Kind::Hypothesis,
            CodeError::Poly(e) => e.kind(),
            CodeError::Matrix(e) => e.kind(),
            CodeError::Algebra(e) => e.kind(),
            _ => Kind::Other,
        }
    }
}

impl Staged for QuantumError {
    fn kind(&self) -> Kind {
        match self {
            QuantumError::NotInvertible
            | QuantumError::TwistedOrthogonalityFails { .. }
            | QuantumError::GaloisMismatch { .. }
            | QuantumError::ZeroCode => Kind::Hypothesis,
            QuantumError::Code(e) => e.kind(),
            QuantumError::Matrix(e) => e.kind(),
            _ => Kind::Other,
        }
    }
}

/// Attaches the pipeline stage to a library error.
pub fn staged<E: Staged + std::fmt::Display>(stage: &'static str) -> impl Fn(E) -> AppError {
    move |e| build(stage, e.kind(), e.to_string())
}
