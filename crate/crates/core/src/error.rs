use thiserror::Error;

/// Errors raised by the exact and numeric checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("entry {0} is the zero covector")]
    ZeroCovector(usize),
    #[error("entry {0} has zero multiplicity")]
    ZeroMultiplicity(usize),
    #[error("entries {0} and {1} are equal up to sign")]
    DuplicateCovector(usize, usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("the bilinear form is degenerate")]
    DegenerateForm,
    #[error("orientation functional vanishes on entry {0}")]
    FunctionalVanishes(usize),
    #[error("entry index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("evaluation point is too close to a singular hyperplane (margin {margin:.3e})")]
    SingularPoint { margin: f64 },
    #[error("lambda squared is zero")]
    ZeroLambda,
    #[error("could not sample a nonsingular point in {0} tries")]
    SamplingExhausted(usize),
    #[error("point outside the trilogarithm convergence domain (entry {0} has Im >= 0)")]
    OutOfDomain(usize),
    #[error("entries {0} and {1} are collinear")]
    CollinearPair(usize, usize),
    #[error("operator is not diagonalizable with rational scalar blocks")]
    NonScalarAction,
    #[error("covectors do not span the ambient space")]
    SpanDeficient,
    #[error("nondegeneracy polynomial vanishes identically on the family")]
    DegenerateParametrization,
    #[error("parametrization denominator for {0} is identically zero")]
    ZeroDenominator(String),
    #[error("unknown catalog entry {0:?}")]
    UnknownName(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;
