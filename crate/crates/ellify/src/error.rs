use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("scalar backend mismatch: {0} vs {1}")]
    BackendMismatch(&'static str, &'static str),
    #[error("reversal grade {grade} is smaller than the degree {degree}")]
    GradeTooSmall { grade: usize, degree: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("operation requires an exact backend, got float")]
    FloatBackendUnsupported,
    #[error("mobius matrix is singular (ad - bc = 0)")]
    SingularMobiusMatrix,
    #[error("closed forms are only available for the named matrices A1, A2, A3")]
    UnsupportedMatrix,
    #[error("certification would need {0} maximal minors, over the cap of {1}")]
    TooManyMinors(usize, usize),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("placement plan leaves coefficient {0} unassigned")]
    IncompletePlan(usize),
    #[error("placement plan assigns slot (s={s}, t={t}, i={i}) twice for coefficient {j}")]
    OverlapConflict { j: usize, s: usize, t: usize, i: usize },
    #[error("plan `{name}` does not satisfy the {kind} condition (first failure at r={r}, c={c})")]
    ConditionFailed { name: String, kind: String, r: usize, c: usize },
    #[error("grade {grade} is not an odd multiple of {ell}")]
    GradeNotOddMultiple { grade: usize, ell: usize },
    #[error("input polynomial does not carry the requested structure: {0}")]
    StructureCheckFailed(String),
    #[error("the 2x2 matrix is not coninvolutory")]
    NonConinvolutory,
    #[error("expected grade {expected}, got {got}")]
    WrongGrade { expected: usize, got: usize },
    #[error("matrix polynomial is not a minimal basis: {0}")]
    NotMinimalBasis(String),
    #[error("matrix is too large for exact elimination ({0} > cap {1})")]
    SizeCapExceeded(usize, usize),
    #[error("matrix polynomial has no {0} null space (it is not singular on that side)")]
    NotSingular(&'static str),
    #[error("degree sweep exceeded the cap of {0} without exhausting the null space")]
    DegreeSweepCapExceeded(usize),
    #[error("block provenance labels are missing")]
    MissingProvenance,
    #[error("the scalar grid must be nonempty and exclude zero")]
    EmptyGrid,
    #[error("plan `{0}` is not registered and is not a readable plan file")]
    UnknownPlan(String),
    #[error("strategy `{strategy}` does not support structure {structure} with d={d}, ell={ell}")]
    UnsupportedCombination { strategy: String, structure: String, d: usize, ell: usize },
    #[error("parse error: {0}")]
    Parse(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("computation cancelled")]
    Cancelled,
}

pub type Result<T> = std::result::Result<T, Error>;
