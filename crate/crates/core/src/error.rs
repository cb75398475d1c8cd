use thiserror::Error;

/// Errors raised by the numerical and algebraic layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum CcsError {
    #[error("determinant {det} deviates from 1 by more than {tol:e}")]
    Determinant { det: String, tol: f64 },
    #[error("zero vector is not a point of C^2 \\ {{0}}")]
    ZeroVector,
    #[error("degenerate tuple: entries {0} and {1} coincide")]
    DegenerateTuple(usize, usize),
    #[error("logarithm of zero")]
    LogOfZero,
    #[error("argument {0} lies on the branch cut (1, inf); supply a cut side")]
    OnCut(f64),
    #[error("chi is undefined at r = 0")]
    ChiAtZero,
    #[error("rational argument {0} is outside [0, 1)")]
    ChiOutOfRange(f64),
    #[error("branch integer {which} = {value} is not an even integer")]
    NotEven { which: &'static str, value: f64 },
    #[error("covering point z = {0} is too close to 0 or 1")]
    SingularPoint(String),
    #[error("flattening triple is inconsistent: e^w1 does not match 1/(1-z)")]
    InvalidFlattening,
    #[error("five-tuple coordinate x{0} is degenerate (0, 1 or infinite)")]
    DegenerateFiveTuple(usize),
    #[error("configuration is degenerate: det(v{0}, v{1}) vanishes")]
    DegenerateConfig(usize, usize),
    #[error("chain degree {0} is outside the supported range 0..=4")]
    DegreeOutOfRange(usize),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("term {term}: elements {i} and {j} violate v-goodness")]
    NotVGood { term: usize, i: usize, j: usize },
    #[error("no generic vector found after {0} attempts")]
    SamplingExhausted(usize),
    #[error("repair failed: {0}")]
    RepairFailed(String),
    #[error("nu-hat ledger does not cancel ({0} surviving terms)")]
    NuNonzero(usize),
    #[error("elements are incomparable: quotient has vanishing lower-left entry")]
    Incomparable,
    #[error("tuple is not sortable: order is not transitive on it")]
    NotSortable,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("path degenerate: coordinate x{coord} meets a special point at t = {t}")]
    PathDegenerate { coord: usize, t: f64 },
    #[error("i/o error: {0}")]
    Io(String),
    #[error("schema error: {0}")]
    Schema(String),
    #[error("term {term}")]
    Term {
        term: usize,
        #[source]
        source: Box<CcsError>,
    },
}

impl CcsError {
    /// Whether the error is a failed file or stream operation.
    pub fn is_io(&self) -> bool {
        matches!(self, CcsError::Io(_))
    }
}

pub type Result<T> = std::result::Result<T, CcsError>;
