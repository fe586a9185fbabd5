use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid interval: a = {a} must be strictly less than b = {b}")]
    InvalidInterval { a: f64, b: f64 },

    #[error("invalid grid size {n}: at least 3 nodes are required")]
    InvalidSize { n: usize },

    #[error("non-finite sample {value} at node {index} (x = {x})")]
    NonFiniteSample { index: usize, x: f64, value: f64 },

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("order {0} outside the open interval (0, 1)")]
    InvalidOrder(f64),

    #[error("gamma function pole at x = {0}")]
    Pole(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("syntax error at byte {offset}: expected {}", expected.join(" or "))]
    Syntax {
        offset: usize,
        expected: Vec<String>,
    },

    #[error("unknown identifier `{name}` at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },

    #[error("domain error in `{expr}`: {reason}")]
    EvalDomain { expr: String, reason: String },

    #[error("evaluation failed at node {index} (x = {x}): {source}")]
    AtNode {
        index: usize,
        x: f64,
        #[source]
        source: Box<Error>,
    },

    #[error("boundary mismatch: y({x}) = {found}, expected {expected}")]
    BoundaryMismatch { x: f64, found: f64, expected: f64 },

    #[error("boundary violation: f must vanish at both endpoints (f(a) = {fa}, f(b) = {fb})")]
    BoundaryViolation { fa: f64, fb: f64 },

    #[error("misuse: {0}")]
    Misuse(String),

    #[error("constraint violation: |I(y) - l| = {residual} exceeds {tol}")]
    ConstraintViolation { residual: f64, tol: f64 },

    #[error("no sign change of the constraint defect on [{lo}, {hi}] (phi = {phi_lo}, {phi_hi}); the problem may be abnormal or l infeasible")]
    BracketFailure {
        lo: f64,
        hi: f64,
        phi_lo: f64,
        phi_hi: f64,
    },

    #[error("objective is not finite at the initial point: {0}")]
    ObjectiveNonFinite(f64),

    #[error("csv: {0}")]
    Csv(String),
}

impl Error {
    pub(crate) fn at_node(self, index: usize, x: f64) -> Self {
        Error::AtNode {
            index,
            x,
            source: Box::new(self),
        }
    }
}
