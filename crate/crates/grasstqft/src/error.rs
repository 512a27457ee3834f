//! Error type shared across the engine.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("cyclotomic order mismatch: {0} vs {1} (lift to a common order first)")]
    OrderMismatch(u64, u64),

    #[error("cannot lift from order {from} to {to}: {from} does not divide {to}")]
    BadLift { from: u64, to: u64 },

    #[error("division by zero in Q(zeta_{0})")]
    DivisionByZero(u64),

    #[error("value is not rational; nonzero canonical coefficients {0:?}")]
    NotRational(Vec<(usize, String)>),

    #[error("2 sin(pi*{m}/{n}) vanishes (m = 0 mod n); callers must guard the zero angle")]
    SineZero { m: i64, n: u64 },

    #[error("working order {order} is not a multiple of 4*{n}, cannot house 2 sin(pi*m/{n})")]
    SineOrder { order: u64, n: u64 },

    #[error("precision {0} is below the 64-bit floor")]
    PrecisionTooLow(usize),

    #[error("rows {0:?} are not weakly decreasing")]
    NotAPartition(Vec<u32>),

    #[error("partition {rows:?} does not fit in the {r} x {k} box")]
    PartitionOutOfBox { rows: Vec<u32>, r: u32, k: u32 },

    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },

    #[error("evaluation points must be pairwise distinct")]
    RepeatedPoints,

    #[error("expected {expected} evaluation points, got {got}")]
    PointCountMismatch { expected: usize, got: usize },

    #[error("integrand degree {actual} does not match the expected dimension {expected}")]
    DimensionMismatch { expected: i64, actual: i64 },

    #[error("expected dimension {0} is negative; the integral is empty")]
    EmptyDimension(i64),

    #[error("degree {d} is not divisible by the rank {r}")]
    DegreeNotDivisible { d: i64, r: u32 },

    #[error("exponent t = {0} is negative; out of the regime where the intersection is defined")]
    OutOfRegime(i64),

    #[error("operator index l = {l} outside 2..={r}")]
    OperatorIndex { l: u32, r: u32 },

    #[error("selection rule violated: k*d + |lambda*| = {value} is not 0 mod r = {r}")]
    SelectionRule { value: i64, r: u32 },

    #[error("dimension equation violated: |lambda| + r*t = {lhs} but (k+r)*d - r*k*(g-1) = {rhs}")]
    DimensionEquation { lhs: i64, rhs: i64 },

    #[error("value {0} is not an integer")]
    NotAnInteger(String),

    #[error("parse error at offset {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("composition mismatch: left piece has {left_outputs} outputs, right piece has {right_inputs} inputs")]
    BoundaryMismatch {
        left_outputs: u32,
        right_inputs: u32,
    },

    #[error("expression is not connected: {0}")]
    NotConnected(String),

    #[error("envelope exceeded: {0}")]
    EnvelopeExceeded(String),

    #[error("numeric overflow in {0}")]
    Overflow(&'static str),

    #[error("float backend produced a non-finite value")]
    NonFinite,

    #[error("cache file is stale or corrupt: {0}")]
    StaleCache(String),

    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        Error::Internal(message.into())
    }
}
