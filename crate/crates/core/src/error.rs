use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite coordinate in input")]
    NonFinite,

    #[error("degenerate quadrilateral: {0}")]
    DegenerateQuad(&'static str),

    #[error("quadrilateral is not convex (turn at corner {corner} has the wrong sign)")]
    NonConvex { corner: usize },

    #[error("side adjacent to corner {corner} has zero length")]
    DegenerateSide { corner: usize },

    #[error("tangent is singular at corner {corner} (angle is 0 or 180 degrees)")]
    SingularAngle { corner: usize },

    #[error("anchor width and height must be positive (got {w} x {h})")]
    ZeroAnchorDim { w: f64, h: f64 },

    #[error("empty batch")]
    EmptyBatch,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("detections reference unknown categories: {}", .0.join(", "))]
    UnknownCategories(Vec<String>),

    #[error("could not place {placed} of {requested} objects without overlap")]
    PackingFailed { placed: usize, requested: usize },

    #[error("non-finite value during evaluation of {0}")]
    NonFiniteEvaluation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
