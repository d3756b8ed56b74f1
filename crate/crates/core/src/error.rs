use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("generator index {index} out of range for n = {n}")]
    BladeOutOfRange { index: u32, n: usize },

    #[error("generator count {0} is outside 1..=16")]
    UnsupportedDimension(usize),

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("element is not invertible")]
    Singular,

    #[error("evaluation point is within {distance:e} of the contour")]
    TooClose { distance: f64 },

    #[error("quadrature did not reach tolerance {tolerance:e} within {panels} panels (estimate {estimate}, error {error:e})")]
    NoConvergence {
        estimate: Complex64,
        error: f64,
        tolerance: f64,
        panels: usize,
    },

    #[error("pole: evaluation point coincides with an endpoint")]
    Pole,

    #[error("evaluation point lies on the unit circle")]
    OnContour,

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("kernel {0} has no convergent tail on an infinite ray")]
    UnsupportedTail(&'static str),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("kernel singularity: points coincide")]
    Coincident,

    #[error("grid needs at least {needed} points per axis, got {got}")]
    GridTooSmall { needed: usize, got: usize },

    #[error("axis {axis} out of range for dimension {n}")]
    AxisOutOfRange { axis: usize, n: usize },

    #[error("point is not in the support of the measure (nearest atom at {distance:e})")]
    NotInSupport { distance: f64 },

    #[error("need at least {needed} radii, got {got}")]
    TooFewRadii { needed: usize, got: usize },

    #[error("empty ball around evaluation point at radius {radius:e}")]
    EmptyBall { radius: f64 },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("triangle inequality violated by {excess:e} on atoms ({i}, {j}, {k})")]
    TriangleViolation {
        i: usize,
        j: usize,
        k: usize,
        excess: f64,
    },

    #[error("no snowflake metric attached to the set")]
    MissingMetric,

    #[error("expected a positive number, got {0}")]
    NonPositive(f64),

    #[error("degenerate basis: {0}")]
    DegenerateBasis(String),
}

pub type Result<T> = std::result::Result<T, Error>;
