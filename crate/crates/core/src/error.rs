use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("points must have at least one dimension")]
    ZeroDims,
    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point {point} has a non-finite coordinate in dimension {dim}")]
    NonFinite { point: usize, dim: usize },
    #[error("{n} points exceed the supported maximum of {max}")]
    TooManyPoints { n: usize, max: u32 },
    #[error("{n} points with {dims} dimensions need {dim_bits} dimension bits per tag and overflow 31-bit tags")]
    TagOverflow {
        n: usize,
        dims: usize,
        dim_bits: u32,
    },
    #[error("widest-dimension splitting supports at most {max} dimensions, got {dims}")]
    TooManyDims { dims: usize, max: usize },
    #[error("tree is empty")]
    EmptyTree,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
