use thiserror::Error;

use crate::kernel::Offset;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("geometry mismatch: {0}")]
    GeometryMismatch(String),

    #[error("set has an empty boundary")]
    EmptyBoundary,

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("negative interaction weight {weight} at offset {offset:?}")]
    NegativeWeight { offset: Offset, weight: f64 },

    #[error("degenerate kernel: {0}")]
    DegenerateKernel(String),

    #[error("cell {0} is pinned to both foreground and background")]
    PinConflict(usize),

    #[error("cell {0} is not a boundary cell of the queried set")]
    NotOnBoundary(usize),

    #[error("{count} free cells exceed the enumeration limit of {max}")]
    TooManyFreeCells { count: usize, max: usize },

    #[error("grid with {cells} cells is too large for this operation (limit {max})")]
    GridTooLarge { cells: usize, max: usize },

    #[error("superlevel sets lost nesting after a step at level {0}")]
    NotNested(f64),

    #[error("flexible region touches the box rim")]
    RegionTouchesRim,

    #[error("dilation by {0} leaves the box")]
    DilationClipped(f64),

    #[error("set {0} is not outward minimizing")]
    NotMinimizing(String),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
