use thiserror::Error;

/// Errors raised by the simulation kernels.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZenoError {
    #[error("dimension mismatch: {left}x{left} vs {right}x{right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("unsupported matrix dimension {0} (expected 2, 3 or 4)")]
    UnsupportedDimension(usize),

    #[error("matrix is singular (|det| = {det:e}, threshold {threshold:e})")]
    SingularMatrix { det: f64, threshold: f64 },

    #[error("degenerate channel: zeta = {zeta} puts the spin-plus wavenumber at zero")]
    DegenerateChannel { zeta: f64 },

    #[error("degenerate measured cell: |mean M22| = {value:e}")]
    DegenerateCell { value: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, ZenoError>;
