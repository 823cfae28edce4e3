use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("grid size {0} must be a power of two and at least 16")]
    InvalidGridSize(usize),

    #[error("grid mismatch: {left} vs {right} nodes")]
    GridMismatch { left: usize, right: usize },

    #[error("sample count {got} does not match grid size {expected}")]
    SampleCount { expected: usize, got: usize },

    #[error("Fourier window [{t_min}, {t_max}] is wider than the grid ({size} nodes)")]
    WindowTooWide { t_min: i64, t_max: i64, size: usize },

    #[error("zero outside open disk: |{re} + {im}i| >= 1")]
    ZeroOutsideDisk { re: f64, im: f64 },

    #[error("repeated zero {re} + {im}i; merge it into one entry with a multiplicity")]
    RepeatedZero { re: f64, im: f64 },

    #[error("multiplicity must be at least 1")]
    ZeroMultiplicity,

    #[error("a Blaschke product needs at least one zero")]
    NoZeros,

    #[error("pole hit: 1 - conj(lambda) z vanishes at z = {re} + {im}i")]
    Pole { re: f64, im: f64 },

    #[error("index (j = {j}, r = {r}) out of range")]
    IndexOutOfRange { j: usize, r: usize },

    #[error("n must be ≥ 1")]
    ZeroDimension,

    #[error("grid of {size} nodes is too coarse for a basis of dimension {dim}; use at least {required}")]
    GridTooCoarse { size: usize, dim: usize, required: usize },

    #[error("matrix is not Hermitian: max |A - A*| = {deviation:e}")]
    NotHermitian { deviation: f64 },

    #[error("symbol is not real-valued on the circle (max |Im| = {max_imag:e}); eigenvalue distribution needs a real-valued symbol")]
    NotRealValued { max_imag: f64 },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("{0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("solver did not converge after {0} iterations")]
    NoConvergence(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
