//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("Eisenstein weight must be 4 or 6, got {0}")]
    EisensteinWeight(u32),

    #[error("weight must be even and at least 4, got {0}")]
    InvalidWeight(u32),

    #[error("series precision must be at least {min}, got {got}")]
    Precision { min: usize, got: usize },

    #[error("dim S_{weight} = {dim}; this path requires a one-dimensional cusp space, use the numeric eigenform path instead")]
    DimensionNotOne { weight: u32, dim: usize },

    #[error("eigenform index {index} out of range: dim S_{weight} = {dim}")]
    EigenIndex { weight: u32, index: usize, dim: usize },

    #[error("T_2 eigenvalues separated by {gap:.3e}, below tolerance {tol:.3e}; cannot select a well-defined eigenform")]
    EigenvalueCollision { gap: f64, tol: f64 },

    #[error("|lambda({prime})| = {value} exceeds the Ramanujan bound 2")]
    RamanujanViolation { prime: u64, value: f64 },

    #[error("imaginary part {imag:.3e} of coefficient survives beyond tolerance {tol:.3e}; parameter multiset is not closed under conjugation")]
    ImaginaryResidue { imag: f64, tol: f64 },

    #[error("need coefficients up to {needed}, but only {available} are available")]
    Truncation { needed: usize, available: usize },

    #[error("local parameter multisets differ in cardinality: {left} vs {right}")]
    MultisetCardinality { left: usize, right: usize },

    #[error("exact integer coefficients are not available for this eigenform; it was constructed numerically")]
    ExactCoeffsUnavailable,

    #[error("quadrature refinements still disagree by {disagreement:.3e} (tail bound {tail:.3e}) after {nodes} nodes")]
    QuadratureDivergence {
        disagreement: f64,
        tail: f64,
        nodes: usize,
    },

    #[error("kernel argument x must be positive, got {0}")]
    KernelArg(f64),

    #[error("beta must lie in (1/2, 1), got {0}")]
    BetaRange(f64),

    #[error("error bound {achieved:.3e} misses target {target:.3e}; estimated truncation needed: {needed_x}")]
    ConvergenceTarget {
        target: f64,
        achieved: f64,
        needed_x: usize,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("eigenvalue file, line {line}: {reason}")]
    EigenFile { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
