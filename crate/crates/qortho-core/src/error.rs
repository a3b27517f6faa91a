//! Error type shared by all modules.

use alloc::string::String;
use thiserror::Error;

/// Errors raised by the computational modules.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum QError {
    /// q must satisfy 0 < q < 1 strictly.
    #[error("q out of range: must satisfy 0 < q < 1")]
    QOutOfRange,

    /// alpha outside the domain required by the operation.
    #[error("alpha out of range: {0}")]
    AlphaOutOfRange(&'static str),

    /// A truncated sum or product hit the term cap before certifying its tail.
    #[error("truncation cap of {terms} terms reached before the tail bound was met")]
    TruncationCap { terms: usize },

    /// Evaluation point too close to a lattice pole of h^α.
    #[error("evaluation point within the pole exclusion radius of a lattice point")]
    PoleProximity,

    /// The function is undefined at z = 0.
    #[error("zero argument not allowed")]
    ZeroArgument,

    /// g_n is only defined for even n.
    #[error("degree {n} must be even")]
    OddDegree { n: usize },

    /// A lattice table was read beyond its stored range.
    #[error("lattice table exhausted at k = {k}")]
    TableExhausted { k: u32 },

    /// A table-backed weight was evaluated off its stored lattice points.
    #[error("point is not a stored lattice point of the weight table")]
    TableMiss,

    /// Moments diverge (alpha ≤ −1).
    #[error("divergent moment: requires alpha > -1")]
    DivergentMoment,

    /// Gram–Schmidt hit a vanishing (or numerically negligible) norm.
    #[error("degenerate measure: gamma[{n}] vanished")]
    DegenerateMeasure { n: usize },

    /// Sign scan found no zero in the search interval.
    #[error("no sign change found in the scan interval")]
    NoSignChange,

    /// Series coefficient recurrence hit a vanishing denominator.
    #[error("resonant alpha: vanishing denominator at series index {index}")]
    Resonance { index: usize },

    /// An iterative estimate failed its Cauchy criterion.
    #[error("sequence failed to converge")]
    NonConvergence,

    /// Deviations d_n = |1 − w(±q^{n/2})| do not decay.
    #[error("weight is not admissible: deviations do not decay")]
    InadmissibleWeight,

    /// det normalization impossible: ψ(0)ρ(0) vanished.
    #[error("determinant normalization failed: psi(0)*rho(0) = 0 within precision")]
    ZeroDet,

    /// Index beyond the computed table.
    #[error("index {n} out of range (max {max})")]
    IndexOutOfRange { n: usize, max: usize },

    /// Exact-rational path requested for a configuration that is not exact.
    #[error("exact arithmetic unavailable for this weight/alpha combination")]
    NotExact,

    /// Literal failed to parse.
    #[error("invalid numeric literal: {0}")]
    InvalidLiteral(String),

    /// Division by zero in a rational or report computation.
    #[error("division by zero: {0}")]
    DivisionByZero(&'static str),

    /// Neither leading-constant variant drives the error sequence to zero.
    #[error("constant resolution failed: no variant drives the error to zero")]
    ConstantResolutionFailed,

    /// NaN or infinity appeared where a finite value was required.
    #[error("non-finite value encountered")]
    NonFinite,
}

/// Convenience result alias.
pub type QResult<T> = core::result::Result<T, QError>;
