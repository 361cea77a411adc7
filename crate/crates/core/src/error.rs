//! Error type shared by every module of the crate.

use thiserror::Error;

/// Everything that can go wrong while building states, models or reports.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A state vector's squared norm deviates from 1 beyond the input tolerance.
    #[error("state norm² deviates from 1 by {deviation:.3e} (tolerance {tolerance:.0e})")]
    Normalization { deviation: f64, tolerance: f64 },

    /// A matrix expected to be Hermitian is not, within tolerance.
    #[error("matrix is not Hermitian: max |A - A†| entry is {0:.3e}")]
    NotHermitian(f64),

    /// A matrix expected to be a valid density operator is not.
    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    /// Model parameters or operation arguments outside their domain.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// A homogeneous-field analysis was requested with a nonzero imbalance.
    #[error("analysis requires a homogeneous field (b = 0), got b = {0}")]
    InhomogeneousField(f64),

    /// An exact swap was requested for an anisotropy whose reduced fraction
    /// has an even numerator or denominator.
    #[error("exact swap is infeasible for |lambda| = {m}/{n}: m or n is even")]
    SwapInfeasible { m: u64, n: u64 },

    /// The general reduced-density branch needs both beta amplitudes nonzero.
    #[error("beta1*beta2 = 0: use the simple-case branch instead")]
    DegenerateBeta,

    /// A mixture weight came out negative beyond tolerance.
    #[error("mixture weight p{index} = {value:.3e} is negative: delta is out of regime")]
    NegativeWeight { index: usize, value: f64 },

    /// The field ratio delta lies outside the perturbative regime.
    #[error("|delta| = {value} exceeds the perturbative regime limit {limit}")]
    OutOfRegime { value: f64, limit: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
