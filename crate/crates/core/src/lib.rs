//! Timing, feasibility and error analysis of the two-spin swap operation in
//! the anisotropic Heisenberg XXZ model under a (possibly inhomogeneous)
//! longitudinal magnetic field.
//!
//! The crate is organized in layers:
//!
//! * [`qlinalg`] — states, density matrices, 4x4 operators, the matrix
//!   exponential and the partial trace;
//! * [`xxz_model`] — the Hamiltonian and its closed-form eigensystem;
//! * [`evolution`] — closed-form evolution of product states, the reduced
//!   density of the first spin, and the disentanglement (purity) functional;
//! * [`swap_analysis`] — rational-anisotropy classification, return/swap
//!   times, phase corrections, the approximation metric `τ(λ)`, and swap
//!   fidelities;
//! * [`field_error`] — the error of the swap under a field imbalance
//!   `δ = b/J`: mixture decomposition, success probability, the quadratic
//!   error law and the `Δ ≤ δ²` bound;
//! * [`numeric_oracle`] — brute-force evolution used as ground truth for all
//!   of the above.
//!
//! Every function is pure and every value immutable after construction, so
//! the whole API is safe to use from concurrent tasks.
//!
//! ```
//! use xxzswap::swap_analysis::{classify, swap_fidelity};
//! use xxzswap::{ModelParams, State2};
//!
//! let params = ModelParams::homogeneous(1.0, 1.0 / 3.0)?;
//! let report = classify(&params, 99)?;
//! let t = report.swap_time.expect("1/3 is odd/odd, so a swap time exists");
//!
//! let alpha = State2::from_real(0.6, 0.8)?;
//! let beta = State2::from_real(0.28, 0.96)?;
//! let fidelity = swap_fidelity(&alpha, &beta, &params, t, report.phase)?;
//! assert!(fidelity > 1.0 - 1e-9);
//! # Ok::<(), xxzswap::Error>(())
//! ```

pub mod error;
pub mod evolution;
pub mod field_error;
pub mod numeric_oracle;
pub mod qlinalg;
pub mod swap_analysis;
pub mod xxz_model;

pub use error::{Error, Result};
pub use evolution::{ExpansionCoeffs, ReducedCoeffs};
pub use field_error::{Delta, ErrorReport, Fig1Cell};
pub use numeric_oracle::OracleResult;
pub use qlinalg::{Complex64, Density2, Matrix4, State2, State4};
pub use swap_analysis::{FeasibilityClass, FeasibilityReport, Operation, RationalLambda};
pub use xxz_model::{Eigensystem, ModelParams};
