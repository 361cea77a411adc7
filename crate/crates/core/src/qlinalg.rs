//! Complex linear algebra for the two- and four-dimensional Hilbert spaces of
//! one and two qubits: normalized state vectors, 2x2 density matrices, 4x4
//! operators with a scaling-and-squaring matrix exponential, tensor products,
//! and the partial trace over the second qubit.
//!
//! Conventions, frozen across the whole crate:
//! * `|1⟩` is spin-up, `|0⟩` is spin-down;
//! * two-qubit amplitudes are stored in the order `|00⟩, |01⟩, |10⟩, |11⟩`,
//!   i.e. at index `2·s₁ + s₂` with `s = 1` for up.

pub use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

/// Squared-norm deviation kept as-is at construction.
pub const CONSTRUCT_NORM_TOL: f64 = 1e-12;
/// Largest squared-norm deviation accepted from callers; anything between the
/// two tolerances is renormalized silently.
pub const INPUT_NORM_TOL: f64 = 1e-9;
/// Absolute entrywise tolerance for Hermiticity checks.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Absolute entrywise tolerance for unitarity checks.
pub const UNITARITY_TOL: f64 = 1e-10;
/// Density-matrix eigenvalues may undershoot 0 or overshoot 1 by this much.
pub const DENSITY_EIGENVALUE_SLACK: f64 = 1e-10;

/// Checks the squared norm against the two-tier tolerance policy and returns
/// the factor the amplitudes must be divided by (1.0 when kept as-is).
fn norm_correction(norm_sqr: f64) -> Result<f64> {
    let deviation = (norm_sqr - 1.0).abs();
    if !norm_sqr.is_finite() || deviation > INPUT_NORM_TOL {
        return Err(Error::Normalization {
            deviation,
            tolerance: INPUT_NORM_TOL,
        });
    }
    if deviation > CONSTRUCT_NORM_TOL {
        Ok(norm_sqr.sqrt())
    } else {
        Ok(1.0)
    }
}

/// A normalized single-qubit state `amp_up·|1⟩ + amp_down·|0⟩`.
#[derive(Clone, Copy, Debug)]
pub struct State2 {
    amp_up: Complex64,
    amp_down: Complex64,
}

impl State2 {
    /// Builds a state from the `|1⟩` and `|0⟩` amplitudes.
    ///
    /// Squared-norm deviations up to [`CONSTRUCT_NORM_TOL`] are kept, up to
    /// [`INPUT_NORM_TOL`] renormalized, and anything larger is rejected.
    pub fn new(amp_up: Complex64, amp_down: Complex64) -> Result<Self> {
        let scale = norm_correction(amp_up.norm_sqr() + amp_down.norm_sqr())?;
        Ok(Self {
            amp_up: amp_up / scale,
            amp_down: amp_down / scale,
        })
    }

    /// Convenience constructor for real amplitudes.
    pub fn from_real(amp_up: f64, amp_down: f64) -> Result<Self> {
        Self::new(Complex64::new(amp_up, 0.0), Complex64::new(amp_down, 0.0))
    }

    /// The spin-up basis state `|1⟩`.
    pub fn up() -> Self {
        Self {
            amp_up: Complex64::new(1.0, 0.0),
            amp_down: Complex64::new(0.0, 0.0),
        }
    }

    /// The spin-down basis state `|0⟩`.
    pub fn down() -> Self {
        Self {
            amp_up: Complex64::new(0.0, 0.0),
            amp_down: Complex64::new(1.0, 0.0),
        }
    }

    /// Draws a state uniformly from the Bloch sphere: the polar angle is
    /// uniform in cos θ and the azimuth uniform in [0, 2π).
    pub fn random_bloch<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let cos_theta: f64 = rng.gen_range(-1.0..=1.0);
        let azimuth: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let half = cos_theta.acos() / 2.0;
        Self {
            amp_up: Complex64::new(half.cos(), 0.0),
            amp_down: Complex64::from_polar(half.sin(), azimuth),
        }
    }

    pub fn amp_up(&self) -> Complex64 {
        self.amp_up
    }

    pub fn amp_down(&self) -> Complex64 {
        self.amp_down
    }

    /// Inner product `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amp_up.conj() * other.amp_up + self.amp_down.conj() * other.amp_down
    }

    /// Multiplies the `|0⟩` amplitude by a unit phase, leaving `|1⟩` alone.
    pub fn with_down_phase(&self, phase: Complex64) -> Self {
        Self {
            amp_up: self.amp_up,
            amp_down: self.amp_down * phase,
        }
    }
}

/// A normalized two-qubit state in the frozen `|00⟩, |01⟩, |10⟩, |11⟩` order.
#[derive(Clone, Copy, Debug)]
pub struct State4 {
    amps: [Complex64; 4],
}

impl State4 {
    pub fn new(amps: [Complex64; 4]) -> Result<Self> {
        let scale = norm_correction(amps.iter().map(|a| a.norm_sqr()).sum())?;
        Ok(Self {
            amps: amps.map(|a| a / scale),
        })
    }

    /// The computational basis state with the given index (`2·s₁ + s₂`).
    pub fn basis(index: usize) -> Self {
        assert!(index < 4, "basis index out of range");
        let mut amps = [Complex64::new(0.0, 0.0); 4];
        amps[index] = Complex64::new(1.0, 0.0);
        Self { amps }
    }

    pub fn amps(&self) -> &[Complex64; 4] {
        &self.amps
    }

    pub fn amp(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    /// Inner product `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Largest entrywise amplitude difference, ignoring global phase is the
    /// caller's business: this is a plain componentwise comparison.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Tensor product of two single-qubit states in the frozen basis order.
pub fn tensor_product(a: &State2, b: &State2) -> State4 {
    State4 {
        amps: [
            a.amp_down() * b.amp_down(),
            a.amp_down() * b.amp_up(),
            a.amp_up() * b.amp_down(),
            a.amp_up() * b.amp_up(),
        ],
    }
}

/// A 2x2 density matrix for a single spin, validated to be Hermitian, of unit
/// trace, and with eigenvalues inside `[-slack, 1 + slack]`.
#[derive(Clone, Copy, Debug)]
pub struct Density2 {
    up_up: Complex64,
    up_down: Complex64,
    down_up: Complex64,
    down_down: Complex64,
}

impl Density2 {
    pub fn new(
        up_up: Complex64,
        up_down: Complex64,
        down_up: Complex64,
        down_down: Complex64,
    ) -> Result<Self> {
        let herm = (down_up - up_down.conj())
            .norm()
            .max(up_up.im.abs())
            .max(down_down.im.abs());
        if herm > HERMITICITY_TOL {
            return Err(Error::NotHermitian(herm));
        }
        let trace = up_up.re + down_down.re;
        if (trace - 1.0).abs() > CONSTRUCT_NORM_TOL {
            return Err(Error::InvalidDensity(format!(
                "trace = {trace} is not 1 within {CONSTRUCT_NORM_TOL:.0e}"
            )));
        }
        let rho = Self {
            up_up,
            up_down,
            down_up,
            down_down,
        };
        let (lo, hi) = rho.eigenvalues();
        if lo < -DENSITY_EIGENVALUE_SLACK || hi > 1.0 + DENSITY_EIGENVALUE_SLACK {
            return Err(Error::InvalidDensity(format!(
                "eigenvalues ({lo}, {hi}) outside [0, 1] beyond slack"
            )));
        }
        Ok(rho)
    }

    /// The pure density `|φ⟩⟨φ|` of a single-qubit state.
    pub fn from_pure(state: &State2) -> Self {
        let up = state.amp_up();
        let down = state.amp_down();
        Self {
            up_up: up * up.conj(),
            up_down: up * down.conj(),
            down_up: down * up.conj(),
            down_down: down * down.conj(),
        }
    }

    pub fn up_up(&self) -> Complex64 {
        self.up_up
    }

    pub fn up_down(&self) -> Complex64 {
        self.up_down
    }

    pub fn down_up(&self) -> Complex64 {
        self.down_up
    }

    pub fn down_down(&self) -> Complex64 {
        self.down_down
    }

    pub fn trace(&self) -> f64 {
        self.up_up.re + self.down_down.re
    }

    /// Determinant `ρ↑↑ρ↓↓ − ρ↑↓ρ↓↑`; real for Hermitian input.
    pub fn det(&self) -> f64 {
        (self.up_up * self.down_down - self.up_down * self.down_up).re
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> (f64, f64) {
        let mean = self.trace() / 2.0;
        let radius = ((self.up_up.re - self.down_down.re) / 2.0)
            .hypot(self.up_down.norm());
        (mean - radius, mean + radius)
    }

    /// Expectation value `⟨φ|ρ|φ⟩` of a projective measurement onto `φ`.
    pub fn expectation(&self, state: &State2) -> f64 {
        let up = state.amp_up();
        let down = state.amp_down();
        (up.conj() * (self.up_up * up + self.up_down * down)
            + down.conj() * (self.down_up * up + self.down_down * down))
            .re
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        [
            self.up_up - other.up_up,
            self.up_down - other.up_down,
            self.down_up - other.down_up,
            self.down_down - other.down_down,
        ]
        .iter()
        .map(|d| d.norm())
        .fold(0.0, f64::max)
    }
}

/// A 4x4 complex matrix over the frozen two-qubit basis, row-major.
#[derive(Clone, Copy, Debug)]
pub struct Matrix4 {
    entries: [[Complex64; 4]; 4],
}

impl Matrix4 {
    pub fn zero() -> Self {
        Self {
            entries: [[Complex64::new(0.0, 0.0); 4]; 4],
        }
    }

    pub fn identity() -> Self {
        let mut m = Self::zero();
        for i in 0..4 {
            m.entries[i][i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_entries(entries: [[Complex64; 4]; 4]) -> Self {
        Self { entries }
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.entries[row][col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.entries[row][col] = value;
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for r in 0..4 {
            for c in 0..4 {
                out.entries[r][c] = self.entries[c][r].conj();
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for r in 0..4 {
            for c in 0..4 {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..4 {
                    acc += self.entries[r][k] * other.entries[k][c];
                }
                out.entries[r][c] = acc;
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = *self;
        for r in 0..4 {
            for c in 0..4 {
                out.entries[r][c] += other.entries[r][c];
            }
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = *self;
        for r in 0..4 {
            for c in 0..4 {
                out.entries[r][c] *= factor;
            }
        }
        out
    }

    /// Applies the matrix to raw amplitudes.
    pub fn apply_amps(&self, amps: &[Complex64; 4]) -> [Complex64; 4] {
        let mut out = [Complex64::new(0.0, 0.0); 4];
        for (r, out_r) in out.iter_mut().enumerate() {
            for (c, amp) in amps.iter().enumerate() {
                *out_r += self.entries[r][c] * amp;
            }
        }
        out
    }

    /// Applies the matrix to a state; the result must still be normalized
    /// within the input tolerance (true for any near-unitary map).
    pub fn apply(&self, state: &State4) -> Result<State4> {
        State4::new(self.apply_amps(state.amps()))
    }

    /// Maximum column absolute sum.
    pub fn one_norm(&self) -> f64 {
        (0..4)
            .map(|c| (0..4).map(|r| self.entries[r][c].norm()).sum())
            .fold(0.0, f64::max)
    }

    /// Largest entry of `|A - A†|`.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..4 {
            for c in 0..4 {
                worst = worst.max((self.entries[r][c] - self.entries[c][r].conj()).norm());
            }
        }
        worst
    }

    /// Largest entry of `|A†A - I|`.
    pub fn unitarity_error(&self) -> f64 {
        let gram = self.adjoint().mul(self);
        let mut worst: f64 = 0.0;
        for r in 0..4 {
            for c in 0..4 {
                let expected = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((gram.entries[r][c] - expected).norm());
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut worst: f64 = 0.0;
        for r in 0..4 {
            for c in 0..4 {
                worst = worst.max((self.entries[r][c] - other.entries[r][c]).norm());
            }
        }
        worst
    }

    pub fn trace(&self) -> Complex64 {
        (0..4).map(|i| self.entries[i][i]).sum()
    }
}

/// Matrix exponential by scaling-and-squaring on a truncated power series.
///
/// The argument is scaled down until its one-norm is at most 1/4, the series
/// is summed until the running term drops below 1e-16, and the result is
/// squared back up. For the 4x4 matrices used here this keeps the residual
/// near 1e-13 over the whole supported time range.
pub fn expm(m: &Matrix4) -> Matrix4 {
    let norm = m.one_norm();
    let squarings = if norm > 0.25 {
        (norm / 0.25).log2().ceil() as i32
    } else {
        0
    };
    let scaled = m.scale(Complex64::new(0.5f64.powi(squarings), 0.0));

    let mut sum = Matrix4::identity();
    let mut term = Matrix4::identity();
    for k in 1..=40 {
        term = term.mul(&scaled).scale(Complex64::new(1.0 / k as f64, 0.0));
        sum = sum.add(&term);
        if term.one_norm() < 1e-16 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum.mul(&sum);
    }
    sum
}

/// The propagator `e^{-iHt}` of a Hermitian generator.
///
/// Fails with [`Error::NotHermitian`] when the input violates the Hermiticity
/// tolerance; the result is unitary within [`UNITARITY_TOL`].
pub fn propagator(hamiltonian: &Matrix4, t: f64) -> Result<Matrix4> {
    let herm = hamiltonian.hermiticity_error();
    if herm > HERMITICITY_TOL {
        return Err(Error::NotHermitian(herm));
    }
    if !t.is_finite() {
        return Err(Error::InvalidParams(format!("time t = {t} is not finite")));
    }
    Ok(expm(&hamiltonian.scale(Complex64::new(0.0, -t))))
}

/// The rank-one density `|ψ⟩⟨ψ|` of a normalized two-qubit state.
pub fn density_from_state(psi: &State4) -> Matrix4 {
    let mut m = Matrix4::zero();
    for r in 0..4 {
        for c in 0..4 {
            m.entries[r][c] = psi.amp(r) * psi.amp(c).conj();
        }
    }
    m
}

/// Partial trace over the second qubit of a two-qubit density matrix.
///
/// The input must be Hermitian with unit trace; the reduced matrix keeps the
/// trace exactly.
pub fn partial_trace_second(rho4: &Matrix4) -> Result<Density2> {
    let herm = rho4.hermiticity_error();
    if herm > HERMITICITY_TOL {
        return Err(Error::NotHermitian(herm));
    }
    // Row/column index is 2·s₁ + s₂; summing s₂ ∈ {0, 1} contracts spin 2.
    Density2::new(
        rho4.get(2, 2) + rho4.get(3, 3),
        rho4.get(2, 0) + rho4.get(3, 1),
        rho4.get(0, 2) + rho4.get(1, 3),
        rho4.get(0, 0) + rho4.get(1, 1),
    )
}
