//! Feasibility of the two-spin swap as a function of the anisotropy, the
//! associated return/swap times and phase corrections, and the approximation
//! metric `τ(λ)` for anisotropies that admit no exact swap.
//!
//! With a homogeneous field the first spin disentangles only at times where
//! `sin 2Jt = sin 2λJt = 0` with matching cosine signs. Writing
//! `|λ| = m/n` in lowest terms:
//!
//! * both cosines reach `+1` at `t = k·n·π/|J|` — the state *returns*;
//! * both reach `−1` at `t = (2k−1)·n·π/(2|J|)` — the states *swap* — but
//!   only when `m` and `n` are both odd. One even parity makes the pair of
//!   conditions unsatisfiable and only approximate swaps remain, graded by
//!   `τ(λ) = min_t [2 + cos 2Jt + cos 2λJt]`.
//!
//! Either operation leaves a relative phase on the `|0⟩` component of each
//! spin: `(−1)^{k(m+n)}·e^{iBt}` for returns and
//! `sign(λ)·(−1)^{(n−m)/2}·e^{iBt}` for swaps, correctable by a single-spin
//! rotation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::evolution::evolved_state;
use crate::qlinalg::{tensor_product, State2};
use crate::xxz_model::ModelParams;

/// Default cap on the denominator when detecting rational anisotropies.
pub const DEFAULT_MAX_DENOMINATOR: u64 = 99;
/// A best approximant closer than this is treated as exactly rational.
pub const RATIONAL_RESIDUAL_TOL: f64 = 1e-9;
/// Default grid size for the `τ` minimization.
pub const DEFAULT_TAU_GRID: usize = 100_000;

/// `|λ|` written as a coprime fraction `m/n`, with the sign carried
/// separately and the signed approximation error `|λ| − m/n` recorded.
///
/// `λ = 0` is represented as `m = 0, n = 1`; the even numerator then rules
/// out an exact swap through the ordinary parity rule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RationalLambda {
    pub m: u64,
    pub n: u64,
    pub sign: i32,
    pub residual: f64,
}

impl RationalLambda {
    /// The signed rational value `sign · m/n` this approximant represents.
    pub fn value(&self) -> f64 {
        self.sign as f64 * self.m as f64 / self.n as f64
    }

    /// Whether an exact swap time exists for this fraction.
    pub fn both_odd(&self) -> bool {
        self.m % 2 == 1 && self.n % 2 == 1
    }

    /// Whether the residual is small enough to treat `λ` as rational.
    pub fn is_exact(&self) -> bool {
        self.residual.abs() < RATIONAL_RESIDUAL_TOL
    }
}

/// Best rational approximation `m/n` to `|lambda|` with `n ≤ max_denominator`,
/// found by walking the continued-fraction convergents and checking the final
/// semiconvergent. Ties prefer the smaller denominator.
pub fn rational_approx(lambda: f64, max_denominator: u64) -> Result<RationalLambda> {
    if !lambda.is_finite() {
        return Err(Error::InvalidParams(format!("lambda = {lambda} is not finite")));
    }
    if max_denominator == 0 {
        return Err(Error::InvalidParams("max_denominator must be >= 1".into()));
    }
    if lambda == 0.0 {
        return Ok(RationalLambda {
            m: 0,
            n: 1,
            sign: 1,
            residual: 0.0,
        });
    }
    let sign = if lambda < 0.0 { -1 } else { 1 };
    let x = lambda.abs();
    if x > 1e12 {
        return Err(Error::InvalidParams(format!("|lambda| = {x} is too large")));
    }

    // Convergents p/q of the continued fraction of x.
    let (mut p_prev, mut q_prev) = (1u64, 0u64);
    let (mut p, mut q) = (x.floor() as u64, 1u64);
    let mut frac = x - x.floor();

    for _ in 0..64 {
        if frac.abs() < 1e-15 || q >= max_denominator {
            break;
        }
        let inv = 1.0 / frac;
        let a = inv.floor() as u64;
        let q_next = match a.checked_mul(q).and_then(|v| v.checked_add(q_prev)) {
            Some(v) => v,
            None => break,
        };
        if q_next > max_denominator {
            // Largest admissible semiconvergent between the last two
            // convergents; keep whichever side approximates better.
            let a_cap = (max_denominator - q_prev) / q;
            if a_cap >= 1 {
                let ps = a_cap * p + p_prev;
                let qs = a_cap * q + q_prev;
                let err_conv = (x - p as f64 / q as f64).abs();
                let err_semi = (x - ps as f64 / qs as f64).abs();
                if err_semi < err_conv {
                    p = ps;
                    q = qs;
                }
            }
            break;
        }
        let p_next = a * p + p_prev;
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
        frac = inv - inv.floor();
    }

    let g = gcd(p, q);
    let (m, n) = (p / g, q / g);
    Ok(RationalLambda {
        m,
        n,
        sign,
        residual: x - m as f64 / n as f64,
    })
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a.max(1)
}

fn require_homogeneous(p: &ModelParams) -> Result<()> {
    if p.is_homogeneous() {
        Ok(())
    } else {
        Err(Error::InhomogeneousField(p.imbalance()))
    }
}

fn require_period(k: u32) -> Result<()> {
    if k >= 1 {
        Ok(())
    } else {
        Err(Error::InvalidParams("period index k must be >= 1".into()))
    }
}

/// The k-th time at which the first spin returns to its initial state (up to
/// phase): `t = k·n·π/|J|`.
pub fn return_time(p: &ModelParams, r: &RationalLambda, k: u32) -> Result<f64> {
    require_homogeneous(p)?;
    require_period(k)?;
    Ok(k as f64 * r.n as f64 * std::f64::consts::PI / p.coupling().abs())
}

/// The k-th exact swap time `t = (2k−1)·n·π/(2|J|)`, defined only when `m`
/// and `n` are both odd.
pub fn swap_time(p: &ModelParams, r: &RationalLambda, k: u32) -> Result<f64> {
    require_homogeneous(p)?;
    require_period(k)?;
    if !r.both_odd() {
        return Err(Error::SwapInfeasible { m: r.m, n: r.n });
    }
    Ok((2.0 * k as f64 - 1.0) * r.n as f64 * std::f64::consts::PI / (2.0 * p.coupling().abs()))
}

/// Which of the two disentangling operations a phase is requested for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operation {
    Return,
    Swap,
}

/// The relative phase acquired by the `|0⟩` component of each spin at the
/// operation time `t` under a uniform field `B`.
///
/// Returns `(−1)^{k(m+n)}·e^{iBt}` for [`Operation::Return`] and
/// `sign(λ)·(−1)^{(n−m)/2}·e^{iBt}` for [`Operation::Swap`].
pub fn phase_factor(
    r: &RationalLambda,
    k: u32,
    op: Operation,
    field: f64,
    t: f64,
) -> Result<Complex64> {
    if !field.is_finite() || !t.is_finite() {
        return Err(Error::InvalidParams(format!(
            "field and time must be finite, got B = {field}, t = {t}"
        )));
    }
    let parity_sign = match op {
        Operation::Return => {
            require_period(k)?;
            if (k as u64 * (r.m + r.n)).is_multiple_of(2) {
                1.0
            } else {
                -1.0
            }
        }
        Operation::Swap => {
            if !r.both_odd() {
                return Err(Error::SwapInfeasible { m: r.m, n: r.n });
            }
            let half_gap = (r.n as i64 - r.m as i64) / 2;
            let base = if half_gap.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            base * r.sign as f64
        }
    };
    Ok(Complex64::cis(field * t) * parity_sign)
}

/// Minimizes `2 + cos 2Jt + cos 2λJt` over `(0, t_max]`: a uniform grid pass
/// followed by golden-section refinement around the best grid point. Ties on
/// the grid resolve toward smaller `t`.
///
/// Returns `(τ, t_argmin)`; `τ = 0` (within refinement accuracy) exactly when
/// an odd/odd swap time lies inside the window.
pub fn tau(lambda: f64, j: f64, t_max: f64, grid_points: usize) -> Result<(f64, f64)> {
    if !lambda.is_finite() || !j.is_finite() || j == 0.0 {
        return Err(Error::InvalidParams(format!(
            "need finite lambda and nonzero J, got lambda = {lambda}, J = {j}"
        )));
    }
    if !(t_max > 0.0 && t_max.is_finite()) {
        return Err(Error::InvalidParams(format!("t_max = {t_max} must be positive")));
    }
    if grid_points < 1000 {
        return Err(Error::InvalidParams(format!(
            "grid_points = {grid_points} must be at least 1000"
        )));
    }

    let objective = |t: f64| 2.0 + (2.0 * j * t).cos() + (2.0 * lambda * j * t).cos();

    let step = t_max / grid_points as f64;
    let mut best_index = 1;
    let mut best_value = objective(step);
    for i in 2..=grid_points {
        let value = objective(i as f64 * step);
        if value < best_value {
            best_value = value;
            best_index = i;
        }
    }

    let lo = ((best_index as f64 - 1.0) * step).max(step * 1e-3);
    let hi = ((best_index as f64 + 1.0) * step).min(t_max);
    let (t_min, value) = golden_section_min(objective, lo, hi);
    Ok((value.max(0.0), t_min))
}

/// Golden-section search for the minimum of a unimodal-on-bracket function.
fn golden_section_min(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = hi - INV_PHI * (hi - lo);
    let mut d = lo + INV_PHI * (hi - lo);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..200 {
        if hi - lo < 1e-14 * (1.0 + hi.abs()) {
            break;
        }
        if fc <= fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - INV_PHI * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + INV_PHI * (hi - lo);
            fd = f(d);
        }
    }
    let t = 0.5 * (lo + hi);
    (t, f(t))
}

/// Overlap probability of the evolved state with the phase-corrected swapped
/// target `(β₁|1⟩ + φβ₂|0⟩) ⊗ (α₁|1⟩ + φα₂|0⟩)`.
pub fn swap_fidelity(
    a: &State2,
    b: &State2,
    p: &ModelParams,
    t: f64,
    phase: Complex64,
) -> Result<f64> {
    if (phase.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParams(format!(
            "phase must have unit modulus, got |phase| = {}",
            phase.norm()
        )));
    }
    let target = tensor_product(&b.with_down_phase(phase), &a.with_down_phase(phase));
    let evolved = evolved_state(a, b, p, t)?;
    Ok(target.inner(&evolved).norm_sqr())
}

/// How the anisotropy classifies with respect to the exact swap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FeasibilityClass {
    /// `|λ| = m/n` with both odd: exact swap times exist.
    ExactSwap,
    /// Rational with an even `m` or `n`: returns only, swaps at best approximate.
    ReturnOnly,
    /// No rational with denominator under the cap fits within tolerance.
    ApproximateOnly,
}

impl FeasibilityClass {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::ExactSwap => "exact-swap",
            Self::ReturnOnly => "return-only",
            Self::ApproximateOnly => "approximate-only",
        }
    }
}

/// First-period summary of what the anisotropy admits: the classification,
/// the `k = 1` operation times, the matching phase correction, and `τ` over a
/// four-return window whenever no exact swap exists.
///
/// Times and `τ` for the `ApproximateOnly` class are computed from the best
/// available approximant and are themselves approximate.
#[derive(Clone, Copy, Debug)]
pub struct FeasibilityReport {
    pub class: FeasibilityClass,
    pub rational: RationalLambda,
    pub return_time: f64,
    pub swap_time: Option<f64>,
    pub phase: Complex64,
    pub tau: Option<f64>,
    pub tau_argmin: Option<f64>,
}

/// Classifies the anisotropy of a homogeneous-field model.
pub fn classify(p: &ModelParams, max_denominator: u64) -> Result<FeasibilityReport> {
    require_homogeneous(p)?;
    let r = rational_approx(p.anisotropy(), max_denominator)?;
    let t_return = return_time(p, &r, 1)?;
    let class = if !r.is_exact() {
        FeasibilityClass::ApproximateOnly
    } else if r.both_odd() {
        FeasibilityClass::ExactSwap
    } else {
        FeasibilityClass::ReturnOnly
    };

    if class == FeasibilityClass::ExactSwap {
        let t_swap = swap_time(p, &r, 1)?;
        Ok(FeasibilityReport {
            class,
            rational: r,
            return_time: t_return,
            swap_time: Some(t_swap),
            phase: phase_factor(&r, 1, Operation::Swap, p.field(), t_swap)?,
            tau: None,
            tau_argmin: None,
        })
    } else {
        let window = 4.0 * t_return;
        let (tau_value, tau_argmin) =
            tau(p.anisotropy(), p.coupling(), window, DEFAULT_TAU_GRID)?;
        Ok(FeasibilityReport {
            class,
            rational: r,
            return_time: t_return,
            swap_time: None,
            phase: phase_factor(&r, 1, Operation::Return, p.field(), t_return)?,
            tau: Some(tau_value),
            tau_argmin: Some(tau_argmin),
        })
    }
}
