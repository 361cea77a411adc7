//! Swap errors induced by an inhomogeneous field, to second order in the
//! dimensionless imbalance `δ = b/J`.
//!
//! All formulas are evaluated at the odd/odd swap configuration in units of
//! `J = 1`. For `β₁β₂ = 0` the error has the simple closed form
//! `Δ = |α₂|²δ²/(1+δ²)` (or `|α₁|²` with the roles of the beta amplitudes
//! reversed). Otherwise the reduced density of the first spin is
//!
//! ```text
//! ρ↑↑ = |β₁|² + C,   ρ↓↓ = |β₂|² − C,
//! ρ↑↓ = sign(λ)·(−1)^{(n−m)/2} · β₁β₂* · D · e^{−iBt},
//! ```
//!
//! which decomposes into the three-branch mixture `{p₁ : phase-corrected
//! swapped state, p₂ : |1⟩, p₃ : |0⟩}` with `p₁ = |D|`, `θ = arg D`. The
//! success probability of the swap measurement and the error `Δ = 1 − p`
//! follow, with the quadratic law `Δ ≈ (|β₁|⁴ − 2|α₁β₁|² + |α₁|²)δ²` and the
//! state-independent bound `Δ ≤ δ²`.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qlinalg::{Density2, State2};
use crate::swap_analysis::RationalLambda;

/// Hard domain limit on `|δ|` for the perturbative formulas.
pub const MAX_DELTA: f64 = 1.0;
/// Regime limit for [`check_bound`]; beyond this the quadratic analysis is
/// not honest and the call is rejected.
pub const BOUND_REGIME_LIMIT: f64 = 0.3;
/// Mixture weights may undershoot zero by this much before being rejected.
pub const WEIGHT_SLACK: f64 = 1e-10;

/// The dimensionless field imbalance `δ = b/J`, restricted to `|δ| < 1`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Delta(f64);

impl Delta {
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() || value.abs() >= MAX_DELTA {
            return Err(Error::OutOfRegime {
                value,
                limit: MAX_DELTA,
            });
        }
        Ok(Self(value))
    }

    pub fn value(&self) -> f64 {
        self.0
    }
}

/// The two second-order structure terms of the general reduced density.
#[derive(Clone, Copy, Debug)]
pub struct FieldErrorTerms {
    /// Population shift `C` added to `|β₁|²` and removed from `|β₂|²`.
    pub c_term: f64,
    /// Coherence attenuation `D`; `|D| = 1` at `δ = 0`.
    pub d_term: Complex64,
}

/// Mixture weights and dephasing angle of the three-branch decomposition.
#[derive(Clone, Copy, Debug)]
pub struct MixtureWeights {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub theta: f64,
}

/// Everything the error analysis produces for one `(α, β, δ)` triple.
#[derive(Clone, Copy, Debug)]
pub struct ErrorReport {
    pub c_term: f64,
    pub d_term: Complex64,
    pub theta: f64,
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub p_success: f64,
    pub delta_exact: f64,
    pub delta_quadratic: f64,
}

/// `ρ↑↑` of the first spin at the swap time for `β = (1, 0)`:
/// `1 − |α₂|²δ²/(1+δ²)`.
pub fn rho_up_simple(alpha2_sq: f64, delta: Delta) -> f64 {
    let d2 = delta.value() * delta.value();
    1.0 - alpha2_sq * d2 / (1.0 + d2)
}

fn c_term(a: &State2, b: &State2, delta: f64) -> f64 {
    let pop_gap = (a.amp_up() * b.amp_down()).norm_sqr() - (a.amp_down() * b.amp_up()).norm_sqr();
    let cross = (a.amp_up().conj() * a.amp_down() * b.amp_up() * b.amp_down().conj()).re;
    (pop_gap * delta * delta + 2.0 * cross * delta) / (1.0 + delta * delta)
}

fn d_term(a: &State2, b: &State2, delta: f64) -> Complex64 {
    let bb = b.amp_up() * b.amp_down().conj();
    let shift = a.amp_up()
        * a.amp_down().conj()
        * (b.amp_down().norm_sqr() - b.amp_up().norm_sqr())
        * delta;
    (bb + shift) / (bb * (1.0 + delta * delta).sqrt())
}

/// The general reduced density of the first spin at the `k`-th odd/odd swap
/// time, in `J = 1` units (so `t = (2k−1)nπ/2` and the coherence carries
/// `e^{−iBt}`).
///
/// Requires `β₁β₂ ≠ 0`; the degenerate branch is covered by
/// [`rho_up_simple`].
pub fn reduced_density_general(
    a: &State2,
    b: &State2,
    delta: Delta,
    r: &RationalLambda,
    k: u32,
    field: f64,
) -> Result<(Density2, FieldErrorTerms)> {
    if (b.amp_up() * b.amp_down()).norm() == 0.0 {
        return Err(Error::DegenerateBeta);
    }
    if !r.both_odd() {
        return Err(Error::SwapInfeasible { m: r.m, n: r.n });
    }
    if k < 1 {
        return Err(Error::InvalidParams("period index k must be >= 1".into()));
    }
    if !field.is_finite() || field < 0.0 {
        return Err(Error::InvalidParams(format!("B = {field} must be finite and >= 0")));
    }
    let d = delta.value();
    let c = c_term(a, b, d);
    let dd = d_term(a, b, d);

    let t = (2.0 * k as f64 - 1.0) * r.n as f64 * std::f64::consts::PI / 2.0;
    let half_gap = (r.n as i64 - r.m as i64) / 2;
    let parity = if half_gap.rem_euclid(2) == 0 { 1.0 } else { -1.0 } * r.sign as f64;
    let up_down =
        b.amp_up() * b.amp_down().conj() * dd * Complex64::cis(-field * t) * parity;

    let rho = Density2::new(
        Complex64::new(b.amp_up().norm_sqr() + c, 0.0),
        up_down,
        up_down.conj(),
        Complex64::new(b.amp_down().norm_sqr() - c, 0.0),
    )?;
    Ok((
        rho,
        FieldErrorTerms {
            c_term: c,
            d_term: dd,
        },
    ))
}

/// Splits the general reduced density into the three-branch mixture.
///
/// Fails with [`Error::NegativeWeight`] when a weight drops below
/// `−WEIGHT_SLACK`, which signals that `δ` (relative to the beta amplitudes)
/// is outside the perturbative regime.
pub fn mixture_decomposition(
    terms: &FieldErrorTerms,
    b: &State2,
) -> Result<MixtureWeights> {
    let weights = mixture_weights(terms, b);
    for (index, value) in [(1, weights.p1), (2, weights.p2), (3, weights.p3)] {
        if value < -WEIGHT_SLACK {
            return Err(Error::NegativeWeight { index, value });
        }
    }
    Ok(weights)
}

/// The raw algebraic weights, without the regime gate. `p₁+p₂+p₃ = 1` holds
/// identically.
fn mixture_weights(terms: &FieldErrorTerms, b: &State2) -> MixtureWeights {
    let p1 = terms.d_term.norm();
    MixtureWeights {
        p1,
        p2: (1.0 - p1) * b.amp_up().norm_sqr() + terms.c_term,
        p3: (1.0 - p1) * b.amp_down().norm_sqr() - terms.c_term,
        theta: terms.d_term.arg(),
    }
}

/// Probability of measuring the ideal phase-corrected swapped state in the
/// mixture:
///
/// ```text
/// p = p₁·| |β₁|² + |β₂|²e^{−iθ} |² + p₂|β₁|² + p₃|β₂|²
/// ```
pub fn success_probability(weights: &MixtureWeights, b: &State2) -> f64 {
    let b1_sq = b.amp_up().norm_sqr();
    let b2_sq = b.amp_down().norm_sqr();
    let overlap = (Complex64::new(b1_sq, 0.0)
        + Complex64::new(b2_sq, 0.0) * Complex64::cis(-weights.theta))
    .norm_sqr();
    weights.p1 * overlap + weights.p2 * b1_sq + weights.p3 * b2_sq
}

/// The coefficient `|β₁|⁴ − 2|α₁β₁|² + |α₁|²` of the second-order error law.
///
/// Bounded below by `(|β₁|² − |α₁|²)²` (with equality only at `|α₁| ∈ {0,1}`)
/// and above by 1.
pub fn quadratic_coefficient(a: &State2, b: &State2) -> f64 {
    let a1_sq = a.amp_up().norm_sqr();
    let b1_sq = b.amp_up().norm_sqr();
    b1_sq * b1_sq - 2.0 * a1_sq * b1_sq + a1_sq
}

/// The second-order error law `Δ ≈ (|β₁|⁴ − 2|α₁β₁|² + |α₁|²)·δ²`.
pub fn error_quadratic(a: &State2, b: &State2, delta: Delta) -> f64 {
    quadratic_coefficient(a, b) * delta.value() * delta.value()
}

/// Exact error of the full chain, without the weight gate: the chain algebra
/// stays consistent even when `|D| > 1` pushes individual weights outside
/// `[0, 1]`.
fn delta_exact_chain(a: &State2, b: &State2, delta: Delta) -> f64 {
    let d = delta.value();
    if (b.amp_up() * b.amp_down()).norm() == 0.0 {
        let weight = if b.amp_down().norm_sqr() == 0.0 {
            a.amp_down().norm_sqr()
        } else {
            a.amp_up().norm_sqr()
        };
        return weight * d * d / (1.0 + d * d);
    }
    let terms = FieldErrorTerms {
        c_term: c_term(a, b, d),
        d_term: d_term(a, b, d),
    };
    let weights = mixture_weights(&terms, b);
    1.0 - success_probability(&weights, b)
}

/// Evaluates the exact error against the `δ²` bound (with a `2|δ|³` margin
/// for the neglected orders). Returns `(Δ_exact, bound_ok)`.
pub fn check_bound(a: &State2, b: &State2, delta: Delta) -> Result<(f64, bool)> {
    if delta.value().abs() > BOUND_REGIME_LIMIT {
        return Err(Error::OutOfRegime {
            value: delta.value(),
            limit: BOUND_REGIME_LIMIT,
        });
    }
    let d_abs = delta.value().abs();
    let exact = delta_exact_chain(a, b, delta);
    let bound_ok = exact <= d_abs * d_abs + 2.0 * d_abs.powi(3);
    Ok((exact, bound_ok))
}

/// Assembles the full error report for one configuration: structure terms,
/// gated mixture weights, success probability, and both error measures.
pub fn error_report(
    a: &State2,
    b: &State2,
    delta: Delta,
    r: &RationalLambda,
    k: u32,
    field: f64,
) -> Result<ErrorReport> {
    let (_, terms) = reduced_density_general(a, b, delta, r, k, field)?;
    let weights = mixture_decomposition(&terms, b)?;
    let p_success = success_probability(&weights, b);
    Ok(ErrorReport {
        c_term: terms.c_term,
        d_term: terms.d_term,
        theta: weights.theta,
        p1: weights.p1,
        p2: weights.p2,
        p3: weights.p3,
        p_success,
        delta_exact: 1.0 - p_success,
        delta_quadratic: error_quadratic(a, b, delta),
    })
}

/// One cell of the normalized error surface over real amplitudes.
#[derive(Clone, Copy, Debug)]
pub struct Fig1Cell {
    pub alpha1_sq: f64,
    pub beta1_sq: f64,
    pub delta_ratio: f64,
}

/// The normalized error surface `Δ/δ²` over the unit square of
/// `(|α₁|², |β₁|²)` with real amplitudes, on a `grid × grid` lattice.
///
/// At `δ = 0` the ratio degenerates to `0/0` and the quadratic coefficient
/// (its limit) is emitted instead.
pub fn fig1_surface(delta: Delta, grid: usize) -> Result<Vec<Fig1Cell>> {
    if grid < 2 {
        return Err(Error::InvalidParams(format!("grid = {grid} must be at least 2")));
    }
    let d = delta.value();
    let mut cells = Vec::with_capacity(grid * grid);
    for i in 0..grid {
        let alpha1_sq = i as f64 / (grid - 1) as f64;
        let a = State2::from_real(alpha1_sq.sqrt(), (1.0 - alpha1_sq).sqrt())?;
        for j in 0..grid {
            let beta1_sq = j as f64 / (grid - 1) as f64;
            let b = State2::from_real(beta1_sq.sqrt(), (1.0 - beta1_sq).sqrt())?;
            let ratio = if d == 0.0 {
                quadratic_coefficient(&a, &b)
            } else {
                delta_exact_chain(&a, &b, delta) / (d * d)
            };
            cells.push(Fig1Cell {
                alpha1_sq,
                beta1_sq,
                delta_ratio: ratio,
            });
        }
    }
    Ok(cells)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::swap_analysis::rational_approx;

    fn delta(v: f64) -> Delta {
        Delta::new(v).unwrap()
    }

    #[test]
    fn rho_up_simple_golden_values() {
        assert_eq!(rho_up_simple(0.0, delta(0.5)), 1.0);
        let v = rho_up_simple(1.0, delta(0.1));
        assert!((v - (1.0 - 0.01 / 1.01)).abs() < 1e-15);
        let v = rho_up_simple(0.5, delta(0.2));
        assert!((v - (1.0 - 0.02 / 1.04)).abs() < 1e-15);
    }

    #[test]
    fn general_density_homogeneous_limit() {
        let a = State2::from_real(0.6, 0.8).unwrap();
        let b = State2::from_real(0.8, 0.6).unwrap();
        let r = rational_approx(1.0, 99).unwrap();
        let (rho, terms) =
            reduced_density_general(&a, &b, delta(0.0), &r, 1, 0.0).unwrap();
        assert!(terms.c_term.abs() < 1e-15);
        assert!((terms.d_term.norm() - 1.0).abs() < 1e-15);
        // Ideal swapped density: spin 1 carries beta.
        assert!(rho.max_abs_diff(&Density2::from_pure(&b)) < 1e-12);
    }

    #[test]
    fn general_density_c_term_example() {
        // alpha = (1, 0) kills the delta-linear cross term.
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let a = State2::up();
        let b = State2::from_real(h, h).unwrap();
        let r = rational_approx(1.0, 99).unwrap();
        let (_, terms) = reduced_density_general(&a, &b, delta(0.1), &r, 1, 0.0).unwrap();
        assert!((terms.c_term - 0.5 * 0.01 / 1.01).abs() < 1e-15);
    }

    #[test]
    fn general_density_trace_is_exactly_one() {
        let a = State2::from_real(0.28, -0.96).unwrap();
        let b = State2::from_real(0.6, 0.8).unwrap();
        let r = rational_approx(3.0 / 5.0, 99).unwrap();
        let (rho, _) = reduced_density_general(&a, &b, delta(0.25), &r, 2, 1.3).unwrap();
        assert!((rho.trace() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn degenerate_beta_is_rejected() {
        let r = rational_approx(1.0, 99).unwrap();
        let err = reduced_density_general(
            &State2::up(),
            &State2::up(),
            delta(0.1),
            &r,
            1,
            0.0,
        );
        assert!(matches!(err, Err(Error::DegenerateBeta)));
    }

    #[test]
    fn mixture_golden_cases() {
        let b = State2::from_real(0.6, 0.8).unwrap();
        let ideal = FieldErrorTerms {
            c_term: 0.0,
            d_term: Complex64::new(1.0, 0.0),
        };
        let w = mixture_decomposition(&ideal, &b).unwrap();
        assert_eq!((w.p1, w.p2, w.p3, w.theta), (1.0, 0.0, 0.0, 0.0));

        let a = State2::up();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bb = State2::from_real(h, h).unwrap();
        let d = delta(0.1);
        let terms = FieldErrorTerms {
            c_term: c_term(&a, &bb, d.value()),
            d_term: d_term(&a, &bb, d.value()),
        };
        // Structure identity p2 − C = p3 + C on the raw algebraic weights.
        let w = mixture_weights(&terms, &bb);
        assert!((w.p2 - terms.c_term - (w.p3 + terms.c_term)).abs() < 1e-15);
        assert!((w.p1 + w.p2 + w.p3 - 1.0).abs() < 1e-12);
        // For this configuration the decomposition is a quasi-mixture: p3
        // dips to O(-delta^2) and the gated path reports it.
        assert!(matches!(
            mixture_decomposition(&terms, &bb),
            Err(Error::NegativeWeight { index: 3, .. })
        ));
    }

    #[test]
    fn raw_weights_sum_to_one_for_random_inputs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(900);
        for _ in 0..500 {
            let a = State2::random_bloch(&mut rng);
            let b = loop {
                let b = State2::random_bloch(&mut rng);
                if (b.amp_up() * b.amp_down()).norm() > 0.0 {
                    break b;
                }
            };
            let d = rng.gen_range(-0.3..=0.3);
            let terms = FieldErrorTerms {
                c_term: c_term(&a, &b, d),
                d_term: d_term(&a, &b, d),
            };
            let w = mixture_weights(&terms, &b);
            assert!((w.p1 + w.p2 + w.p3 - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn success_probability_golden_cases() {
        let b = State2::from_real(0.6, 0.8).unwrap();
        let ideal = MixtureWeights {
            p1: 1.0,
            p2: 0.0,
            p3: 0.0,
            theta: 0.0,
        };
        assert!((success_probability(&ideal, &b) - 1.0).abs() < 1e-15);

        let dephased = MixtureWeights {
            p1: 0.0,
            p2: b.amp_up().norm_sqr(),
            p3: b.amp_down().norm_sqr(),
            theta: 0.0,
        };
        let expected = b.amp_up().norm_sqr().powi(2) + b.amp_down().norm_sqr().powi(2);
        assert!((success_probability(&dephased, &b) - expected).abs() < 1e-15);
    }

    #[test]
    fn quadratic_error_golden_values() {
        let d = delta(0.1);
        let up = State2::up();
        let down = State2::down();
        assert!(error_quadratic(&up, &up, d).abs() < 1e-15);
        assert!((error_quadratic(&up, &down, d) - 0.01).abs() < 1e-15);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let half = State2::from_real(h, h).unwrap();
        assert!((error_quadratic(&half, &half, d) - 0.25 * 0.01).abs() < 1e-15);
    }

    #[test]
    fn check_bound_simple_branch() {
        let a = State2::down(); // |alpha2|^2 = 1
        let b = State2::up();
        let (exact, ok) = check_bound(&a, &b, delta(0.1)).unwrap();
        assert!(ok);
        assert!((exact - 0.01 / 1.01).abs() < 1e-15);
        assert!(exact <= 0.01);
    }

    #[test]
    fn check_bound_equal_states_follows_the_quadratic_law() {
        // alpha = beta keeps the quadratic coefficient at A(1 - A); only the
        // stationary corners alpha = beta = |1⟩ or |0⟩ are error-free.
        let a = State2::from_real(0.6, 0.8).unwrap();
        for d in [0.1, 0.05, 0.025] {
            let (exact, ok) = check_bound(&a, &a, delta(d)).unwrap();
            assert!(ok);
            let coeff = 0.36 * 0.64;
            assert!((exact - coeff * d * d).abs() < 5.0 * d.powi(3), "d = {d}: {exact}");
        }
        let (exact, ok) = check_bound(&State2::up(), &State2::up(), delta(0.2)).unwrap();
        assert!(ok);
        assert_eq!(exact, 0.0);
    }

    #[test]
    fn check_bound_rejects_large_delta() {
        let a = State2::up();
        assert!(matches!(
            check_bound(&a, &a, delta(0.4)),
            Err(Error::OutOfRegime { .. })
        ));
    }

    #[test]
    fn fig1_surface_corners_and_shape() {
        let cells = fig1_surface(delta(0.1), 5).unwrap();
        assert_eq!(cells.len(), 25);
        // Corner (alpha1_sq, beta1_sq) = (1, 0): ratio ~ 1.
        let corner = cells
            .iter()
            .find(|c| c.alpha1_sq == 1.0 && c.beta1_sq == 0.0)
            .unwrap();
        assert!((corner.delta_ratio - 1.0 / 1.01).abs() < 1e-12);
        for cell in &cells {
            assert!(cell.delta_ratio >= -1e-12);
            assert!(cell.delta_ratio <= 1.0 + 1e-12);
        }
        // The diagonal sits far below the worst corner: its quadratic
        // coefficient is x(1 - x) ≤ 1/4.
        let mid = cells
            .iter()
            .find(|c| c.alpha1_sq == 0.5 && c.beta1_sq == 0.5)
            .unwrap();
        assert!((mid.delta_ratio - 0.25).abs() < 0.05);
    }
}
