//! Brute-force evolution used as ground truth for the closed-form results.
//!
//! This path builds the Hamiltonian matrix, exponentiates it numerically and
//! works on the full two-qubit state with plain linear algebra; none of the
//! eigensystem or coefficient formulas appear here, so a transcription error
//! on the analytic side shows up as a deviation between the two routes. A
//! fixed-step fourth-order integrator is available as a second-tier check on
//! the matrix exponential itself.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::evolution::reduced_density_first;
use crate::qlinalg::{
    density_from_state, partial_trace_second, propagator, tensor_product, Density2, State2, State4,
};
use crate::xxz_model::{build_hamiltonian, ModelParams};

/// Evolution times are capped to keep the scaled-and-squared exponential well
/// inside its accuracy budget.
pub const MAX_TIME: f64 = 1e3;

/// What one brute-force evolution produces.
#[derive(Clone, Copy, Debug)]
pub struct OracleResult {
    pub state: State4,
    pub reduced: Density2,
    pub purity: f64,
    pub fidelity_vs_target: Option<f64>,
}

/// Evolves the product state numerically and reduces it with the partial
/// trace; optionally also projects onto a target state.
pub fn evolve_numeric(
    a: &State2,
    b: &State2,
    p: &ModelParams,
    t: f64,
    target: Option<&State4>,
) -> Result<OracleResult> {
    if !t.is_finite() || t.abs() > MAX_TIME {
        return Err(Error::InvalidParams(format!(
            "|t| must be finite and at most {MAX_TIME}, got {t}"
        )));
    }
    let u = propagator(&build_hamiltonian(p), t)?;
    let state = u.apply(&tensor_product(a, b))?;
    let reduced = partial_trace_second(&density_from_state(&state))?;
    Ok(OracleResult {
        state,
        reduced,
        purity: reduced.det(),
        fidelity_vs_target: target.map(|psi| psi.inner(&state).norm_sqr()),
    })
}

/// Largest entrywise difference between the closed-form reduced density and
/// the brute-force one, over a list of sample times.
pub fn max_deviation(a: &State2, b: &State2, p: &ModelParams, t_samples: &[f64]) -> Result<f64> {
    if t_samples.is_empty() {
        return Err(Error::InvalidParams("t_samples must be nonempty".into()));
    }
    let mut worst: f64 = 0.0;
    for &t in t_samples {
        let oracle = evolve_numeric(a, b, p, t, None)?;
        let analytic = reduced_density_first(a, b, p, t)?;
        worst = worst.max(analytic.max_abs_diff(&oracle.reduced));
    }
    Ok(worst)
}

/// Second-tier check: classical fourth-order Runge-Kutta on the Schrödinger
/// equation `dψ/dt = −iHψ` with fixed step count. Slower and less accurate
/// than the matrix exponential; used only to cross-check it.
pub fn evolve_rk4(a: &State2, b: &State2, p: &ModelParams, t: f64, steps: usize) -> Result<State4> {
    if steps == 0 {
        return Err(Error::InvalidParams("steps must be >= 1".into()));
    }
    if !t.is_finite() || t.abs() > MAX_TIME {
        return Err(Error::InvalidParams(format!(
            "|t| must be finite and at most {MAX_TIME}, got {t}"
        )));
    }
    let h = build_hamiltonian(p);
    let rhs = |amps: &[Complex64; 4]| {
        let mut out = h.apply_amps(amps);
        for value in &mut out {
            *value *= Complex64::new(0.0, -1.0);
        }
        out
    };
    let dt = t / steps as f64;
    let mut amps = *tensor_product(a, b).amps();
    for _ in 0..steps {
        let k1 = rhs(&amps);
        let k2 = rhs(&step_from(&amps, &k1, dt / 2.0));
        let k3 = rhs(&step_from(&amps, &k2, dt / 2.0));
        let k4 = rhs(&step_from(&amps, &k3, dt));
        for i in 0..4 {
            amps[i] += (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) * (dt / 6.0);
        }
    }
    State4::new(amps)
}

fn step_from(base: &[Complex64; 4], slope: &[Complex64; 4], factor: f64) -> [Complex64; 4] {
    let mut out = *base;
    for i in 0..4 {
        out[i] += slope[i] * factor;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn zero_time_returns_the_input() {
        let a = State2::from_real(0.6, 0.8).unwrap();
        let b = State2::from_real(0.28, -0.96).unwrap();
        let p = ModelParams::new(1.0, 0.7, 0.9, 0.2).unwrap();
        let result = evolve_numeric(&a, &b, &p, 0.0, None).unwrap();
        assert!(result.state.max_abs_diff(&tensor_product(&a, &b)) < 1e-13);
        assert!(result.purity.abs() < 1e-12);
    }

    #[test]
    fn xxx_swap_sends_up_down_to_down_up() {
        let p = ModelParams::homogeneous(1.0, 1.0).unwrap();
        let target = State4::basis(1);
        let result = evolve_numeric(
            &State2::up(),
            &State2::down(),
            &p,
            PI / 2.0,
            Some(&target),
        )
        .unwrap();
        assert!(result.fidelity_vs_target.unwrap() > 1.0 - 1e-10);
    }

    #[test]
    fn norm_is_preserved() {
        let a = State2::from_real(0.6, 0.8).unwrap();
        let b = State2::from_real(0.96, 0.28).unwrap();
        let p = ModelParams::new(-2.5, 1.8, 2.9, -1.7).unwrap();
        for t in [0.5, 3.7, 9.9] {
            let result = evolve_numeric(&a, &b, &p, t, None).unwrap();
            assert!((result.state.norm_sqr() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn eigenstate_deviation_is_zero() {
        let p = ModelParams::new(1.4, -0.9, 1.1, 0.6).unwrap();
        let samples: Vec<f64> = (1..=10).map(|i| i as f64).collect();
        let dev = max_deviation(&State2::up(), &State2::up(), &p, &samples).unwrap();
        assert!(dev < 1e-12);
    }

    #[test]
    fn rk4_agrees_with_the_exponential() {
        let a = State2::from_real(0.6, 0.8).unwrap();
        let b = State2::from_real(0.0, 1.0).unwrap();
        let p = ModelParams::new(1.0, 0.5, 1.3, 0.4).unwrap();
        let t = 2.0;
        let direct = evolve_numeric(&a, &b, &p, t, None).unwrap().state;
        let stepped = evolve_rk4(&a, &b, &p, t, 20_000).unwrap();
        assert!(direct.max_abs_diff(&stepped) < 1e-9);
    }

    #[test]
    fn rejects_excessive_time() {
        let p = ModelParams::homogeneous(1.0, 1.0).unwrap();
        assert!(evolve_numeric(&State2::up(), &State2::down(), &p, 2e3, None).is_err());
    }
}
