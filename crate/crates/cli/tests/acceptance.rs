//! Acceptance suite: one test per release criterion, each printing a single
//! PASS line with the observed margin when it holds. Every tolerance is
//! pinned here in code.
//!
//! Run with `cargo test -p xxzswap-cli --test acceptance -- --nocapture`
//! to see the per-criterion lines.

use std::process::Command;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use xxzswap::evolution::reduced_density_first;
use xxzswap::field_error::{check_bound, error_quadratic, rho_up_simple, Delta};
use xxzswap::numeric_oracle::evolve_numeric;
use xxzswap::qlinalg::{Complex64, State2};
use xxzswap::swap_analysis::{
    phase_factor, rational_approx, swap_fidelity, swap_time, tau, Operation,
};
use xxzswap::xxz_model::{build_hamiltonian, eigensystem, ModelParams};

fn rand_qubit(rng: &mut ChaCha8Rng) -> State2 {
    let s = State2::random_bloch(rng);
    let global = Complex64::cis(rng.gen_range(0.0..std::f64::consts::TAU));
    State2::new(s.amp_up() * global, s.amp_down() * global).unwrap()
}

fn rand_params(rng: &mut ChaCha8Rng) -> ModelParams {
    loop {
        let j: f64 = rng.gen_range(-3.0..=3.0);
        if j == 0.0 {
            continue;
        }
        let lambda = rng.gen_range(-2.0..=2.0);
        let field = rng.gen_range(0.0..=3.0);
        let imbalance = rng.gen_range(-2.0..=2.0);
        return ModelParams::new(j, lambda, field, imbalance).unwrap();
    }
}

#[test]
fn criterion_1_eigensystem_residual_and_orthonormality() {
    const RESIDUAL_TOL: f64 = 1e-10;
    const ORTHO_TOL: f64 = 1e-12;
    let mut rng = ChaCha8Rng::seed_from_u64(1001);
    let mut worst_residual: f64 = 0.0;
    let mut worst_ortho: f64 = 0.0;
    for _ in 0..1000 {
        let p = rand_params(&mut rng);
        let h = build_hamiltonian(&p);
        let es = eigensystem(&p);
        for i in 0..4 {
            let hpsi = h.apply_amps(es.states[i].amps());
            let residual: f64 = hpsi
                .iter()
                .enumerate()
                .map(|(k, amp)| (amp - es.states[i].amp(k) * es.energies[i]).norm_sqr())
                .sum::<f64>()
                .sqrt();
            worst_residual = worst_residual.max(residual);
            for j in 0..4 {
                let expected = if i == j { 1.0 } else { 0.0 };
                let gap = (es.states[i].inner(&es.states[j]).norm() - expected).abs();
                worst_ortho = worst_ortho.max(gap);
            }
        }
    }
    assert!(worst_residual < RESIDUAL_TOL, "residual {worst_residual}");
    assert!(worst_ortho < ORTHO_TOL, "orthonormality {worst_ortho}");
    println!(
        "criterion 1 (eigensystem residual/orthonormality): PASS — residual {worst_residual:.2e} < {RESIDUAL_TOL:.0e}, orthonormality {worst_ortho:.2e} < {ORTHO_TOL:.0e}"
    );
}

#[test]
fn criterion_2_analytic_vs_oracle_reduced_density() {
    const TOL: f64 = 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(1002);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let (a, b) = (rand_qubit(&mut rng), rand_qubit(&mut rng));
        let p = rand_params(&mut rng);
        let t = rng.gen_range(0.0..=10.0);
        let analytic = reduced_density_first(&a, &b, &p, t).unwrap();
        let oracle = evolve_numeric(&a, &b, &p, t, None).unwrap();
        worst = worst.max(analytic.max_abs_diff(&oracle.reduced));
    }
    assert!(worst < TOL, "deviation {worst}");
    println!("criterion 2 (analytic vs oracle evolution): PASS — max entrywise deviation {worst:.2e} < {TOL:.0e}");
}

#[test]
fn criterion_3_xxx_swap_reproduction() {
    const TOL: f64 = 1e-9;
    let t = std::f64::consts::FRAC_PI_2;
    let mut rng = ChaCha8Rng::seed_from_u64(1003);
    let mut worst: f64 = 0.0;
    for field in [0.0, 1.3] {
        let p = ModelParams::new(1.0, 1.0, field, 0.0).unwrap();
        let phase = Complex64::cis(field * t);
        for _ in 0..100 {
            let (a, b) = (rand_qubit(&mut rng), rand_qubit(&mut rng));
            let fid = swap_fidelity(&a, &b, &p, t, phase).unwrap();
            worst = worst.max(1.0 - fid);
        }
    }
    assert!(worst < TOL, "fidelity deficit {worst}");
    println!("criterion 3 (XXX swap at t = pi/2, B in {{0, 1.3}}): PASS — worst fidelity deficit {worst:.2e} < {TOL:.0e}");
}

#[test]
fn criterion_4_odd_odd_rational_swaps() {
    const TOL: f64 = 1e-9;
    let mut rng = ChaCha8Rng::seed_from_u64(1004);
    let mut worst: f64 = 0.0;
    for lambda in [1.0 / 3.0, 3.0 / 5.0, 5.0 / 7.0] {
        let p = ModelParams::homogeneous(1.0, lambda).unwrap();
        let r = rational_approx(lambda, 99).unwrap();
        assert!(r.is_exact() && r.both_odd());
        for k in 1..=2 {
            let t = swap_time(&p, &r, k).unwrap();
            let expected = (2.0 * k as f64 - 1.0) * r.n as f64 * std::f64::consts::PI / 2.0;
            assert!((t - expected).abs() < 1e-12);
            let phase = phase_factor(&r, k, Operation::Swap, 0.0, t).unwrap();
            for _ in 0..100 {
                let (a, b) = (rand_qubit(&mut rng), rand_qubit(&mut rng));
                let fid = swap_fidelity(&a, &b, &p, t, phase).unwrap();
                worst = worst.max(1.0 - fid);
            }
        }
    }
    assert!(worst < TOL, "fidelity deficit {worst}");
    println!("criterion 4 (odd/odd swaps, lambda in {{1/3, 3/5, 5/7}}, k in {{1, 2}}): PASS — worst fidelity deficit {worst:.2e} < {TOL:.0e}");
}

#[test]
fn criterion_5_even_parity_infeasibility() {
    const FIDELITY_CEILING: f64 = 1.0 - 1e-6;
    const GRID: usize = 100_000;
    // tau landmarks frozen from the refined grid search (t_max = 4nπ).
    let golden: [(f64, u64, f64); 3] = [
        (0.5, 2, 0.875),
        (2.0 / 3.0, 3, 0.365823088827),
        (0.25, 4, 0.277903966695),
    ];
    // Two fixed, distinct product inputs.
    let a1 = State2::from_real(0.6, 0.8).unwrap();
    let b1 = State2::from_real(0.28, 0.96).unwrap();
    let a2 = State2::up();
    let b2 = State2::from_real(std::f64::consts::FRAC_1_SQRT_2, std::f64::consts::FRAC_1_SQRT_2)
        .unwrap();

    let mut report = String::new();
    for (lambda, n, tau_golden) in golden {
        let p = ModelParams::homogeneous(1.0, lambda).unwrap();
        let t_max = 4.0 * n as f64 * std::f64::consts::PI;

        let mut best_joint: f64 = 0.0;
        for i in 1..=GRID {
            let t = t_max * i as f64 / GRID as f64;
            // Best over the two candidate parity phases, worst over inputs:
            // the swap must work for both inputs at once to count.
            let mut fid1: f64 = 0.0;
            let mut fid2: f64 = 0.0;
            for sign in [1.0, -1.0] {
                let phase = Complex64::new(sign, 0.0);
                fid1 = fid1.max(swap_fidelity(&a1, &b1, &p, t, phase).unwrap());
                fid2 = fid2.max(swap_fidelity(&a2, &b2, &p, t, phase).unwrap());
            }
            best_joint = best_joint.max(fid1.min(fid2));
        }
        assert!(
            best_joint < FIDELITY_CEILING,
            "lambda = {lambda}: joint fidelity {best_joint}"
        );

        let (tau_value, _) = tau(lambda, 1.0, t_max, GRID).unwrap();
        let step = t_max / GRID as f64;
        let grid_floor = (1.0 + lambda * lambda) * step * step / 2.0;
        assert!(
            tau_value > 10.0 * grid_floor,
            "lambda = {lambda}: tau {tau_value} vs floor {grid_floor}"
        );
        assert!(
            (tau_value - tau_golden).abs() < 1e-9,
            "lambda = {lambda}: tau {tau_value} vs golden {tau_golden}"
        );
        report.push_str(&format!(" tau({lambda:.4}) = {tau_value:.6},"));
    }
    println!(
        "criterion 5 (even-parity infeasibility, lambda in {{1/2, 2/3, 1/4}}): PASS — no joint fidelity above {FIDELITY_CEILING};{report} all above 10x the grid floor"
    );
}

#[test]
fn criterion_6_error_bound_and_quadratic_law() {
    const LOWER: f64 = -1e-10;
    let mut rng = ChaCha8Rng::seed_from_u64(1006);
    let mut worst_excess = f64::MIN;
    let mut worst_low = f64::MIN;
    let mut worst_quad: f64 = 0.0;
    for d in [0.05, 0.1, 0.2] {
        let delta = Delta::new(d).unwrap();
        let upper = d * d + 2.0 * d * d * d;
        for _ in 0..10_000 {
            let (a, b) = (rand_qubit(&mut rng), rand_qubit(&mut rng));
            let (exact, bound_ok) = check_bound(&a, &b, delta).unwrap();
            assert!(bound_ok && exact <= upper, "delta {d}: exact {exact}");
            assert!(exact >= LOWER, "delta {d}: exact {exact}");
            worst_excess = worst_excess.max(exact - upper);
            worst_low = worst_low.max(-exact);
            let quad = error_quadratic(&a, &b, delta);
            let gap = (exact - quad).abs();
            assert!(gap <= 5.0 * d * d * d, "delta {d}: |exact - quad| = {gap}");
            worst_quad = worst_quad.max(gap / (d * d * d));
        }
    }
    println!(
        "criterion 6 (error bound, 3x10^4 Bloch-uniform trials): PASS — worst upper-bound slack {:.2e}, worst negativity {:.2e}, worst |exact-quad|/delta^3 = {:.3} <= 5",
        -worst_excess, worst_low, worst_quad
    );
}

#[test]
fn criterion_7_simple_case_formula() {
    const TOL: f64 = 1e-10;
    let mut rng = ChaCha8Rng::seed_from_u64(1007);
    let mut worst: f64 = 0.0;
    for trial in 0..100 {
        let a = rand_qubit(&mut rng);
        // Sweep delta across [0, 0.3] deterministically, plus random fill.
        let d = if trial < 31 {
            trial as f64 * 0.01
        } else {
            rng.gen_range(0.0..=0.3)
        };
        let p = ModelParams::new(1.0, 1.0, 0.0, d).unwrap();
        // The up-population oscillates at 2η, so the swap point under the
        // imbalanced field sits at t = π/(2η).
        let t = std::f64::consts::FRAC_PI_2 / p.eta();
        let rho = reduced_density_first(&a, &State2::up(), &p, t).unwrap();
        let expected = rho_up_simple(a.amp_down().norm_sqr(), Delta::new(d).unwrap());
        worst = worst.max((rho.up_up().re - expected).abs());
    }
    assert!(worst < TOL, "deviation {worst}");
    println!("criterion 7 (simple-case up-population formula): PASS — max |analytic - closed form| = {worst:.2e} < {TOL:.0e}");
}

#[test]
fn criterion_8_validate_is_deterministic() {
    let exe = env!("CARGO_BIN_EXE_xxzswap");
    let dir = std::env::temp_dir();
    let out1 = dir.join("xxzswap_acceptance_validate_1.csv");
    let out2 = dir.join("xxzswap_acceptance_validate_2.csv");
    for out in [&out1, &out2] {
        let status = Command::new(exe)
            .args([
                "validate",
                "--trials",
                "200",
                "--seed",
                "7",
                "--out",
                out.to_str().unwrap(),
            ])
            .status()
            .expect("running validate");
        assert!(status.success(), "validate exited with {status}");
    }
    let bytes1 = std::fs::read(&out1).unwrap();
    let bytes2 = std::fs::read(&out2).unwrap();
    assert!(!bytes1.is_empty());
    assert_eq!(bytes1, bytes2, "validate output differs between runs");
    let _ = std::fs::remove_file(&out1);
    let _ = std::fs::remove_file(&out2);
    println!(
        "criterion 8 (validate determinism): PASS — two seeded runs produced byte-identical CSV ({} bytes)",
        bytes1.len()
    );
}
