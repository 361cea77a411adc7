//! The `validate` command: a seeded cross-check of every closed form against
//! the brute-force evolution path, written as one CSV row per check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use xxzswap::evolution::{purity_functional, purity_homogeneous, reduced_density_first};
use xxzswap::field_error::{check_bound, error_quadratic, rho_up_simple, Delta};
use xxzswap::numeric_oracle::{evolve_numeric, evolve_rk4};
use xxzswap::qlinalg::{Complex64, State2};
use xxzswap::swap_analysis::{
    phase_factor, rational_approx, swap_fidelity, swap_time, Operation,
};
use xxzswap::xxz_model::{build_hamiltonian, eigensystem, ModelParams};

use crate::config::Context;
use crate::output::{num, Csv};
use crate::AppError;

struct Check {
    name: &'static str,
    trials: usize,
    observed: f64,
    threshold: f64,
}

impl Check {
    fn passed(&self) -> bool {
        self.observed <= self.threshold
    }
}

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

/// Runs every check and writes the report; returns overall success.
pub fn run(ctx: &Context, trials: usize, deep: bool) -> Result<bool, AppError> {
    if trials == 0 {
        return Err(AppError::Usage("--trials must be >= 1".into()));
    }
    let seed = ctx.seed;
    let mut checks = vec![
        eigensystem_residual(seed, trials),
        eigensystem_orthonormality(seed, trials),
        reduced_density_vs_oracle(seed, trials)?,
        purity_determinant_identity(seed, trials)?,
        purity_homogeneous_consistency(seed, trials)?,
        xxx_swap_fidelity(seed)?,
        odd_odd_swap_fidelity(seed)?,
        error_bound_upper(seed, trials)?,
        error_bound_lower(seed, trials)?,
        quadratic_consistency(seed, trials)?,
        rho_up_simple_consistency(seed)?,
    ];
    if deep {
        checks.push(rk4_cross_check(seed)?);
    }

    let mut csv = Csv::new("check,trials,observed,threshold,status");
    let mut all_passed = true;
    for check in &checks {
        all_passed &= check.passed();
        csv.row(&[
            check.name.to_string(),
            check.trials.to_string(),
            num(check.observed),
            num(check.threshold),
            if check.passed() { "pass" } else { "fail" }.to_string(),
        ]);
    }
    csv.write(ctx.out.as_deref())?;
    Ok(all_passed)
}

fn eigensystem_residual(seed: u64, trials: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x01);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
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
            worst = worst.max(residual);
        }
    }
    Check {
        name: "eigensystem_residual",
        trials,
        observed: worst,
        threshold: 1e-10,
    }
}

fn eigensystem_orthonormality(seed: u64, trials: usize) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x02);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let es = eigensystem(&rand_params(&mut rng));
        for i in 0..4 {
            for j in 0..4 {
                let expected = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((es.states[i].inner(&es.states[j]).norm() - expected).abs());
            }
        }
    }
    Check {
        name: "eigensystem_orthonormality",
        trials,
        observed: worst,
        threshold: 1e-12,
    }
}

fn reduced_density_vs_oracle(seed: u64, trials: usize) -> Result<Check, AppError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x03);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let (a, b) = (rand_qubit(&mut rng), rand_qubit(&mut rng));
        let p = rand_params(&mut rng);
        let t = rng.gen_range(0.0..=10.0);
        let analytic = reduced_density_first(&a, &b, &p, t)?;
        let oracle = evolve_numeric(&a, &b, &p, t, None)?;
        worst = worst.max(analytic.max_abs_diff(&oracle.reduced));
    }
    Ok(Check {
        name: "reduced_density_vs_oracle",
        trials,
        observed: worst,
        threshold: 1e-9,
    })
}

fn purity_determinant_identity(seed: u64, trials: usize) -> Result<Check, AppError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x04);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let (a, b) = (rand_qubit(&mut rng), rand_qubit(&mut rng));
        let p = rand_params(&mut rng);
        let t = rng.gen_range(0.0..=10.0);
        let functional = purity_functional(&a, &b, &p, t)?;
        let det = reduced_density_first(&a, &b, &p, t)?.det();
        worst = worst.max((functional - det).abs());
    }
    Ok(Check {
        name: "purity_determinant_identity",
        trials,
        observed: worst,
        threshold: 1e-10,
    })
}

fn purity_homogeneous_consistency(seed: u64, trials: usize) -> Result<Check, AppError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x05);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let (a, b) = (rand_qubit(&mut rng), rand_qubit(&mut rng));
        let j = loop {
            let j: f64 = rng.gen_range(-3.0..=3.0);
            if j != 0.0 {
                break j;
            }
        };
        let lambda = rng.gen_range(-2.0..=2.0);
        let t = rng.gen_range(0.0..=10.0);
        let p = ModelParams::homogeneous(j, lambda)?;
        let closed = purity_homogeneous(&a, &b, j, lambda, t)?;
        let general = purity_functional(&a, &b, &p, t)?;
        worst = worst.max((closed - general).abs());
    }
    Ok(Check {
        name: "purity_homogeneous_consistency",
        trials,
        observed: worst,
        threshold: 1e-10,
    })
}

fn xxx_swap_fidelity(seed: u64) -> Result<Check, AppError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x06);
    let t = std::f64::consts::FRAC_PI_2;
    let mut worst: f64 = 0.0;
    let mut trials = 0;
    for field in [0.0, 1.3] {
        let p = ModelParams::new(1.0, 1.0, field, 0.0)?;
        let phase = Complex64::cis(field * t);
        for _ in 0..100 {
            let (a, b) = (rand_qubit(&mut rng), rand_qubit(&mut rng));
            let fid = swap_fidelity(&a, &b, &p, t, phase)?;
            worst = worst.max(1.0 - fid);
            trials += 1;
        }
    }
    Ok(Check {
        name: "xxx_swap_fidelity",
        trials,
        observed: worst,
        threshold: 1e-9,
    })
}

fn odd_odd_swap_fidelity(seed: u64) -> Result<Check, AppError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x07);
    let mut worst: f64 = 0.0;
    let mut trials = 0;
    for lambda in [1.0 / 3.0, 3.0 / 5.0, 5.0 / 7.0] {
        let p = ModelParams::homogeneous(1.0, lambda)?;
        let r = rational_approx(lambda, 99)?;
        for k in 1..=2 {
            let t = swap_time(&p, &r, k)?;
            let phase = phase_factor(&r, k, Operation::Swap, 0.0, t)?;
            for _ in 0..25 {
                let (a, b) = (rand_qubit(&mut rng), rand_qubit(&mut rng));
                let fid = swap_fidelity(&a, &b, &p, t, phase)?;
                worst = worst.max(1.0 - fid);
                trials += 1;
            }
        }
    }
    Ok(Check {
        name: "odd_odd_swap_fidelity",
        trials,
        observed: worst,
        threshold: 1e-9,
    })
}

fn error_bound_upper(seed: u64, trials: usize) -> Result<Check, AppError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x08);
    let mut worst = f64::MIN;
    let mut total = 0;
    for d in [0.05, 0.1, 0.2] {
        let delta = Delta::new(d)?;
        for _ in 0..trials {
            let (a, b) = (rand_qubit(&mut rng), rand_qubit(&mut rng));
            let (exact, _) = check_bound(&a, &b, delta)?;
            worst = worst.max(exact - (d * d + 2.0 * d * d * d));
            total += 1;
        }
    }
    Ok(Check {
        name: "error_bound_upper",
        trials: total,
        observed: worst,
        threshold: 0.0,
    })
}

fn error_bound_lower(seed: u64, trials: usize) -> Result<Check, AppError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x08);
    let mut worst = f64::MIN;
    let mut total = 0;
    for d in [0.05, 0.1, 0.2] {
        let delta = Delta::new(d)?;
        for _ in 0..trials {
            let (a, b) = (rand_qubit(&mut rng), rand_qubit(&mut rng));
            let (exact, _) = check_bound(&a, &b, delta)?;
            worst = worst.max(-exact);
            total += 1;
        }
    }
    Ok(Check {
        name: "error_bound_lower",
        trials: total,
        observed: worst,
        threshold: 1e-10,
    })
}

fn quadratic_consistency(seed: u64, trials: usize) -> Result<Check, AppError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x09);
    let mut worst: f64 = 0.0;
    let mut total = 0;
    for d in [0.05, 0.1, 0.2] {
        let delta = Delta::new(d)?;
        for _ in 0..trials {
            let (a, b) = (rand_qubit(&mut rng), rand_qubit(&mut rng));
            let (exact, _) = check_bound(&a, &b, delta)?;
            let quadratic = error_quadratic(&a, &b, delta);
            worst = worst.max((exact - quadratic).abs() / (d * d * d));
            total += 1;
        }
    }
    Ok(Check {
        name: "quadratic_consistency",
        trials: total,
        observed: worst,
        threshold: 5.0,
    })
}

fn rho_up_simple_consistency(seed: u64) -> Result<Check, AppError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0a);
    let mut worst: f64 = 0.0;
    let mut trials = 0;
    for _ in 0..100 {
        let a = rand_qubit(&mut rng);
        let d = rng.gen_range(0.0..=0.3);
        let p = ModelParams::new(1.0, 1.0, 0.0, d)?;
        let t = std::f64::consts::FRAC_PI_2 / p.eta();
        let rho = reduced_density_first(&a, &State2::up(), &p, t)?;
        let expected = rho_up_simple(a.amp_down().norm_sqr(), Delta::new(d)?);
        worst = worst.max((rho.up_up().re - expected).abs());
        trials += 1;
    }
    Ok(Check {
        name: "rho_up_simple_consistency",
        trials,
        observed: worst,
        threshold: 1e-10,
    })
}

fn rk4_cross_check(seed: u64) -> Result<Check, AppError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0b);
    let mut worst: f64 = 0.0;
    let mut trials = 0;
    for _ in 0..5 {
        let (a, b) = (rand_qubit(&mut rng), rand_qubit(&mut rng));
        let p = rand_params(&mut rng);
        let t = rng.gen_range(0.5..=3.0);
        let direct = evolve_numeric(&a, &b, &p, t, None)?.state;
        let stepped = evolve_rk4(&a, &b, &p, t, 40_000)?;
        worst = worst.max(direct.max_abs_diff(&stepped));
        trials += 1;
    }
    Ok(Check {
        name: "rk4_cross_check",
        trials,
        observed: worst,
        threshold: 1e-8,
    })
}
