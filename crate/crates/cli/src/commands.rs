//! Implementations of the individual subcommands.

use std::process::ExitCode;

use xxzswap::evolution::{purity_functional, reduced_density_first};
use xxzswap::field_error::{check_bound, error_report, fig1_surface, Delta, ErrorReport};
use xxzswap::numeric_oracle::MAX_TIME;
use xxzswap::qlinalg::Complex64;
use xxzswap::swap_analysis::{
    classify, phase_factor, rational_approx, return_time, swap_time, tau, FeasibilityClass,
    Operation, DEFAULT_TAU_GRID,
};
use xxzswap::xxz_model::{eigensystem, ModelParams};

use crate::config::{Cli, Command, Context};
use crate::output::{num, Csv};
use crate::validate;
use crate::AppError;

pub fn run(cli: Cli) -> Result<ExitCode, AppError> {
    let ctx = Context::build(&cli.globals)?;
    match cli.command {
        Command::Eigensystem => cmd_eigensystem(&ctx)?,
        Command::Evolve {
            t_start,
            t_end,
            steps,
        } => cmd_evolve(&ctx, t_start, t_end, steps)?,
        Command::PurityScan {
            t_start,
            t_end,
            steps,
        } => cmd_purity_scan(&ctx, t_start, t_end, steps)?,
        Command::SwapTimes { max_den, k } => cmd_swap_times(&ctx, max_den, k)?,
        Command::Tau {
            t_max,
            grid_points,
            lambda_min,
            lambda_max,
            lambda_steps,
        } => cmd_tau(&ctx, t_max, grid_points, lambda_min, lambda_max, lambda_steps)?,
        Command::Error { delta, k, max_den } => cmd_error(&ctx, delta, k, max_den)?,
        Command::Fig1 { delta, grid } => cmd_fig1(&ctx, delta, grid)?,
        Command::Sweep {
            lambda_min,
            lambda_max,
            lambda_steps,
            grid_points,
            max_den,
        } => cmd_sweep(&ctx, lambda_min, lambda_max, lambda_steps, grid_points, max_den)?,
        Command::Validate { trials, deep } => {
            let trials = match trials {
                Some(v) => v,
                None => ctx.file.get::<usize>("trials")?.unwrap_or(1000),
            };
            if !validate::run(&ctx, trials, deep)? {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn resolve_field<T: std::str::FromStr + Copy>(
    ctx: &Context,
    flag: Option<T>,
    key: &str,
    default: T,
) -> Result<T, AppError> {
    if let Some(v) = flag {
        return Ok(v);
    }
    Ok(ctx.file.get::<T>(key)?.unwrap_or(default))
}

fn time_grid(
    ctx: &Context,
    t_start: Option<f64>,
    t_end: Option<f64>,
    steps: Option<usize>,
    default_end: f64,
    default_steps: usize,
) -> Result<Vec<f64>, AppError> {
    let start = resolve_field(ctx, t_start, "t_start", 0.0)?;
    let end = resolve_field(ctx, t_end, "t_end", default_end)?;
    let steps = resolve_field(ctx, steps, "steps", default_steps)?;
    if steps < 1 {
        return Err(AppError::Usage("--steps must be >= 1".into()));
    }
    if !(start.is_finite() && end.is_finite()) || end < start {
        return Err(AppError::Usage(format!(
            "--t-start/--t-end: need finite t_start <= t_end, got {start}..{end}"
        )));
    }
    if start.abs() > MAX_TIME || end.abs() > MAX_TIME {
        return Err(AppError::Usage(format!(
            "--t-start/--t-end: |t| must stay within {MAX_TIME}"
        )));
    }
    Ok((0..=steps)
        .map(|i| start + (end - start) * i as f64 / steps as f64)
        .collect())
}

fn cmd_eigensystem(ctx: &Context) -> Result<(), AppError> {
    let es = eigensystem(&ctx.params);
    let mut csv = Csv::new(
        "index,energy,eta,eps,zeta,amp_00_re,amp_00_im,amp_01_re,amp_01_im,amp_10_re,amp_10_im,amp_11_re,amp_11_im",
    );
    for i in 0..4 {
        let mut cells = vec![
            (i + 1).to_string(),
            num(es.energies[i]),
            num(es.eta),
            num(es.eps),
            num(es.zeta),
        ];
        for k in 0..4 {
            cells.push(num(es.states[i].amp(k).re));
            cells.push(num(es.states[i].amp(k).im));
        }
        csv.row(&cells);
    }
    csv.write(ctx.out.as_deref())
}

fn cmd_evolve(
    ctx: &Context,
    t_start: Option<f64>,
    t_end: Option<f64>,
    steps: Option<usize>,
) -> Result<(), AppError> {
    let grid = time_grid(ctx, t_start, t_end, steps, 10.0, 200)?;
    let mut csv = Csv::new(
        "t,re_00,im_00,re_01,im_01,re_10,im_10,re_11,im_11,rho_up_up,rho_up_down_re,rho_up_down_im,rho_down_down,purity",
    );
    for t in grid {
        let state = xxzswap::evolution::evolved_state(&ctx.alpha, &ctx.beta, &ctx.params, t)?;
        let rho = reduced_density_first(&ctx.alpha, &ctx.beta, &ctx.params, t)?;
        let purity = purity_functional(&ctx.alpha, &ctx.beta, &ctx.params, t)?;
        let mut cells = vec![num(t)];
        for k in 0..4 {
            cells.push(num(state.amp(k).re));
            cells.push(num(state.amp(k).im));
        }
        cells.push(num(rho.up_up().re));
        cells.push(num(rho.up_down().re));
        cells.push(num(rho.up_down().im));
        cells.push(num(rho.down_down().re));
        cells.push(num(purity));
        csv.row(&cells);
    }
    csv.write(ctx.out.as_deref())
}

fn cmd_purity_scan(
    ctx: &Context,
    t_start: Option<f64>,
    t_end: Option<f64>,
    steps: Option<usize>,
) -> Result<(), AppError> {
    let grid = time_grid(ctx, t_start, t_end, steps, 2.0 * std::f64::consts::PI, 1000)?;
    let mut csv = Csv::new("t,purity");
    for t in grid {
        let purity = purity_functional(&ctx.alpha, &ctx.beta, &ctx.params, t)?;
        csv.row(&[num(t), num(purity)]);
    }
    csv.write(ctx.out.as_deref())
}

fn cmd_swap_times(ctx: &Context, max_den: Option<u64>, k: Option<u32>) -> Result<(), AppError> {
    let max_den = ctx.max_den_with(max_den);
    let k_max = resolve_field(ctx, k, "k", 1)?;
    if k_max < 1 {
        return Err(AppError::Usage("--k must be >= 1".into()));
    }
    let report = classify(&ctx.params, max_den)?;
    let r = report.rational;
    let mut csv = Csv::new(
        "k,lambda,m,n,sign,residual,class,return_time,return_phase_re,return_phase_im,swap_time,swap_phase_re,swap_phase_im",
    );
    for k in 1..=k_max {
        let t_return = return_time(&ctx.params, &r, k)?;
        let return_phase = phase_factor(&r, k, Operation::Return, ctx.params.field(), t_return)?;
        let mut cells = vec![
            k.to_string(),
            num(ctx.params.anisotropy()),
            r.m.to_string(),
            r.n.to_string(),
            r.sign.to_string(),
            num(r.residual),
            report.class.as_str().to_string(),
            num(t_return),
            num(return_phase.re),
            num(return_phase.im),
        ];
        if report.class == FeasibilityClass::ExactSwap {
            let t_swap = swap_time(&ctx.params, &r, k)?;
            let swap_phase = phase_factor(&r, k, Operation::Swap, ctx.params.field(), t_swap)?;
            cells.push(num(t_swap));
            cells.push(num(swap_phase.re));
            cells.push(num(swap_phase.im));
        } else {
            cells.extend([String::new(), String::new(), String::new()]);
        }
        csv.row(&cells);
    }
    csv.write(ctx.out.as_deref())
}

fn cmd_tau(
    ctx: &Context,
    t_max: Option<f64>,
    grid_points: Option<usize>,
    lambda_min: Option<f64>,
    lambda_max: Option<f64>,
    lambda_steps: Option<usize>,
) -> Result<(), AppError> {
    let grid_points = resolve_field(ctx, grid_points, "grid_points", DEFAULT_TAU_GRID)?;
    let lambda_min = resolve_field(ctx, lambda_min, "lambda_min", f64::NAN)?;
    let lambdas: Vec<f64> = if lambda_min.is_nan() {
        vec![ctx.params.anisotropy()]
    } else {
        let lambda_max = resolve_field(ctx, lambda_max, "lambda_max", f64::NAN)?;
        let steps = resolve_field(ctx, lambda_steps, "lambda_steps", 20)?;
        if lambda_max.is_nan() || steps < 1 {
            return Err(AppError::Usage(
                "--lambda-min needs --lambda-max and --lambda-steps >= 1".into(),
            ));
        }
        (0..=steps)
            .map(|i| lambda_min + (lambda_max - lambda_min) * i as f64 / steps as f64)
            .collect()
    };

    let mut csv = Csv::new("lambda,tau,t_argmin");
    for lambda in lambdas {
        let window = match t_max {
            Some(v) => v,
            None => match ctx.file.get::<f64>("t_max")? {
                Some(v) => v,
                None => {
                    // Four return periods of the best approximant.
                    let r = rational_approx(lambda, ctx.max_den)?;
                    4.0 * r.n as f64 * std::f64::consts::PI / ctx.params.coupling().abs()
                }
            },
        };
        let (value, argmin) = tau(lambda, ctx.params.coupling(), window, grid_points)?;
        csv.row(&[num(lambda), num(value), num(argmin)]);
    }
    csv.write(ctx.out.as_deref())
}

/// Simple-branch stand-in for the report when `β₁β₂ = 0`: the mixture
/// degenerates to the measured basis state with weight `1 − Δ`.
fn degenerate_report(ctx: &Context, delta: Delta) -> ErrorReport {
    let beta_is_up = ctx.beta.amp_down().norm_sqr() == 0.0;
    let weight = if beta_is_up {
        ctx.alpha.amp_down().norm_sqr()
    } else {
        ctx.alpha.amp_up().norm_sqr()
    };
    let d2 = delta.value() * delta.value();
    let exact = weight * d2 / (1.0 + d2);
    ErrorReport {
        c_term: 0.0,
        d_term: Complex64::new(1.0, 0.0),
        theta: 0.0,
        p1: 1.0 - exact,
        p2: if beta_is_up { 0.0 } else { exact },
        p3: if beta_is_up { exact } else { 0.0 },
        p_success: 1.0 - exact,
        delta_exact: exact,
        delta_quadratic: xxzswap::field_error::error_quadratic(&ctx.alpha, &ctx.beta, delta),
    }
}

fn cmd_error(
    ctx: &Context,
    delta: Option<Vec<f64>>,
    k: Option<u32>,
    max_den: Option<u64>,
) -> Result<(), AppError> {
    let deltas = match delta {
        Some(v) if !v.is_empty() => v,
        _ => match ctx.file.get_raw("delta") {
            Some(text) => text
                .split(',')
                .map(|s| {
                    s.trim().parse::<f64>().map_err(|_| {
                        AppError::Usage(format!("config key delta: bad entry {s:?}"))
                    })
                })
                .collect::<Result<Vec<_>, _>>()?,
            None => vec![0.05, 0.1, 0.2],
        },
    };
    let k = resolve_field(ctx, k, "k", 1)?;
    let max_den = ctx.max_den_with(max_den);
    let r = rational_approx(ctx.params.anisotropy(), max_den)?;

    let mut csv = Csv::new(
        "delta,c_term,d_re,d_im,theta,p1,p2,p3,p_success,delta_exact,delta_quadratic,bound_ok",
    );
    let degenerate = (ctx.beta.amp_up() * ctx.beta.amp_down()).norm() == 0.0;
    for d in deltas {
        let delta = Delta::new(d).map_err(|e| AppError::Compute(e.to_string()))?;
        let report = if degenerate {
            degenerate_report(ctx, delta)
        } else {
            error_report(&ctx.alpha, &ctx.beta, delta, &r, k, ctx.params.field())?
        };
        // The delta^2 bound check is honest only inside its regime.
        let bound_cell = if d.abs() <= xxzswap::field_error::BOUND_REGIME_LIMIT {
            check_bound(&ctx.alpha, &ctx.beta, delta)?.1.to_string()
        } else {
            String::new()
        };
        csv.row(&[
            num(d),
            num(report.c_term),
            num(report.d_term.re),
            num(report.d_term.im),
            num(report.theta),
            num(report.p1),
            num(report.p2),
            num(report.p3),
            num(report.p_success),
            num(report.delta_exact),
            num(report.delta_quadratic),
            bound_cell,
        ]);
    }
    csv.write(ctx.out.as_deref())
}

fn cmd_fig1(ctx: &Context, delta: Option<f64>, grid: Option<usize>) -> Result<(), AppError> {
    let d = resolve_field(ctx, delta, "delta", 0.1)?;
    let grid = resolve_field(ctx, grid, "grid", 41)?;
    let delta = Delta::new(d).map_err(|e| AppError::Compute(e.to_string()))?;
    let cells = fig1_surface(delta, grid)?;
    let mut csv = Csv::new("alpha1_sq,beta1_sq,delta_ratio");
    for cell in cells {
        csv.row(&[num(cell.alpha1_sq), num(cell.beta1_sq), num(cell.delta_ratio)]);
    }
    csv.write(ctx.out.as_deref())
}

fn cmd_sweep(
    ctx: &Context,
    lambda_min: Option<f64>,
    lambda_max: Option<f64>,
    lambda_steps: Option<usize>,
    grid_points: Option<usize>,
    max_den: Option<u64>,
) -> Result<(), AppError> {
    let lambda_min = resolve_field(ctx, lambda_min, "lambda_min", 0.1)?;
    let lambda_max = resolve_field(ctx, lambda_max, "lambda_max", 2.0)?;
    let steps = resolve_field(ctx, lambda_steps, "lambda_steps", 38)?;
    let grid_points = resolve_field(ctx, grid_points, "grid_points", DEFAULT_TAU_GRID)?;
    let max_den = ctx.max_den_with(max_den);
    if steps < 1 {
        return Err(AppError::Usage("--lambda-steps must be >= 1".into()));
    }
    let mut csv = Csv::new(
        "lambda,m,n,sign,residual,class,return_time,swap_time,tau,tau_argmin",
    );
    for i in 0..=steps {
        let lambda = lambda_min + (lambda_max - lambda_min) * i as f64 / steps as f64;
        let params = ModelParams::new(
            ctx.params.coupling(),
            lambda,
            ctx.params.field(),
            ctx.params.imbalance(),
        )
        .map_err(|e| AppError::Compute(e.to_string()))?;
        let r = rational_approx(lambda, max_den)?;
        let class = if !r.is_exact() {
            FeasibilityClass::ApproximateOnly
        } else if r.both_odd() {
            FeasibilityClass::ExactSwap
        } else {
            FeasibilityClass::ReturnOnly
        };
        let t_return = return_time(&params, &r, 1)?;
        let mut cells = vec![
            num(lambda),
            r.m.to_string(),
            r.n.to_string(),
            r.sign.to_string(),
            num(r.residual),
            class.as_str().to_string(),
            num(t_return),
        ];
        if class == FeasibilityClass::ExactSwap {
            cells.push(num(swap_time(&params, &r, 1)?));
            cells.extend([String::new(), String::new()]);
        } else {
            cells.push(String::new());
            let window = 4.0 * t_return;
            let (value, argmin) = tau(lambda, params.coupling(), window, grid_points)?;
            cells.push(num(value));
            cells.push(num(argmin));
        }
        csv.row(&cells);
    }
    csv.write(ctx.out.as_deref())
}
