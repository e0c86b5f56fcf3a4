use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;

use super::{
    BoundCommand, CliError, Command, CommonArgs, EvalArgs, GdofArgs, ImmseCommand, SimArgs,
    SimulateCommand, SweepArgs, VerifyArgs,
};
use crate::achievability::{channel_seeds, Experiment, Quantization, SchemeConfig, EXPERIMENT_CSV_HEADER};
use crate::bounds::{phase_rate_raw_nats, BoundKind, BoundReport};
use crate::channel::{sample_phase, transmit, write_trajectory_csv, RngSeed};
use crate::gdof::{bound_prelog, log_grid, prelog_target};
use crate::immse::{
    fisher_fixed_point, immse_entropy_bound, write_integrand_csv, DEFAULT_TOL,
};
use crate::output::{fmt_f64, CsvBuffer};
use crate::params::{ChannelParams, GdofParams, OperatingPoint};
use crate::quadrature::QuadratureConfig;
use crate::stats::Moments;

pub const BOUND_CSV_HEADER: &str = "P,sigma2,L,alpha,bound,units,value,regime,flags";
pub const GDOF_POINTS_HEADER: &str = "alpha,P,L,bound_name,value_nats";
pub const GDOF_SUMMARY_HEADER: &str = "alpha,slope,target,abs_error";
pub const IMMSE_HEADER: &str = "a,b,j_star_iter,j_star_closed,c,integral_quad,integral_analytic,phase_bound_immse,phase_bound_closed,max_abs_error";
pub const STATS_HEADER: &str = "quantity,empirical,theory,std_error,z_score,pass";

pub fn dispatch(
    command: &Command,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    match command {
        Command::Bound(BoundCommand::Eval(a)) => cmd_bound_eval(a, stdout),
        Command::Bound(BoundCommand::Sweep(a)) => cmd_bound_sweep(a, stdout),
        Command::Gdof(a) => cmd_gdof(a, stdout),
        Command::Immse(ImmseCommand::Verify(a)) => cmd_immse_verify(a, stdout, stderr),
        Command::Simulate(SimulateCommand::Stats(a)) => cmd_simulate_stats(a, stdout, stderr),
        Command::Simulate(SimulateCommand::Rate(a)) => cmd_simulate_rate(a, stdout, stderr),
    }
}

fn emit(buf: &CsvBuffer, common: &CommonArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    emit_to(buf, common.out.as_deref(), stdout)
}

fn emit_to(buf: &CsvBuffer, path: Option<&Path>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match path {
        Some(p) => buf.emit(Some(p))?,
        None => stdout.write_all(buf.as_str().as_bytes())?,
    }
    Ok(())
}

fn bound_row(
    power: f64,
    sigma2: f64,
    oversampling: u32,
    alpha: Option<f64>,
    report: &BoundReport,
) -> Vec<String> {
    vec![
        fmt_f64(power),
        fmt_f64(sigma2),
        oversampling.to_string(),
        alpha.map(fmt_f64).unwrap_or_default(),
        report.bound.to_string(),
        report.units.to_string(),
        fmt_f64(report.value),
        report.regime.map(|r| r.to_string()).unwrap_or_default(),
        report.flags_field(),
    ]
}

fn pretty_report(params: &ChannelParams, report: &BoundReport) -> String {
    let mut s = format!(
        "{}: {:.6} {} (P={}, sigma2={}, L={})",
        report.bound, report.value, report.units, params.power, params.sigma2, params.oversampling
    );
    if let Some(r) = report.regime {
        s.push_str(&format!(", regime {r}"));
    }
    if let Some(g) = report.gap_bits {
        s.push_str(&format!(", gap <= {g} bpcu"));
    }
    for (k, v) in &report.diagnostics {
        s.push_str(&format!(", {k}={v:.6}"));
    }
    if !report.flags.is_empty() {
        s.push_str(&format!(" [{}]", report.flags_field()));
    }
    s
}

fn cmd_bound_eval(args: &EvalArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let params = ChannelParams::new(args.power, args.sigma2, args.oversampling)
        .with_units(args.common.units)
        .validate()?;
    let report = args
        .bound
        .evaluate(&params.operating_point(), params.units, args.o1)?;
    let mut buf = CsvBuffer::default();
    if args.common.pretty {
        buf.line(&pretty_report(&params, &report));
    } else {
        buf.line(BOUND_CSV_HEADER);
        buf.row(bound_row(
            params.power,
            params.sigma2,
            params.oversampling,
            None,
            &report,
        ));
    }
    emit(&buf, &args.common, stdout)
}

fn power_grid(explicit: &[f64], start: Option<f64>, stop: Option<f64>, points: usize) -> Result<Vec<f64>, CliError> {
    if !explicit.is_empty() {
        return Ok(explicit.to_vec());
    }
    match (start, stop) {
        (Some(a), Some(b)) => {
            if points == 0 {
                return Err(CliError::Usage("--p-points must be at least 1".into()));
            }
            if !(a > 0.0 && b >= a && b.is_finite()) {
                return Err(CliError::Usage(
                    "log-spaced power grid needs 0 < --p-start <= --p-stop".into(),
                ));
            }
            Ok(log_grid(a, b, points))
        }
        (Some(a), None) if points == 1 => Ok(vec![a]),
        _ => Err(CliError::Usage(
            "give --power or both --p-start and --p-stop".into(),
        )),
    }
}

#[derive(Debug, Clone, Copy)]
enum Axis {
    Oversampling(u32),
    Alpha(f64),
}

fn cmd_bound_sweep(args: &SweepArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let powers = power_grid(&args.power, args.p_start, args.p_stop, args.p_points)?;
    let axis: Vec<Axis> = if !args.alpha.is_empty() {
        args.alpha
            .iter()
            .map(|&a| GdofParams::new(a).map(|g| Axis::Alpha(g.alpha)))
            .collect::<Result<_, _>>()?
    } else if !args.oversampling.is_empty() {
        args.oversampling.iter().map(|&l| Axis::Oversampling(l)).collect()
    } else {
        vec![Axis::Oversampling(1)]
    };
    let mut jobs = Vec::new();
    for &p in &powers {
        for &s in &args.sigma2 {
            for &ax in &axis {
                for &b in &args.bound {
                    jobs.push((p, s, ax, b));
                }
            }
        }
    }
    let units = args.common.units;
    let rows: Vec<Result<Vec<String>, CliError>> = jobs
        .par_iter()
        .map(|&(p, s, ax, kind)| {
            let (l, alpha) = match ax {
                Axis::Oversampling(l) => (l, None),
                Axis::Alpha(a) => (GdofParams { alpha: a }.oversampling(p), Some(a)),
            };
            let params = ChannelParams::new(p, s, l).validate()?;
            let report = kind.evaluate(&params.operating_point(), units, args.o1)?;
            Ok(bound_row(p, s, l, alpha, &report))
        })
        .collect();
    let mut buf = CsvBuffer::with_header(BOUND_CSV_HEADER);
    for r in rows {
        buf.row(r?);
    }
    emit(&buf, &args.common, stdout)
}

fn cmd_gdof(args: &GdofArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    if args.bound == BoundKind::WpnTh1 {
        return Err(CliError::Usage(
            "wpn_th1 is a symbol-rate bound; pick an oversampled bound for gdof".into(),
        ));
    }
    let grid = power_grid(&[], Some(args.p_start), Some(args.p_stop), args.p_points)?;
    let results: Vec<_> = args
        .alpha
        .par_iter()
        .map(|&alpha| {
            let target = prelog_target(args.bound, alpha)?;
            let est = bound_prelog(args.bound, alpha, args.sigma2, &grid)?;
            Ok::<_, CliError>((target, est))
        })
        .collect::<Result<_, _>>()?;
    let mut points = CsvBuffer::with_header(GDOF_POINTS_HEADER);
    let mut summary = CsvBuffer::with_header(GDOF_SUMMARY_HEADER);
    for (target, est) in &results {
        let g = GdofParams { alpha: est.alpha };
        for (&p, &v) in est.grid.iter().zip(&est.values) {
            points.row([
                fmt_f64(est.alpha),
                fmt_f64(p),
                fmt_f64(g.real_oversampling(p)),
                args.bound.to_string(),
                fmt_f64(v),
            ]);
        }
        summary.row([
            fmt_f64(est.alpha),
            fmt_f64(est.slope),
            fmt_f64(*target),
            fmt_f64((est.slope - target).abs()),
        ]);
    }
    match &args.summary_out {
        Some(path) => {
            emit(&points, &args.common, stdout)?;
            emit_to(&summary, Some(path), stdout)
        }
        None => {
            let mut all = points;
            all.line("");
            all.append(&summary);
            emit(&all, &args.common, stdout)
        }
    }
}

fn default_precision_grid() -> Vec<f64> {
    (0..7).map(|i| 10f64.powi(i - 3)).collect()
}

/// One row of the proof-machinery cross-check.
#[derive(Debug, Clone, Copy)]
struct VerifyRow {
    a: f64,
    b: f64,
    j_iter: f64,
    j_closed: f64,
    c: f64,
    integral_quad: f64,
    integral_analytic: f64,
    phase_immse: f64,
    phase_closed: f64,
    max_abs_error: f64,
}

fn verify_point(a: f64, b: f64, perturb: f64) -> Result<VerifyRow, CliError> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(CliError::Usage(format!(
            "immse verify needs a > 0 and b > 0, got a = {a}, b = {b}"
        )));
    }
    let fp = fisher_fixed_point(a, b, DEFAULT_TOL)?;
    let ent = immse_entropy_bound(a, b, &QuadratureConfig::default())?;
    let integral_quad = ent.integral_value + perturb;
    // phase bound moves by half the integral
    let phase_immse = ent.phase_rate_upper_bound + 0.5 * perturb;
    let phase_closed = phase_rate_raw_nats(&OperatingPoint::new(b, 1.0 / a, 1.0));
    let max_abs_error = [
        (fp.j_star_iterated - fp.j_star).abs(),
        (integral_quad - ent.integral_analytic).abs(),
        (phase_immse - phase_closed).abs(),
    ]
    .into_iter()
    .fold(0.0, f64::max);
    Ok(VerifyRow {
        a,
        b,
        j_iter: fp.j_star_iterated,
        j_closed: fp.j_star,
        c: ent.precision,
        integral_quad,
        integral_analytic: ent.integral_analytic,
        phase_immse,
        phase_closed,
        max_abs_error,
    })
}

fn cmd_immse_verify(
    args: &VerifyArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let points: Vec<(f64, f64)> = match (args.power, args.sigma2) {
        (Some(p), Some(s)) => {
            if !args.a.is_empty() || !args.b.is_empty() {
                return Err(CliError::Usage(
                    "give either --a/--b or --power/--sigma2/--oversampling".into(),
                ));
            }
            let params = ChannelParams::new(p, s, args.oversampling).validate()?;
            let op = params.operating_point();
            vec![(op.increment_precision(), op.per_sample_power())]
        }
        _ => {
            let a = if args.a.is_empty() { default_precision_grid() } else { args.a.clone() };
            let b = if args.b.is_empty() { default_precision_grid() } else { args.b.clone() };
            a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).collect()
        }
    };
    let rows: Vec<VerifyRow> = points
        .par_iter()
        .map(|&(a, b)| verify_point(a, b, args.perturb))
        .collect::<Result<_, _>>()?;
    let mut buf = CsvBuffer::with_header(IMMSE_HEADER);
    for r in &rows {
        buf.row([
            fmt_f64(r.a),
            fmt_f64(r.b),
            fmt_f64(r.j_iter),
            fmt_f64(r.j_closed),
            fmt_f64(r.c),
            fmt_f64(r.integral_quad),
            fmt_f64(r.integral_analytic),
            fmt_f64(r.phase_immse),
            fmt_f64(r.phase_closed),
            fmt_f64(r.max_abs_error),
        ]);
    }
    if let Some(path) = &args.dump_integrand {
        let (a, b) = points[0];
        let rhos: Vec<f64> = std::iter::once(0.0)
            .chain(log_grid(1e-4, 1e4, 81))
            .collect();
        let mut w = BufWriter::new(File::create(path)?);
        write_integrand_csv(&mut w, a, b, &rhos)?;
        w.flush()?;
    }
    emit(&buf, &args.common, stdout)?;
    let worst = rows.iter().map(|r| r.max_abs_error).fold(0.0, f64::max);
    if !(worst <= args.tol) {
        let _ = writeln!(stderr, "cross-check failed: max abs error {worst:e} > tol {:e}", args.tol);
        return Err(CliError::Numerical(format!(
            "immse cross-check exceeded tolerance ({worst:e} > {:e})",
            args.tol
        )));
    }
    Ok(())
}

fn sim_setup(args: &SimArgs) -> Result<(ChannelParams, SchemeConfig), CliError> {
    let l = match (args.oversampling, args.alpha) {
        (Some(l), None) => l,
        (None, Some(a)) => GdofParams::new(a)?.oversampling(args.power),
        (None, None) => 1,
        (Some(_), Some(_)) => {
            return Err(CliError::Usage("give --oversampling or --alpha, not both".into()))
        }
    };
    let params = ChannelParams::new(args.power, args.sigma2, l).validate()?;
    let budget = params.per_sample_power();
    let config = SchemeConfig {
        n_blocks: args.blocks,
        shift: args.shift,
        scale: args.scale.unwrap_or((budget - args.shift).max(0.0)),
        quantization: Quantization {
            amplitude_bins: args.bins,
            phase_bins: args.bins,
        },
        seed: RngSeed::new(args.seed, 0),
    };
    config.validate(&params)?;
    Ok((params, config))
}

fn dump_trajectory(path: &Path, params: &ChannelParams, config: &SchemeConfig) -> Result<(), CliError> {
    let inputs = crate::achievability::sample_scheme_input(config, params)?;
    let (phase_seed, noise_seed) = channel_seeds(config);
    let tr = sample_phase(params, config.n_blocks, phase_seed)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let blocks = transmit(params, &inputs, &tr, noise_seed).map_err(|e| CliError::Usage(e.to_string()))?;
    let mut w = BufWriter::new(File::create(path)?);
    write_trajectory_csv(&mut w, &tr, &blocks)?;
    w.flush()?;
    Ok(())
}

struct Check {
    name: &'static str,
    empirical: f64,
    theory: f64,
    std_error: f64,
}

impl Check {
    fn z(&self) -> f64 {
        let d = self.empirical - self.theory;
        if self.std_error > 0.0 {
            d / self.std_error
        } else if d == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

fn variance_check(name: &'static str, m: &Moments, theory: f64) -> Check {
    // Gaussian: SE of the sample variance is σ²·√(2/(n−1))
    let n = m.count() as f64;
    Check {
        name,
        empirical: m.variance(),
        theory,
        std_error: theory * (2.0 / (n - 1.0)).sqrt(),
    }
}

fn cmd_simulate_stats(
    args: &SimArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let (params, config) = sim_setup(args)?;
    let run = crate::achievability::simulate_scheme(&params, &config)?;
    let m = &run.moments;
    let l = params.oversampling_f64();
    let input_mean = config.shift + config.scale;
    let checks = [
        Check {
            name: "noise_power",
            empirical: m.noise_power.mean(),
            theory: 2.0,
            std_error: m.noise_power.std_error(),
        },
        variance_check("noise_re_variance", &m.noise_re, 1.0),
        variance_check("noise_im_variance", &m.noise_im, 1.0),
        Check {
            name: "noise_re_im_covariance",
            empirical: m.noise_cross.mean(),
            theory: 0.0,
            std_error: m.noise_cross.std_error(),
        },
        variance_check("increment_variance", &m.increments, params.increment_variance()),
        Check {
            name: "input_power",
            empirical: m.input_power.mean(),
            theory: input_mean,
            std_error: m.input_power.std_error(),
        },
        Check {
            name: "block_norm_sq_mean",
            empirical: m.block_norm_sq.mean(),
            theory: l * input_mean + 2.0 * l,
            std_error: m.block_norm_sq.std_error(),
        },
    ];
    let mut buf = CsvBuffer::with_header(STATS_HEADER);
    let mut failed = Vec::new();
    for c in &checks {
        let z = c.z();
        let pass = z.abs() <= args.tol;
        if !pass {
            failed.push(c.name);
        }
        buf.row([
            c.name.to_string(),
            fmt_f64(c.empirical),
            fmt_f64(c.theory),
            fmt_f64(c.std_error),
            fmt_f64(z),
            pass.to_string(),
        ]);
    }
    if let Some(path) = &args.dump_trajectory {
        dump_trajectory(path, &params, &config)?;
    }
    emit(&buf, &args.common, stdout)?;
    if !failed.is_empty() {
        let _ = writeln!(stderr, "moment checks failed: {}", failed.join(", "));
        return Err(CliError::Numerical(format!(
            "{} moment check(s) outside {} standard errors",
            failed.len(),
            args.tol
        )));
    }
    Ok(())
}

fn cmd_simulate_rate(
    args: &SimArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let (params, config) = sim_setup(args)?;
    let exp = Experiment::run(&params, &config)?;
    let mut buf = CsvBuffer::with_header(EXPERIMENT_CSV_HEADER);
    buf.line(&exp.csv_row());
    if let Some(path) = &args.dump_trajectory {
        dump_trajectory(path, &params, &config)?;
    }
    emit(&buf, &args.common, stdout)?;
    if !exp.within_outer_bound() {
        let _ = writeln!(
            stderr,
            "estimate {} exceeds outer bound {}",
            exp.rate.total, exp.outer_bound
        );
        return Err(CliError::Numerical(
            "plug-in rate estimate exceeds the outer bound".into(),
        ));
    }
    Ok(())
}
