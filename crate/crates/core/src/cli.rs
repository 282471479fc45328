//! Command-line front end.
//!
//! Exit status: 0 on success, 1 for usage or input parse errors, 2 for
//! numerical failures (unconverged points abort only with `--strict`), 3 for
//! I/O errors.

use std::ffi::OsString;
use std::f64::consts::PI;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use crate::chain::{integer_tf, natural_frequencies, ChainModel, FrequencyGrid, GridSpec};
use crate::error::{Error, Result};
use crate::fractional::{fsdof_response, steady_state, FractionalSdof, PolarResponse};
use crate::io::{
    bode_to_csv, identified_to_csv, parse_model_file, read_bode_file, reduction_to_csv, trajectory_to_csv, ModelFile,
};
use crate::numerics::{wrap_phase, NewtonConfig};
use crate::oracle::{fit_sine, integrate_chain, RK4_STABILITY_LIMIT};
use crate::plot::{emit_svg, Axes, Series};
use crate::reduction::{reduce_to_fndof, sweep_fsdof, sweep_fsdof_parallel, MassPartition, ReductionResult};
use crate::sysid::{identify_fndof, identify_fsdof, BodeDataset, IdentifiedModel};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_NUMERIC: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "fracred", version, about = "Fractional-order reduction and identification of mass-spring-damper chains")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Sweep {
    /// Frequency grid `min:max:count[:log|lin]` in rad/s.
    #[arg(long, default_value = "0.01:100:100:log")]
    pub grid: GridSpec,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Also write SVG plots.
    #[arg(long)]
    pub plot: bool,
    /// Fail with exit status 2 if any grid point is unconverged or singular.
    #[arg(long)]
    pub strict: bool,
}

#[derive(Debug, Args)]
pub struct Solver {
    /// Newton residual tolerance.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Newton iteration limit per grid point.
    #[arg(long, default_value_t = 100)]
    pub max_iter: usize,
}

impl Solver {
    fn config(&self) -> Result<NewtonConfig> {
        let c = NewtonConfig {
            tol: self.tol,
            max_iter: self.max_iter,
            ..NewtonConfig::default()
        };
        c.validate()?;
        Ok(c)
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integer-order Bode data of the active DOFs.
    Bode {
        model: PathBuf,
        /// Comma-separated DOFs, overriding the model file.
        #[arg(long, value_delimiter = ',')]
        active: Option<Vec<usize>>,
        #[command(flatten)]
        sweep: Sweep,
        #[command(flatten)]
        common: Common,
        /// Evaluate grid points in parallel.
        #[arg(long)]
        parallel: bool,
    },
    /// Closed-form reduction to a fractional single-DOF oscillator.
    ReduceSdof {
        model: PathBuf,
        /// The DOF to match; defaults to the first active DOF of the model.
        #[arg(long)]
        active: Option<usize>,
        #[command(flatten)]
        sweep: Sweep,
        #[command(flatten)]
        common: Common,
        /// Evaluate grid points in parallel.
        #[arg(long)]
        parallel: bool,
    },
    /// Newton reduction to a fractional N-DOF chain.
    ReduceNdof {
        model: PathBuf,
        /// Comma-separated active DOFs, overriding the model file.
        #[arg(long, value_delimiter = ',')]
        active: Option<Vec<usize>>,
        /// Mass blocks such as `1-2,3-4`; defaults to blocks starting at each
        /// active DOF.
        #[arg(long)]
        partition: Option<String>,
        #[command(flatten)]
        sweep: Sweep,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        solver: Solver,
    },
    /// Fractional single-DOF order from a Bode CSV.
    IdentifySdof {
        data: PathBuf,
        /// Fractional mass.
        #[arg(long)]
        m_bar: f64,
        /// Estimated from the lowest-frequency magnitude when omitted.
        #[arg(long)]
        k_bar: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Fractional N-DOF chain from one Bode CSV per DOF.
    IdentifyNdof {
        #[arg(required = true, num_args = 2..)]
        data: Vec<PathBuf>,
        /// Comma-separated fractional masses, one per dataset.
        #[arg(long, value_delimiter = ',', required = true)]
        masses: Vec<f64>,
        /// Fractional stiffness.
        #[arg(long)]
        k_bar: f64,
        /// Fractional DOF carrying the load.
        #[arg(long, default_value_t = 1)]
        force_dof: usize,
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        solver: Solver,
    },
    /// Time-domain response to `f0 sin(ωt)` with steady-state fits.
    SteadyState {
        model: PathBuf,
        /// Load frequency in rad/s.
        #[arg(long)]
        omega: f64,
        /// Load amplitude.
        #[arg(long, default_value_t = 1.0)]
        f0: f64,
        /// Number of load periods to integrate.
        #[arg(long, default_value_t = 200)]
        periods: usize,
        /// RK4 steps per load period.
        #[arg(long, default_value_t = 400)]
        steps: usize,
        /// Output directory, created if missing.
        #[arg(long, default_value = ".")]
        out: PathBuf,
        /// Also write an SVG plot of the last periods.
        #[arg(long)]
        plot: bool,
    },
    /// Cross-checks transfer functions and fractional waveforms against
    /// time-domain integration.
    Verify {
        model: PathBuf,
        /// Comma-separated frequencies; defaults to the lowest and highest
        /// undamped natural frequencies and their geometric mean.
        #[arg(long, value_delimiter = ',')]
        omega: Option<Vec<f64>>,
        /// Largest accepted relative deviation.
        #[arg(long, default_value_t = 1e-3)]
        tolerance: f64,
    },
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Io(_) => EXIT_IO,
        Error::Parse { .. }
        | Error::Validation { .. }
        | Error::InvalidGrid(_)
        | Error::LengthMismatch { .. }
        | Error::NonPositiveParameter { .. }
        | Error::IndexOutOfRange { .. }
        | Error::PartitionMismatch(_)
        | Error::GridMismatch(_) => EXIT_USAGE,
        _ => EXIT_NUMERIC,
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(stdout, "{text}") } else { write!(stderr, "{text}") };
            return code;
        }
    };
    match execute(&cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

struct Outputs<'a> {
    dir: &'a Path,
    prefix: &'static str,
    written: Vec<PathBuf>,
}

impl<'a> Outputs<'a> {
    fn new(dir: &'a Path, prefix: &'static str) -> Result<Self> {
        std::fs::create_dir_all(dir)?;
        Ok(Self {
            dir,
            prefix,
            written: Vec::new(),
        })
    }

    fn write(&mut self, suffix: &str, text: &str) -> Result<()> {
        let path = self.dir.join(format!("{}{suffix}", self.prefix));
        std::fs::write(&path, text)?;
        self.written.push(path);
        Ok(())
    }

    fn report(&self, out: &mut dyn Write) -> Result<()> {
        for p in &self.written {
            writeln!(out, "wrote {}", p.display())?;
        }
        Ok(())
    }
}

fn semilog(title: &str, y_label: &str) -> Axes {
    Axes {
        title: title.into(),
        x_label: "ω [rad/s]".into(),
        y_label: y_label.into(),
        x_log: true,
        y_log: false,
    }
}

fn loglog(title: &str, y_label: &str) -> Axes {
    Axes {
        y_log: true,
        ..semilog(title, y_label)
    }
}

fn bode_series(label: &str, omegas: &[f64], h: &[Option<Complex64>]) -> (Series, Series) {
    let nan = (f64::NAN, f64::NAN);
    let mag = omegas
        .iter()
        .zip(h)
        .map(|(&w, v)| v.filter(|v| v.norm() > 0.0).map_or(nan, |v| (w, v.norm())))
        .collect();
    let phase = omegas
        .iter()
        .zip(h)
        .map(|(&w, v)| v.map_or(nan, |v| (w, PolarResponse::from_complex(v).phase)))
        .collect();
    (Series::new(label, mag), Series::new(label, phase))
}

fn alpha_panel(r: &ReductionResult, title: &str) -> Result<String> {
    let w = r.grid.omegas();
    let re = w.iter().zip(&r.alphas).map(|(&w, a)| (w, a.a)).collect();
    let im = w.iter().zip(&r.alphas).map(|(&w, a)| (w, a.b)).collect();
    emit_svg(&[Series::new("Re α", re), Series::new("Im α", im)], &semilog(title, "α"))
}

fn beta_panel(r: &ReductionResult, title: &str) -> Result<String> {
    let w = r.grid.omegas();
    let mut series = Vec::new();
    for j in 0..r.dofs().saturating_sub(1) {
        let re = w.iter().zip(&r.betas).map(|(&w, b)| (w, b[j].re)).collect();
        let im = w.iter().zip(&r.betas).map(|(&w, b)| (w, b[j].im)).collect();
        series.push(Series::new(format!("Re β{}", j + 1), re));
        series.push(Series::new(format!("Im β{}", j + 1), im));
    }
    emit_svg(&series, &semilog(title, "β"))
}

/// Magnitude and phase panels overlaying reference curves and a fractional
/// schedule's reconstruction.
fn comparison_panels(
    out: &mut Outputs,
    r: &ReductionResult,
    reference: &[(String, Vec<Option<Complex64>>)],
    labels: &[String],
) -> Result<()> {
    let w = r.grid.omegas();
    let (mut mags, mut phases) = (Vec::new(), Vec::new());
    for (label, h) in reference {
        let (m, p) = bode_series(label, w, h);
        mags.push(m);
        phases.push(p);
    }
    let fractional: Vec<Vec<Option<Complex64>>> = (0..r.len()).map(|i| r.response_at(i).ok().map(|v| v.into_iter().map(Some).collect()).unwrap_or_else(|| vec![None; r.dofs()])).collect();
    for (j, label) in labels.iter().enumerate() {
        let h: Vec<Option<Complex64>> = fractional.iter().map(|v| v[j]).collect();
        let (m, p) = bode_series(label, w, &h);
        mags.push(m);
        phases.push(p);
    }
    out.write("_magnitude.svg", &emit_svg(&mags, &loglog("Magnitude", "|X/F|"))?)?;
    out.write("_phase.svg", &emit_svg(&phases, &semilog("Phase", "phase [rad]"))?)?;
    Ok(())
}

fn strict_check(strict: bool, r: &ReductionResult, stderr_note: &mut dyn Write) -> Result<Option<i32>> {
    let bad = r.len() - r.converged_count();
    if bad > 0 {
        writeln!(stderr_note, "{bad} of {} grid points unconverged", r.len())?;
        if strict {
            return Ok(Some(EXIT_NUMERIC));
        }
    }
    Ok(None)
}

fn load_model(path: &Path) -> Result<ModelFile> {
    parse_model_file(path)
}

fn parse_partition(text: &str, dofs: usize) -> Result<MassPartition> {
    let bad = || Error::Validation {
        field: "partition".into(),
        message: format!("expected blocks like `1-2,3-4`, got `{text}`"),
    };
    let blocks = text
        .split(',')
        .map(|b| {
            let (a, z) = b.split_once('-').unwrap_or((b, b));
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let z: usize = z.trim().parse().map_err(|_| bad())?;
            Ok((a..=z).collect())
        })
        .collect::<Result<Vec<Vec<usize>>>>()?;
    MassPartition::new(blocks, dofs)
}

fn tf_column(model: &ChainModel, force: usize, dof: usize, grid: &FrequencyGrid, parallel: bool) -> Vec<Option<Complex64>> {
    use rayon::prelude::*;
    let eval = |&w: &f64| integer_tf(model, force, dof, w).ok().filter(|h| h.norm() > 0.0 && h.norm().is_finite());
    if parallel {
        grid.omegas().par_iter().map(eval).collect()
    } else {
        grid.omegas().iter().map(eval).collect()
    }
}

fn execute(cmd: &Command, stdout: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Bode {
            model,
            active,
            sweep,
            common,
            parallel,
        } => {
            let file = load_model(model)?;
            let dofs = active.clone().unwrap_or(file.active_dofs.clone());
            for &d in &dofs {
                file.model.check_dof("active", d)?;
            }
            let grid = sweep.grid.build()?;
            let mut out = Outputs::new(&common.out, "bode")?;
            let (mut mags, mut phases) = (Vec::new(), Vec::new());
            let mut failed = 0;
            let mut tables = Vec::new();
            for &d in &dofs {
                let h = tf_column(&file.model, file.force_dof, d, &grid, *parallel);
                failed += h.iter().filter(|v| v.is_none()).count();
                let points = grid
                    .omegas()
                    .iter()
                    .zip(&h)
                    .filter_map(|(&omega, v)| {
                        v.map(|v| {
                            let p = PolarResponse::from_complex(v);
                            crate::sysid::BodePoint {
                                omega,
                                magnitude: p.magnitude,
                                phase: p.phase,
                            }
                        })
                    })
                    .collect::<Vec<_>>();
                let (m, p) = bode_series(&format!("DOF {d}"), grid.omegas(), &h);
                mags.push(m);
                phases.push(p);
                tables.push((d, points));
            }
            if failed > 0 {
                writeln!(stdout, "{failed} grid points are singular and were omitted")?;
                if common.strict {
                    return Ok(EXIT_NUMERIC);
                }
            }
            for (d, points) in tables {
                if points.is_empty() {
                    continue;
                }
                out.write(&format!("_dof{d}.csv"), &bode_to_csv(&BodeDataset::new(points)?))?;
            }
            if common.plot {
                out.write("_magnitude.svg", &emit_svg(&mags, &loglog("Magnitude", "|X/F|"))?)?;
                out.write("_phase.svg", &emit_svg(&phases, &semilog("Phase", "phase [rad]"))?)?;
            }
            out.report(stdout)?;
            Ok(EXIT_OK)
        }
        Command::ReduceSdof {
            model,
            active,
            sweep,
            common,
            parallel,
        } => {
            let file = load_model(model)?;
            let dof = active.unwrap_or(file.active_dofs[0]);
            let grid = sweep.grid.build()?;
            let r = if *parallel {
                sweep_fsdof_parallel(&file.model, file.force_dof, dof, &grid)?
            } else {
                sweep_fsdof(&file.model, file.force_dof, dof, &grid)?
            };
            if let Some(code) = strict_check(common.strict, &r, stdout)? {
                return Ok(code);
            }
            let mut out = Outputs::new(&common.out, "reduce_sdof")?;
            out.write(".csv", &reduction_to_csv(&r))?;
            if common.plot {
                out.write("_alpha.svg", &alpha_panel(&r, "F-SDOF order")?)?;
                let h = tf_column(&file.model, file.force_dof, dof, &grid, false);
                comparison_panels(&mut out, &r, &[(format!("integer DOF {dof}"), h)], &["fractional".into()])?;
            }
            writeln!(stdout, "{} of {} points converged", r.converged_count(), r.len())?;
            out.report(stdout)?;
            Ok(EXIT_OK)
        }
        Command::ReduceNdof {
            model,
            active,
            partition,
            sweep,
            common,
            solver,
        } => {
            let file = load_model(model)?;
            let active = active.clone().unwrap_or(file.active_dofs.clone());
            let dofs = file.model.dofs();
            let partition = match partition {
                Some(p) => parse_partition(p, dofs)?,
                None => MassPartition::from_active(&active, dofs)?,
            };
            let grid = sweep.grid.build()?;
            let r = reduce_to_fndof(&file.model, file.force_dof, &active, &partition, &grid, &solver.config()?)?;
            if let Some(code) = strict_check(common.strict, &r, stdout)? {
                return Ok(code);
            }
            let mut out = Outputs::new(&common.out, "reduce_ndof")?;
            out.write(".csv", &reduction_to_csv(&r))?;
            if common.plot {
                out.write("_alpha.svg", &alpha_panel(&r, "F-NDOF order")?)?;
                if r.dofs() > 1 {
                    out.write("_beta.svg", &beta_panel(&r, "F-NDOF coupling")?)?;
                }
                let reference: Vec<_> = active
                    .iter()
                    .map(|&d| (format!("integer DOF {d}"), tf_column(&file.model, file.force_dof, d, &grid, false)))
                    .collect();
                let labels: Vec<String> = (1..=r.dofs()).map(|j| format!("fractional DOF {j}")).collect();
                comparison_panels(&mut out, &r, &reference, &labels)?;
            }
            writeln!(stdout, "{} of {} points converged", r.converged_count(), r.len())?;
            out.report(stdout)?;
            Ok(EXIT_OK)
        }
        Command::IdentifySdof {
            data,
            m_bar,
            k_bar,
            common,
        } => {
            let d = read_bode_file(data)?;
            let id = identify_fsdof(&d, *m_bar, *k_bar)?;
            finish_identification(&id, &[d], common, "identify_sdof", stdout)
        }
        Command::IdentifyNdof {
            data,
            masses,
            k_bar,
            force_dof,
            common,
            solver,
        } => {
            let sets = data.iter().map(read_bode_file).collect::<Result<Vec<_>>>()?;
            let id = identify_fndof(&sets, masses, *k_bar, *force_dof, &solver.config()?)?;
            finish_identification(&id, &sets, common, "identify_ndof", stdout)
        }
        Command::SteadyState {
            model,
            omega,
            f0,
            periods,
            steps,
            out,
            plot,
        } => {
            let file = load_model(model)?;
            let traj = integrate_chain(&file.model, file.force_dof, *f0, *omega, *periods, *steps)?;
            let mut outputs = Outputs::new(out, "steady_state")?;
            outputs.write(".csv", &trajectory_to_csv(&traj))?;
            let tail_start = (*periods as f64 - (*periods).min(10) as f64) * 2.0 * PI / omega - 1e-9 / omega;
            let tail = traj.tail(tail_start);
            writeln!(stdout, "dof,amplitude,phase_rad,tf_amplitude,tf_phase_rad")?;
            let mut series = Vec::new();
            for d in 1..=file.model.dofs() {
                let fit = fit_sine(&tail.displacement(d), *omega)?;
                let h = integer_tf(&file.model, file.force_dof, d, *omega)? * *f0;
                writeln!(stdout, "{d},{:.9e},{:.9},{:.9e},{:.9}", fit.amplitude, fit.phase, h.norm(), h.arg())?;
                if *plot && file.active_dofs.contains(&d) {
                    series.push(Series::new(format!("x{d}"), tail.displacement(d)));
                }
            }
            if *plot {
                let axes = Axes {
                    title: format!("Steady state at ω = {omega}"),
                    x_label: "t [s]".into(),
                    y_label: "x".into(),
                    ..Axes::default()
                };
                outputs.write(".svg", &emit_svg(&series, &axes)?)?;
            }
            outputs.report(stdout)?;
            Ok(EXIT_OK)
        }
        Command::Verify { model, omega, tolerance } => {
            let file = load_model(model)?;
            let omegas = match omega {
                Some(w) => w.clone(),
                None => {
                    let nf = natural_frequencies(&file.model);
                    let (lo, hi) = (nf[0], nf[nf.len() - 1]);
                    if nf.len() == 1 { vec![lo] } else { vec![lo, (lo * hi).sqrt(), hi] }
                }
            };
            let worst = verify(&file, &omegas, stdout)?;
            writeln!(stdout, "max deviation {worst:.3e} (tolerance {tolerance:.1e})")?;
            Ok(if worst < *tolerance { EXIT_OK } else { EXIT_NUMERIC })
        }
    }
}

fn finish_identification(
    id: &IdentifiedModel,
    sets: &[BodeDataset],
    common: &Common,
    prefix: &'static str,
    stdout: &mut dyn Write,
) -> Result<i32> {
    let r = &id.schedule;
    if let Some(code) = strict_check(common.strict, r, stdout)? {
        return Ok(code);
    }
    let mut out = Outputs::new(&common.out, prefix)?;
    out.write(".csv", &identified_to_csv(id))?;
    if common.plot {
        out.write("_alpha.svg", &alpha_panel(r, "Identified order")?)?;
        if r.dofs() > 1 {
            out.write("_beta.svg", &beta_panel(r, "Identified coupling")?)?;
        }
        let reference: Vec<_> = sets
            .iter()
            .enumerate()
            .map(|(j, d)| (format!("data {}", j + 1), (0..d.len()).map(|i| Some(d.response(i))).collect()))
            .collect();
        let labels: Vec<String> = (1..=r.dofs()).map(|j| format!("fractional DOF {j}")).collect();
        comparison_panels(&mut out, r, &reference, &labels)?;
    }
    if id.k_bar_estimated {
        writeln!(stdout, "k_bar estimated from the lowest frequency: {}", r.k_bar)?;
    }
    writeln!(
        stdout,
        "{} of {} points converged; max reconstruction error {:.3e}",
        r.converged_count(),
        r.len(),
        id.max_reconstruction_error
    )?;
    out.report(stdout)?;
    Ok(EXIT_OK)
}

/// Oracle cross-checks at each frequency; returns the largest deviation.
fn verify(file: &ModelFile, omegas: &[f64], stdout: &mut dyn Write) -> Result<f64> {
    let model = &file.model;
    let ss = crate::chain::assemble_state_space(model, file.force_dof)?;
    let mut worst: f64 = 0.0;
    writeln!(stdout, "omega,dof,amplitude_rel_err,phase_err,fsdof_waveform_err,fndof_waveform_err")?;
    for &w in omegas {
        let period = 2.0 * PI / w;
        let steps = 400usize.max((period * ss.gershgorin_radius() / RK4_STABILITY_LIMIT).ceil() as usize);
        let traj = integrate_chain(model, file.force_dof, 1.0, w, 200, steps)?;
        let tail = traj.tail(190.0 * period - 1e-9 * period);
        let grid = FrequencyGrid::new(vec![w])?;
        let fndof = if file.active_dofs.len() > 1 {
            let part = MassPartition::from_active(&file.active_dofs, model.dofs())?;
            let r = reduce_to_fndof(model, file.force_dof, &file.active_dofs, &part, &grid, &NewtonConfig::default())?;
            r.converged[0].then(|| r.response_at(0)).transpose()?
        } else {
            None
        };
        for d in 1..=model.dofs() {
            let samples = tail.displacement(d);
            let fit = fit_sine(&samples, w)?;
            let h = integer_tf(model, file.force_dof, d, w)?;
            let amp = (fit.amplitude - h.norm()).abs() / h.norm();
            let phase = wrap_phase(fit.phase - h.arg()).abs();
            let waveform_err = |p: PolarResponse| {
                samples
                    .iter()
                    .map(|&(t, x)| (x - steady_state(t, w, 1.0, p)).abs())
                    .fold(0.0, f64::max)
                    / p.magnitude
            };
            let mut fs = f64::NAN;
            let mut fnd = f64::NAN;
            if let Some(j) = file.active_dofs.iter().position(|&a| a == d) {
                let r = sweep_fsdof(model, file.force_dof, d, &grid)?;
                if r.converged[0] {
                    let l = crate::reduction::lump_parameters(model);
                    let (_, p) = fsdof_response(w, &FractionalSdof::new(l.m_bar, l.k_bar, r.alphas[0])?)?;
                    fs = waveform_err(p);
                } else {
                    fs = f64::INFINITY;
                }
                if file.active_dofs.len() > 1 {
                    fnd = match &fndof {
                        Some(g) => waveform_err(PolarResponse::from_complex(g[j])),
                        None => f64::INFINITY,
                    };
                }
            }
            for v in [amp, phase, fs, fnd] {
                if !v.is_nan() {
                    worst = worst.max(v);
                }
            }
            writeln!(stdout, "{w},{d},{amp:.3e},{phase:.3e},{fs:.3e},{fnd:.3e}")?;
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_syntax() {
        let p = parse_partition("1-2,3-4", 4).unwrap();
        assert_eq!(p.blocks(), &[vec![1, 2], vec![3, 4]]);
        let p = parse_partition("1,2-4", 4).unwrap();
        assert_eq!(p.blocks(), &[vec![1], vec![2, 3, 4]]);
        assert!(parse_partition("1-3", 4).is_err());
        assert!(matches!(parse_partition("a-b", 4), Err(Error::Validation { .. })));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Io(std::io::Error::other("x"))), EXIT_IO);
        assert_eq!(exit_code(&Error::InvalidGrid("x".into())), EXIT_USAGE);
        assert_eq!(exit_code(&Error::SingularSystem { omega: 1.0 }), EXIT_NUMERIC);
    }

    #[test]
    fn usage_errors_exit_one() {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        assert_eq!(run(["fracred", "bogus"], &mut o, &mut e), EXIT_USAGE);
        assert_eq!(run(["fracred", "reduce-sdof", "m.json", "--grid", "1:0:3"], &mut o, &mut e), EXIT_USAGE);
        assert_eq!(run(["fracred", "--help"], &mut o, &mut e), EXIT_OK);
    }
}
