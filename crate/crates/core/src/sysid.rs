//! Identification of fractional models from sampled Bode data.
//!
//! Each frequency is solved on its own: magnitude and phase give the
//! normalized dynamic stiffness `(τ, ξ)`, from which the order follows. For
//! several measured DOFs the order and coupling parameters are found jointly
//! by Newton iteration with the same descending continuation used by
//! [`crate::reduction`].

use num_complex::Complex64;

use crate::chain::FrequencyGrid;
use crate::error::{Error, Result};
use crate::fractional::{fndof_tf, fsdof_response, ComplexOrder, FractionalNdof, FractionalSdof, PolarResponse};
use crate::numerics::{newton_solve, principal_log, wrap_phase, NewtonConfig};
use crate::reduction::{continuation_sweep, unpack, ReductionResult, BRANCH_CUT_SNAP};

/// One measured sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BodePoint {
    pub omega: f64,
    pub magnitude: f64,
    /// Radians, principal value.
    pub phase: f64,
}

/// Measured magnitude and phase over strictly increasing frequencies.
#[derive(Clone, Debug, PartialEq)]
pub struct BodeDataset {
    points: Vec<BodePoint>,
}

impl BodeDataset {
    /// Validates the samples; phases are wrapped onto `(-π, π]`.
    pub fn new(mut points: Vec<BodePoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::Validation {
                field: "points".into(),
                message: "dataset is empty".into(),
            });
        }
        for (i, p) in points.iter_mut().enumerate() {
            if !(p.omega > 0.0 && p.omega.is_finite()) {
                return Err(Error::Validation {
                    field: "omega".into(),
                    message: format!("row {}: must be positive, got {}", i + 1, p.omega),
                });
            }
            if !(p.magnitude > 0.0 && p.magnitude.is_finite()) {
                return Err(Error::Validation {
                    field: "magnitude".into(),
                    message: format!("row {}: must be positive, got {}", i + 1, p.magnitude),
                });
            }
            if !p.phase.is_finite() {
                return Err(Error::Validation {
                    field: "phase".into(),
                    message: format!("row {}: not finite", i + 1),
                });
            }
            p.phase = wrap_phase(p.phase);
        }
        if let Some(i) = points.windows(2).position(|w| w[1].omega <= w[0].omega) {
            return Err(Error::Validation {
                field: "omega".into(),
                message: format!("row {}: frequencies must increase strictly", i + 2),
            });
        }
        Ok(Self { points })
    }

    /// Samples `h(ω)` over a grid.
    pub fn from_fn<F>(grid: &FrequencyGrid, mut h: F) -> Result<Self>
    where
        F: FnMut(f64) -> Result<Complex64>,
    {
        let points = grid
            .omegas()
            .iter()
            .map(|&omega| {
                let p = PolarResponse::from_complex(h(omega)?);
                Ok(BodePoint {
                    omega,
                    magnitude: p.magnitude,
                    phase: p.phase,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(points)
    }

    pub fn points(&self) -> &[BodePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn grid(&self) -> FrequencyGrid {
        FrequencyGrid::new(self.points.iter().map(|p| p.omega).collect())
            .expect("validated frequencies form a grid")
    }

    pub fn response(&self, i: usize) -> Complex64 {
        let p = self.points[i];
        Complex64::from_polar(p.magnitude, p.phase)
    }
}

/// `τ = cos(-ψ)/(m̄M)`, `ξ = sin(-ψ)/(m̄M)`.
pub fn tau_xi_from_bode(magnitude: f64, phase: f64, m_bar: f64) -> (f64, f64) {
    let (s, c) = (-phase).sin_cos();
    let r = 1.0 / (m_bar * magnitude);
    (c * r, s * r)
}

fn closed_form_order(arg: Complex64, omega: f64) -> Result<ComplexOrder> {
    let mut arg = arg;
    if arg.re < 0.0 && arg.im.abs() <= BRANCH_CUT_SNAP * arg.norm() {
        arg.im = 0.0;
    }
    let l = principal_log(Complex64::new(0.0, omega))?;
    Ok((principal_log(arg)? / l).into())
}

/// Solves `(iω)^α = τ - k̄/m̄ + iξ` for `α = a + ib` by Newton iteration
/// from `guess`, where `stiffness_ratio = k̄/m̄`.
///
/// The answer is checked against `Ln(τ - k̄/m̄ + iξ) / Ln(iω)`; if the
/// iteration settled on another branch it is restarted from the closed form.
pub fn identify_alpha_sdof(tau: f64, xi: f64, omega: f64, stiffness_ratio: f64, guess: ComplexOrder) -> Result<ComplexOrder> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::Domain(format!("frequency must be positive, got {omega}")));
    }
    let target = Complex64::new(tau - stiffness_ratio, xi);
    if target.norm() == 0.0 {
        return Err(Error::DegenerateArgument { omega });
    }
    if !target.re.is_finite() || !target.im.is_finite() {
        return Err(Error::Domain(format!("non-finite (τ, ξ) at ω = {omega}")));
    }
    let closed = closed_form_order(target, omega)?;
    let config = NewtonConfig::default();
    let solve = |x0: ComplexOrder| {
        newton_solve(
            |x| {
                let g = crate::fractional::gamma(omega, ComplexOrder::new(x[0], x[1]));
                let e = (g - target) / target.norm();
                vec![e.re, e.im]
            },
            &[x0.a, x0.b],
            &config,
        )
    };
    let first = solve(guess);
    let on_branch = |x: &[f64]| (Complex64::new(x[0], x[1]) - closed.value()).norm() <= 1e-8 * closed.value().norm().max(1.0);
    let out = if first.converged && on_branch(&first.x) {
        first
    } else {
        solve(closed)
    };
    if !out.converged {
        return Err(Error::NoConvergence {
            omega,
            residual: out.residual,
        });
    }
    Ok(ComplexOrder::new(out.x[0], out.x[1]))
}

/// Identified fractional schedule with reconstruction diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentifiedModel {
    pub schedule: ReductionResult,
    /// True when `k̄` was estimated from the lowest-frequency magnitude.
    pub k_bar_estimated: bool,
    /// Largest reconstruction error over converged points: relative in
    /// magnitude, absolute in phase.
    pub max_reconstruction_error: f64,
}

/// Relative magnitude and absolute phase mismatch between `g` and a sample.
pub fn point_error(g: Complex64, data: &BodePoint) -> f64 {
    let p = PolarResponse::from_complex(g);
    let mag = (p.magnitude - data.magnitude).abs() / data.magnitude;
    let phase = wrap_phase(p.phase - data.phase).abs();
    mag.max(phase)
}

/// Per-frequency F-SDOF order from one dataset. Without `k_bar` the
/// quasi-static estimate `1 / M(ω_min)` is used and flagged.
pub fn identify_fsdof(dataset: &BodeDataset, m_bar: f64, k_bar: Option<f64>) -> Result<IdentifiedModel> {
    positive("m_bar", m_bar)?;
    let (k_bar, estimated) = match k_bar {
        Some(k) => {
            positive("k_bar", k)?;
            (k, false)
        }
        None => (1.0 / dataset.points()[0].magnitude, true),
    };
    let n = dataset.len();
    let mut alphas = vec![ComplexOrder::new(f64::NAN, f64::NAN); n];
    let mut residuals = vec![f64::INFINITY; n];
    let mut converged = vec![false; n];
    let mut max_err: f64 = 0.0;
    let mut guess = ComplexOrder::second();
    for i in (0..n).rev() {
        let p = dataset.points()[i];
        let (tau, xi) = tau_xi_from_bode(p.magnitude, p.phase, m_bar);
        let Ok(alpha) = identify_alpha_sdof(tau, xi, p.omega, k_bar / m_bar, guess) else {
            continue;
        };
        let Ok(model) = FractionalSdof::new(m_bar, k_bar, alpha) else {
            continue;
        };
        let Ok((g, _)) = fsdof_response(p.omega, &model) else {
            continue;
        };
        let err = point_error(g, &p);
        alphas[i] = alpha;
        residuals[i] = (g - dataset.response(i)).norm() / p.magnitude;
        converged[i] = true;
        max_err = max_err.max(err);
        guess = alpha;
    }
    Ok(IdentifiedModel {
        schedule: ReductionResult {
            grid: dataset.grid(),
            masses: vec![m_bar],
            k_bar,
            forced_dof: 1,
            alphas,
            betas: vec![Vec::new(); n],
            residuals,
            converged,
        },
        k_bar_estimated: estimated,
        max_reconstruction_error: max_err,
    })
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Validation {
            field: field.into(),
            message: format!("must be positive and finite, got {v}"),
        })
    }
}

/// Joint identification of an `N`-DOF fractional chain from `N` datasets,
/// one per fractional DOF, all measured with the load on `forced_dof`.
///
/// Per frequency the `2N` real equations `Ln(G_j / H_j) = 0` (log-magnitude
/// and wrapped phase mismatch) are solved for `α` and `β_1 … β_{N-1}`.
pub fn identify_fndof(
    datasets: &[BodeDataset],
    masses: &[f64],
    k_bar: f64,
    forced_dof: usize,
    config: &NewtonConfig,
) -> Result<IdentifiedModel> {
    config.validate()?;
    let n = datasets.len();
    if n < 2 || masses.len() != n {
        return Err(Error::Validation {
            field: "datasets".into(),
            message: format!("need N >= 2 datasets and N masses, got {n} datasets and {} masses", masses.len()),
        });
    }
    for (j, m) in masses.iter().enumerate() {
        positive(&format!("masses[{j}]"), *m)?;
    }
    positive("k_bar", k_bar)?;
    if forced_dof == 0 || forced_dof > n {
        return Err(Error::IndexOutOfRange {
            what: "forced_dof",
            index: forced_dof,
            len: n,
        });
    }
    let grid = datasets[0].grid();
    for (j, d) in datasets.iter().enumerate().skip(1) {
        if d.grid() != grid {
            return Err(Error::GridMismatch(format!("dataset {} does not share the frequency grid of dataset 1", j + 1)));
        }
    }
    let targets: Vec<Vec<Complex64>> = (0..grid.len())
        .map(|i| datasets.iter().map(|d| d.response(i)).collect())
        .collect();
    let model_for = |x: &[f64]| {
        let (alpha, betas) = unpack(x);
        FractionalNdof {
            masses: masses.to_vec(),
            k_total: k_bar,
            betas,
            alpha,
        }
    };
    let residual = |i: usize, x: &[f64]| -> Option<Vec<f64>> {
        let omega = grid.omegas()[i];
        let mut r = Vec::with_capacity(2 * n);
        match fndof_tf(omega, &model_for(x), forced_dof) {
            Ok(g) => {
                for (gj, hj) in g.iter().zip(&targets[i]) {
                    match principal_log(gj / hj) {
                        Ok(e) => {
                            r.push(e.re);
                            r.push(e.im);
                        }
                        Err(_) => r.extend([f64::NAN, f64::NAN]),
                    }
                }
            }
            Err(_) => r.resize(2 * n, f64::NAN),
        }
        Some(r)
    };
    let (alphas, betas, residuals, converged) = continuation_sweep(&grid, n, config, residual);

    let mut max_err: f64 = 0.0;
    for i in (0..grid.len()).filter(|&i| converged[i]) {
        let mut x = vec![alphas[i].a, alphas[i].b];
        for b in &betas[i] {
            x.extend([b.re, b.im]);
        }
        if let Ok(g) = fndof_tf(grid.omegas()[i], &model_for(&x), forced_dof) {
            for (gj, d) in g.iter().zip(datasets) {
                max_err = max_err.max(point_error(*gj, &d.points()[i]));
            }
        }
    }
    Ok(IdentifiedModel {
        schedule: ReductionResult {
            grid,
            masses: masses.to_vec(),
            k_bar,
            forced_dof,
            alphas,
            betas,
            residuals,
            converged,
        },
        k_bar_estimated: false,
        max_reconstruction_error: max_err,
    })
}

/// Second-order oscillator parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegerFit {
    pub m: f64,
    pub c: f64,
    pub k: f64,
}

impl IntegerFit {
    pub fn response(&self, omega: f64) -> Complex64 {
        Complex64::new(self.k - self.m * omega * omega, self.c * omega).inv()
    }
}

/// Interpolated `(ln M, ψ)` at `omega`, linear in `ln ω` with the phase
/// unwrapped across the bracketing pair.
fn interpolate(dataset: &BodeDataset, omega: f64) -> Result<(f64, f64)> {
    let pts = dataset.points();
    let (first, last) = (pts[0].omega, pts[pts.len() - 1].omega);
    if !(omega >= first && omega <= last) {
        return Err(Error::Domain(format!("ω = {omega} outside the dataset range [{first}, {last}]")));
    }
    let j = pts.partition_point(|p| p.omega < omega);
    if pts[j].omega == omega {
        return Ok((pts[j].magnitude.ln(), pts[j].phase));
    }
    let (p0, p1) = (pts[j - 1], pts[j]);
    let t = (omega.ln() - p0.omega.ln()) / (p1.omega.ln() - p0.omega.ln());
    let ln_m = p0.magnitude.ln() + t * (p1.magnitude.ln() - p0.magnitude.ln());
    let dphi = wrap_phase(p1.phase - p0.phase);
    Ok((ln_m, wrap_phase(p0.phase + t * dphi)))
}

/// Relative distance of `1/(M k)` from the static value below which the
/// mass cannot be resolved.
const STATIC_PLATEAU: f64 = 1e-6;

/// Fits `1/(k - mω² + icω)` to the lowest-frequency magnitude (taken as
/// static) and to magnitude and phase at `omega_fit`. Three equations, three
/// unknowns, solved exactly.
pub fn fit_integer_peak(dataset: &BodeDataset, omega_fit: f64) -> Result<IntegerFit> {
    let (ln_m, phase) = interpolate(dataset, omega_fit)?;
    let k = 1.0 / dataset.points()[0].magnitude;
    let inv = Complex64::from_polar((-ln_m).exp(), -phase);
    let w2 = omega_fit * omega_fit;
    let m = (k - inv.re) / w2;
    let c = inv.im / omega_fit;
    if (k - inv.re).abs() <= STATIC_PLATEAU * k {
        return Err(Error::IllConditionedFit(format!(
            "ω = {omega_fit} lies on the static plateau; the mass is unresolved"
        )));
    }
    if !(m > 0.0) || !(c >= 0.0) {
        return Err(Error::IllConditionedFit(format!(
            "non-physical second-order fit at ω = {omega_fit}: m = {m}, c = {c}"
        )));
    }
    Ok(IntegerFit { m, c, k })
}

/// Largest relative magnitude error of `response` against a dataset.
pub fn max_relative_magnitude_error<F>(dataset: &BodeDataset, mut response: F) -> f64
where
    F: FnMut(f64) -> Option<Complex64>,
{
    dataset
        .points()
        .iter()
        .map(|p| match response(p.omega) {
            Some(g) => (g.norm() - p.magnitude).abs() / p.magnitude,
            None => f64::INFINITY,
        })
        .fold(0.0, f64::max)
}
