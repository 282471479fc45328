//! Time-domain reference solutions for integer chains.
//!
//! Fixed-step RK4 on the first-order form from zero initial conditions under
//! the load `f0 sin(ωt)`, and a least-squares sine fit that extracts the
//! steady-state amplitude and phase from a trajectory tail.

use std::f64::consts::PI;

use crate::chain::{assemble_state_space, ChainModel, StateSpace};
use crate::error::{Error, Result};
use crate::numerics::{lu_solve_real, wrap_phase};

/// Uniformly sampled state history, state ordered `[x1, v1, x2, v2, ...]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn dofs(&self) -> usize {
        self.states.first().map_or(0, |s| s.len() / 2)
    }

    /// `(t, x_dof)` samples of one displacement (1-based DOF).
    pub fn displacement(&self, dof: usize) -> Vec<(f64, f64)> {
        self.times
            .iter()
            .zip(&self.states)
            .map(|(&t, s)| (t, s[2 * (dof - 1)]))
            .collect()
    }

    /// Samples at or after `t0`.
    pub fn tail(&self, t0: f64) -> Trajectory {
        let start = self.times.partition_point(|&t| t < t0);
        Trajectory {
            times: self.times[start..].to_vec(),
            states: self.states[start..].to_vec(),
        }
    }
}

/// Largest `dt · ρ` accepted by [`integrate_chain`], where `ρ` is the
/// Gershgorin bound on the spectral radius of the state matrix.
pub const RK4_STABILITY_LIMIT: f64 = 1.0;

fn rk4_step(ss: &StateSpace, x: &[f64], t: f64, dt: f64, load: impl Fn(f64) -> f64) -> Vec<f64> {
    let axpy = |a: &[f64], k: &[f64], h: f64| a.iter().zip(k).map(|(x, k)| x + h * k).collect::<Vec<_>>();
    let k1 = ss.derivative(x, load(t));
    let k2 = ss.derivative(&axpy(x, &k1, dt / 2.0), load(t + dt / 2.0));
    let k3 = ss.derivative(&axpy(x, &k2, dt / 2.0), load(t + dt / 2.0));
    let k4 = ss.derivative(&axpy(x, &k3, dt), load(t + dt));
    x.iter()
        .enumerate()
        .map(|(i, xi)| xi + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
        .collect()
}

/// Integrates the chain under `f0 sin(ωt)` on `force_dof` from rest for
/// `periods` forcing periods with `steps_per_period` RK4 steps each.
pub fn integrate_chain(
    model: &ChainModel,
    force_dof: usize,
    f0: f64,
    omega: f64,
    periods: usize,
    steps_per_period: usize,
) -> Result<Trajectory> {
    let x0 = vec![0.0; 2 * model.dofs()];
    integrate_from(model, force_dof, f0, omega, &x0, periods, steps_per_period)
}

/// [`integrate_chain`] from an arbitrary initial state.
pub fn integrate_from(
    model: &ChainModel,
    force_dof: usize,
    f0: f64,
    omega: f64,
    x0: &[f64],
    periods: usize,
    steps_per_period: usize,
) -> Result<Trajectory> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::Domain(format!("frequency must be positive, got {omega}")));
    }
    if periods == 0 || steps_per_period == 0 {
        return Err(Error::Domain("periods and steps_per_period must be positive".into()));
    }
    let ss = assemble_state_space(model, force_dof)?;
    if x0.len() != ss.n {
        return Err(Error::Domain(format!("initial state has {} entries, expected {}", x0.len(), ss.n)));
    }
    let dt = 2.0 * PI / omega / steps_per_period as f64;
    let limit = RK4_STABILITY_LIMIT / ss.gershgorin_radius();
    if dt > limit {
        return Err(Error::StepTooLarge { dt, limit });
    }
    let total = periods * steps_per_period;
    let mut times = Vec::with_capacity(total + 1);
    let mut states = Vec::with_capacity(total + 1);
    let mut x = x0.to_vec();
    times.push(0.0);
    states.push(x.clone());
    let load = |t: f64| f0 * (omega * t).sin();
    for step in 0..total {
        let t = step as f64 * dt;
        x = rk4_step(&ss, &x, t, dt, load);
        times.push((step + 1) as f64 * dt);
        states.push(x.clone());
    }
    Ok(Trajectory { times, states })
}

/// Result of [`fit_sine`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SineFit {
    pub amplitude: f64,
    /// Phase `θ` in `x ≈ amplitude · sin(ωt + θ) + offset`, in `(-π, π]`.
    pub phase: f64,
    pub offset: f64,
    /// Root-mean-square fit residual.
    pub rms_residual: f64,
}

/// Least-squares fit of `A sin ωt + B cos ωt + C` to the samples.
pub fn fit_sine(samples: &[(f64, f64)], omega: f64) -> Result<SineFit> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::Domain(format!("frequency must be positive, got {omega}")));
    }
    let span = match (samples.first(), samples.last()) {
        (Some(a), Some(b)) => b.0 - a.0,
        _ => 0.0,
    };
    if samples.len() < 3 || span < 2.0 * PI / omega {
        return Err(Error::RankDeficient(format!(
            "samples span {span} s, less than one period {} s",
            2.0 * PI / omega
        )));
    }
    let mut ata = [0.0; 9];
    let mut atb = [0.0; 3];
    for &(t, x) in samples {
        let row = [(omega * t).sin(), (omega * t).cos(), 1.0];
        for i in 0..3 {
            for j in 0..3 {
                ata[3 * i + j] += row[i] * row[j];
            }
            atb[i] += row[i] * x;
        }
    }
    let coef = lu_solve_real(3, &ata, &atb).map_err(|e| Error::RankDeficient(e.to_string()))?;
    let (a, b, c) = (coef[0], coef[1], coef[2]);
    let ss: f64 = samples
        .iter()
        .map(|&(t, x)| {
            let e = x - (a * (omega * t).sin() + b * (omega * t).cos() + c);
            e * e
        })
        .sum();
    Ok(SineFit {
        amplitude: a.hypot(b),
        phase: wrap_phase(b.atan2(a)),
        offset: c,
        rms_residual: (ss / samples.len() as f64).sqrt(),
    })
}

/// Steady state `X sin(ωt - φ)` of `m ẍ + c ẋ + k x = f0 sin ωt`:
/// `X = f0 / √((k - mω²)² + (cω)²)`, `φ = atan2(cω, k - mω²)`.
pub fn analytic_sdof_steady(m: f64, c: f64, k: f64, f0: f64, omega: f64) -> Result<(f64, f64)> {
    if !(m > 0.0) || !(c >= 0.0) || !(k > 0.0) || !(omega > 0.0) {
        return Err(Error::Domain(format!("invalid oscillator m={m}, c={c}, k={k}, ω={omega}")));
    }
    let re = k - m * omega * omega;
    let im = c * omega;
    if re == 0.0 && im == 0.0 {
        return Err(Error::UnboundedResponse { omega });
    }
    Ok((f0.abs() / re.hypot(im), im.atan2(re)))
}

/// Standard oracle run: 200 periods at 400 steps each, sine fit on the
/// displacement of `dof` over the last 10 periods.
pub fn steady_state_fit(model: &ChainModel, force_dof: usize, dof: usize, f0: f64, omega: f64) -> Result<SineFit> {
    model.check_dof("dof", dof)?;
    let traj = integrate_chain(model, force_dof, f0, omega, 200, 400)?;
    let t0 = 190.0 * 2.0 * PI / omega;
    fit_sine(&traj.tail(t0 - 1e-9 / omega).displacement(dof), omega)
}
