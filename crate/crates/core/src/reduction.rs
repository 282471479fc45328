//! Exact reduction of integer chains to fractional models.
//!
//! For a single retained DOF the order `α(ω)` has a closed form. For `N`
//! retained DOFs the order and the `N - 1` complex coupling parameters are
//! found per frequency by Newton iteration, sweeping downward from the top of
//! the grid and seeding each point with its upper neighbour.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::chain::{integer_tf_all, integer_tf_split, ChainModel, FrequencyGrid, StaticSplit};
use crate::error::{Error, Result};
use crate::fractional::{fndof_tf, ComplexOrder, FractionalNdof};
use crate::numerics::{newton_solve, principal_log, NewtonConfig};

/// Lumped mass and series-equivalent stiffness of a chain.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LumpedParameters {
    pub m_bar: f64,
    pub k_bar: f64,
}

/// `m̄ = Σ m_i`, `k̄ = (Σ 1/k_i)^{-1}`.
pub fn lump_parameters(model: &ChainModel) -> LumpedParameters {
    LumpedParameters {
        m_bar: model.masses().iter().sum(),
        k_bar: 1.0 / model.stiffnesses().iter().map(|k| 1.0 / k).sum::<f64>(),
    }
}

fn i_omega_log(omega: f64) -> Result<Complex64> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::Domain(format!("frequency must be positive, got {omega}")));
    }
    principal_log(Complex64::new(0.0, omega))
}

/// Order of the undamped fractional oscillator matching a damped one with
/// the same mass and stiffness: `α = 1 + Ln(iω + c/m) / Ln(iω)`.
pub fn alpha_isdof(m: f64, c: f64, k: f64, omega: f64) -> Result<ComplexOrder> {
    if !(m > 0.0) || !(c >= 0.0) || !(k > 0.0) {
        return Err(Error::Domain(format!("invalid oscillator m={m}, c={c}, k={k}")));
    }
    let l = i_omega_log(omega)?;
    let num = principal_log(Complex64::new(c / m, omega))?;
    Ok((Complex64::new(1.0, 0.0) + num / l).into())
}

/// Relative width of the band around the negative real axis treated as
/// lying on the branch cut.
pub const BRANCH_CUT_SNAP: f64 = 1e-13;

/// Order of the fractional SDOF `(m̄, k̄)` whose transfer function equals
/// `h` at `ω`: `α = Ln(1/(m̄ h) - k̄/m̄) / Ln(iω)`.
pub fn alpha_imdof_to_fsdof(h: Complex64, lumped: LumpedParameters, omega: f64) -> Result<ComplexOrder> {
    let l = i_omega_log(omega)?;
    if h.norm() == 0.0 || !h.re.is_finite() || !h.im.is_finite() {
        return Err(Error::Antiresonance { omega });
    }
    let arg = h.inv() / lumped.m_bar - lumped.k_bar / lumped.m_bar;
    alpha_from_log_argument(arg, l, omega)
}

/// Same order as [`alpha_imdof_to_fsdof`] for a transfer function given as
/// [`StaticSplit`]; `1/(m̄H) - k̄/m̄` is formed as
/// `-ΔH / (m̄ H H(0)) + (1/H(0) - k̄)/m̄` while `|ΔH| <= H(0)`, which stays
/// accurate as `ω → 0`, and directly from `H` otherwise.
pub fn alpha_from_split(split: StaticSplit, lumped: LumpedParameters, omega: f64) -> Result<ComplexOrder> {
    let l = i_omega_log(omega)?;
    let h = split.total();
    if h.norm() == 0.0 || !h.re.is_finite() || !h.im.is_finite() {
        return Err(Error::Antiresonance { omega });
    }
    let h0 = split.static_part;
    let arg = if split.dynamic_part.norm() <= h0 {
        -split.dynamic_part / (h * h0 * lumped.m_bar) + (1.0 / h0 - lumped.k_bar) / lumped.m_bar
    } else {
        h.inv() / lumped.m_bar - lumped.k_bar / lumped.m_bar
    };
    alpha_from_log_argument(arg, l, omega)
}

fn alpha_from_log_argument(mut arg: Complex64, ln_i_omega: Complex64, omega: f64) -> Result<ComplexOrder> {
    if arg.norm() == 0.0 || !arg.re.is_finite() || !arg.im.is_finite() {
        return Err(Error::DegenerateArgument { omega });
    }
    // Undamped data lands on the negative real axis; rounding noise in the
    // imaginary part must not flip the branch away from Arg = +π.
    if arg.re < 0.0 && arg.im.abs() <= BRANCH_CUT_SNAP * arg.norm() {
        arg.im = 0.0;
    }
    Ok((principal_log(arg)? / ln_i_omega).into())
}

/// Contiguous grouping of chain masses into fractional DOFs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MassPartition {
    /// 1-based DOF lists, one per block.
    blocks: Vec<Vec<usize>>,
}

impl MassPartition {
    /// Validates that the blocks are contiguous, ordered and cover `1..=dofs`.
    pub fn new(blocks: Vec<Vec<usize>>, dofs: usize) -> Result<Self> {
        let flat: Vec<usize> = blocks.iter().flatten().copied().collect();
        if blocks.iter().any(Vec::is_empty) {
            return Err(Error::PartitionMismatch("empty block".into()));
        }
        if flat != (1..=dofs).collect::<Vec<_>>() {
            return Err(Error::PartitionMismatch(format!(
                "blocks {blocks:?} do not split 1..={dofs} into contiguous runs"
            )));
        }
        Ok(Self { blocks })
    }

    /// Block sizes, e.g. `[2, 2]` for `{1,2 | 3,4}`.
    pub fn from_sizes(sizes: &[usize], dofs: usize) -> Result<Self> {
        let mut start = 1;
        let blocks = sizes
            .iter()
            .map(|&n| {
                let b: Vec<usize> = (start..start + n).collect();
                start += n;
                b
            })
            .collect();
        Self::new(blocks, dofs)
    }

    /// Default grouping: block `j` runs from active DOF `j` up to the DOF
    /// before active DOF `j + 1`; the first block also absorbs any DOFs
    /// preceding the first active one.
    pub fn from_active(active: &[usize], dofs: usize) -> Result<Self> {
        if active.is_empty() {
            return Err(Error::PartitionMismatch("no active DOFs".into()));
        }
        let mut starts: Vec<usize> = active.to_vec();
        starts[0] = 1;
        let blocks = starts
            .iter()
            .enumerate()
            .map(|(j, &s)| {
                let end = starts.get(j + 1).map_or(dofs, |n| n.saturating_sub(1));
                (s..=end).collect()
            })
            .collect();
        Self::new(blocks, dofs)
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn block_masses(&self, model: &ChainModel) -> Vec<f64> {
        self.blocks
            .iter()
            .map(|b| b.iter().map(|&i| model.masses()[i - 1]).sum())
            .collect()
    }

    /// 1-based index of the block containing `dof`.
    pub fn block_of(&self, dof: usize) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(&dof)).map(|j| j + 1)
    }
}

/// Per-frequency fractional schedule produced by a reduction or an
/// identification.
#[derive(Clone, Debug, PartialEq)]
pub struct ReductionResult {
    pub grid: FrequencyGrid,
    /// Fractional masses, one per retained DOF.
    pub masses: Vec<f64>,
    pub k_bar: f64,
    /// 1-based fractional DOF carrying the load.
    pub forced_dof: usize,
    pub alphas: Vec<ComplexOrder>,
    /// Coupling parameters per frequency; empty inner vectors for SDOF
    /// targets.
    pub betas: Vec<Vec<Complex64>>,
    /// Infinity norm of the relative matching residual.
    pub residuals: Vec<f64>,
    pub converged: Vec<bool>,
}

impl ReductionResult {
    pub fn dofs(&self) -> usize {
        self.masses.len()
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    pub fn converged_count(&self) -> usize {
        self.converged.iter().filter(|c| **c).count()
    }

    pub fn all_converged(&self) -> bool {
        self.converged.iter().all(|c| *c)
    }

    /// Fractional model valid at grid point `i`.
    pub fn model_at(&self, i: usize) -> Result<FractionalNdof> {
        FractionalNdof::new(self.masses.clone(), self.k_bar, self.betas[i].clone(), self.alphas[i])
    }

    /// Fractional transfer functions of every retained DOF at grid point `i`.
    pub fn response_at(&self, i: usize) -> Result<Vec<Complex64>> {
        if !self.alphas[i].is_finite() {
            return Err(Error::NoConvergence {
                omega: self.grid.omegas()[i],
                residual: self.residuals[i],
            });
        }
        fndof_tf(self.grid.omegas()[i], &self.model_at(i)?, self.forced_dof)
    }

    /// Largest change of `α` between neighbouring grid points.
    pub fn max_alpha_jump(&self) -> f64 {
        self.alphas
            .windows(2)
            .map(|w| (w[1].value() - w[0].value()).norm())
            .fold(0.0, |m, d| if d.is_nan() { m } else { m.max(d) })
    }
}

/// Tolerance used to flag closed-form sweep points as matched.
pub const SWEEP_TOL: f64 = 1e-12;

fn sweep_point(model: &ChainModel, force_dof: usize, active_dof: usize, lumped: LumpedParameters, omega: f64) -> (ComplexOrder, f64, bool) {
    let attempt = || -> Result<(ComplexOrder, f64)> {
        let split = integer_tf_split(model, force_dof, active_dof, omega)?;
        let h = split.total();
        let alpha = alpha_from_split(split, lumped, omega)?;
        let sdof = FractionalNdof::new(vec![lumped.m_bar], lumped.k_bar, Vec::new(), alpha)?;
        let g = fndof_tf(omega, &sdof, 1)?[0];
        Ok((alpha, (g - h).norm() / h.norm()))
    };
    match attempt() {
        Ok((alpha, r)) => (alpha, r, r <= SWEEP_TOL),
        Err(_) => (ComplexOrder::new(f64::NAN, f64::NAN), f64::INFINITY, false),
    }
}

fn sdof_result(model: &ChainModel, grid: &FrequencyGrid, lumped: LumpedParameters, points: Vec<(ComplexOrder, f64, bool)>) -> ReductionResult {
    let _ = model;
    let n = grid.len();
    let mut alphas = Vec::with_capacity(n);
    let mut residuals = Vec::with_capacity(n);
    let mut converged = Vec::with_capacity(n);
    for (a, r, c) in points {
        alphas.push(a);
        residuals.push(r);
        converged.push(c);
    }
    ReductionResult {
        grid: grid.clone(),
        masses: vec![lumped.m_bar],
        k_bar: lumped.k_bar,
        forced_dof: 1,
        alphas,
        betas: vec![Vec::new(); n],
        residuals,
        converged,
    }
}

fn check_sweep_dofs(model: &ChainModel, force_dof: usize, active_dof: usize) -> Result<()> {
    model.check_dof("force_dof", force_dof)?;
    model.check_dof("active_dof", active_dof)?;
    Ok(())
}

/// Closed-form F-SDOF order over a grid. Points where the transfer function
/// vanishes or the chain is singular are flagged unconverged with a NaN
/// order.
pub fn sweep_fsdof(model: &ChainModel, force_dof: usize, active_dof: usize, grid: &FrequencyGrid) -> Result<ReductionResult> {
    check_sweep_dofs(model, force_dof, active_dof)?;
    let lumped = lump_parameters(model);
    let points = grid
        .omegas()
        .iter()
        .map(|&w| sweep_point(model, force_dof, active_dof, lumped, w))
        .collect();
    Ok(sdof_result(model, grid, lumped, points))
}

/// [`sweep_fsdof`] with grid points evaluated in parallel.
pub fn sweep_fsdof_parallel(model: &ChainModel, force_dof: usize, active_dof: usize, grid: &FrequencyGrid) -> Result<ReductionResult> {
    check_sweep_dofs(model, force_dof, active_dof)?;
    let lumped = lump_parameters(model);
    let points = grid
        .omegas()
        .par_iter()
        .map(|&w| sweep_point(model, force_dof, active_dof, lumped, w))
        .collect();
    Ok(sdof_result(model, grid, lumped, points))
}

/// Packs `(α, β_1, …)` into the real Newton unknown vector.
pub(crate) fn pack(alpha: ComplexOrder, betas: &[Complex64]) -> Vec<f64> {
    let mut x = vec![alpha.a, alpha.b];
    for b in betas {
        x.push(b.re);
        x.push(b.im);
    }
    x
}

pub(crate) fn unpack(x: &[f64]) -> (ComplexOrder, Vec<Complex64>) {
    let alpha = ComplexOrder::new(x[0], x[1]);
    let betas = x[2..].chunks_exact(2).map(|p| Complex64::new(p[0], p[1])).collect();
    (alpha, betas)
}

/// Seeds tried at the top of a sweep, and again whenever continuation from
/// the neighbouring point fails.
pub(crate) fn fallback_seeds(n: usize) -> Vec<Vec<f64>> {
    let uniform = 1.0 / n as f64;
    let mut seeds = Vec::new();
    for alpha in [(2.0, 0.0), (1.8, 0.1), (1.5, 0.5)] {
        for beta in [uniform, 1.0, 2.0, 3.0] {
            let betas = vec![Complex64::new(beta, 0.0); n - 1];
            seeds.push(pack(ComplexOrder::new(alpha.0, alpha.1), &betas));
            if n == 1 {
                break;
            }
        }
    }
    seeds
}

/// Runs the descending continuation sweep shared by reduction and
/// identification. `residual(i, x)` evaluates the matching equations at grid
/// point `i`; `None` marks a point that cannot be solved at all.
pub(crate) fn continuation_sweep<R>(
    grid: &FrequencyGrid,
    n: usize,
    config: &NewtonConfig,
    mut residual: R,
) -> (Vec<ComplexOrder>, Vec<Vec<Complex64>>, Vec<f64>, Vec<bool>)
where
    R: FnMut(usize, &[f64]) -> Option<Vec<f64>>,
{
    let len = grid.len();
    let dim = 2 * n;
    let mut alphas = vec![ComplexOrder::new(f64::NAN, f64::NAN); len];
    let mut betas = vec![vec![Complex64::new(f64::NAN, f64::NAN); n - 1]; len];
    let mut residuals = vec![f64::INFINITY; len];
    let mut converged = vec![false; len];
    let mut seed: Option<Vec<f64>> = None;

    for i in (0..len).rev() {
        if residual(i, &fallback_seeds(n)[0]).is_none() {
            continue;
        }
        let mut f = |x: &[f64]| residual(i, x).unwrap_or_else(|| vec![f64::NAN; dim]);
        let mut candidates: Vec<Vec<f64>> = seed.iter().cloned().collect();
        candidates.extend(fallback_seeds(n));
        let mut best: Option<crate::numerics::NewtonOutcome> = None;
        for x0 in candidates {
            let out = newton_solve(&mut f, &x0, config);
            let done = out.converged;
            if best.as_ref().is_none_or(|b| out.residual < b.residual) {
                best = Some(out);
            }
            if done {
                break;
            }
        }
        if let Some(out) = best {
            let (a, b) = unpack(&out.x);
            alphas[i] = a;
            betas[i] = b;
            residuals[i] = out.residual;
            converged[i] = out.converged;
            if out.converged {
                seed = Some(out.x);
            }
        }
    }
    (alphas, betas, residuals, converged)
}

fn check_active(model: &ChainModel, active: &[usize]) -> Result<()> {
    if active.is_empty() || active.len() > model.dofs() {
        return Err(Error::Validation {
            field: "active_dofs".into(),
            message: format!("need between 1 and {} active DOFs", model.dofs()),
        });
    }
    for &a in active {
        model.check_dof("active_dof", a)?;
    }
    if active.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Validation {
            field: "active_dofs".into(),
            message: "must be strictly increasing".into(),
        });
    }
    Ok(())
}

/// Reduces a chain to an `N`-DOF fractional chain matching the transfer
/// functions of the `N` active DOFs at every grid frequency.
///
/// Unknowns per frequency are `α` and `β_1 … β_{N-1}`; the matching
/// equations are `(G_j - H_j) / H_j = 0`. Points that fail to converge are
/// flagged in the result and the sweep continues.
pub fn reduce_to_fndof(
    model: &ChainModel,
    force_dof: usize,
    active: &[usize],
    partition: &MassPartition,
    grid: &FrequencyGrid,
    config: &NewtonConfig,
) -> Result<ReductionResult> {
    config.validate()?;
    model.check_dof("force_dof", force_dof)?;
    check_active(model, active)?;
    let n = active.len();
    if partition.len() != n {
        return Err(Error::PartitionMismatch(format!(
            "{} blocks for {} active DOFs",
            partition.len(),
            n
        )));
    }
    MassPartition::new(partition.blocks().to_vec(), model.dofs())?;
    let forced_dof = partition
        .block_of(force_dof)
        .ok_or_else(|| Error::PartitionMismatch(format!("force DOF {force_dof} not in any block")))?;
    let masses = partition.block_masses(model);
    let k_bar = lump_parameters(model).k_bar;

    let targets: Vec<Option<Vec<Complex64>>> = grid
        .omegas()
        .iter()
        .map(|&w| {
            let h = integer_tf_all(model, force_dof, w).ok()?;
            let t: Vec<Complex64> = active.iter().map(|&a| h[a - 1]).collect();
            t.iter().all(|v| v.norm() > 0.0).then_some(t)
        })
        .collect();

    let residual = |i: usize, x: &[f64]| -> Option<Vec<f64>> {
        let target = targets[i].as_ref()?;
        let (alpha, betas) = unpack(x);
        let omega = grid.omegas()[i];
        let frac = FractionalNdof {
            masses: masses.clone(),
            k_total: k_bar,
            betas,
            alpha,
        };
        let mut r = Vec::with_capacity(2 * n);
        match fndof_tf(omega, &frac, forced_dof) {
            Ok(g) => {
                for (gj, hj) in g.iter().zip(target) {
                    let e = (gj - hj) / hj;
                    r.push(e.re);
                    r.push(e.im);
                }
            }
            Err(_) => r.resize(2 * n, f64::NAN),
        }
        Some(r)
    };
    let (alphas, betas, residuals, converged) = continuation_sweep(grid, n, config, residual);

    Ok(ReductionResult {
        grid: grid.clone(),
        masses,
        k_bar,
        forced_dof,
        alphas,
        betas,
        residuals,
        converged,
    })
}
