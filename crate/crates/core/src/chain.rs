//! Integer-order grounded mass-spring-damper chains.
//!
//! Mass `i` is tied to mass `i + 1` by spring/damper pair `i`, and the last
//! mass is tied to ground by the last pair. All indices in the public API are
//! 1-based.

use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{lu_solve_checked, ComplexMatrix};

/// Validated chain parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainModel {
    masses: Vec<f64>,
    stiffnesses: Vec<f64>,
    dampers: Vec<f64>,
}

/// Builds a chain, rejecting mismatched lengths and non-physical values.
pub fn build_chain(masses: &[f64], stiffnesses: &[f64], dampers: &[f64]) -> Result<ChainModel> {
    ChainModel::new(masses.to_vec(), stiffnesses.to_vec(), dampers.to_vec())
}

impl ChainModel {
    pub fn new(masses: Vec<f64>, stiffnesses: Vec<f64>, dampers: Vec<f64>) -> Result<Self> {
        if masses.len() != stiffnesses.len() || masses.len() != dampers.len() || masses.is_empty()
        {
            return Err(Error::LengthMismatch {
                masses: masses.len(),
                stiffnesses: stiffnesses.len(),
                dampers: dampers.len(),
            });
        }
        let check = |name, values: &[f64], allow_zero: bool| {
            for (index, &value) in values.iter().enumerate() {
                let ok = value.is_finite() && (value > 0.0 || (allow_zero && value == 0.0));
                if !ok {
                    return Err(Error::NonPositiveParameter {
                        name,
                        index: index + 1,
                        value,
                    });
                }
            }
            Ok(())
        };
        check("masses", &masses, false)?;
        check("stiffnesses", &stiffnesses, false)?;
        check("dampers", &dampers, true)?;
        Ok(Self {
            masses,
            stiffnesses,
            dampers,
        })
    }

    /// Number of degrees of freedom.
    pub fn dofs(&self) -> usize {
        self.masses.len()
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn stiffnesses(&self) -> &[f64] {
        &self.stiffnesses
    }

    pub fn dampers(&self) -> &[f64] {
        &self.dampers
    }

    /// Same chain with every damper removed.
    pub fn undamped(&self) -> Self {
        Self {
            dampers: vec![0.0; self.dofs()],
            ..self.clone()
        }
    }

    pub(crate) fn check_dof(&self, what: &'static str, dof: usize) -> Result<usize> {
        if dof == 0 || dof > self.dofs() {
            return Err(Error::IndexOutOfRange {
                what,
                index: dof,
                len: self.dofs(),
            });
        }
        Ok(dof - 1)
    }

    /// Tridiagonal assembly of the link coefficients `links` into the
    /// symmetric chain matrix, returned as (diagonal, super-diagonal).
    fn tridiagonal(links: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let n = links.len();
        let diag = (0..n)
            .map(|i| links[i] + if i > 0 { links[i - 1] } else { 0.0 })
            .collect();
        let off = links[..n - 1].iter().map(|k| -k).collect();
        (diag, off)
    }

    /// Dense stiffness matrix, row-major.
    pub fn stiffness_matrix(&self) -> Vec<f64> {
        Self::dense(&self.stiffnesses)
    }

    /// Dense damping matrix, row-major.
    pub fn damping_matrix(&self) -> Vec<f64> {
        Self::dense(&self.dampers)
    }

    fn dense(links: &[f64]) -> Vec<f64> {
        let n = links.len();
        let (diag, off) = Self::tridiagonal(links);
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            m[i * n + i] = diag[i];
            if i + 1 < n {
                m[i * n + i + 1] = off[i];
                m[(i + 1) * n + i] = off[i];
            }
        }
        m
    }
}

/// First-order form `ẋ = A x + B f`, `y = C x + D f` with the state ordered
/// `[x1, v1, x2, v2, ...]`.
#[derive(Clone, Debug, PartialEq)]
pub struct StateSpace {
    pub n: usize,
    /// Row-major `n x n`.
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub d: f64,
}

/// Assembles the state-space form with the force on `force_dof` and the
/// output selecting that same displacement (see [`StateSpace::with_output`]).
pub fn assemble_state_space(model: &ChainModel, force_dof: usize) -> Result<StateSpace> {
    let f = model.check_dof("force_dof", force_dof)?;
    let dofs = model.dofs();
    let n = 2 * dofs;
    let k = model.stiffness_matrix();
    let c = model.damping_matrix();
    let mut a = vec![0.0; n * n];
    for i in 0..dofs {
        let m = model.masses()[i];
        a[(2 * i) * n + 2 * i + 1] = 1.0;
        let row = (2 * i + 1) * n;
        for j in 0..dofs {
            a[row + 2 * j] = -k[i * dofs + j] / m;
            a[row + 2 * j + 1] = -c[i * dofs + j] / m;
        }
    }
    let mut b = vec![0.0; n];
    b[2 * f + 1] = 1.0 / model.masses()[f];
    let mut cvec = vec![0.0; n];
    cvec[2 * f] = 1.0;
    Ok(StateSpace {
        n,
        a,
        b,
        c: cvec,
        d: 0.0,
    })
}

impl StateSpace {
    /// Redirects the output row to the displacement of `dof` (1-based).
    pub fn with_output(mut self, dof: usize) -> Result<Self> {
        let dofs = self.n / 2;
        if dof == 0 || dof > dofs {
            return Err(Error::IndexOutOfRange {
                what: "output_dof",
                index: dof,
                len: dofs,
            });
        }
        self.c = vec![0.0; self.n];
        self.c[2 * (dof - 1)] = 1.0;
        Ok(self)
    }

    /// State response `(sI - A)^{-1} B` at a complex frequency.
    pub fn states(&self, s: Complex64) -> Result<Vec<Complex64>> {
        let n = self.n;
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = Complex64::new(-self.a[i * n + j], 0.0);
            }
            m[(i, i)] += s;
        }
        let rhs: Vec<Complex64> = self.b.iter().map(|&v| Complex64::new(v, 0.0)).collect();
        lu_solve_checked(&m, &rhs, SINGULAR_RTOL).map_err(|_| Error::SingularSystem { omega: s.im })
    }

    /// `H(s) = C (sI - A)^{-1} B + D`.
    pub fn transfer(&self, s: Complex64) -> Result<Complex64> {
        let x = self.states(s)?;
        let y: Complex64 = self.c.iter().zip(&x).map(|(ci, xi)| xi * *ci).sum();
        Ok(y + self.d)
    }

    /// Gershgorin bound on the spectral radius of `A`.
    pub fn gershgorin_radius(&self) -> f64 {
        self.a
            .chunks_exact(self.n)
            .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `A x + B u`.
    pub fn derivative(&self, x: &[f64], u: f64) -> Vec<f64> {
        self.a
            .chunks_exact(self.n)
            .zip(&self.b)
            .map(|(row, bi)| row.iter().zip(x).map(|(a, xi)| a * xi).sum::<f64>() + bi * u)
            .collect()
    }
}

/// Relative pivot threshold below which `(iωI - A)` counts as singular.
const SINGULAR_RTOL: f64 = 64.0 * f64::EPSILON;

fn check_omega(omega: f64) -> Result<()> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::Domain(format!("frequency must be positive and finite, got {omega}")));
    }
    Ok(())
}

/// Displacement transfer functions `X_j / F` at `s = iω` for every DOF.
pub fn integer_tf_all(model: &ChainModel, force_dof: usize, omega: f64) -> Result<Vec<Complex64>> {
    check_omega(omega)?;
    let ss = assemble_state_space(model, force_dof)?;
    let x = ss
        .states(Complex64::new(0.0, omega))
        .map_err(|_| Error::SingularSystem { omega })?;
    Ok(x.into_iter().step_by(2).collect())
}

/// Exact integer-order transfer function `X_out / F_force` at `s = iω`.
pub fn integer_tf(model: &ChainModel, force_dof: usize, output_dof: usize, omega: f64) -> Result<Complex64> {
    check_omega(omega)?;
    let ss = assemble_state_space(model, force_dof)?.with_output(output_dof)?;
    ss.transfer(Complex64::new(0.0, omega))
        .map_err(|_| Error::SingularSystem { omega })
}

/// Transfer function split into its static value and the frequency-dependent
/// remainder, `H(iω) = H(0) + ΔH(iω)`.
///
/// `H(0)` is the series compliance of the links between ground and the
/// farther of the two DOFs, and `ΔH = e_outᵀ Z(ω)⁻¹ (ω²M - iωC) K⁻¹ e_force`
/// with `Z = K - ω²M + iωC`. Keeping the two parts apart lets callers form
/// `1/H - 1/H(0)` without cancellation at low frequency.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StaticSplit {
    pub static_part: f64,
    pub dynamic_part: Complex64,
    /// `H(iω)` from its own solve, accurate where `H(0) + ΔH` cancels.
    pub total: Complex64,
}

impl StaticSplit {
    pub fn total(&self) -> Complex64 {
        self.total
    }
}

/// Static displacement of `dof` under a unit load on `force` (0-based).
fn static_compliance(model: &ChainModel, force: usize, dof: usize) -> f64 {
    model.stiffnesses()[force.max(dof)..].iter().map(|k| 1.0 / k).sum()
}

pub fn integer_tf_split(model: &ChainModel, force_dof: usize, output_dof: usize, omega: f64) -> Result<StaticSplit> {
    check_omega(omega)?;
    let f = model.check_dof("force_dof", force_dof)?;
    let o = model.check_dof("output_dof", output_dof)?;
    let n = model.dofs();
    let k = model.stiffness_matrix();
    let c = model.damping_matrix();
    let m = model.masses();
    let mut z = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            z[(i, j)] = Complex64::new(k[i * n + j], omega * c[i * n + j]);
        }
        z[(i, i)] -= omega * omega * m[i];
    }
    let y: Vec<f64> = (0..n).map(|i| static_compliance(model, f, i)).collect();
    let rhs: Vec<Complex64> = (0..n)
        .map(|i| {
            let cy: f64 = (0..n).map(|j| c[i * n + j] * y[j]).sum();
            Complex64::new(omega * omega * m[i] * y[i], -omega * cy)
        })
        .collect();
    let singular = |_| Error::SingularSystem { omega };
    let x = lu_solve_checked(&z, &rhs, SINGULAR_RTOL).map_err(singular)?;
    let mut unit = vec![Complex64::new(0.0, 0.0); n];
    unit[f] = Complex64::new(1.0, 0.0);
    let h = lu_solve_checked(&z, &unit, SINGULAR_RTOL).map_err(singular)?;
    Ok(StaticSplit {
        static_part: y[o],
        dynamic_part: x[o],
        total: h[o],
    })
}

/// Undamped natural frequencies in increasing order.
pub fn natural_frequencies(model: &ChainModel) -> Vec<f64> {
    let (d, e) = mass_normalized_tridiagonal(model);
    let eig = tridiagonal_eigenvalues_qr(&d, &e).unwrap_or_else(|| tridiagonal_eigenvalues_bisection(&d, &e));
    eig.into_iter().map(|l| l.max(0.0).sqrt()).collect()
}

/// `M^{-1/2} K M^{-1/2}` as (diagonal, off-diagonal).
pub(crate) fn mass_normalized_tridiagonal(model: &ChainModel) -> (Vec<f64>, Vec<f64>) {
    let (diag, off) = ChainModel::tridiagonal(model.stiffnesses());
    let m = model.masses();
    let d = diag.iter().zip(m).map(|(k, mi)| k / mi).collect();
    let e = off
        .iter()
        .enumerate()
        .map(|(i, k)| k / (m[i] * m[i + 1]).sqrt())
        .collect();
    (d, e)
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL iteration
/// with Wilkinson shifts. Returns `None` if an eigenvalue fails to deflate.
pub(crate) fn tridiagonal_eigenvalues_qr(diag: &[f64], off: &[f64]) -> Option<Vec<f64>> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = off.to_vec();
    e.push(0.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return None;
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Some(d)
}

/// Number of eigenvalues strictly below `x` (Sturm sequence of the
/// leading principal minors).
fn sturm_count(d: &[f64], e: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..d.len() {
        let coupling = if i == 0 { 0.0 } else { e[i - 1] * e[i - 1] / q };
        q = d[i] - x - coupling;
        if q == 0.0 {
            q = -f64::EPSILON * (d[i].abs() + x.abs()).max(f64::MIN_POSITIVE);
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Eigenvalues of a symmetric tridiagonal matrix by Sturm bisection.
pub(crate) fn tridiagonal_eigenvalues_bisection(d: &[f64], e: &[f64]) -> Vec<f64> {
    let n = d.len();
    let radius = |i: usize| {
        (if i > 0 { e[i - 1].abs() } else { 0.0 }) + (if i + 1 < n { e[i].abs() } else { 0.0 })
    };
    let lo0 = (0..n).map(|i| d[i] - radius(i)).fold(f64::INFINITY, f64::min);
    let hi0 = (0..n).map(|i| d[i] + radius(i)).fold(f64::NEG_INFINITY, f64::max);
    (0..n)
        .map(|k| {
            let (mut lo, mut hi) = (lo0, hi0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if sturm_count(d, e, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

/// Ordered set of strictly positive evaluation frequencies (rad/s).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrequencyGrid {
    omegas: Vec<f64>,
}

impl FrequencyGrid {
    pub fn new(omegas: Vec<f64>) -> Result<Self> {
        if omegas.is_empty() {
            return Err(Error::InvalidGrid("no frequencies".into()));
        }
        if let Some(w) = omegas.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidGrid(format!("frequency {w} is not positive and finite")));
        }
        if omegas.windows(2).any(|p| p[1] <= p[0]) {
            return Err(Error::InvalidGrid("frequencies must be strictly increasing".into()));
        }
        Ok(Self { omegas })
    }

    /// `count` logarithmically spaced points over `[min, max]`, endpoints
    /// included exactly.
    pub fn log(min: f64, max: f64, count: usize) -> Result<Self> {
        Self::spaced(min, max, count, true)
    }

    pub fn linear(min: f64, max: f64, count: usize) -> Result<Self> {
        Self::spaced(min, max, count, false)
    }

    fn spaced(min: f64, max: f64, count: usize, log: bool) -> Result<Self> {
        if count == 1 && min == max {
            return Self::new(vec![min]);
        }
        if count < 2 || !(min < max) {
            return Err(Error::InvalidGrid(format!(
                "need min < max and at least two points (got {min}, {max}, {count})"
            )));
        }
        if log && !(min > 0.0) {
            return Err(Error::InvalidGrid("log grid needs a positive lower bound".into()));
        }
        let last = (count - 1) as f64;
        let omegas = (0..count)
            .map(|i| {
                if i == 0 {
                    min
                } else if i == count - 1 {
                    max
                } else if log {
                    let t = i as f64 / last;
                    10f64.powf(min.log10() * (1.0 - t) + max.log10() * t)
                } else {
                    min + (max - min) * i as f64 / last
                }
            })
            .collect();
        Self::new(omegas)
    }

    /// 100 log-spaced points over `[0.01, 100]` rad/s.
    pub fn default_log() -> Self {
        Self::log(0.01, 100.0, 100).expect("static grid")
    }

    pub fn omegas(&self) -> &[f64] {
        &self.omegas
    }

    pub fn len(&self) -> usize {
        self.omegas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omegas.is_empty()
    }

    /// Index of the grid point closest to `omega` on a log scale.
    pub fn nearest(&self, omega: f64) -> usize {
        let lw = omega.ln();
        (0..self.len())
            .min_by(|&a, &b| {
                (self.omegas[a].ln() - lw)
                    .abs()
                    .total_cmp(&(self.omegas[b].ln() - lw).abs())
            })
            .unwrap_or(0)
    }
}

/// Textual grid description `min:max:count[:log|lin]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub log: bool,
}

impl GridSpec {
    pub fn build(&self) -> Result<FrequencyGrid> {
        if self.log {
            FrequencyGrid::log(self.min, self.max, self.count)
        } else {
            FrequencyGrid::linear(self.min, self.max, self.count)
        }
    }
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            min: 0.01,
            max: 100.0,
            count: 100,
            log: true,
        }
    }
}

impl FromStr for GridSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let bad = || Error::InvalidGrid(format!("expected min:max:count[:log|lin], got `{s}`"));
        if !(3..=4).contains(&parts.len()) {
            return Err(bad());
        }
        let min: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let max: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
        let log = match parts.get(3).map(|p| p.trim()) {
            None | Some("log") => true,
            Some("lin") | Some("linear") => false,
            Some(_) => return Err(bad()),
        };
        let spec = Self { min, max, count, log };
        spec.build()?;
        Ok(spec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::seeded_rng;
    use rand::Rng;

    fn reference_chain() -> ChainModel {
        build_chain(&[1.0, 2.0, 1.0, 2.0], &[1.0, 2.0, 1.0, 2.0], &[1.0, 2.0, 1.0, 2.0]).unwrap()
    }

    /// Direct dynamic-stiffness solve `(K - ω²M + iωC) X = F`, independent of
    /// the state-space path.
    fn dynamic_stiffness_tf(model: &ChainModel, force: usize, omega: f64) -> Vec<Complex64> {
        let n = model.dofs();
        let k = model.stiffness_matrix();
        let c = model.damping_matrix();
        let mut z = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                z[(i, j)] = Complex64::new(k[i * n + j], omega * c[i * n + j]);
            }
            z[(i, i)] -= omega * omega * model.masses()[i];
        }
        let mut f = vec![Complex64::new(0.0, 0.0); n];
        f[force - 1] = Complex64::new(1.0, 0.0);
        crate::numerics::lu_solve(&z, &f).unwrap()
    }

    #[test]
    fn build_accepts_reference_chain_and_smallest_chain() {
        assert_eq!(reference_chain().dofs(), 4);
        assert_eq!(build_chain(&[1.0], &[1.0], &[0.0]).unwrap().dofs(), 1);
    }

    #[test]
    fn build_rejects_bad_input() {
        assert!(matches!(
            build_chain(&[1.0, 2.0], &[1.0], &[1.0, 1.0]),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(build_chain(&[], &[], &[]), Err(Error::LengthMismatch { .. })));
        assert!(matches!(
            build_chain(&[1.0, 0.0], &[1.0, 1.0], &[0.0, 0.0]),
            Err(Error::NonPositiveParameter { name: "masses", index: 2, .. })
        ));
        assert!(matches!(
            build_chain(&[1.0], &[-1.0], &[0.0]),
            Err(Error::NonPositiveParameter { name: "stiffnesses", .. })
        ));
        assert!(matches!(
            build_chain(&[1.0], &[1.0], &[-0.1]),
            Err(Error::NonPositiveParameter { name: "dampers", .. })
        ));
        assert!(build_chain(&[f64::NAN], &[1.0], &[0.0]).is_err());
    }

    #[test]
    fn two_dof_state_matrix_matches_closed_form() {
        let mut rng = seeded_rng();
        for _ in 0..10 {
            let (m1, m2): (f64, f64) = (rng.gen_range(0.1..10.0), rng.gen_range(0.1..10.0));
            let (k1, k2): (f64, f64) = (rng.gen_range(0.1..10.0), rng.gen_range(0.1..10.0));
            let (c1, c2): (f64, f64) = (rng.gen_range(0.0..5.0), rng.gen_range(0.0..5.0));
            let model = build_chain(&[m1, m2], &[k1, k2], &[c1, c2]).unwrap();
            let ss = assemble_state_space(&model, 1).unwrap();
            #[rustfmt::skip]
            let expected = [
                0.0, 1.0, 0.0, 0.0,
                -k1 / m1, -c1 / m1, k1 / m1, c1 / m1,
                0.0, 0.0, 0.0, 1.0,
                k1 / m2, c1 / m2, -(k1 + k2) / m2, -(c1 + c2) / m2,
            ];
            for (got, want) in ss.a.iter().zip(expected) {
                let scale = want.abs().max(f64::MIN_POSITIVE);
                assert!((got - want).abs() / scale < 1e-14 || got == &want);
            }
            assert_eq!(ss.b, vec![0.0, 1.0 / m1, 0.0, 0.0]);
            assert_eq!(ss.c, vec![1.0, 0.0, 0.0, 0.0]);
            assert_eq!(ss.d, 0.0);
        }
    }

    #[test]
    fn single_dof_state_space() {
        let model = build_chain(&[2.0], &[10.0], &[1.0]).unwrap();
        let ss = assemble_state_space(&model, 1).unwrap();
        assert_eq!(ss.a, vec![0.0, 1.0, -5.0, -0.5]);
        assert_eq!(ss.b, vec![0.0, 0.5]);
        assert!(assemble_state_space(&model, 2).is_err());
        assert!(assemble_state_space(&model, 0).is_err());
    }

    #[test]
    fn undamped_sdof_eigenvalues_are_imaginary() {
        // λ² + k/m = 0 for m = 1, k = 5.
        let model = build_chain(&[1.0], &[5.0], &[0.0]).unwrap();
        let ss = assemble_state_space(&model, 1).unwrap();
        // Characteristic polynomial of a 2x2: λ² - tr λ + det.
        let tr = ss.a[0] + ss.a[3];
        let det = ss.a[0] * ss.a[3] - ss.a[1] * ss.a[2];
        assert_eq!(tr, 0.0);
        assert!((det - 5.0).abs() < 1e-15);
        assert!((natural_frequencies(&model)[0] - 5f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn sdof_transfer_function_matches_analytic() {
        let model = build_chain(&[2.0], &[10.0], &[1.0]).unwrap();
        let h = integer_tf(&model, 1, 1, 10.0).unwrap();
        let want = Complex64::new(1.0, 0.0) / Complex64::new(-190.0, 10.0);
        assert!((h - want).norm() / want.norm() < 1e-14);
        assert!((h.re + 5.2486e-3).abs() < 5e-8 && (h.im + 2.7624e-4).abs() < 5e-9);
    }

    #[test]
    fn static_limit_is_series_compliance() {
        let model = reference_chain();
        let h = integer_tf(&model, 1, 1, 1e-3).unwrap();
        assert!((h.norm() - 3.0).abs() / 3.0 < 1e-4);
        let h = integer_tf(&model, 1, 1, 1e-4).unwrap();
        assert!((h.norm() - 3.0).abs() / 3.0 < 1e-3);
    }

    #[test]
    fn static_split_sums_to_transfer_function() {
        let mut rng = seeded_rng();
        let model = reference_chain();
        for _ in 0..50 {
            let w = 10f64.powf(rng.gen_range(-3.0..2.0));
            let (f, o) = (rng.gen_range(1..=4), rng.gen_range(1..=4));
            let split = integer_tf_split(&model, f, o, w).unwrap();
            let h = integer_tf(&model, f, o, w).unwrap();
            assert!((split.total() - h).norm() <= 1e-11 * h.norm());
            let sum = split.dynamic_part + split.static_part;
            assert!((sum - h).norm() <= 1e-13 * (h.norm() + split.static_part));
        }
        let split = integer_tf_split(&model, 1, 1, 1e-6).unwrap();
        assert_eq!(split.static_part, 3.0);
        assert!(split.dynamic_part.norm() < 1e-5);
    }

    #[test]
    fn conjugate_symmetry() {
        let mut rng = seeded_rng();
        let ss = assemble_state_space(&reference_chain(), 1).unwrap().with_output(3).unwrap();
        for _ in 0..50 {
            let w = 10f64.powf(rng.gen_range(-2.0..2.0));
            let hp = ss.transfer(Complex64::new(0.0, w)).unwrap();
            let hm = ss.transfer(Complex64::new(0.0, -w)).unwrap();
            assert!((hp.conj() - hm).norm() <= 1e-14 * hp.norm());
        }
    }

    #[test]
    fn state_space_agrees_with_dynamic_stiffness() {
        let mut rng = seeded_rng();
        let model = reference_chain();
        for _ in 0..20 {
            let w = 10f64.powf(rng.gen_range(-2.0..2.0));
            let force = rng.gen_range(1..=4);
            let a = integer_tf_all(&model, force, w).unwrap();
            let b = dynamic_stiffness_tf(&model, force, w);
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).norm() <= 1e-11 * y.norm().max(1e-300));
            }
            let single = integer_tf(&model, force, 3, w).unwrap();
            assert!((single - a[2]).norm() <= 1e-13 * a[2].norm());
        }
    }

    #[test]
    fn undamped_resonance_is_singular() {
        let model = build_chain(&[1.0], &[1.0], &[0.0]).unwrap();
        assert!(matches!(integer_tf(&model, 1, 1, 1.0), Err(Error::SingularSystem { .. })));
        assert!(integer_tf(&model, 1, 1, 0.0).is_err());
        assert!(integer_tf(&model, 1, 2, 0.5).is_err());
    }

    #[test]
    fn reference_chain_natural_frequency_range() {
        let w = natural_frequencies(&reference_chain());
        assert_eq!(w.len(), 4);
        assert!(w.windows(2).all(|p| p[0] < p[1]));
        // Reported to two decimals as 0.36 .. 2.22 rad/s.
        assert!(w.iter().all(|&x| (0.355..=2.225).contains(&x)), "{w:?}");
    }

    #[test]
    fn two_dof_unit_chain_natural_frequencies() {
        let model = build_chain(&[1.0, 1.0], &[1.0, 1.0], &[0.0, 0.0]).unwrap();
        let w = natural_frequencies(&model);
        let want = [((3.0 - 5f64.sqrt()) / 2.0).sqrt(), ((3.0 + 5f64.sqrt()) / 2.0).sqrt()];
        for (g, e) in w.iter().zip(want) {
            assert!((g - e).abs() < 1e-14);
        }
        assert!((w[0] - 0.6180).abs() < 5e-5 && (w[1] - 1.6180).abs() < 5e-5);
    }

    #[test]
    fn natural_frequencies_are_undamped_resonances() {
        let model = reference_chain().undamped();
        for w in natural_frequencies(&model) {
            assert!(matches!(integer_tf(&model, 1, 1, w), Err(Error::SingularSystem { .. }))
                || integer_tf(&model, 1, 1, w).unwrap().norm() > 1e8);
        }
    }

    #[test]
    fn qr_and_bisection_agree() {
        let mut rng = seeded_rng();
        for _ in 0..50 {
            let n = rng.gen_range(1..=8);
            let gen = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<f64> {
                (0..n).map(|_| rng.gen_range(0.1..5.0)).collect()
            };
            let (m, k) = (gen(&mut rng), gen(&mut rng));
            let model = build_chain(&m, &k, &vec![0.0; n]).unwrap();
            let (d, e) = mass_normalized_tridiagonal(&model);
            let qr = tridiagonal_eigenvalues_qr(&d, &e).unwrap();
            let bi = tridiagonal_eigenvalues_bisection(&d, &e);
            for (a, b) in qr.iter().zip(&bi) {
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "{qr:?} vs {bi:?}");
            }
            assert!(qr.iter().all(|&l| l > 0.0));
        }
    }

    #[test]
    fn grids() {
        let g = FrequencyGrid::log(0.01, 100.0, 100).unwrap();
        assert_eq!(g.len(), 100);
        assert_eq!(g.omegas()[0], 0.01);
        assert_eq!(g.omegas()[99], 100.0);
        assert_eq!(g, FrequencyGrid::default_log());
        let l = FrequencyGrid::linear(1.0, 2.0, 3).unwrap();
        assert_eq!(l.omegas(), &[1.0, 1.5, 2.0]);
        assert!(FrequencyGrid::new(vec![1.0, 1.0]).is_err());
        assert!(FrequencyGrid::new(vec![0.0, 1.0]).is_err());
        assert!(FrequencyGrid::new(vec![]).is_err());
        assert!(FrequencyGrid::log(2.0, 1.0, 5).is_err());
        assert_eq!(FrequencyGrid::log(1.0, 1.0, 1).unwrap().omegas(), &[1.0]);
    }

    #[test]
    fn grid_spec_parsing() {
        let s: GridSpec = "0.01:100:100:log".parse().unwrap();
        assert_eq!(s, GridSpec::default());
        let s: GridSpec = "1:2:3:lin".parse().unwrap();
        assert!(!s.log);
        let s: GridSpec = "1:1:1".parse().unwrap();
        assert_eq!(s.build().unwrap().len(), 1);
        assert!("1:2".parse::<GridSpec>().is_err());
        assert!("2:1:5".parse::<GridSpec>().is_err());
        assert!("1:2:5:cubic".parse::<GridSpec>().is_err());
    }
}
