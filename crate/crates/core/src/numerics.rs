//! Small dense numeric kernel: LU with partial pivoting, a damped Newton
//! iteration with a central-difference Jacobian, and the principal-branch
//! complex logarithm and power.

use std::f64::consts::PI;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Pivots smaller than this are treated as exact zeros.
pub const PIVOT_FLOOR: f64 = 1e-300;

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::Domain(format!(
                "{} entries cannot form a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Domain("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Domain("ragged rows".into()));
        }
        Self::from_row_major(rows.len(), cols, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols);
        self.data
            .chunks_exact(self.cols)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Maximum absolute row sum.
    pub fn norm_inf(&self) -> f64 {
        self.data
            .chunks_exact(self.cols)
            .map(|row| row.iter().map(|z| z.norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

trait Field:
    Copy
    + std::ops::Sub<Output = Self>
    + std::ops::Mul<Output = Self>
    + std::ops::Div<Output = Self>
{
    fn magnitude(self) -> f64;
}

impl Field for f64 {
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl Field for Complex64 {
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

/// In-place Gaussian elimination with partial pivoting on an `n x n`
/// row-major buffer; `b` is overwritten with the solution.
fn lu_solve_in_place<T: Field>(n: usize, a: &mut [T], b: &mut [T], floor: f64) -> Result<()> {
    for col in 0..n {
        let (pivot_row, pivot_mag) = (col..n)
            .map(|r| (r, a[r * n + col].magnitude()))
            .fold((col, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if !(pivot_mag >= floor) {
            return Err(Error::Singular { pivot: col });
        }
        if pivot_row != col {
            for j in 0..n {
                a.swap(col * n + j, pivot_row * n + j);
            }
            b.swap(col, pivot_row);
        }
        let pivot = a[col * n + col];
        for r in col + 1..n {
            let factor = a[r * n + col] / pivot;
            if factor.magnitude() == 0.0 {
                continue;
            }
            for j in col + 1..n {
                a[r * n + j] = a[r * n + j] - factor * a[col * n + j];
            }
            b[r] = b[r] - factor * b[col];
        }
    }
    for i in (0..n).rev() {
        let mut acc = b[i];
        for j in i + 1..n {
            acc = acc - a[i * n + j] * b[j];
        }
        b[i] = acc / a[i * n + i];
    }
    Ok(())
}

/// Solves `A x = b` for square complex `A` by LU with partial pivoting.
pub fn lu_solve(a: &ComplexMatrix, b: &[Complex64]) -> Result<Vec<Complex64>> {
    if !a.is_square() || a.rows() != b.len() {
        return Err(Error::Domain(format!(
            "cannot solve {}x{} system with right-hand side of length {}",
            a.rows(),
            a.cols(),
            b.len()
        )));
    }
    let mut work = a.data.clone();
    let mut x = b.to_vec();
    lu_solve_in_place(a.rows(), &mut work, &mut x, PIVOT_FLOOR)?;
    Ok(x)
}

/// [`lu_solve`] that also treats pivots below `rtol * ‖A‖∞` as zero, for
/// callers that need to detect numerical (not just exact) singularity.
pub fn lu_solve_checked(a: &ComplexMatrix, b: &[Complex64], rtol: f64) -> Result<Vec<Complex64>> {
    if !a.is_square() || a.rows() != b.len() {
        return lu_solve(a, b);
    }
    let floor = (rtol * a.norm_inf()).max(PIVOT_FLOOR);
    let mut work = a.data.clone();
    let mut x = b.to_vec();
    lu_solve_in_place(a.rows(), &mut work, &mut x, floor)?;
    Ok(x)
}

/// Real counterpart of [`lu_solve`] on a row-major `n x n` buffer.
pub fn lu_solve_real(n: usize, a: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    if a.len() != n * n || b.len() != n {
        return Err(Error::Domain("dimension mismatch in real solve".into()));
    }
    let mut work = a.to_vec();
    let mut x = b.to_vec();
    lu_solve_in_place(n, &mut work, &mut x, PIVOT_FLOOR)?;
    Ok(x)
}

/// Principal logarithm `ln|z| + i Arg z` with `Arg z` in `(-π, π]`.
pub fn principal_log(z: Complex64) -> Result<Complex64> {
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::Domain("logarithm of zero".into()));
    }
    let mut arg = z.im.atan2(z.re);
    // atan2 returns -π for a negative real axis approached with -0.0.
    if arg <= -PI {
        arg = PI;
    }
    Ok(Complex64::new(z.norm().ln(), arg))
}

/// Principal power `exp(p · Ln z)`.
pub fn principal_pow(z: Complex64, p: Complex64) -> Result<Complex64> {
    Ok((p * principal_log(z)?).exp())
}

/// Wraps an angle onto `(-π, π]`.
pub fn wrap_phase(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(2.0 * PI);
    if t > PI {
        t -= 2.0 * PI;
    }
    t
}

/// Newton solver settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonConfig {
    /// Residual tolerance on the infinity norm.
    pub tol: f64,
    pub max_iter: usize,
    /// Relative finite-difference step for the Jacobian.
    pub fd_step: f64,
    /// Step reduction factor for the backtracking line search.
    pub backtrack: f64,
    pub max_halvings: usize,
}

impl Default for NewtonConfig {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 100,
            fd_step: 1e-7,
            backtrack: 0.5,
            max_halvings: 40,
        }
    }
}

impl NewtonConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::Validation {
                field: "tol".into(),
                message: "must be positive".into(),
            });
        }
        if self.max_iter == 0 {
            return Err(Error::Validation {
                field: "max_iter".into(),
                message: "must be at least 1".into(),
            });
        }
        if !(self.fd_step > 0.0) || !(self.backtrack > 0.0 && self.backtrack < 1.0) {
            return Err(Error::Validation {
                field: "fd_step/backtrack".into(),
                message: "out of range".into(),
            });
        }
        Ok(())
    }
}

/// Result of [`newton_solve`]. When `converged` is false `x` is the best
/// iterate seen.
#[derive(Clone, Debug, PartialEq)]
pub struct NewtonOutcome {
    pub x: Vec<f64>,
    pub residual: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Residual norm after each accepted iterate, starting with `x0`.
    pub history: Vec<f64>,
}

fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| if x.is_nan() { f64::NAN } else { m.max(x.abs()) })
}

fn finite_norm(v: &[f64]) -> f64 {
    let n = norm_inf(v);
    if n.is_finite() {
        n
    } else {
        f64::INFINITY
    }
}

/// Damped Newton iteration on `f(x) = 0` with a central-difference Jacobian
/// and backtracking on the residual infinity norm.
pub fn newton_solve<F>(mut f: F, x0: &[f64], config: &NewtonConfig) -> NewtonOutcome
where
    F: FnMut(&[f64]) -> Vec<f64>,
{
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut r = f(&x);
    assert_eq!(r.len(), n, "residual dimension must match unknowns");
    let mut rn = finite_norm(&r);
    let mut history = vec![rn];
    let mut iterations = 0;

    while rn >= config.tol && iterations < config.max_iter {
        iterations += 1;

        // Column-major Jacobian, transposed into row-major for the solve.
        let mut jac = vec![0.0; n * n];
        let mut xp = x.clone();
        for j in 0..n {
            let h = config.fd_step * x[j].abs().max(1.0);
            xp[j] = x[j] + h;
            let fp = f(&xp);
            xp[j] = x[j] - h;
            let fm = f(&xp);
            xp[j] = x[j];
            for i in 0..n {
                jac[i * n + j] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        let rhs: Vec<f64> = r.iter().map(|v| -v).collect();
        let step = match lu_solve_real(n, &jac, &rhs) {
            Ok(s) if s.iter().all(|v| v.is_finite()) => s,
            _ => break,
        };

        let mut lambda = 1.0;
        let mut accepted = None;
        for _ in 0..=config.max_halvings {
            let trial: Vec<f64> = x.iter().zip(&step).map(|(xi, si)| xi + lambda * si).collect();
            let rt = f(&trial);
            let rtn = finite_norm(&rt);
            if rtn < rn {
                accepted = Some((trial, rt, rtn));
                break;
            }
            lambda *= config.backtrack;
        }
        match accepted {
            Some((xt, rt, rtn)) => {
                x = xt;
                r = rt;
                rn = rtn;
                history.push(rn);
            }
            None => break,
        }
    }

    NewtonOutcome {
        converged: rn < config.tol,
        x,
        residual: rn,
        iterations,
        history,
    }
}
