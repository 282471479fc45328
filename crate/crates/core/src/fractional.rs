//! Undamped fractional oscillators with a complex derivative order.
//!
//! The derivative `d^α/dt^α` enters only through its Laplace image `s^α`
//! evaluated at `s = iω` on the principal branch, i.e. zero initial
//! conditions are assumed throughout.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::{lu_solve_checked, wrap_phase, ComplexMatrix};

/// Complex derivative order `α = a + ib`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ComplexOrder {
    pub a: f64,
    pub b: f64,
}

impl ComplexOrder {
    pub const fn new(a: f64, b: f64) -> Self {
        Self { a, b }
    }

    /// The integer order 2 of a classical oscillator.
    pub const fn second() -> Self {
        Self { a: 2.0, b: 0.0 }
    }

    pub fn value(self) -> Complex64 {
        Complex64::new(self.a, self.b)
    }

    pub fn is_finite(self) -> bool {
        self.a.is_finite() && self.b.is_finite()
    }
}

impl From<Complex64> for ComplexOrder {
    fn from(z: Complex64) -> Self {
        Self { a: z.re, b: z.im }
    }
}

impl From<ComplexOrder> for Complex64 {
    fn from(o: ComplexOrder) -> Self {
        o.value()
    }
}

impl fmt::Display for ComplexOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.b.is_sign_negative() { '-' } else { '+' };
        match f.precision() {
            Some(p) => write!(f, "{:.*} {sign} {:.*}i", p, self.a, p, self.b.abs()),
            None => write!(f, "{} {sign} {}i", self.a, self.b.abs()),
        }
    }
}

/// Single-DOF fractional oscillator `m̄ D^α x + k̄ x = f`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FractionalSdof {
    pub m_bar: f64,
    pub k_bar: f64,
    pub alpha: ComplexOrder,
}

impl FractionalSdof {
    pub fn new(m_bar: f64, k_bar: f64, alpha: ComplexOrder) -> Result<Self> {
        positive("m_bar", m_bar)?;
        positive("k_bar", k_bar)?;
        Ok(Self { m_bar, k_bar, alpha })
    }
}

/// Fractional chain: link `j < N` has stiffness `β_j k̄` and the grounding
/// link carries the remainder `(1 - Σβ) k̄`.
#[derive(Clone, Debug, PartialEq)]
pub struct FractionalNdof {
    pub masses: Vec<f64>,
    pub k_total: f64,
    pub betas: Vec<Complex64>,
    pub alpha: ComplexOrder,
}

impl FractionalNdof {
    pub fn new(masses: Vec<f64>, k_total: f64, betas: Vec<Complex64>, alpha: ComplexOrder) -> Result<Self> {
        if masses.is_empty() || betas.len() + 1 != masses.len() {
            return Err(Error::Validation {
                field: "betas".into(),
                message: format!("{} masses need {} coupling parameters", masses.len(), masses.len().saturating_sub(1)),
            });
        }
        for &m in &masses {
            positive("masses", m)?;
        }
        positive("k_total", k_total)?;
        Ok(Self {
            masses,
            k_total,
            betas,
            alpha,
        })
    }

    pub fn dofs(&self) -> usize {
        self.masses.len()
    }

    /// Complex link stiffnesses, summing to `k_total`.
    pub fn link_stiffnesses(&self) -> Vec<Complex64> {
        let k = self.k_total;
        let rest = Complex64::new(1.0, 0.0) - self.betas.iter().sum::<Complex64>();
        self.betas.iter().map(|b| b * k).chain(std::iter::once(rest * k)).collect()
    }
}

impl From<FractionalSdof> for FractionalNdof {
    fn from(s: FractionalSdof) -> Self {
        Self {
            masses: vec![s.m_bar],
            k_total: s.k_bar,
            betas: Vec::new(),
            alpha: s.alpha,
        }
    }
}

/// Magnitude and phase of a transfer function value.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PolarResponse {
    pub magnitude: f64,
    /// Radians, principal value in `(-π, π]`.
    pub phase: f64,
}

impl PolarResponse {
    pub fn from_complex(z: Complex64) -> Self {
        Self {
            magnitude: z.norm(),
            phase: wrap_phase(z.arg()),
        }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(self.magnitude, self.phase)
    }
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

/// `γ = (iω)^α`, in the expanded form
/// `ω^a e^{-bπ/2} [cos(aπ/2 + b ln ω) + i sin(aπ/2 + b ln ω)]`.
///
/// `omega` must be positive.
pub fn gamma(omega: f64, alpha: ComplexOrder) -> Complex64 {
    let ComplexOrder { a, b } = alpha;
    let modulus = omega.powf(a) * (-b * FRAC_PI_2).exp();
    let angle = a * FRAC_PI_2 + b * omega.ln();
    Complex64::new(modulus * angle.cos(), modulus * angle.sin())
}

/// Real and imaginary parts `(τ, ξ)` of the normalized dynamic stiffness
/// `γ + k̄/m̄`, written out with the product-of-angles expansion.
pub fn tau_xi(omega: f64, alpha: ComplexOrder, m_bar: f64, k_bar: f64) -> (f64, f64) {
    let ComplexOrder { a, b } = alpha;
    let scale = omega.powf(a) * (-b * FRAC_PI_2).exp();
    let (sa, ca) = (a * FRAC_PI_2).sin_cos();
    let (sb, cb) = (b * omega.ln()).sin_cos();
    let tau = k_bar / m_bar + scale * (ca * cb - sa * sb);
    let xi = scale * (ca * sb + sa * cb);
    (tau, xi)
}

/// Transfer function `G(iω) = (1/m̄) / (τ + iξ)` with its magnitude and
/// phase `ψ = -atan2(ξ, τ)`.
pub fn fsdof_response(omega: f64, model: &FractionalSdof) -> Result<(Complex64, PolarResponse)> {
    let (tau, xi) = tau_xi(omega, model.alpha, model.m_bar, model.k_bar);
    let den = tau * tau + xi * xi;
    if !(den > 0.0) || !den.is_finite() {
        return Err(Error::PoleHit { omega });
    }
    let g = Complex64::new(tau, -xi) / (model.m_bar * den);
    let polar = PolarResponse {
        magnitude: 1.0 / (model.m_bar * den.sqrt()),
        phase: wrap_phase(-xi.atan2(tau)),
    };
    Ok((g, polar))
}

/// Displacement transfer functions `X_j / F` of every DOF of a fractional
/// chain forced at `forced_dof` (1-based), from
/// `(diag(m̄) (iω)^α + K̄) X = F`.
pub fn fndof_tf(omega: f64, model: &FractionalNdof, forced_dof: usize) -> Result<Vec<Complex64>> {
    let n = model.dofs();
    if forced_dof == 0 || forced_dof > n {
        return Err(Error::IndexOutOfRange {
            what: "forced_dof",
            index: forced_dof,
            len: n,
        });
    }
    let g = gamma(omega, model.alpha);
    let links = model.link_stiffnesses();
    let mut z = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        z[(i, i)] = g * model.masses[i] + links[i];
        if i > 0 {
            z[(i, i)] += links[i - 1];
        }
        if i + 1 < n {
            z[(i, i + 1)] = -links[i];
            z[(i + 1, i)] = -links[i];
        }
    }
    let mut f = vec![Complex64::new(0.0, 0.0); n];
    f[forced_dof - 1] = Complex64::new(1.0, 0.0);
    let x = lu_solve_checked(&z, &f, 64.0 * f64::EPSILON)
        .map_err(|_| Error::SingularDynamicStiffness { omega })?;
    if x.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::SingularDynamicStiffness { omega });
    }
    Ok(x)
}

/// Steady-state response `F₀ M sin(ωt + ψ)` to the load `F₀ sin(ωt)`.
pub fn steady_state(t: f64, omega: f64, f0: f64, polar: PolarResponse) -> f64 {
    f0 * polar.magnitude * (omega * t + polar.phase).sin()
}
