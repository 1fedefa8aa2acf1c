//! Azimuthal and polar quantization and the quasiclassical angular
//! eigenfunctions.
//!
//! The polar condition is solved numerically rather than by quoting the
//! closed form, so `(l + 1/2) ħ` is a result here and not an input.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Result, WkbError};
use crate::potentials::PhysicsContext;
use crate::quadrature::{gauss_legendre, graded_gauss_legendre, QuadTolerance};
use crate::radial::PhaseIntegralResult;
use crate::roots::{brent, Tolerance};

/// Fraction of the classically allowed polar interval, at each end, treated
/// as too close to a turning point for the standing-wave form.
pub const VALIDITY_MARGIN: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct QuantumNumbers {
    pub n_r: u32,
    pub l: u32,
    pub m: i32,
    pub n_theta: u32,
}

impl QuantumNumbers {
    pub fn new(n_r: u32, l: u32, m: i32) -> Result<Self> {
        let n_theta = (l as i64) - (m.unsigned_abs() as i64);
        if n_theta < 0 {
            return Err(WkbError::Domain(format!(
                "need l >= |m|, got l = {l}, m = {m}"
            )));
        }
        Ok(Self {
            n_r,
            l,
            m,
            n_theta: n_theta as u32,
        })
    }

    pub fn from_polar(n_r: u32, n_theta: u32, m: i32) -> Self {
        Self {
            n_r,
            l: m.unsigned_abs() + n_theta,
            m,
            n_theta,
        }
    }
}

/// Angular quantum state: `M_z = m ħ`, `M = (l + 1/2) ħ`, and the
/// parameters of the standing-wave eigenfunction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AngularSolution {
    pub m_z: f64,
    pub angular_momentum: f64,
    pub l: u32,
    pub m: i32,
    pub amplitude: f64,
    pub phase_offset: f64,
}

impl AngularSolution {
    pub fn new(l: u32, m: i32, ctx: &PhysicsContext) -> Result<Self> {
        check_lm(l, m)?;
        Ok(Self {
            m_z: quantize_mz(m, ctx),
            angular_momentum: angular_momentum_of_l(l, ctx),
            l,
            m,
            amplitude: amplitude(l, m),
            phase_offset: FRAC_PI_2 * (l as f64 - m.unsigned_abs() as f64),
        })
    }

    pub fn squared(&self) -> f64 {
        self.angular_momentum * self.angular_momentum
    }
}

fn check_lm(l: u32, m: i32) -> Result<()> {
    if m.unsigned_abs() > l {
        Err(WkbError::Domain(format!(
            "need l >= |m|, got l = {l}, m = {m}"
        )))
    } else {
        Ok(())
    }
}

fn amplitude(l: u32, m: i32) -> f64 {
    let lf = l as f64;
    let am = m.unsigned_abs() as f64;
    ((2.0 * lf + 1.0) / (lf - am + 0.5)).sqrt() / PI
}

/// `cos(π a)` with exact zeros at half-integer `a`.
fn cos_pi(a: f64) -> f64 {
    let r = a.rem_euclid(2.0);
    if r == 0.5 || r == 1.5 {
        0.0
    } else {
        (PI * r).cos()
    }
}

pub fn quantize_mz(m: i32, ctx: &PhysicsContext) -> f64 {
    m as f64 * ctx.hbar
}

pub fn angular_momentum_of_l(l: u32, ctx: &PhysicsContext) -> f64 {
    (l as f64 + 0.5) * ctx.hbar
}

/// `∫ sqrt(M² - M_z²/sin²θ) dθ` between the polar turning points.
///
/// With `cos θ = cos θ₁ · sin t` the integrand becomes
/// `M c² cos²t / (cos²t + s² sin²t)` on `t ∈ [-π/2, π/2]`, where
/// `s = |M_z|/M` and `c² = 1 - s²`. For small `s` it is sharply peaked
/// toward `t = ±π/2`, so the panels are graded geometrically there.
pub fn angular_phase_integral(angular_momentum: f64, m_z: f64) -> Result<PhaseIntegralResult> {
    let big_m = angular_momentum;
    if !(big_m.is_finite() && big_m > 0.0) || !m_z.is_finite() {
        return Err(WkbError::Domain(format!(
            "need finite M > 0, got M = {big_m}, M_z = {m_z}"
        )));
    }
    let az = m_z.abs();
    if az >= big_m {
        return Err(WkbError::Domain(format!(
            "no classically allowed polar region: |M_z| = {az} >= M = {big_m}"
        )));
    }

    let tol = QuadTolerance::new(1e-12, 0.0);
    if az == 0.0 {
        let est = gauss_legendre(|_| big_m, 0.0, PI, tol)?;
        return Ok(PhaseIntegralResult {
            value: est.value,
            turning_points: (0.0, PI),
            quadrature_error: est.error,
            evaluations: est.evaluations,
        });
    }

    let s = az / big_m;
    let c2 = (1.0 - s) * (1.0 + s);
    let s2 = s * s;
    let integrand = |t: f64| {
        let (sin_t, cos_t) = t.sin_cos();
        let cos2 = cos_t * cos_t;
        big_m * c2 * cos2 / (cos2 + s2 * sin_t * sin_t)
    };

    let mut breaks = vec![0.0];
    let mut width = PI / 4.0;
    while width > 0.05 * s && breaks.len() < 64 {
        breaks.push(FRAC_PI_2 - width);
        width *= 0.5;
    }
    breaks.push(FRAC_PI_2);

    let est = graded_gauss_legendre(integrand, &breaks, tol)?;
    let theta1 = s.asin();
    Ok(PhaseIntegralResult {
        // the integrand is even in t
        value: 2.0 * est.value,
        turning_points: (theta1, PI - theta1),
        quadrature_error: 2.0 * est.error,
        evaluations: est.evaluations,
    })
}

/// Inverts the polar quantization condition for `M` at fixed `n_θ` and `m`.
pub fn solve_angular_momentum(n_theta: u32, m: i32, ctx: &PhysicsContext) -> Result<f64> {
    let hbar = ctx.hbar;
    let m_z = quantize_mz(m, ctx);
    let target = PI * hbar * (n_theta as f64 + 0.5);
    let lo = m_z.abs() + 1e-12 * hbar;
    let hi = m_z.abs() + (n_theta as f64 + 2.0) * hbar;

    let mut failure = None;
    let residual = |big_m: f64| match angular_phase_integral(big_m, m_z) {
        Ok(r) => r.value - target,
        Err(e) => {
            failure.get_or_insert(e);
            f64::NAN
        }
    };
    let tol = Tolerance {
        residual: 1e-12 * hbar,
        ..Tolerance::default()
    };
    let root = brent(residual, lo, hi, tol);
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(root?.x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AngularValue {
    pub value: Complex64,
    /// False at or near the polar turning points, where the standing-wave
    /// form is not expected to hold.
    pub in_validity_region: bool,
}

/// Standing-wave eigenfunction
/// `Ỹ_lm = A cos[(l + 1/2) θ + (π/2)(l - |m|)] e^{imφ}`
/// with `A = (1/π) sqrt((2l + 1)/(l - |m| + 1/2))`. This is the
/// representation with the `sqrt(sin θ)` factor absorbed; no renormalization
/// is applied.
pub fn eval_angular_wavefunction(l: u32, m: i32, theta: f64, phi: f64) -> Result<AngularValue> {
    check_lm(l, m)?;
    if !(0.0..=PI).contains(&theta) {
        return Err(WkbError::Domain(format!("theta = {theta} outside [0, π]")));
    }
    let lf = l as f64;
    let am = m.unsigned_abs() as f64;
    let radial_part = amplitude(l, m) * cos_pi((lf + 0.5) * (theta / PI) + 0.5 * (lf - am));
    let value = Complex64::from_polar(1.0, m as f64 * phi) * radial_part;

    let theta1 = (am / (lf + 0.5)).asin();
    let theta2 = PI - theta1;
    let margin = VALIDITY_MARGIN * (theta2 - theta1);
    let in_validity_region = theta > theta1 + margin && theta < theta2 - margin;

    Ok(AngularValue {
        value,
        in_validity_region,
    })
}

/// The `l = m = 0` half-wave `(√2/π) cos(θ/2)`.
pub fn ground_state_angular(theta: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&theta) {
        return Err(WkbError::Domain(format!("theta = {theta} outside [0, π]")));
    }
    Ok(amplitude(0, 0) * cos_pi(0.5 * (theta / PI)))
}

/// `∫∫ |Ỹ_lm|² dθ dφ` over the sphere's coordinate rectangle, evaluated
/// numerically. The printed normalization does not make this 1.
pub fn angular_norm(l: u32, m: i32) -> Result<f64> {
    check_lm(l, m)?;
    let est = gauss_legendre(
        |theta| {
            eval_angular_wavefunction(l, m, theta, 0.0)
                .map(|a| a.value.norm_sqr())
                .unwrap_or(f64::NAN)
        },
        0.0,
        PI,
        QuadTolerance::new(1e-13, 0.0),
    )?;
    Ok(2.0 * PI * est.value)
}
