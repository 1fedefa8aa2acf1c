//! Spherically symmetric potentials and the physical-constants context.

use serde::Serialize;

use crate::error::{Result, WkbError};
use crate::roots::golden_max;

/// Units of action and mass. Both default to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicsContext {
    pub hbar: f64,
    pub mass: f64,
}

impl PhysicsContext {
    pub fn new(hbar: f64, mass: f64) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(WkbError::Domain(format!(
                "hbar must be positive, got {hbar}"
            )));
        }
        if !(mass.is_finite() && mass > 0.0) {
            return Err(WkbError::Domain(format!(
                "mass must be positive, got {mass}"
            )));
        }
        Ok(Self { hbar, mass })
    }
}

impl Default for PhysicsContext {
    fn default() -> Self {
        Self {
            hbar: 1.0,
            mass: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Potential {
    /// V(r) = m ω² r² / 2
    Oscillator { omega: f64 },
    /// V(r) = -α / r
    Coulomb { alpha: f64 },
    /// V(r) = -V0 e^(-r/r0) / (1 - e^(-r/r0))
    Hulthen { v0: f64, r0: f64 },
}

/// Energy interval that contains every bound eigenvalue. Infinite edges are
/// sentinels for "no finite bound".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyWindow {
    pub lower: f64,
    pub upper: f64,
}

impl EnergyWindow {
    pub fn contains(&self, energy: f64) -> bool {
        energy > self.lower && energy < self.upper
    }
}

fn positive(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(WkbError::Domain(format!(
            "{name} must be positive, got {value}"
        )))
    }
}

impl Potential {
    pub fn oscillator(omega: f64) -> Result<Self> {
        Ok(Self::Oscillator {
            omega: positive("omega", omega)?,
        })
    }

    pub fn coulomb(alpha: f64) -> Result<Self> {
        Ok(Self::Coulomb {
            alpha: positive("alpha", alpha)?,
        })
    }

    pub fn hulthen(v0: f64, r0: f64) -> Result<Self> {
        Ok(Self::Hulthen {
            v0: positive("v0", v0)?,
            r0: positive("r0", r0)?,
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Oscillator { .. } => "oscillator",
            Self::Coulomb { .. } => "coulomb",
            Self::Hulthen { .. } => "hulthen",
        }
    }

    pub fn evaluate(&self, ctx: &PhysicsContext, r: f64) -> Result<f64> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(WkbError::Domain(format!(
                "potential evaluated at r = {r}; need r > 0"
            )));
        }
        Ok(self.value(ctx, r))
    }

    /// Unchecked evaluation for hot loops; `r` must be positive.
    #[inline]
    pub(crate) fn value(&self, ctx: &PhysicsContext, r: f64) -> f64 {
        match *self {
            Self::Oscillator { omega } => 0.5 * ctx.mass * omega * omega * r * r,
            Self::Coulomb { alpha } => -alpha / r,
            // V0 / (e^x - 1) is the same function without the cancellation
            // in 1 - e^(-x) at small x.
            Self::Hulthen { v0, r0 } => -v0 / (r / r0).exp_m1(),
        }
    }

    /// Natural length unit of the problem.
    pub fn length_scale(&self, ctx: &PhysicsContext) -> f64 {
        match *self {
            Self::Oscillator { omega } => (ctx.hbar / (ctx.mass * omega)).sqrt(),
            Self::Coulomb { alpha } => ctx.hbar * ctx.hbar / (ctx.mass * alpha),
            Self::Hulthen { r0, .. } => r0,
        }
    }

    /// Natural energy unit of the problem.
    pub fn energy_scale(&self, ctx: &PhysicsContext) -> f64 {
        match *self {
            Self::Oscillator { omega } => ctx.hbar * omega,
            Self::Coulomb { alpha } => ctx.mass * alpha * alpha / (ctx.hbar * ctx.hbar),
            Self::Hulthen { v0, r0 } => v0.max(ctx.hbar * ctx.hbar / (ctx.mass * r0 * r0)),
        }
    }

    /// Strength `c` of the `-c/r` singularity at the origin (0 if regular).
    pub fn coulomb_strength_at_origin(&self) -> f64 {
        match *self {
            Self::Oscillator { .. } => 0.0,
            Self::Coulomb { alpha } => alpha,
            Self::Hulthen { v0, r0 } => v0 * r0,
        }
    }

    /// Continuum threshold, if the potential has one.
    pub fn threshold(&self) -> Option<f64> {
        match self {
            Self::Oscillator { .. } => None,
            Self::Coulomb { .. } | Self::Hulthen { .. } => Some(0.0),
        }
    }

    /// `V(r) + M²/(2 m r²)`.
    pub fn effective(&self, ctx: &PhysicsContext, angular_momentum: f64, r: f64) -> f64 {
        self.value(ctx, r) + angular_momentum * angular_momentum / (2.0 * ctx.mass * r * r)
    }

    /// Location and depth of the effective-potential well. `None` when the
    /// well is unbounded below (Coulomb-like core with `M = 0`).
    pub fn effective_minimum(
        &self,
        ctx: &PhysicsContext,
        angular_momentum: f64,
    ) -> Option<(f64, f64)> {
        if angular_momentum == 0.0 {
            return match self {
                Self::Oscillator { .. } => Some((0.0, 0.0)),
                _ => None,
            };
        }
        let scale = self.length_scale(ctx);
        let veff = |log_r: f64| self.effective(ctx, angular_momentum, log_r.exp());

        // Coarse log scan first: the Hulthén well is followed by a
        // centrifugal barrier, so a bare golden-section on the full range
        // could settle on the wrong side.
        let lo = (scale * 1e-8).ln();
        let hi = (scale * 1e8).ln();
        let samples: usize = 321;
        let step = (hi - lo) / (samples - 1) as f64;
        let (best, _) = (0..samples).map(|i| (i, veff(lo + step * i as f64))).fold(
            (0, f64::INFINITY),
            |acc, (i, v)| if v < acc.1 { (i, v) } else { acc },
        );
        let a = lo + step * best.saturating_sub(1) as f64;
        let b = lo + step * (best + 1).min(samples - 1) as f64;
        let (log_r, neg_v) = golden_max(|x| -veff(x), a, b, 1e-13);
        Some((log_r.exp(), -neg_v))
    }

    /// Interval guaranteed to contain all bound eigenvalues at angular
    /// momentum `M`.
    pub fn bound_energy_window(&self, ctx: &PhysicsContext, angular_momentum: f64) -> EnergyWindow {
        match self {
            Self::Oscillator { .. } => EnergyWindow {
                lower: 0.0,
                upper: f64::INFINITY,
            },
            Self::Coulomb { .. } | Self::Hulthen { .. } => {
                let lower = self
                    .effective_minimum(ctx, angular_momentum)
                    .map(|(_, v)| v)
                    .unwrap_or(f64::NEG_INFINITY);
                EnergyWindow { lower, upper: 0.0 }
            }
        }
    }
}
