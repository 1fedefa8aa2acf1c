//! Radial quantization: squared momentum, turning points, the action
//! integral and eigenvalue root-finding.
//!
//! The solver works on anything implementing [`RadialProblem`]; the
//! built-in potentials with a centrifugal term `M²/r²` are wrapped by
//! [`CentralProblem`].

use std::cell::RefCell;
use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Result, WkbError};
use crate::oracle;
use crate::potentials::{PhysicsContext, Potential};
use crate::quadrature::{graded_gauss_legendre, tanh_sinh, QuadTolerance};
use crate::roots::{bisect_to_adjacent, brent, golden_max, Tolerance};

/// Relative accuracy requested from every action quadrature.
pub const ACTION_QUAD_REL_TOL: f64 = 1e-12;
/// Action residual at which the energy solver stops, in units of ħ.
pub const ACTION_RESIDUAL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CentrifugalMode {
    /// `M² = (l + 1/2)² ħ²`
    Langer,
    /// `M² = l(l + 1) ħ²`; zero at `l = 0`.
    Naive,
}

impl CentrifugalMode {
    pub fn angular_momentum(self, l: u32, ctx: &PhysicsContext) -> f64 {
        let lf = l as f64;
        match self {
            Self::Langer => (lf + 0.5) * ctx.hbar,
            Self::Naive => (lf * (lf + 1.0)).sqrt() * ctx.hbar,
        }
    }
}

/// Value of a phase-space integral together with its integration limits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhaseIntegralResult {
    pub value: f64,
    pub turning_points: (f64, f64),
    pub quadrature_error: f64,
    pub evaluations: usize,
}

/// A one-dimensional radial problem `p²(E, r) = 2m (E - U(r))` with a
/// single well.
pub trait RadialProblem: Sync {
    fn squared_momentum(&self, energy: f64, r: f64) -> f64;

    /// Characteristic length; turning-point searches start on
    /// `[1e-8, 1e8]` times this.
    fn length_scale(&self) -> f64;

    fn energy_scale(&self) -> f64;

    /// Natural unit of action; sets the absolute floor of the quadrature
    /// tolerance so near-empty wells do not chase rounding noise.
    fn action_scale(&self) -> f64;

    /// Continuum threshold, `None` for confining potentials.
    fn threshold(&self) -> Option<f64>;

    /// True when there is no centrifugal barrier, so the allowed region
    /// extends to the origin.
    fn open_at_origin(&self) -> bool;

    /// Bottom of the effective well; `None` if unbounded below.
    fn well_bottom(&self) -> Option<f64>;
}

/// Built-in potential plus the centrifugal term `M²/(2 m r²)`.
#[derive(Debug, Clone, Copy)]
pub struct CentralProblem {
    pub potential: Potential,
    pub ctx: PhysicsContext,
    pub angular_momentum: f64,
}

impl CentralProblem {
    pub fn new(potential: Potential, ctx: PhysicsContext, angular_momentum: f64) -> Result<Self> {
        if !(angular_momentum.is_finite() && angular_momentum >= 0.0) {
            return Err(WkbError::Domain(format!(
                "angular momentum must be non-negative, got {angular_momentum}"
            )));
        }
        Ok(Self {
            potential,
            ctx,
            angular_momentum,
        })
    }
}

impl RadialProblem for CentralProblem {
    #[inline]
    fn squared_momentum(&self, energy: f64, r: f64) -> f64 {
        let m2 = self.angular_momentum * self.angular_momentum;
        2.0 * self.ctx.mass * (energy - self.potential.value(&self.ctx, r)) - m2 / (r * r)
    }

    fn length_scale(&self) -> f64 {
        self.potential.length_scale(&self.ctx)
    }

    fn energy_scale(&self) -> f64 {
        self.potential.energy_scale(&self.ctx)
    }

    fn action_scale(&self) -> f64 {
        self.ctx.hbar
    }

    fn threshold(&self) -> Option<f64> {
        self.potential.threshold()
    }

    fn open_at_origin(&self) -> bool {
        self.angular_momentum == 0.0
    }

    fn well_bottom(&self) -> Option<f64> {
        self.potential
            .effective_minimum(&self.ctx, self.angular_momentum)
            .map(|(_, v)| v)
    }
}

/// `2m(E - V(r)) - M²/r²`.
pub fn squared_momentum(
    potential: &Potential,
    ctx: &PhysicsContext,
    energy: f64,
    angular_momentum: f64,
    r: f64,
) -> Result<f64> {
    if !(r > 0.0) {
        return Err(WkbError::Domain(format!("need r > 0, got {r}")));
    }
    Ok(CentralProblem::new(*potential, *ctx, angular_momentum)?.squared_momentum(energy, r))
}

/// Classical turning points `(r1, r2)` of the radial motion for `M > 0`.
pub fn find_turning_points(
    potential: &Potential,
    ctx: &PhysicsContext,
    energy: f64,
    angular_momentum: f64,
) -> Result<(f64, f64)> {
    if !(angular_momentum > 0.0) {
        return Err(WkbError::Domain(format!(
            "turning points need M > 0, got {angular_momentum}"
        )));
    }
    turning_points(
        &CentralProblem::new(*potential, *ctx, angular_momentum)?,
        energy,
    )
}

/// Turning points of a generic problem. When the problem is open at the
/// origin the inner point is reported as 0.
pub fn turning_points<P: RadialProblem + ?Sized>(problem: &P, energy: f64) -> Result<(f64, f64)> {
    if !energy.is_finite() {
        return Err(WkbError::Domain(format!(
            "energy must be finite, got {energy}"
        )));
    }
    if problem.threshold().is_some_and(|t| energy >= t) {
        return Err(WkbError::Scattering { energy });
    }

    // r² p² is bounded at the origin and has a single interior maximum.
    let scaled = |r: f64| r * r * problem.squared_momentum(energy, r);
    let scale = problem.length_scale();
    let mut lo = scale * 1e-8;
    let mut hi = scale * 1e8;

    let mut grown = 0;
    while scaled(hi) >= 0.0 {
        hi *= 1e4;
        grown += 1;
        if grown > 60 || !hi.is_finite() {
            return Err(WkbError::Scattering { energy });
        }
    }
    if !problem.open_at_origin() {
        let mut shrunk = 0;
        while scaled(lo) >= 0.0 && shrunk < 60 {
            lo *= 1e-4;
            shrunk += 1;
        }
    }

    let (log_lo, log_hi) = (lo.ln(), hi.ln());
    let samples = ((log_hi - log_lo) / std::f64::consts::LN_10 * 20.0).ceil() as usize + 1;
    let step = (log_hi - log_lo) / (samples - 1) as f64;
    let (best, _) = (0..samples)
        .map(|i| (i, scaled((log_lo + step * i as f64).exp())))
        .fold(
            (0, f64::NEG_INFINITY),
            |acc, (i, v)| if v > acc.1 { (i, v) } else { acc },
        );
    let a = log_lo + step * best.saturating_sub(1) as f64;
    let b = log_lo + step * (best + 1).min(samples - 1) as f64;
    let (log_peak, peak) = golden_max(|x| scaled(x.exp()), a, b, 1e-14);
    let r_peak = log_peak.exp();

    // Away from the origin r²p² ≈ -M², so |f(lo)| sets the rounding level
    // of the peak value.
    let reference = scaled(lo).abs().max(f64::MIN_POSITIVE);
    if peak <= 1e-12 * reference {
        return Err(WkbError::NoBoundRegion {
            energy,
            angular_momentum: reference.sqrt(),
            circular_orbit: peak > -1e-10 * reference,
        });
    }

    let r2 = bisect_to_adjacent(scaled, r_peak, hi)?.x;
    let r1 = if problem.open_at_origin() {
        0.0
    } else {
        bisect_to_adjacent(scaled, lo, r_peak)?.x
    };
    if r2 - r1 <= 1e-10 * r2 {
        return Err(WkbError::NoBoundRegion {
            energy,
            angular_momentum: reference.sqrt(),
            circular_orbit: true,
        });
    }
    Ok((r1, r2))
}

/// `∫ sqrt(2m(E - V) - M²/r²) dr` between the turning points.
pub fn radial_action(
    potential: &Potential,
    ctx: &PhysicsContext,
    energy: f64,
    angular_momentum: f64,
) -> Result<PhaseIntegralResult> {
    action(
        &CentralProblem::new(*potential, *ctx, angular_momentum)?,
        energy,
    )
}

/// Phase integral of a generic problem.
///
/// With both turning points finite and positive, `r = r1 + (r2 - r1) sin²t`
/// turns the square-root zeros at both ends into regular endpoints for
/// Gauss–Legendre. Problems open at the origin may carry an `r^(-1/2)`
/// singularity there and go through tanh-sinh instead.
pub fn action<P: RadialProblem + ?Sized>(problem: &P, energy: f64) -> Result<PhaseIntegralResult> {
    let (r1, r2) = turning_points(problem, energy)?;
    let tol = QuadTolerance::new(ACTION_QUAD_REL_TOL, 1e-13 * problem.action_scale());
    let momentum = |r: f64| problem.squared_momentum(energy, r).max(0.0).sqrt();

    let est = if r1 == 0.0 {
        tanh_sinh(momentum, 0.0, r2, tol)?
    } else {
        let span = r2 - r1;
        // The integrand varies on the scale r1 near the inner turning point,
        // i.e. on t ~ sqrt(r1/span); wide wells need panels graded there.
        let mut breaks = vec![FRAC_PI_2];
        let mut t = FRAC_PI_2 / 4.0;
        let t_min = 0.25 * (r1 / span).sqrt();
        while t > t_min && breaks.len() < 80 {
            breaks.push(t);
            t *= 0.5;
        }
        breaks.push(0.0);
        breaks.reverse();
        graded_gauss_legendre(
            |t| {
                let (s, c) = t.sin_cos();
                let r = r1 + span * s * s;
                momentum(r) * 2.0 * span * s * c
            },
            &breaks,
            tol,
        )?
    };

    Ok(PhaseIntegralResult {
        value: est.value,
        turning_points: (r1, r2),
        quadrature_error: est.error,
        evaluations: est.evaluations,
    })
}

/// Action with the classically forbidden side continued by zero, which keeps
/// it monotone and defined below the well bottom.
fn action_or_zero<P: RadialProblem + ?Sized>(problem: &P, energy: f64) -> Result<f64> {
    match action(problem, energy) {
        Ok(r) => Ok(r.value),
        Err(WkbError::NoBoundRegion { .. }) => Ok(0.0),
        Err(e) => Err(e),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergySolution {
    pub energy: f64,
    /// `|I(E) - target|`.
    pub action_residual: f64,
}

/// Finds `E` with `I(E) = target` by geometric bracketing followed by
/// Brent's method. `residual_tol` is absolute, in action units.
pub fn solve_action<P: RadialProblem + ?Sized>(
    problem: &P,
    target: f64,
    residual_tol: f64,
) -> Result<EnergySolution> {
    let scale = problem.energy_scale();
    let failure: RefCell<Option<WkbError>> = RefCell::new(None);
    let g = |e: f64| match action_or_zero(problem, e) {
        Ok(v) => v - target,
        Err(err) => {
            failure.borrow_mut().get_or_insert(err);
            f64::NAN
        }
    };
    let take_failure = || failure.borrow_mut().take();

    let mut lo = match problem.well_bottom() {
        Some(bottom) => bottom,
        None => {
            let mut e = -scale;
            let mut steps = 0;
            while g(e) >= 0.0 {
                e *= 2.0;
                steps += 1;
                if steps > 2000 || !e.is_finite() {
                    return Err(WkbError::NoConvergence(
                        "could not bracket energy from below".into(),
                    ));
                }
            }
            e
        }
    };
    if let Some(e) = take_failure() {
        return Err(e);
    }

    let hi = match problem.threshold() {
        Some(threshold) => {
            let probe = threshold - 1e-12 * scale;
            let top = g(probe);
            if let Some(e) = take_failure() {
                return Err(e);
            }
            if top <= 0.0 {
                return Err(WkbError::NoBoundState {
                    n_r: 0,
                    angular_momentum: f64::NAN,
                    reason: format!(
                        "action just below threshold is {:.12e}, target is {target:.12e}",
                        top + target
                    ),
                });
            }
            let mut hi = lo.max(-scale).min(probe);
            let mut steps = 0;
            while g(hi) <= 0.0 {
                lo = hi;
                hi = threshold - 0.5 * (threshold - hi);
                steps += 1;
                if steps > 1100 {
                    return Err(WkbError::NoConvergence(
                        "could not bracket energy toward threshold".into(),
                    ));
                }
            }
            hi
        }
        None => {
            let mut step = scale;
            let mut hi = lo + step;
            let mut steps = 0;
            while g(hi) <= 0.0 {
                lo = hi;
                step *= 2.0;
                hi = lo + step;
                steps += 1;
                if steps > 2000 {
                    return Err(WkbError::NoConvergence(
                        "could not bracket energy from above".into(),
                    ));
                }
            }
            hi
        }
    };
    if let Some(e) = take_failure() {
        return Err(e);
    }

    let tol = Tolerance {
        residual: residual_tol,
        x_abs: 0.0,
        x_rel: 4.0 * f64::EPSILON,
        max_iter: 300,
    };
    let root = brent(g, lo, hi, tol);
    if let Some(e) = take_failure() {
        return Err(e);
    }
    let root = root?;
    Ok(EnergySolution {
        energy: root.x,
        action_residual: root.residual.abs(),
    })
}

fn bound_state_error(err: WkbError, n_r: u32, angular_momentum: f64) -> WkbError {
    match err {
        WkbError::NoBoundState { reason, .. } => WkbError::NoBoundState {
            n_r,
            angular_momentum,
            reason,
        },
        other => other,
    }
}

/// Energy whose radial action equals `π ħ (n_r + 1/2)`.
pub fn solve_energy(
    potential: &Potential,
    ctx: &PhysicsContext,
    n_r: u32,
    angular_momentum: f64,
) -> Result<f64> {
    solve_energy_detailed(potential, ctx, n_r, angular_momentum).map(|s| s.energy)
}

pub fn solve_energy_detailed(
    potential: &Potential,
    ctx: &PhysicsContext,
    n_r: u32,
    angular_momentum: f64,
) -> Result<EnergySolution> {
    let problem = CentralProblem::new(*potential, *ctx, angular_momentum)?;
    let target = PI * ctx.hbar * (n_r as f64 + 0.5);
    solve_action(&problem, target, ACTION_RESIDUAL_TOL * ctx.hbar)
        .map_err(|e| bound_state_error(e, n_r, angular_momentum))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub n_r: u32,
    pub l: u32,
    pub energy_wkb: f64,
    pub energy_analytic: Option<f64>,
    pub energy_oracle: Option<f64>,
    pub action_residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OmittedState {
    pub n_r: u32,
    pub l: u32,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub entries: Vec<SpectrumEntry>,
    pub omitted: Vec<OmittedState>,
}

/// Solves every `(n_r, l)` cell up to the given maxima. Cells without a
/// bound state are listed in `omitted`; solver failures abort the run.
/// Output is ordered by `(l, n_r)`.
pub fn spectrum(
    potential: &Potential,
    ctx: &PhysicsContext,
    n_r_max: u32,
    l_max: u32,
    mode: CentrifugalMode,
) -> Result<Spectrum> {
    let cells: Vec<(u32, u32)> = (0..=l_max)
        .flat_map(|l| (0..=n_r_max).map(move |n_r| (l, n_r)))
        .collect();

    let results: Vec<Result<std::result::Result<SpectrumEntry, OmittedState>>> = cells
        .par_iter()
        .map(|&(l, n_r)| {
            let big_m = mode.angular_momentum(l, ctx);
            match solve_energy_detailed(potential, ctx, n_r, big_m) {
                Ok(sol) => Ok(Ok(SpectrumEntry {
                    n_r,
                    l,
                    energy_wkb: sol.energy,
                    energy_analytic: oracle::reference_energy(potential, ctx, n_r, l),
                    energy_oracle: None,
                    action_residual: sol.action_residual,
                })),
                Err(e @ WkbError::NoBoundState { .. }) => Ok(Err(OmittedState {
                    n_r,
                    l,
                    reason: e.to_string(),
                })),
                Err(e) => Err(e),
            }
        })
        .collect();

    let mut entries = Vec::new();
    let mut omitted = Vec::new();
    for r in results {
        match r? {
            Ok(entry) => entries.push(entry),
            Err(missing) => omitted.push(missing),
        }
    }
    Ok(Spectrum { entries, omitted })
}
