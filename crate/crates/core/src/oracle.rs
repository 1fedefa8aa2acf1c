//! Reference values: closed-form spectra and a Numerov shooting solver for
//! the exact radial equation.
//!
//! The shooting solver uses the unmodified centrifugal term
//! `l(l + 1) ħ² / (2 m r²)`, so agreement with the Langer-mode WKB solver is
//! a genuine cross-check rather than the same computation twice.

use serde::Serialize;

use crate::error::{Result, WkbError};
use crate::potentials::{PhysicsContext, Potential};
use crate::radial::{self, CentralProblem};
use crate::roots::{brent, Tolerance};

/// Closed-form spectra.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Formula {
    /// `ω [2ħ(n_r + 1/2) + M]`
    Oscillator,
    /// `-α² m / (2 [(n_r + 1/2) ħ + M]²)`
    Coulomb,
    /// `-(1/(8 m r0²)) (2 m V0 r0² / N - N)²` with `N = (n_r + 1/2) ħ + M`.
    HulthenPrincipal,
    /// The same expression at integer `N = (n_r + 1) ħ`; `M` is ignored.
    HulthenExactS,
}

impl Formula {
    pub fn for_potential(potential: &Potential) -> Self {
        match potential {
            Potential::Oscillator { .. } => Self::Oscillator,
            Potential::Coulomb { .. } => Self::Coulomb,
            Potential::Hulthen { .. } => Self::HulthenPrincipal,
        }
    }
}

/// `N = (n_r + 1/2) ħ + M`, in action units.
pub fn principal_number(ctx: &PhysicsContext, n_r: u32, angular_momentum: f64) -> f64 {
    (n_r as f64 + 0.5) * ctx.hbar + angular_momentum
}

fn hulthen_principal(ctx: &PhysicsContext, v0: f64, r0: f64, principal: f64) -> Result<f64> {
    let strength = 2.0 * ctx.mass * v0 * r0 * r0;
    if principal * principal >= strength {
        return Err(WkbError::NoBoundState {
            n_r: 0,
            angular_momentum: f64::NAN,
            reason: format!(
                "N² = {:.12e} is not below 2 m V0 r0² = {strength:.12e}",
                principal * principal
            ),
        });
    }
    let inner = strength / principal - principal;
    Ok(-inner * inner / (8.0 * ctx.mass * r0 * r0))
}

pub fn analytic_energy(
    formula: Formula,
    potential: &Potential,
    ctx: &PhysicsContext,
    n_r: u32,
    angular_momentum: f64,
) -> Result<f64> {
    let n = n_r as f64;
    match (formula, *potential) {
        (Formula::Oscillator, Potential::Oscillator { omega }) => {
            Ok(omega * (2.0 * ctx.hbar * (n + 0.5) + angular_momentum))
        }
        (Formula::Coulomb, Potential::Coulomb { alpha }) => {
            let big_n = principal_number(ctx, n_r, angular_momentum);
            Ok(-0.5 * alpha * alpha * ctx.mass / (big_n * big_n))
        }
        (Formula::HulthenPrincipal, Potential::Hulthen { v0, r0 }) => {
            hulthen_principal(ctx, v0, r0, principal_number(ctx, n_r, angular_momentum))
        }
        (Formula::HulthenExactS, Potential::Hulthen { v0, r0 }) => {
            hulthen_exact_l0(n_r + 1, ctx, v0, r0)
        }
        (f, p) => Err(WkbError::Domain(format!(
            "formula {f:?} does not apply to {}",
            p.name()
        ))),
    }
}

/// Known exact s-wave Hulthén level with integer principal number `n`.
pub fn hulthen_exact_l0(n: u32, ctx: &PhysicsContext, v0: f64, r0: f64) -> Result<f64> {
    if n == 0 {
        return Err(WkbError::Domain("principal number must be positive".into()));
    }
    hulthen_principal(ctx, v0, r0, n as f64 * ctx.hbar).map_err(|e| match e {
        WkbError::NoBoundState { reason, .. } => WkbError::NoBoundState {
            n_r: n - 1,
            angular_momentum: 0.0,
            reason,
        },
        other => other,
    })
}

/// `ħ ω (2 n_r + l + 3/2)`.
pub fn oscillator_exact(omega: f64, ctx: &PhysicsContext, n_r: u32, l: u32) -> f64 {
    ctx.hbar * omega * (2.0 * n_r as f64 + l as f64 + 1.5)
}

/// `-α² m / (2 ħ² (n_r + l + 1)²)`.
pub fn coulomb_exact(alpha: f64, ctx: &PhysicsContext, n_r: u32, l: u32) -> f64 {
    let n = (n_r + l + 1) as f64;
    -alpha * alpha * ctx.mass / (2.0 * ctx.hbar * ctx.hbar * n * n)
}

/// Closed-form reference for cell `(n_r, l)` at `M = (l + 1/2) ħ`, or `None`
/// where the closed form has no bound state.
pub fn reference_energy(
    potential: &Potential,
    ctx: &PhysicsContext,
    n_r: u32,
    l: u32,
) -> Option<f64> {
    let big_m = (l as f64 + 0.5) * ctx.hbar;
    analytic_energy(
        Formula::for_potential(potential),
        potential,
        ctx,
        n_r,
        big_m,
    )
    .ok()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShootingConfig {
    pub r_min: f64,
    pub r_max: f64,
    pub steps: usize,
    /// Relative energy width at which node-count bisection hands over to
    /// matching refinement.
    pub node_tolerance: f64,
}

pub const DEFAULT_STEPS: usize = 20_000;

impl ShootingConfig {
    pub fn new(r_min: f64, r_max: f64, steps: usize, node_tolerance: f64) -> Result<Self> {
        if !(r_min > 0.0 && r_max > r_min && r_max.is_finite()) {
            return Err(WkbError::Domain(format!(
                "need 0 < r_min < r_max, got [{r_min}, {r_max}]"
            )));
        }
        if steps < 1000 {
            return Err(WkbError::Domain(format!(
                "need at least 1000 steps, got {steps}"
            )));
        }
        if !(node_tolerance > 0.0) {
            return Err(WkbError::Domain("node tolerance must be positive".into()));
        }
        Ok(Self {
            r_min,
            r_max,
            steps,
            node_tolerance,
        })
    }

    /// Grid covering state `(n_r, l)`: `r_max` is three times the outer
    /// turning point plus ten decay lengths, both estimated from the
    /// semiclassical level.
    pub fn for_state(
        potential: &Potential,
        ctx: &PhysicsContext,
        n_r: u32,
        l: u32,
    ) -> Result<Self> {
        let big_m = (l as f64 + 0.5) * ctx.hbar;
        let estimate = radial::solve_energy(potential, ctx, n_r, big_m).map_err(|e| {
            WkbError::OracleFailure(format!("cannot size grid for ({n_r}, {l}): {e}"))
        })?;
        let problem = CentralProblem::new(*potential, *ctx, big_m)?;
        let (_, outer) = radial::turning_points(&problem, estimate).map_err(|e| {
            WkbError::OracleFailure(format!("cannot size grid for ({n_r}, {l}): {e}"))
        })?;
        let length = potential.length_scale(ctx);
        let decay = match potential.threshold() {
            Some(t) => ctx.hbar / (2.0 * ctx.mass * (t - estimate)).sqrt(),
            None => length,
        };
        Self::new(
            1e-6 * length,
            3.0 * outer + 10.0 * decay,
            DEFAULT_STEPS,
            1e-6,
        )
    }

    pub fn with_steps(self, steps: usize) -> Result<Self> {
        Self::new(self.r_min, self.r_max, steps, self.node_tolerance)
    }

    fn step(&self) -> f64 {
        (self.r_max - self.r_min) / self.steps as f64
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShootingSolution {
    pub energy: f64,
    /// Interior sign changes of the matched solution.
    pub nodes: usize,
    /// Discrete log-derivative mismatch at the matching point.
    pub mismatch: f64,
    pub match_radius: f64,
}

/// Numerov grid for `u'' = k(r) u` with `k = w(r) - c E`.
struct Grid {
    r: Vec<f64>,
    /// `2 m V / ħ² + l(l+1)/r²`
    w: Vec<f64>,
    /// `2 m / ħ²`
    c: f64,
    h2_12: f64,
    start: (f64, f64),
}

const RESCALE_AT: f64 = 1e120;

impl Grid {
    fn new(potential: &Potential, ctx: &PhysicsContext, l: u32, cfg: &ShootingConfig) -> Self {
        let h = cfg.step();
        let n = cfg.steps + 1;
        let c = 2.0 * ctx.mass / (ctx.hbar * ctx.hbar);
        let ll = (l as f64) * (l as f64 + 1.0);
        let r: Vec<f64> = (0..n).map(|i| cfg.r_min + h * i as f64).collect();
        let w = r
            .iter()
            .map(|&ri| c * potential.value(ctx, ri) + ll / (ri * ri))
            .collect();

        // Regular solution r^(l+1) (1 + a r) with the cusp set by the
        // Coulomb-like strength at the origin.
        let a = -ctx.mass * potential.coulomb_strength_at_origin()
            / (ctx.hbar * ctx.hbar * (l as f64 + 1.0));
        let regular = |x: f64| x.powi(l as i32 + 1) * (1.0 + a * x);
        Self {
            start: (regular(r[0]), regular(r[1])),
            r,
            w,
            c,
            h2_12: h * h / 12.0,
        }
    }

    fn len(&self) -> usize {
        self.r.len()
    }

    #[inline]
    fn f(&self, i: usize, energy: f64) -> f64 {
        1.0 - self.h2_12 * (self.w[i] - self.c * energy)
    }

    /// Outward integration up to index `last`; returns values (rescaled to
    /// stay finite, so only ratios and signs are meaningful) and the
    /// number of sign changes.
    fn outward(&self, energy: f64, last: usize) -> (Vec<f64>, usize) {
        let mut u = Vec::with_capacity(last + 1);
        u.push(self.start.0);
        u.push(self.start.1);
        let mut nodes = 0;
        let (mut f_prev, mut f_cur) = (self.f(0, energy), self.f(1, energy));
        for i in 1..last {
            let f_next = self.f(i + 1, energy);
            let next = ((12.0 - 10.0 * f_cur) * u[i] - f_prev * u[i - 1]) / f_next;
            if next * u[i] < 0.0 {
                nodes += 1;
            }
            u.push(next);
            if next.abs() > RESCALE_AT {
                u.iter_mut().for_each(|x| *x /= RESCALE_AT);
            }
            f_prev = f_cur;
            f_cur = f_next;
        }
        (u, nodes)
    }

    /// Inward integration from `u(r_max) = 0` down to index `first`.
    /// Returned vector is indexed from `first`.
    fn inward(&self, energy: f64, first: usize) -> Vec<f64> {
        let n = self.len();
        let mut rev = Vec::with_capacity(n - first);
        rev.push(0.0);
        rev.push(1e-200);
        let (mut f_prev, mut f_cur) = (self.f(n - 1, energy), self.f(n - 2, energy));
        let mut i = n - 2;
        while i > first {
            let f_next = self.f(i - 1, energy);
            let k = rev.len();
            let next = ((12.0 - 10.0 * f_cur) * rev[k - 1] - f_prev * rev[k - 2]) / f_next;
            rev.push(next);
            if next.abs() > RESCALE_AT {
                rev.iter_mut().for_each(|x| *x /= RESCALE_AT);
            }
            f_prev = f_cur;
            f_cur = f_next;
            i -= 1;
        }
        rev.reverse();
        rev
    }

    fn node_count(&self, energy: f64) -> usize {
        self.outward(energy, self.len() - 1).1
    }

    /// Outermost classically allowed grid index, clamped away from the ends.
    fn match_index(&self, energy: f64) -> usize {
        let n = self.len();
        let turning = (0..n)
            .rev()
            .find(|&i| self.w[i] - self.c * energy < 0.0)
            .unwrap_or(n / 2);
        turning.clamp(2, n - 3)
    }

    /// `u_in(m+1)/u_in(m) - u_out(m+1)/u_out(m)`; zero when the two
    /// solutions are proportional.
    fn mismatch(&self, energy: f64, m: usize) -> (f64, usize) {
        let (out, _) = self.outward(energy, m + 1);
        let inw = self.inward(energy, m);
        let sign_changes = |v: &[f64]| v.windows(2).filter(|p| p[0] * p[1] < 0.0).count();
        let nodes = sign_changes(&out[..=m]) + sign_changes(&inw);
        (inw[1] / inw[0] - out[m + 1] / out[m], nodes)
    }
}

/// Eigenvalue of the exact radial equation with `n_r` interior nodes.
pub fn shooting_eigenvalue(
    potential: &Potential,
    ctx: &PhysicsContext,
    n_r: u32,
    l: u32,
    cfg: &ShootingConfig,
) -> Result<f64> {
    shoot(potential, ctx, n_r, l, cfg).map(|s| s.energy)
}

pub fn shoot(
    potential: &Potential,
    ctx: &PhysicsContext,
    n_r: u32,
    l: u32,
    cfg: &ShootingConfig,
) -> Result<ShootingSolution> {
    let grid = Grid::new(potential, ctx, l, cfg);
    let wanted = n_r as usize;
    let to_energy = 1.0 / grid.c;

    // Below -6/(c h²) the Numerov factor f turns negative in the forbidden
    // region and the recursion oscillates in sign, producing false nodes.
    let stable_floor = -6.0 / (grid.h2_12 * 12.0) * to_energy;
    let mut lo =
        (grid.w.iter().copied().fold(f64::INFINITY, f64::min) * to_energy).max(stable_floor);
    let mut hi = match potential.threshold() {
        Some(t) => t,
        None => grid.w.iter().copied().fold(f64::NEG_INFINITY, f64::max) * to_energy,
    };
    let top_count = grid.node_count(hi);
    if top_count <= wanted {
        return Err(WkbError::OracleFailure(format!(
            "grid [{}, {}] holds only {top_count} states below E = {hi}; need {}",
            cfg.r_min,
            cfg.r_max,
            wanted + 1
        )));
    }
    if grid.node_count(lo) > wanted {
        return Err(WkbError::OracleFailure(format!(
            "node count already above {wanted} at the well bottom"
        )));
    }

    // Node-count bisection: count(E) is the number of box eigenvalues below E.
    let mut iterations = 0;
    while hi - lo > cfg.node_tolerance * lo.abs().max(hi.abs()) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if grid.node_count(mid) > wanted {
            hi = mid;
        } else {
            lo = mid;
        }
        iterations += 1;
        if iterations > 400 {
            return Err(WkbError::OracleFailure(format!(
                "node bisection stalled in [{lo}, {hi}]"
            )));
        }
    }

    let m = grid.match_index(0.5 * (lo + hi));
    let residual = |e: f64| grid.mismatch(e, m).0;
    let tol = Tolerance {
        residual: 0.0,
        x_abs: 0.0,
        x_rel: 1e-14,
        max_iter: 200,
    };
    let energy = match brent(residual, lo, hi, tol) {
        Ok(root) => root.x,
        Err(_) => {
            // Mismatch has a pole inside the bracket; finish by bisection.
            while hi - lo > 4.0 * f64::EPSILON * lo.abs().max(hi.abs()) {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if grid.node_count(mid) > wanted {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        }
    };

    let (mismatch, nodes) = grid.mismatch(energy, m);
    if nodes != wanted {
        return Err(WkbError::OracleFailure(format!(
            "converged solution at E = {energy} has {nodes} nodes, expected {wanted}"
        )));
    }
    Ok(ShootingSolution {
        energy,
        nodes,
        mismatch,
        match_radius: grid.r[m],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit() -> PhysicsContext {
        PhysicsContext::default()
    }

    #[test]
    fn analytic_examples() {
        let c = unit();
        let osc = Potential::oscillator(1.0).unwrap();
        assert_eq!(
            analytic_energy(Formula::Oscillator, &osc, &c, 0, 0.5).unwrap(),
            1.5
        );
        let coul = Potential::coulomb(1.0).unwrap();
        assert_eq!(
            analytic_energy(Formula::Coulomb, &coul, &c, 0, 0.5).unwrap(),
            -0.5
        );
        let h = Potential::hulthen(12.5, 1.0).unwrap();
        assert_eq!(
            analytic_energy(Formula::HulthenPrincipal, &h, &c, 1, 0.5).unwrap(),
            -13.78125
        );
        assert!(analytic_energy(Formula::Coulomb, &osc, &c, 0, 0.5).is_err());
    }

    #[test]
    fn hulthen_exact_examples() {
        let c = unit();
        assert_eq!(hulthen_exact_l0(1, &c, 12.5, 1.0).unwrap(), -72.0);
        assert_eq!(hulthen_exact_l0(4, &c, 12.5, 1.0).unwrap(), -0.6328125);
        assert!(matches!(
            hulthen_exact_l0(5, &c, 12.5, 1.0),
            Err(WkbError::NoBoundState { .. })
        ));
    }

    #[test]
    fn principal_formula_reduces_to_integer_form_at_minimal_momentum() {
        let c = PhysicsContext::new(0.5, 2.0).unwrap();
        let h = Potential::hulthen(20.0, 1.3).unwrap();
        for n_r in 0..6 {
            let a = analytic_energy(Formula::HulthenPrincipal, &h, &c, n_r, 0.5 * c.hbar);
            let b = hulthen_exact_l0(n_r + 1, &c, 20.0, 1.3);
            match (a, b) {
                (Ok(a), Ok(b)) => assert_eq!(a, b),
                (Err(_), Err(_)) => {}
                other => panic!("mismatch {other:?}"),
            }
        }
    }

    #[test]
    fn textbook_forms_agree_with_langer_formulas() {
        let c = PhysicsContext::new(0.7, 1.3).unwrap();
        for n_r in 0..4 {
            for l in 0..4 {
                let big_m = (l as f64 + 0.5) * c.hbar;
                let osc = Potential::oscillator(2.0).unwrap();
                assert_relative_eq!(
                    analytic_energy(Formula::Oscillator, &osc, &c, n_r, big_m).unwrap(),
                    oscillator_exact(2.0, &c, n_r, l),
                    max_relative = 1e-14
                );
                let coul = Potential::coulomb(0.5).unwrap();
                assert_relative_eq!(
                    analytic_energy(Formula::Coulomb, &coul, &c, n_r, big_m).unwrap(),
                    coulomb_exact(0.5, &c, n_r, l),
                    max_relative = 1e-14
                );
            }
        }
    }

    #[test]
    fn config_validation() {
        assert!(ShootingConfig::new(0.0, 1.0, 2000, 1e-6).is_err());
        assert!(ShootingConfig::new(1.0, 0.5, 2000, 1e-6).is_err());
        assert!(ShootingConfig::new(1e-6, 10.0, 999, 1e-6).is_err());
    }

    #[test]
    fn shooting_examples() {
        let c = unit();
        let osc = Potential::oscillator(1.0).unwrap();
        let cfg = ShootingConfig::for_state(&osc, &c, 0, 0).unwrap();
        assert_relative_eq!(
            shooting_eigenvalue(&osc, &c, 0, 0, &cfg).unwrap(),
            1.5,
            max_relative = 1e-6
        );

        let coul = Potential::coulomb(1.0).unwrap();
        let cfg = ShootingConfig::for_state(&coul, &c, 0, 0).unwrap();
        assert_relative_eq!(
            shooting_eigenvalue(&coul, &c, 0, 0, &cfg).unwrap(),
            -0.5,
            max_relative = 1e-6
        );

        let h = Potential::hulthen(12.5, 1.0).unwrap();
        let cfg = ShootingConfig::for_state(&h, &c, 0, 0).unwrap();
        assert_relative_eq!(
            shooting_eigenvalue(&h, &c, 0, 0, &cfg).unwrap(),
            -72.0,
            max_relative = 1e-4
        );
    }

    #[test]
    fn shooting_reports_node_count() {
        let c = unit();
        let osc = Potential::oscillator(1.0).unwrap();
        for n_r in 0..4 {
            let cfg = ShootingConfig::for_state(&osc, &c, n_r, 1).unwrap();
            let sol = shoot(&osc, &c, n_r, 1, &cfg).unwrap();
            assert_eq!(sol.nodes, n_r as usize);
        }
    }

    #[test]
    fn too_small_grid_is_oracle_failure() {
        let c = unit();
        let coul = Potential::coulomb(1.0).unwrap();
        let cfg = ShootingConfig::new(1e-6, 3.0, 2000, 1e-6).unwrap();
        assert!(matches!(
            shoot(&coul, &c, 3, 0, &cfg),
            Err(WkbError::OracleFailure(_))
        ));
    }
}
