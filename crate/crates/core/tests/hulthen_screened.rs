//! The Hulthén closed form is reproduced by the phase integral once the
//! centrifugal term `M²/r²` is replaced by its screened counterpart
//! `M² / (4 r0² sinh²(r / 2 r0))`, which agrees with it as `r → 0`. With
//! the bare `1/r²` the integral differs, and the deviation grows with `M`.

use approx::assert_relative_eq;
use wkb::oracle::{analytic_energy, Formula};
use wkb::radial::{solve_action, solve_energy, RadialProblem};
use wkb::{PhysicsContext, Potential, WkbError};

struct Screened {
    v0: f64,
    r0: f64,
    ctx: PhysicsContext,
    angular_momentum: f64,
}

impl RadialProblem for Screened {
    fn squared_momentum(&self, energy: f64, r: f64) -> f64 {
        let x = r / self.r0;
        let potential = -self.v0 / x.exp_m1();
        let s = 2.0 * self.r0 * (0.5 * x).sinh();
        2.0 * self.ctx.mass * (energy - potential) - self.angular_momentum.powi(2) / (s * s)
    }

    fn length_scale(&self) -> f64 {
        self.r0
    }

    fn energy_scale(&self) -> f64 {
        self.v0
    }

    fn action_scale(&self) -> f64 {
        self.ctx.hbar
    }

    fn threshold(&self) -> Option<f64> {
        Some(0.0)
    }

    fn open_at_origin(&self) -> bool {
        false
    }

    fn well_bottom(&self) -> Option<f64> {
        None
    }
}

fn screened_energy(
    v0: f64,
    r0: f64,
    ctx: PhysicsContext,
    n_r: u32,
    l: u32,
) -> Result<f64, WkbError> {
    let problem = Screened {
        v0,
        r0,
        ctx,
        angular_momentum: (l as f64 + 0.5) * ctx.hbar,
    };
    let target = std::f64::consts::PI * ctx.hbar * (n_r as f64 + 0.5);
    solve_action(&problem, target, 1e-12 * ctx.hbar).map(|s| s.energy)
}

#[test]
fn screened_centrifugal_term_reproduces_closed_form() {
    for (v0, r0) in [(12.5, 1.0), (2.0, 2.0)] {
        let ctx = PhysicsContext::default();
        let p = Potential::hulthen(v0, r0).unwrap();
        let mut checked = 0;
        for l in 0..=4 {
            for n_r in 0..=4 {
                let big_m = (l as f64 + 0.5) * ctx.hbar;
                let Ok(closed) = analytic_energy(Formula::HulthenPrincipal, &p, &ctx, n_r, big_m)
                else {
                    continue;
                };
                let e = screened_energy(v0, r0, ctx, n_r, l).unwrap();
                assert_relative_eq!(e, closed, max_relative = 1e-10);
                checked += 1;
            }
        }
        assert!(checked >= 6);
    }
}

#[test]
fn bare_centrifugal_term_deviates_increasingly_with_l() {
    let ctx = PhysicsContext::default();
    let p = Potential::hulthen(12.5, 1.0).unwrap();
    let deviation = |l: u32| {
        let big_m = (l as f64 + 0.5) * ctx.hbar;
        let e = solve_energy(&p, &ctx, 0, big_m).unwrap();
        let closed = analytic_energy(Formula::HulthenPrincipal, &p, &ctx, 0, big_m).unwrap();
        ((e - closed) / closed).abs()
    };
    let devs: Vec<f64> = (0..=3).map(deviation).collect();
    assert!(devs[0] > 1e-5, "{devs:?}");
    assert!(devs.windows(2).all(|w| w[1] > w[0]), "{devs:?}");
}
