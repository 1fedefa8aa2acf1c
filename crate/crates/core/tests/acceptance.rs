//! Acceptance criteria, one test each. Every test prints a single
//! `criterion N ... PASS|FAIL` line before asserting.

use std::cell::Cell;
use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use wkb::angular::{angular_phase_integral, ground_state_angular, solve_angular_momentum};
use wkb::oracle::{
    analytic_energy, coulomb_exact, hulthen_exact_l0, oscillator_exact, shooting_eigenvalue,
    Formula, ShootingConfig,
};
use wkb::radial::{solve_energy, CentrifugalMode};
use wkb::{PhysicsContext, Potential, WkbError};

fn report(n: u32, name: &str, pass: bool, detail: String) {
    println!(
        "criterion {n:>2} {name}: {} ({detail})",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {n} {name} failed: {detail}");
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn unit() -> PhysicsContext {
    PhysicsContext::default()
}

fn langer(l: u32, ctx: &PhysicsContext) -> f64 {
    CentrifugalMode::Langer.angular_momentum(l, ctx)
}

#[test]
fn criterion_01_oscillator_exactness() {
    let ctx = unit();
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut count = 0;
    for omega in [0.5, 1.0, 2.0] {
        let p = Potential::oscillator(omega).unwrap();
        for l in 0..=5 {
            for n_r in 0..=5 {
                let e = solve_energy(&p, &ctx, n_r, langer(l, &ctx)).unwrap();
                let exact = ctx.hbar * omega * (2.0 * n_r as f64 + l as f64 + 1.5);
                worst = worst.max(rel(e, exact));
                count += 1;
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        1,
        "oscillator exactness",
        worst <= 1e-8 && elapsed < 2.0,
        format!("{count} levels, max rel err {worst:.3e}, {elapsed:.3} s"),
    );
}

#[test]
fn criterion_02_coulomb_exactness() {
    let ctx = unit();
    let mut worst = 0.0f64;
    let mut count = 0;
    for alpha in [0.5, 1.0] {
        let p = Potential::coulomb(alpha).unwrap();
        for l in 0..=5 {
            for n_r in 0..=5 {
                let e = solve_energy(&p, &ctx, n_r, langer(l, &ctx)).unwrap();
                let n = (n_r + l + 1) as f64;
                let exact = -alpha * alpha * ctx.mass / (2.0 * ctx.hbar * ctx.hbar * n * n);
                worst = worst.max(rel(e, exact));
                count += 1;
            }
        }
    }
    report(
        2,
        "coulomb exactness",
        worst <= 1e-8,
        format!("{count} levels, max rel err {worst:.3e}"),
    );
}

#[test]
fn criterion_03_ground_state_decomposition() {
    let mut worst = 0.0f64;
    for (hbar, mass) in [(1.0, 1.0), (0.5, 2.0), (2.0, 0.7)] {
        let ctx = PhysicsContext::new(hbar, mass).unwrap();
        let m0 = solve_angular_momentum(0, 0, &ctx).unwrap();
        let omega = 1.3;
        let e_osc = solve_energy(&Potential::oscillator(omega).unwrap(), &ctx, 0, m0).unwrap();
        worst = worst.max(rel(e_osc, 1.5 * hbar * omega));
        // E0 = omega (hbar + M0)
        worst = worst.max(rel(e_osc, omega * (hbar + m0)));
        let alpha = 0.8;
        let e_coul = solve_energy(&Potential::coulomb(alpha).unwrap(), &ctx, 0, m0).unwrap();
        worst = worst.max(rel(e_coul, -0.5 * alpha * alpha * mass / (hbar * hbar)));
        // E0 = -α² m (ħ/2 + M0)^(-2) / 2
        worst = worst.max(rel(
            e_coul,
            -0.5 * alpha * alpha * mass / (0.5 * hbar + m0).powi(2),
        ));
    }
    report(
        3,
        "ground-state decomposition",
        worst <= 1e-8,
        format!("max rel err {worst:.3e}"),
    );
}

#[test]
fn criterion_04_hulthen_closed_form() {
    let mut worst = 0.0f64;
    let mut worst_at = (0.0, 0.0, 0, 0);
    let mut count_mismatch = Vec::new();
    let mut bound = 0;
    for (v0, r0) in [(12.5, 1.0), (2.0, 2.0)] {
        let ctx = unit();
        let p = Potential::hulthen(v0, r0).unwrap();
        let strength = 2.0 * ctx.mass * v0 * r0 * r0;
        for l in 0..=8u32 {
            for n_r in 0..=8u32 {
                let big_m = langer(l, &ctx);
                let principal = (n_r as f64 + 0.5) * ctx.hbar + big_m;
                let expected_bound = principal * principal < strength;
                match solve_energy(&p, &ctx, n_r, big_m) {
                    Ok(e) => {
                        bound += 1;
                        if !expected_bound {
                            count_mismatch.push((v0, r0, n_r, l));
                            continue;
                        }
                        let closed =
                            analytic_energy(Formula::HulthenPrincipal, &p, &ctx, n_r, big_m)
                                .unwrap();
                        if rel(e, closed) > worst {
                            worst = rel(e, closed);
                            worst_at = (v0, r0, n_r, l);
                        }
                    }
                    Err(WkbError::NoBoundState { .. }) => {
                        if expected_bound {
                            count_mismatch.push((v0, r0, n_r, l));
                        }
                    }
                    Err(e) => panic!("solver failure at V0 = {v0}, r0 = {r0}, ({n_r}, {l}): {e}"),
                }
            }
        }
    }
    report(
        4,
        "hulthen closed form",
        worst <= 1e-6 && count_mismatch.is_empty(),
        format!(
            "{bound} bound levels, count mismatches {count_mismatch:?}, max rel err {worst:.3e} at (V0, r0, n_r, l) = {worst_at:?}"
        ),
    );
}

#[test]
fn criterion_05_hulthen_s_wave_exactness() {
    let ctx = unit();
    let (v0, r0) = (12.5, 1.0);
    let p = Potential::hulthen(v0, r0).unwrap();

    let mut identity_ok = true;
    for n_r in 0..10 {
        let a = analytic_energy(Formula::HulthenPrincipal, &p, &ctx, n_r, 0.5 * ctx.hbar);
        let b = hulthen_exact_l0(n_r + 1, &ctx, v0, r0);
        identity_ok &= match (a, b) {
            (Ok(a), Ok(b)) => a == b,
            (Err(_), Err(_)) => true,
            _ => false,
        };
    }

    let mut worst = 0.0f64;
    let mut errors = Vec::new();
    for n_r in 0..=3 {
        let wkb = solve_energy(&p, &ctx, n_r, langer(0, &ctx)).unwrap();
        let cfg = ShootingConfig::for_state(&p, &ctx, n_r, 0).unwrap();
        let shot = shooting_eigenvalue(&p, &ctx, n_r, 0, &cfg).unwrap();
        errors.push(format!("{:.2e}", rel(wkb, shot)));
        worst = worst.max(rel(wkb, shot));
    }
    report(
        5,
        "hulthen l = 0 exactness",
        identity_ok && worst <= 1e-4,
        format!(
            "identity exact: {identity_ok}, WKB vs shooting rel err for n_r = 0..3: [{}]",
            errors.join(", ")
        ),
    );
}

#[test]
fn criterion_06_angular_quantization() {
    let mut worst_m = 0.0f64;
    for hbar in [1.0, 0.25] {
        let ctx = PhysicsContext::new(hbar, 1.0).unwrap();
        for n_theta in 0..=10u32 {
            for m in -10..=10i32 {
                let big_m = solve_angular_momentum(n_theta, m, &ctx).unwrap();
                let expected = (m.unsigned_abs() as f64 + n_theta as f64 + 0.5) * hbar;
                worst_m = worst_m.max((big_m - expected).abs() / hbar);
            }
        }
    }

    let mut runner = TestRunner::new_with_rng(
        Config {
            cases: 1000,
            ..Config::default()
        },
        TestRng::deterministic_rng(RngAlgorithm::ChaCha),
    );
    let worst_i = Cell::new(0.0f64);
    let pairs = Cell::new(0usize);
    let strategy = (1e-3f64..50.0, 0.0f64..1.0, any::<bool>());
    let result = runner.run(&strategy, |(big_m, frac, neg)| {
        let m_z = if neg { -frac * big_m } else { frac * big_m };
        let value = angular_phase_integral(big_m, m_z).unwrap().value;
        let expected = PI * (big_m - m_z.abs());
        let err = if expected == 0.0 {
            value.abs()
        } else {
            rel(value, expected)
        };
        worst_i.set(worst_i.get().max(err));
        pairs.set(pairs.get() + 1);
        prop_assert!(
            err <= 1e-9,
            "M = {big_m}, Mz = {m_z}: {value} vs {expected}"
        );
        Ok(())
    });
    report(
        6,
        "angular quantization",
        worst_m <= 1e-9 && result.is_ok(),
        format!(
            "max |M - (|m|+n+1/2)ħ|/ħ {worst_m:.3e}; {} integral pairs, max rel err {:.3e}",
            pairs.get(),
            worst_i.get()
        ),
    );
}

#[test]
fn criterion_07_minimal_angular_momentum() {
    let ctx = unit();
    let mut best = (f64::INFINITY, 0, 0);
    for n_theta in 0..=6u32 {
        for m in -6..=6i32 {
            let big_m = solve_angular_momentum(n_theta, m, &ctx).unwrap();
            if big_m < best.0 {
                best = (big_m, n_theta, m);
            }
        }
    }
    let min_ok = (best.0 - 0.5 * ctx.hbar).abs() <= 1e-9 && best.1 == 0 && best.2 == 0;

    let samples = 100_000;
    let values: Vec<f64> = (0..samples)
        .map(|i| ground_state_angular(PI * i as f64 / samples as f64).unwrap())
        .collect();
    let no_node = values.iter().all(|&v| v > 0.0);
    report(
        7,
        "minimal angular momentum",
        min_ok && no_node,
        format!(
            "min M = {:.12} at (n_theta, m) = ({}, {}); ground state positive on [0, π): {no_node}",
            best.0, best.1, best.2
        ),
    );
}

#[test]
fn criterion_08_oracle_convergence() {
    let ctx = unit();
    let osc = Potential::oscillator(1.0).unwrap();
    let coul = Potential::coulomb(1.0).unwrap();

    let mut ratios = Vec::new();
    for (p, exact) in [(osc, 1.5), (coul, -0.5)] {
        let base = ShootingConfig::for_state(&p, &ctx, 0, 0).unwrap();
        let coarse = base.with_steps(1000).unwrap();
        let fine = base.with_steps(2000).unwrap();
        let e1 = (shooting_eigenvalue(&p, &ctx, 0, 0, &coarse).unwrap() - exact).abs();
        let e2 = (shooting_eigenvalue(&p, &ctx, 0, 0, &fine).unwrap() - exact).abs();
        ratios.push(e1 / e2);
    }

    let mut worst = 0.0f64;
    for l in 0..=3 {
        for n_r in 0..=3 {
            for (p, exact) in [
                (osc, oscillator_exact(1.0, &ctx, n_r, l)),
                (coul, coulomb_exact(1.0, &ctx, n_r, l)),
            ] {
                let cfg = ShootingConfig::for_state(&p, &ctx, n_r, l).unwrap();
                let e = shooting_eigenvalue(&p, &ctx, n_r, l, &cfg).unwrap();
                worst = worst.max(rel(e, exact));
            }
        }
    }
    report(
        8,
        "oracle convergence",
        ratios.iter().all(|&r| r >= 8.0) && worst <= 1e-6,
        format!("error ratios on halving (oscillator, coulomb) {ratios:.2?}; max rel err vs closed forms {worst:.3e}"),
    );
}

#[test]
fn criterion_09_langer_necessity() {
    let ctx = unit();
    let p = Potential::coulomb(1.0).unwrap();
    let naive = solve_energy(
        &p,
        &ctx,
        0,
        CentrifugalMode::Naive.angular_momentum(0, &ctx),
    )
    .unwrap();
    let exact = -0.5;
    // frozen regression value of the naive ground state
    let snapshot = -2.0;
    let deviation = rel(naive, exact);
    report(
        9,
        "langer necessity",
        deviation > 0.01 && rel(naive, snapshot) <= 1e-10,
        format!(
            "naive E0 = {naive:.12}, deviation from exact {:.1}%",
            100.0 * deviation
        ),
    );
}

#[test]
fn criterion_10_determinism() {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_wkb"))
            .args([
                "compare",
                "--potential",
                "hulthen",
                "--v0",
                "12.5",
                "--r0",
                "1",
            ])
            .args(["--nr-max", "3", "--l-max", "3", "--format", "csv"])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    let same =
        a.status.success() && b.status.success() && a.stdout == b.stdout && !a.stdout.is_empty();
    report(
        10,
        "determinism",
        same,
        format!("{} bytes per run", a.stdout.len()),
    );
}
