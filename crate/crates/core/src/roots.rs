//! Bracketing root finders and a golden-section extremum search.

use crate::error::{Result, WkbError};

#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    /// Stop once `|f(x)|` falls to this level.
    pub residual: f64,
    /// Absolute width floor on the bracket.
    pub x_abs: f64,
    /// Relative width floor on the bracket.
    pub x_rel: f64,
    pub max_iter: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            residual: 0.0,
            x_abs: 0.0,
            x_rel: 4.0 * f64::EPSILON,
            max_iter: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub residual: f64,
    pub iterations: usize,
}

/// Brent's method: inverse quadratic interpolation and secant steps,
/// falling back to bisection whenever the interpolated step is not safe.
pub fn brent<F>(mut f: F, a: f64, b: f64, tol: Tolerance) -> Result<Root>
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(Root {
            x: a,
            residual: 0.0,
            iterations: 0,
        });
    }
    if fb == 0.0 {
        return Ok(Root {
            x: b,
            residual: 0.0,
            iterations: 0,
        });
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(WkbError::NotBracketed { lo: a, hi: b });
    }

    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;

    for iter in 1..=tol.max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }

        let xtol = 0.5 * (tol.x_abs + tol.x_rel * b.abs()).max(f64::MIN_POSITIVE);
        let half = 0.5 * (c - b);
        if fb.abs() <= tol.residual || half.abs() <= xtol || fb == 0.0 {
            return Ok(Root {
                x: b,
                residual: fb,
                iterations: iter,
            });
        }

        if e.abs() >= xtol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * half * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * half * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let bound1 = 3.0 * half * q - (xtol * q).abs();
            let bound2 = (e * q).abs();
            if 2.0 * p < bound1.min(bound2) {
                e = d;
                d = p / q;
            } else {
                d = half;
                e = d;
            }
        } else {
            d = half;
            e = d;
        }

        a = b;
        fa = fb;
        b += if d.abs() > xtol {
            d
        } else {
            xtol.copysign(half)
        };
        fb = f(b);
        if !fb.is_finite() {
            return Err(WkbError::NoConvergence(format!(
                "non-finite function value at x = {b}"
            )));
        }
    }

    Err(WkbError::NoConvergence(format!(
        "brent exhausted {} iterations near x = {b}",
        tol.max_iter
    )))
}

/// Bisects a sign change down to adjacent floating-point numbers and returns
/// whichever endpoint has the smaller `|f|`.
pub fn bisect_to_adjacent<F>(mut f: F, lo: f64, hi: f64) -> Result<Root>
where
    F: FnMut(f64) -> f64,
{
    let (mut lo, mut hi) = (lo, hi);
    let mut flo = f(lo);
    let mut fhi = f(hi);
    if flo == 0.0 {
        return Ok(Root {
            x: lo,
            residual: 0.0,
            iterations: 0,
        });
    }
    if fhi == 0.0 {
        return Ok(Root {
            x: hi,
            residual: 0.0,
            iterations: 0,
        });
    }
    if flo.signum() == fhi.signum() {
        return Err(WkbError::NotBracketed { lo, hi });
    }

    let mut iterations = 0;
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo.min(hi) || mid >= lo.max(hi) || iterations > 2200 {
            break;
        }
        iterations += 1;
        let fmid = f(mid);
        if fmid == 0.0 {
            return Ok(Root {
                x: mid,
                residual: 0.0,
                iterations,
            });
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
            fhi = fmid;
        }
    }

    let (x, residual) = if flo.abs() <= fhi.abs() {
        (lo, flo)
    } else {
        (hi, fhi)
    };
    Ok(Root {
        x,
        residual,
        iterations,
    })
}

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for the maximum of a unimodal function on `[a, b]`.
/// Returns `(x, f(x))`.
pub fn golden_max<F>(mut f: F, a: f64, b: f64, x_tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (a.min(b), a.max(b));
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);

    for _ in 0..300 {
        if (b - a).abs() <= x_tol {
            break;
        }
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        }
    }

    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}
