//! Gauss–Legendre rules with order doubling, graded composite panels, and
//! double-exponential (tanh-sinh) quadrature for endpoint singularities.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use crate::error::{Result, WkbError};

pub const MIN_ORDER: usize = 16;
pub const MAX_ORDER: usize = 4096;
const LEVELS: usize = 9; // 16 << 8 == 4096

/// Nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Computes the n-point rule by Newton iteration on P_n from the
    /// Tricomi initial guesses.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "quadrature order must be positive");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let nf = n as f64;
        let half = n.div_ceil(2);

        for i in 0..half {
            let mut x = (PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() <= 1e-16 * x.abs().max(1.0) {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[half - 1] = 0.0;
        }

        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    /// Applies the rule on `[a, b]`.
    pub fn integrate<F>(&self, mut f: F, a: f64, b: f64) -> f64
    where
        F: FnMut(f64) -> f64,
    {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let sum: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum();
        sum * half
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Cached rule of order `MIN_ORDER << level`.
fn rule(level: usize) -> &'static GaussLegendre {
    static RULES: [OnceLock<GaussLegendre>; LEVELS] = [const { OnceLock::new() }; LEVELS];
    RULES[level].get_or_init(|| GaussLegendre::new(MIN_ORDER << level))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    /// Difference between the last two refinement levels.
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadTolerance {
    pub rel: f64,
    pub abs: f64,
}

impl QuadTolerance {
    pub fn new(rel: f64, abs: f64) -> Self {
        Self { rel, abs }
    }

    fn met(&self, value: f64, error: f64) -> bool {
        error <= self.abs.max(self.rel * value.abs())
    }
}

/// Gauss–Legendre on `[a, b]`, doubling the order from 16 until two
/// successive values agree.
pub fn gauss_legendre<F>(f: F, a: f64, b: f64, tol: QuadTolerance) -> Result<Estimate>
where
    F: FnMut(f64) -> f64,
{
    graded_gauss_legendre(f, &[a, b], tol)
}

/// Composite Gauss–Legendre over the panels delimited by `breaks`, doubling
/// the per-panel order until two successive totals agree.
pub fn graded_gauss_legendre<F>(mut f: F, breaks: &[f64], tol: QuadTolerance) -> Result<Estimate>
where
    F: FnMut(f64) -> f64,
{
    assert!(breaks.len() >= 2, "need at least one panel");
    let mut evaluations = 0;
    let mut previous: Option<f64> = None;
    let mut last_error = f64::INFINITY;

    for level in 0..LEVELS {
        let gl = rule(level);
        let value: f64 = breaks
            .windows(2)
            .map(|w| gl.integrate(&mut f, w[0], w[1]))
            .sum();
        evaluations += gl.order() * (breaks.len() - 1);
        if !value.is_finite() {
            return Err(WkbError::NoConvergence(format!(
                "non-finite quadrature value at order {}",
                gl.order()
            )));
        }
        if let Some(prev) = previous {
            last_error = (value - prev).abs();
            if tol.met(value, last_error) {
                return Ok(Estimate {
                    value,
                    error: last_error,
                    evaluations,
                });
            }
        }
        previous = Some(value);
    }

    Err(WkbError::NoConvergence(format!(
        "Gauss-Legendre did not converge by order {MAX_ORDER} (last difference {last_error:e})"
    )))
}

/// Tanh-sinh quadrature on `[a, b]`; integrable endpoint singularities are
/// handled because the abscissae never reach the endpoints. Each side is
/// sampled until its abscissae become indistinguishable from the endpoint,
/// so a singularity at a nonzero endpoint is only resolved down to that
/// floating-point spacing.
pub fn tanh_sinh<F>(mut f: F, a: f64, b: f64, tol: QuadTolerance) -> Result<Estimate>
where
    F: FnMut(f64) -> f64,
{
    let width = b - a;
    let mut evaluations = 0;
    let mut previous: Option<f64> = None;
    let mut last_error = f64::INFINITY;

    for level in 0..=12 {
        let h = 0.5f64.powi(level);
        let mut sum = 0.0;
        let mut j = 0usize;
        let (mut left, mut right) = (true, true);
        while left || right {
            let t = j as f64 * h;
            let u = FRAC_PI_2 * t.sinh();
            // s is the fractional distance of the abscissa from the nearer endpoint.
            let s = 1.0 / (1.0 + (2.0 * u).exp());
            let offset = width * s;
            let w = width * 2.0 * s * (1.0 - s) * FRAC_PI_2 * t.cosh();
            if j == 0 {
                sum += w * f(a + 0.5 * width);
                evaluations += 1;
            } else {
                left = left && offset > 0.0 && a + offset != a;
                right = right && offset > 0.0 && b - offset != b;
                if left {
                    sum += w * f(a + offset);
                    evaluations += 1;
                }
                if right {
                    sum += w * f(b - offset);
                    evaluations += 1;
                }
            }
            j += 1;
        }
        let value = h * sum;
        if !value.is_finite() {
            return Err(WkbError::NoConvergence("non-finite tanh-sinh sum".into()));
        }
        if let Some(prev) = previous {
            last_error = (value - prev).abs();
            if level >= 3 && tol.met(value, last_error) {
                return Ok(Estimate {
                    value,
                    error: last_error,
                    evaluations,
                });
            }
        }
        previous = Some(value);
    }

    Err(WkbError::NoConvergence(format!(
        "tanh-sinh did not converge (last difference {last_error:e})"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rule_integrates_polynomials_exactly() {
        let gl = GaussLegendre::new(5);
        // degree 9 is exact for 5 points
        let v = gl.integrate(|x| x.powi(8) + x.powi(9) + 1.0, -1.0, 1.0);
        assert_relative_eq!(v, 2.0 / 9.0 + 2.0, max_relative = 1e-14);
        let w: f64 = gl.weights.iter().sum();
        assert_relative_eq!(w, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn largest_rule_weights_sum_to_two() {
        let gl = rule(LEVELS - 1);
        assert_eq!(gl.order(), MAX_ORDER);
        let w: f64 = gl.weights.iter().sum();
        assert_relative_eq!(w, 2.0, max_relative = 1e-12);
        assert!(gl.nodes.windows(2).all(|p| p[0] < p[1]));
    }

    #[test]
    fn doubling_converges_on_smooth_integrand() {
        let est = gauss_legendre(|x| x.exp(), 0.0, 1.0, QuadTolerance::new(1e-13, 0.0)).unwrap();
        assert_relative_eq!(est.value, 1f64.exp() - 1.0, max_relative = 1e-14);
        assert!(est.evaluations >= 48);
    }

    #[test]
    fn graded_panels_resolve_near_pole() {
        // 1/(x^2 + d^2) on [0, 1]: near-pole at the left endpoint.
        let d = 1e-6;
        let mut breaks = vec![0.0];
        let mut w = d * 1e-2;
        while w < 1.0 {
            breaks.push(w);
            w *= 2.0;
        }
        breaks.push(1.0);
        let est = graded_gauss_legendre(
            |x| 1.0 / (x * x + d * d),
            &breaks,
            QuadTolerance::new(1e-12, 0.0),
        )
        .unwrap();
        assert_relative_eq!(est.value, (1.0 / d).atan() / d, max_relative = 1e-11);
    }

    #[test]
    fn tanh_sinh_handles_inverse_sqrt_endpoint() {
        let est = tanh_sinh(|x| 1.0 / x.sqrt(), 0.0, 4.0, QuadTolerance::new(1e-12, 0.0)).unwrap();
        assert_relative_eq!(est.value, 4.0, max_relative = 1e-11);
        let est = tanh_sinh(
            |x| (1.0 - x * x).sqrt(),
            -1.0,
            1.0,
            QuadTolerance::new(1e-12, 0.0),
        )
        .unwrap();
        assert_relative_eq!(est.value, FRAC_PI_2, max_relative = 1e-11);
    }
}
