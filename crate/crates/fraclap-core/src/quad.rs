//! Quadrature rules: tanh-sinh on (0,1), Gauss-Legendre panels, and
//! Gauss-Laguerre with exponentially rescaled weights.
//!
//! The tanh-sinh rule is the workhorse for operator integrals, which carry
//! algebraic endpoint singularities like `(1-u)^{μ-1}` and `u^{νh+ν-1}`.
//! Integrands receive the node as a stable pair `(u, 1-u)` so that factors
//! of `1-u` keep full relative precision near `u = 1`.

use crate::error::{Error, Result};
use num_complex::Complex64;
use std::sync::OnceLock;

/// Result of an adaptive quadrature: value, an error estimate from the last
/// refinement step, and the work done.
#[derive(Debug, Clone, Copy)]
pub struct QuadOutcome {
    pub value: Complex64,
    pub error: f64,
    pub evals: usize,
    pub levels: u32,
}

/// Truncation point for the tanh-sinh node ladder: `exp(-π sinh 6.11)` is
/// below the smallest positive double, so further nodes cannot contribute.
const TS_T_MAX: f64 = 6.11;
const TS_MAX_LEVEL: u32 = 11;

/// Integrate `f` over (0,1) with the tanh-sinh (double exponential) rule.
///
/// `f(u, one_minus_u)` is given both the node and its complement; use the
/// complement wherever `1 - u` appears so endpoint factors stay accurate.
/// Integrable endpoint singularities are handled as long as the weighted
/// integrand stays finite at every node actually evaluated.
pub fn tanh_sinh<F>(f: F, tol: f64) -> Result<QuadOutcome>
where
    F: Fn(f64, f64) -> Complex64,
{
    let mut evals = 0usize;
    let mut eval = |t: f64| -> Result<Complex64> {
        let w = std::f64::consts::PI * t.sinh();
        let cosh_t = t.cosh();
        // u = 1/(1+e^{-w}); compute the pair from the same exponential so
        // both factors are exact to rounding.
        let (u, omu) = if w >= 0.0 {
            let e = (-w).exp();
            (1.0 / (1.0 + e), e / (1.0 + e))
        } else {
            let e = w.exp();
            (e / (1.0 + e), 1.0 / (1.0 + e))
        };
        let weight = std::f64::consts::PI * cosh_t * u * omu;
        if weight < 1e-305 || !weight.is_finite() {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let v = f(u, omu);
        evals += 1;
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::Domain(format!(
                "integrand non-finite at u = {u:.6e} (1-u = {omu:.6e})"
            )));
        }
        Ok(weight * v)
    };

    // Level 0: step 1, nodes at integer t.
    let mut h = 1.0f64;
    let mut sum = eval(0.0)?;
    let mut k = 1;
    while (k as f64) * h <= TS_T_MAX {
        let t = k as f64 * h;
        sum += eval(t)? + eval(-t)?;
        k += 1;
    }
    let mut value = h * sum;
    let mut error = f64::INFINITY;

    for level in 1..=TS_MAX_LEVEL {
        h *= 0.5;
        let mut new_sum = Complex64::new(0.0, 0.0);
        let mut k = 1;
        while (k as f64) * h <= TS_T_MAX {
            let t = k as f64 * h;
            new_sum += eval(t)? + eval(-t)?;
            k += 2; // odd multiples only: even ones were seen at coarser levels
        }
        let new_value = value * 0.5 + h * new_sum;
        error = (new_value - value).norm();
        value = new_value;
        if level >= 2 && error <= tol * value.norm().max(1e-300) {
            return Ok(QuadOutcome {
                value,
                error,
                evals,
                levels: level,
            });
        }
    }
    // Accept a slightly degraded tolerance rather than failing outright:
    // uniformly tiny integrals legitimately stall on the relative test.
    if error <= tol.max(1e-13) * value.norm().max(1e-14) {
        return Ok(QuadOutcome {
            value,
            error,
            evals,
            levels: TS_MAX_LEVEL,
        });
    }
    Err(Error::NoConvergence {
        what: "tanh-sinh quadrature",
        limit: TS_MAX_LEVEL as usize,
        unit: "levels",
    })
}

/// 32-point Gauss-Legendre nodes and weights on [-1, 1].
pub fn legendre_32() -> &'static [(f64, f64)] {
    static TABLE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    TABLE.get_or_init(|| legendre_rule(32))
}

/// Build an n-point Gauss-Legendre rule by Newton iteration on the
/// three-term recurrence.
fn legendre_rule(n: usize) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0); n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-like initial guess for root i (descending in x).
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, pm1) = legendre_pair(n, x);
            let dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (p, pm1) = legendre_pair(n, x);
        let dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out[i] = (-x, w);
        out[n - 1 - i] = (x, w);
    }
    out
}

/// (P_n(x), P_{n-1}(x)) by upward recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=n {
        let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// Integrate `f` over [a, b] with a fixed 32-point Gauss-Legendre rule.
pub fn legendre_panel<F>(f: &F, a: f64, b: f64) -> Complex64
where
    F: Fn(f64) -> Complex64,
{
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut sum = Complex64::new(0.0, 0.0);
    for &(x, w) in legendre_32() {
        sum += w * f(mid + half * x);
    }
    half * sum
}

/// Largest Gauss-Laguerre order with safely representable rescaled weights:
/// beyond ~128 nodes the factor `w_i e^{x_i}` overflows f64 at the top root.
pub const LAGUERRE_MAX_N: usize = 128;

/// Gauss-Laguerre nodes with weights rescaled by `e^{x_i}`, so that
/// `∫_0^∞ g(x) dx ≈ Σ ŵ_i g(x_i)` for integrands that already contain
/// their own exponential decay.  Supported orders: 32, 64, 128.
pub fn laguerre_nodes_scaled(n: usize) -> Result<&'static [(f64, f64)]> {
    static T32: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    static T64: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    static T128: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    match n {
        32 => Ok(T32.get_or_init(|| laguerre_rule_scaled(32))),
        64 => Ok(T64.get_or_init(|| laguerre_rule_scaled(64))),
        128 => Ok(T128.get_or_init(|| laguerre_rule_scaled(128))),
        _ => Err(Error::Range("Gauss-Laguerre order must be 32, 64, or 128")),
    }
}

fn laguerre_rule_scaled(n: usize) -> Vec<(f64, f64)> {
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(n);
    let mut x = 0.0f64;
    for i in 0..n {
        // Stroud-Secrest style initial guesses, then march from the
        // previous root.
        x = match i {
            0 => 3.0 / (1.0 + 2.4 * n as f64),
            1 => x + 15.0 / (1.0 + 2.5 * n as f64),
            _ => {
                let ai = i as f64 - 1.0;
                x + (1.0 + 2.55 * ai) / (1.9 * ai) * (x - out[i - 2].0)
            }
        };
        let mut lnp1 = 0.0;
        for _ in 0..200 {
            let (p, pm1) = laguerre_pair(n, x);
            lnp1 = pm1;
            // L_n'(x) = n (L_n - L_{n-1}) / x
            let dp = n as f64 * (p - pm1) / x;
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-14 * x.max(1.0) {
                break;
            }
        }
        // ŵ_i = w_i e^{x_i} = x_i e^{x_i} / ((n+1)² L_{n+1}(x_i)²), in logs.
        let lnp1_next = laguerre_next(n, x, lnp1);
        let log_w = x.ln() + x
            - 2.0 * (((n + 1) as f64).ln() + lnp1_next.abs().ln());
        out.push((x, log_w.exp()));
    }
    out
}

/// (L_n(x), L_{n-1}(x)) by upward recurrence.
fn laguerre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = 1.0 - x;
    for j in 1..n {
        let p2 = (((2 * j + 1) as f64 - x) * p1 - j as f64 * p0) / (j + 1) as f64;
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// L_{n+1}(x) from L_n(x) ≈ 0 at a root and L_{n-1}(x).
fn laguerre_next(n: usize, x: f64, lnm1: f64) -> f64 {
    let (p, _) = laguerre_pair(n, x);
    (((2 * n + 1) as f64 - x) * p - n as f64 * lnm1) / (n + 1) as f64
}
