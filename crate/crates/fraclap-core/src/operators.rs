//! The two fractional integral operators, their power-function images, and
//! the kernels of their Laplace-transform identities.
//!
//! With `F` the kernel hypergeometric of [`crate::hypergeom::kernel_f`] and
//! `c1, c2, p_k` the shift maps of [`OperatorParams`], the operators in
//! their substituted quadrature form are
//!
//! ```text
//! (I φ)(x) = ν x^{-δ}/Γ(μ) ∫₀¹ (1-u^ν)^{μ-1} F(1-u^ν) φ(xu)  u^{νh+ν-1}   du
//! (J φ)(x) = ν x^{-δ}/Γ(μ) ∫₀¹ (1-u^ν)^{μ-1} F(1-u^ν) φ(x/u) u^{δ+νh+ν-2} du
//! ```
//!
//! Their action on powers is diagonal: `x^λ ↦ coefficient · x^{λ-δ}` with
//! the coefficient a finite sum of gamma ratios evaluated at `c1(λ)` for `I`
//! and `c2(λ)` for `J`.  Everything else in this module is cross-checked
//! against that diagonal action.

use crate::error::{Error, Result};
use crate::hypergeom::kernel_f_scaled_at;
use crate::mellin::{
    fox_wright, h_function_scaled, ContourConfig, FoxWrightSpec, HFunctionSpec, ScaledValue,
};
use crate::params::{OperatorParams, TestFunction};
use crate::quad::tanh_sinh;
use crate::special::{gamma_ratio, log_gamma, GammaRatioSpec};
use num_complex::Complex64;
use std::cell::RefCell;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// The diagonal action on a power: `x^λ ↦ coefficient · x^exponent`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerImage {
    pub exponent: Complex64,
    pub coefficient: Complex64,
}

impl PowerImage {
    pub fn eval(&self, x: f64) -> Complex64 {
        self.coefficient * (self.exponent * x.ln()).exp()
    }
}

/// Shared coefficient sum of both power images:
/// `Σ_k (A_k/A_0)(a)_k(b)_k Γ(c)Γ(c+p_k) / (Γ(c+μ-a)Γ(c+μ-b))`.
fn image_sum(params: &OperatorParams, c: Complex64) -> Result<Complex64> {
    let mut total = ZERO;
    for k in 0..=params.order() {
        let w = params.weight(k);
        if w == ZERO {
            continue;
        }
        total += w
            * gamma_ratio(&GammaRatioSpec {
                numerator: vec![c, c + params.p_shift(k)],
                denominator: vec![
                    c + params.mu() - params.a(),
                    c + params.mu() - params.b(),
                ],
            })?;
    }
    Ok(total)
}

/// Image of `x^λ` under the lower operator `I`.
pub fn power_image_i(params: &OperatorParams, lambda: Complex64) -> Result<PowerImage> {
    if !params.lemma_condition_i(lambda) {
        return Err(Error::Condition(format!(
            "I-image of x^λ needs Re c1(λ) > {}, got {} at λ = {lambda}",
            -params.shift_floor(),
            params.c1(lambda).re
        )));
    }
    Ok(PowerImage {
        exponent: lambda - params.delta(),
        coefficient: image_sum(params, params.c1(lambda))?,
    })
}

/// Image of `x^λ` under the upper operator `J`.
pub fn power_image_j(params: &OperatorParams, lambda: Complex64) -> Result<PowerImage> {
    if !params.lemma_condition_j(lambda) {
        return Err(Error::Condition(format!(
            "J-image of x^λ needs Re c2(λ) > {}, got {} at λ = {lambda}",
            -params.shift_floor(),
            params.c2(lambda).re
        )));
    }
    Ok(PowerImage {
        exponent: lambda - params.delta(),
        coefficient: image_sum(params, params.c2(lambda))?,
    })
}

/// `ν x^{-δ} / Γ(μ)`.
fn prefactor(params: &OperatorParams, x: f64) -> Result<Complex64> {
    let lg = log_gamma(params.mu())?;
    Ok(params.nu() * (-params.delta() * x.ln() - lg).exp())
}

fn check_point(x: f64) -> Result<()> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!(
            "operators act on functions over (0, ∞); x = {x}"
        )));
    }
    Ok(())
}

/// `Re(s) > 0`, i.e. `|arg s| < π/2`, so that `sx` stays inside the contour
/// sector of both kernel forms.
pub(crate) fn check_laplace_s(s: Complex64) -> Result<()> {
    if !s.re.is_finite() || !s.im.is_finite() || s.re <= 0.0 {
        return Err(Error::Domain(format!(
            "Laplace variable needs Re(s) > 0, got s = {s}"
        )));
    }
    Ok(())
}

/// Run the unit-interval quadrature on a fallible integrand, preserving the
/// integrand's own error over the quadrature's generic one.
pub(crate) fn quad_unit<F>(f: F, tol: f64) -> Result<Complex64>
where
    F: Fn(f64, f64) -> Result<Complex64>,
{
    let stash: RefCell<Option<Error>> = RefCell::new(None);
    let wrapped = |u: f64, omu: f64| match f(u, omu) {
        Ok(v) => v,
        Err(e) => {
            stash.borrow_mut().get_or_insert(e);
            Complex64::new(f64::NAN, 0.0)
        }
    };
    match tanh_sinh(&wrapped, tol) {
        Ok(out) => Ok(out.value),
        Err(e) => Err(stash.into_inner().unwrap_or(e)),
    }
}

/// Kernel argument pair from the node pair `(u, 1-u)`:
/// `w = u^ν` and `z = 1 - u^ν`, each at full relative precision.  `ln u`
/// comes from whichever of the pair carries the information (for u < 1/2
/// the complement can round to exactly 1).
fn kernel_args(nu: f64, u: f64, omu: f64) -> (f64, f64, f64, f64) {
    let ln_u = if u < 0.5 { u.ln() } else { (-omu).ln_1p() };
    let ln_w = nu * ln_u;
    let w = ln_w.exp();
    let z = -ln_w.exp_m1();
    (ln_u, ln_w, z, w)
}

/// `(I φ)(x)` for a power-times-exponential test function.
///
/// The integrand is assembled in log space: the kernel's `w^{p_k}` blowup,
/// the `z^{μ-1}` endpoint factor, and the test function's power all combine
/// as exponents before a single collapse, so no individually unrepresentable
/// factor is ever formed.
pub fn eval_i(params: &OperatorParams, phi: &TestFunction, x: f64, tol: f64) -> Result<Complex64> {
    check_point(x)?;
    if !params.lemma_condition_i(phi.power) {
        return Err(Error::NonIntegrable(format!(
            "I-integrand needs Re c1(p) > {} for φ ~ x^p, got {}",
            -params.shift_floor(),
            params.c1(phi.power).re
        )));
    }
    let nu = params.nu();
    let mu1 = params.mu() - ONE;
    let upow = nu * (1.0 + params.h()) - 1.0;
    let x_ln = x.ln();
    let value = quad_unit(
        |u, omu| {
            let (ln_u, ln_w, z, w) = kernel_args(nu, u, omu);
            let kernel = kernel_f_scaled_at(params, z, w, ln_w)?;
            let lg = mu1 * z.ln()
                + phi.power * (x_ln + ln_u)
                + Complex64::new(upow * ln_u - phi.decay * x * u, 0.0);
            Ok(kernel
                .mul(phi.scale * Complex64::new(0.0, lg.im).exp())
                .mul_log(lg.re)
                .value())
        },
        tol,
    )?;
    Ok(prefactor(params, x)? * value)
}

/// `(J φ)(x)` for a power-times-exponential test function.  Without decay
/// the integrand reaches up to `+∞`, so the pure-power case is gated by the
/// same condition as the J-image.
pub fn eval_j(params: &OperatorParams, phi: &TestFunction, x: f64, tol: f64) -> Result<Complex64> {
    check_point(x)?;
    if phi.decay == 0.0 && !params.lemma_condition_j(phi.power) {
        return Err(Error::NonIntegrable(format!(
            "J-integrand of a pure power needs Re c2(p) > {}, got {}",
            -params.shift_floor(),
            params.c2(phi.power).re
        )));
    }
    let nu = params.nu();
    let mu1 = params.mu() - ONE;
    let upow = params.delta() + nu * (1.0 + params.h()) - 2.0;
    let x_ln = x.ln();
    let value = quad_unit(
        |u, omu| {
            let (ln_u, ln_w, z, w) = kernel_args(nu, u, omu);
            let kernel = kernel_f_scaled_at(params, z, w, ln_w)?;
            let decay_term = if phi.decay > 0.0 {
                phi.decay * (x / u)
            } else {
                0.0
            };
            let lg = mu1 * z.ln()
                + phi.power * (x_ln - ln_u)
                + upow * ln_u
                - Complex64::new(decay_term, 0.0);
            Ok(kernel
                .mul(phi.scale * Complex64::new(0.0, lg.im).exp())
                .mul_log(lg.re)
                .value())
        },
        tol,
    )?;
    Ok(prefactor(params, x)? * value)
}

/// `(I φ)(x)` for an arbitrary integrand closure.  The caller vouches for
/// integrability and for `φ` staying within f64 range on `(0, x]`; failures
/// surface as quadrature errors.
pub fn eval_i_with<F>(params: &OperatorParams, phi: F, x: f64, tol: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    check_point(x)?;
    let nu = params.nu();
    let mu1 = params.mu() - ONE;
    let upow = nu * (1.0 + params.h()) - 1.0;
    let value = quad_unit(
        |u, omu| {
            let (ln_u, ln_w, z, w) = kernel_args(nu, u, omu);
            let kernel = kernel_f_scaled_at(params, z, w, ln_w)?;
            let lg = mu1 * z.ln() + Complex64::new(upow * ln_u, 0.0);
            Ok(kernel
                .mul(phi(x * u) * Complex64::new(0.0, lg.im).exp())
                .mul_log(lg.re)
                .value())
        },
        tol,
    )?;
    Ok(prefactor(params, x)? * value)
}

/// `(J φ)(x)` for an arbitrary integrand closure; see [`eval_i_with`].
pub fn eval_j_with<F>(params: &OperatorParams, phi: F, x: f64, tol: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    check_point(x)?;
    let nu = params.nu();
    let mu1 = params.mu() - ONE;
    let upow = params.delta() + nu * (1.0 + params.h()) - 2.0;
    let value = quad_unit(
        |u, omu| {
            let (ln_u, ln_w, z, w) = kernel_args(nu, u, omu);
            let kernel = kernel_f_scaled_at(params, z, w, ln_w)?;
            let lg = mu1 * z.ln() + upow * ln_u;
            Ok(kernel
                .mul(phi(x / u) * Complex64::new(0.0, lg.im).exp())
                .mul_log(lg.re)
                .value())
        },
        tol,
    )?;
    Ok(prefactor(params, x)? * value)
}

/// H-function parameters of the `k`-th term of the Laplace kernel for the
/// lower operator: `H^{3,0}_{2,3}` evaluated at `sx`, with all offsets built
/// from `c2(λ)`.
pub fn ki_h_spec(params: &OperatorParams, lambda: Complex64, k: u32) -> Result<HFunctionSpec> {
    let c2 = params.c2(lambda);
    let iv = 1.0 / params.nu();
    HFunctionSpec::new(
        3,
        0,
        vec![
            (c2 + params.mu() - params.a(), iv),
            (c2 + params.mu() - params.b(), iv),
        ],
        vec![(ZERO, 1.0), (c2, iv), (c2 + params.p_shift(k), iv)],
    )
}

/// Fox-Wright parameters of the `k`-th term of the Laplace kernel for the
/// upper operator, to be evaluated at `-sx`.
pub fn kj_wright_spec(params: &OperatorParams, lambda: Complex64, k: u32) -> Result<FoxWrightSpec> {
    let c1 = params.c1(lambda);
    let iv = 1.0 / params.nu();
    FoxWrightSpec::new(
        vec![(c1, iv), (c1 + params.p_shift(k), iv)],
        vec![
            (c1 + params.mu() - params.a(), iv),
            (c1 + params.mu() - params.b(), iv),
        ],
    )
}

/// The same kernel term as an `H^{1,2}_{2,3}` at `+sx`, the form that stays
/// evaluable (by contour) once the alternating series loses its digits.
pub fn kj_h_spec(params: &OperatorParams, lambda: Complex64, k: u32) -> Result<HFunctionSpec> {
    let c1 = params.c1(lambda);
    let iv = 1.0 / params.nu();
    HFunctionSpec::new(
        1,
        2,
        vec![(ONE - c1, iv), (ONE - c1 - params.p_shift(k), iv)],
        vec![
            (ZERO, 1.0),
            (ONE - c1 - params.mu() + params.a(), iv),
            (ONE - c1 - params.mu() + params.b(), iv),
        ],
    )
}

fn apply_power(acc: ScaledValue, e: Complex64) -> ScaledValue {
    acc.mul(Complex64::new(0.0, e.im).exp()).mul_log(e.re)
}

/// Laplace kernel of the lower operator:
/// `K_I(s, x) = x^{λ-δ} Σ_k w_k H^{3,0}_{2,3}[s x]`.
///
/// Satisfies `∫₀^∞ e^{-sx} x^λ (I φ)(x) dx = ∫₀^∞ K_I(s, x) φ(x) dx`.
///
/// Gated on the c2 condition for λ.  That is the sufficient condition the
/// transform identity is proved under; it is not necessary (the classical
/// lower-kernel collapse at λ = 0 holds outside it), but violations are
/// not explored here and the x → 0 rate below is only clean inside it.
pub fn kernel_ki(
    params: &OperatorParams,
    lambda: Complex64,
    s: Complex64,
    x: f64,
    cfg: &ContourConfig,
) -> Result<ScaledValue> {
    check_laplace_s(s)?;
    check_point(x)?;
    if !params.lemma_condition_j(lambda) {
        return Err(Error::Condition(format!(
            "lower Laplace kernel needs Re c2(λ) > {}, got {} at λ = {lambda}",
            -params.shift_floor(),
            params.c2(lambda).re
        )));
    }
    let z = s * x;
    let mut acc = ScaledValue::zero();
    for k in 0..=params.order() {
        let w = params.weight(k);
        if w == ZERO {
            continue;
        }
        let h = h_function_scaled(&ki_h_spec(params, lambda, k)?, z, cfg)?;
        acc = acc.add(h.mul(w));
    }
    Ok(apply_power(acc, (lambda - params.delta()) * x.ln()))
}

/// Above this argument the alternating Fox-Wright series for `K_J` has lost
/// too many digits to float cancellation (error ≈ ε e^{sx} / √(2π sx), i.e.
/// ~6e-13 at sx = 10 but already ~1e-8 at sx = 20, which is noise a 1e-8
/// quadrature built on the kernel cannot integrate through) and the contour
/// form takes over.
pub const KJ_SERIES_LIMIT: f64 = 10.0;

/// Laplace kernel of the upper operator:
/// `K_J(s, x) = x^{λ-δ} Σ_k w_k Ψ_k(-s x)`, with `Ψ_k` the series of
/// [`kj_wright_spec`] for small `sx` and the contour form of [`kj_h_spec`]
/// beyond [`KJ_SERIES_LIMIT`].
///
/// Satisfies `∫₀^∞ e^{-sx} x^λ (J φ)(x) dx = ∫₀^∞ K_J(s, x) φ(x) dx`.
///
/// Here λ is the Laplace-side weight, so the kernel's own existence
/// condition is the c1 one: its defining integral carries `u^{ν c1(λ)-1}`
/// at `u → 0`, and the same inequality is what keeps the Mellin strip of
/// every `k`-term nonempty.
pub fn kernel_kj(
    params: &OperatorParams,
    lambda: Complex64,
    s: Complex64,
    x: f64,
    cfg: &ContourConfig,
) -> Result<ScaledValue> {
    check_laplace_s(s)?;
    check_point(x)?;
    if !params.lemma_condition_i(lambda) {
        return Err(Error::Condition(format!(
            "upper Laplace kernel needs Re c1(λ) > {}, got {} at λ = {lambda}",
            -params.shift_floor(),
            params.c1(lambda).re
        )));
    }
    let y = s * x;
    let mut acc = ScaledValue::zero();
    for k in 0..=params.order() {
        let w = params.weight(k);
        if w == ZERO {
            continue;
        }
        let term = if y.norm() <= KJ_SERIES_LIMIT {
            ScaledValue::from_value(fox_wright(&kj_wright_spec(params, lambda, k)?, -y)?)
        } else {
            h_function_scaled(&kj_h_spec(params, lambda, k)?, y, cfg)?
        };
        acc = acc.add(term.mul(w));
    }
    Ok(apply_power(acc, (lambda - params.delta()) * x.ln()))
}

/// Classical operators recoverable by parameter specialisation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Classical {
    /// `1/Γ(μ) ∫₀^x (x-t)^{μ-1} φ(t) dt`.
    RiemannLiouville { mu: f64 },
    /// `ν x^{-ν(γ+μ)} / Γ(μ) ∫₀^x (x^ν - t^ν)^{μ-1} t^{νγ+ν-1} φ(t) dt`.
    ErdelyiKober { gamma: f64, mu: f64, nu: f64 },
    /// `x^{-α-β}/Γ(α) ∫₀^x (x-t)^{α-1} ₂F₁(α+β, -η; α; 1-t/x) φ(t) dt`.
    Saigo { alpha: f64, beta: f64, eta: f64 },
}

/// Parameters that collapse the lower operator to a classical one.  The
/// kernel degenerates to `1` for the first two (the `a = 0` upper entry
/// terminates the series) and to a plain Gauss function for Saigo.
pub fn classical_params(kind: Classical) -> Result<OperatorParams> {
    let (mu, a, b, h, nu, delta) = match kind {
        Classical::RiemannLiouville { mu } => (mu, 0.0, mu, 0.0, 1.0, -mu),
        Classical::ErdelyiKober { gamma, mu, nu } => (mu, 0.0, mu, gamma, nu, 0.0),
        Classical::Saigo { alpha, beta, eta } => (alpha, alpha + beta, -eta, 0.0, 1.0, beta),
    };
    OperatorParams::new(
        Complex64::new(mu, 0.0),
        Complex64::new(a, 0.0),
        Complex64::new(b, 0.0),
        h,
        nu,
        Complex64::new(delta, 0.0),
        vec![],
        vec![],
    )
}
