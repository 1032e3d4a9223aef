//! Generalized hypergeometric series and the operator kernel function.
//!
//! [`pfq`] evaluates `pFq` by term recurrence with Levin acceleration near
//! the unit circle.  [`kernel_f`] evaluates the kernel
//! `F[a, b, (f_i + m_i); μ, (f_i); z]` for `z ∈ [0, 1]`, switching to a
//! contiguous decomposition into shifted Gauss functions plus the `1 - z`
//! connection formula when the argument is close to one, where a direct
//! series is slow or divergent.

use crate::error::{Error, Result};
use crate::levin::LevinU;
use crate::mellin::ScaledValue;
use crate::params::OperatorParams;
use crate::special::{gamma_ratio, pochhammer, GammaRatioSpec};
use num_complex::Complex64;

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Stop once three consecutive terms fall below this fraction of the sum.
const STOP_FACTOR: f64 = 1e-16;
const MAX_TERMS: usize = 100_000;
/// Beyond this |z| the `p = q+1` series is fed through the Levin transform.
const LEVIN_THRESHOLD: f64 = 0.9;
/// Route `kernel_f` to the near-unit decomposition once `1 - z` drops
/// below this.
const NEAR_UNIT_SWITCH: f64 = 0.25;

/// Parameter lists of a `pFq` series.
#[derive(Debug, Clone, PartialEq)]
pub struct PfqSpec {
    pub upper: Vec<Complex64>,
    pub lower: Vec<Complex64>,
}

impl PfqSpec {
    pub fn new(upper: Vec<Complex64>, lower: Vec<Complex64>) -> Self {
        Self { upper, lower }
    }

    /// True when an upper parameter is a nonpositive integer, so the series
    /// is a polynomial.
    pub fn terminates(&self) -> bool {
        self.upper.iter().any(|z| is_nonpositive_integer(*z))
    }
}

fn is_nonpositive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round()
}

/// Parameter balance `ψ = Σ lower - Σ upper`, which governs behaviour on the
/// unit circle for `p = q + 1`.
pub fn psi_balance(spec: &PfqSpec) -> Complex64 {
    let s_low: Complex64 = spec.lower.iter().sum();
    let s_up: Complex64 = spec.upper.iter().sum();
    s_low - s_up
}

/// How a `p = q+1` series behaves as its argument approaches 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NearUnitKind {
    /// `Re ψ > 0`, or `Re ψ = 0` with `ψ ≠ 0`: the function stays bounded.
    Bounded,
    /// `Re ψ < 0`: grows like `(1-z)^ψ`.
    PowerBlowup,
    /// `ψ = 0`: grows like `-ln(1-z)`.
    LogBlowup,
}

#[derive(Debug, Clone, Copy)]
pub struct BehaviorClass {
    pub psi: Complex64,
    pub kind: NearUnitKind,
}

/// Classify the near-unit behaviour of a `p = q+1` series.
pub fn classify_near_unit(spec: &PfqSpec) -> Result<BehaviorClass> {
    if spec.upper.len() != spec.lower.len() + 1 {
        return Err(Error::Shape(format!(
            "near-unit classification needs p = q+1, got p = {}, q = {}",
            spec.upper.len(),
            spec.lower.len()
        )));
    }
    let psi = psi_balance(spec);
    let kind = if psi.norm() <= 1e-14 {
        NearUnitKind::LogBlowup
    } else if psi.re < 0.0 {
        NearUnitKind::PowerBlowup
    } else {
        NearUnitKind::Bounded
    };
    Ok(BehaviorClass { psi, kind })
}

/// Evaluate `pFq(upper; lower; z)` by the term recurrence
/// `t_{k+1} = t_k · Π(upper+k)/Π(lower+k) · z/(k+1)`.
///
/// Domain: any `z` for `p ≤ q` or terminating series; `|z| < 1` for
/// `p = q+1`, extended to `|z| = 1` when `Re ψ > 0`.  A denominator pole
/// reached while terms are still nonzero is a [`Error::GammaPole`];
/// arguments outside the convergence domain give
/// [`Error::ConvergenceDomain`].
pub fn pfq(spec: &PfqSpec, z: Complex64) -> Result<Complex64> {
    if z == ZERO {
        return Ok(ONE);
    }
    let p = spec.upper.len();
    let q = spec.lower.len();
    let terminating = spec.terminates();
    let r = z.norm();
    let mut accelerate = false;
    if !terminating {
        if p > q + 1 {
            return Err(Error::ConvergenceDomain(format!(
                "{p}F{q} diverges for z != 0 unless it terminates"
            )));
        }
        if p == q + 1 {
            if r > 1.0 + 1e-14 {
                return Err(Error::ConvergenceDomain(format!(
                    "{p}F{q} series needs |z| <= 1, got |z| = {r:.6}"
                )));
            }
            if r >= 1.0 - 1e-14 && psi_balance(spec).re <= 0.0 {
                return Err(Error::ConvergenceDomain(
                    "series on the unit circle needs Re(Σ lower - Σ upper) > 0".into(),
                ));
            }
            accelerate = r > LEVIN_THRESHOLD;
        }
    }
    if accelerate {
        return sum_levin(spec, z);
    }
    sum_direct(spec, z, if terminating { usize::MAX } else { MAX_TERMS })
}

/// One step of the term recurrence.  `Ok(None)` means the series terminated
/// at this index (an upper factor hit zero exactly).
fn next_term(spec: &PfqSpec, z: Complex64, k: usize, term: Complex64) -> Result<Option<Complex64>> {
    let kc = Complex64::new(k as f64, 0.0);
    let mut ratio = z / (k as f64 + 1.0);
    for &u in &spec.upper {
        let f = u + kc;
        if f == ZERO {
            return Ok(None);
        }
        ratio *= f;
    }
    for &l in &spec.lower {
        let f = l + kc;
        if f.norm() <= 1e-14 {
            return Err(Error::GammaPole(l));
        }
        ratio /= f;
    }
    let next = term * ratio;
    if !next.re.is_finite() || !next.im.is_finite() {
        return Err(Error::Overflow("hypergeometric term"));
    }
    Ok(Some(next))
}

fn sum_direct(spec: &PfqSpec, z: Complex64, max_terms: usize) -> Result<Complex64> {
    let mut term = ONE;
    let mut sum = ONE;
    let mut small = 0u32;
    let mut k = 0usize;
    loop {
        term = match next_term(spec, z, k, term)? {
            Some(t) => t,
            None => return Ok(sum),
        };
        sum += term;
        k += 1;
        if term.norm() <= STOP_FACTOR * sum.norm() {
            small += 1;
            if small >= 3 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
        if k >= max_terms {
            return Err(Error::NoConvergence {
                what: "hypergeometric series",
                limit: max_terms,
                unit: "terms",
            });
        }
    }
}

const LEVIN_MAX_TERMS: usize = 600;

fn sum_levin(spec: &PfqSpec, z: Complex64) -> Result<Complex64> {
    let mut acc = LevinU::new();
    let mut term = ONE;
    let mut sum = ONE;
    let mut est = acc.push(sum, term);
    let mut settled = 0u32;
    // The transform's accuracy bottoms out at some order and then rounding
    // noise takes over.  Whenever a table saturates, restart a fresh one from
    // the running total: for |z| < 1 each window shrinks the remaining tail
    // geometrically, so the windows' estimates keep improving.  Keep the
    // estimate whose consecutive delta was smallest.
    let mut best_rel = f64::INFINITY;
    let mut best_est = est;
    for k in 0..LEVIN_MAX_TERMS {
        term = match next_term(spec, z, k, term)? {
            Some(t) => t,
            None => return Ok(sum),
        };
        sum += term;
        if acc.saturated() {
            acc = LevinU::new();
            acc.push(sum, term);
            continue;
        }
        est = acc.push(sum, term);
        if let Some(d) = acc.last_delta() {
            let rel = d / est.norm().max(1e-300);
            if rel < best_rel {
                best_rel = rel;
                best_est = est;
            }
            if k >= 8 && rel <= 1e-13 {
                settled += 1;
                if settled >= 2 {
                    return Ok(est);
                }
            } else {
                settled = 0;
            }
        }
    }
    // Honest best effort: near the unit circle the f64 transform cannot do
    // better than roughly the smallest observed delta.  Refuse only when
    // acceleration clearly stalled.
    if best_rel <= 1e-4 {
        Ok(best_est)
    } else {
        Err(Error::NoConvergence {
            what: "Levin-accelerated series",
            limit: LEVIN_MAX_TERMS,
            unit: "terms",
        })
    }
}

/// The kernel's series parameters with `m_i = 0` pairs removed (they cancel
/// between the upper and lower lists).
pub fn kernel_spec(params: &OperatorParams) -> PfqSpec {
    let mut upper = vec![params.a(), params.b()];
    let mut lower = vec![params.mu()];
    for (&f, &m) in params.shifts().iter().zip(params.multiplicities()) {
        if m > 0 {
            upper.push(f + m as f64);
            lower.push(f);
        }
    }
    PfqSpec::new(upper, lower)
}

/// Near-unit behaviour of the operator kernel; its balance equals
/// `p_m = μ - a - b - m`.
pub fn classify_kernel(params: &OperatorParams) -> Result<BehaviorClass> {
    classify_near_unit(&kernel_spec(params))
}

/// Evaluate the kernel `F[a, b, (f_i+m_i); μ, (f_i); z]` for `z ∈ [0, 1]`.
///
/// `w` must equal `1 - z`, but computed in whatever form is stable for the
/// caller (operator integrands know `1 - z` to full relative precision at
/// both endpoints).  For `w < 0.25` the value is assembled from `m + 1`
/// shifted Gauss functions via the contiguous decomposition
///
/// ```text
/// F = Σ_{k=0..m} (A_k/A_0) (a)_k (b)_k / (μ)_k · z^k · ₂F₁(a+k, b+k; μ+k; z)
/// ```
///
/// with each `₂F₁` evaluated through the `1-z` connection formula, which
/// converges geometrically in `w`.  When some `p_k` is an integer the
/// connection formula degenerates; those cases fall back to the direct
/// (Levin-accelerated) series.
pub fn kernel_f(params: &OperatorParams, z: f64, w: f64) -> Result<Complex64> {
    Ok(kernel_f_scaled(params, z, w)?.value())
}

/// [`kernel_f`] in scaled form.  The `w^{p_k}` blowup factors live in the
/// log slot, so operator integrands can fold them against the decaying
/// powers they are paired with instead of overflowing at extreme
/// quadrature nodes.
pub fn kernel_f_scaled(params: &OperatorParams, z: f64, w: f64) -> Result<ScaledValue> {
    kernel_f_scaled_at(params, z, w, w.ln())
}

/// [`kernel_f_scaled`] with the caller's exact `ln w`.  At extreme
/// quadrature nodes `w = u^ν` underflows to zero (or to a denormal with
/// few significand bits) while `ν ln u` is still fully accurate; the
/// decomposition consumes `w` only through `ln w` in its blowup branch,
/// so the kernel stays finite in scaled form far past the f64 floor.
/// `ln_w = -∞` means a true unit argument and defers to the series,
/// which knows whether `F(1)` converges.
pub fn kernel_f_scaled_at(
    params: &OperatorParams,
    z: f64,
    w: f64,
    ln_w: f64,
) -> Result<ScaledValue> {
    if !(-1e-12..=1.0 + 1e-12).contains(&z) || !(-1e-12..=1.0 + 1e-12).contains(&w) {
        return Err(Error::Domain(format!(
            "kernel argument must lie in [0, 1], got z = {z}, w = {w}"
        )));
    }
    let z = z.clamp(0.0, 1.0);
    let w = w.clamp(0.0, 1.0);
    if z == 0.0 {
        return Ok(ScaledValue::from_value(ONE));
    }
    let spec = kernel_spec(params);
    let zc = Complex64::new(z, 0.0);
    if spec.terminates() || w >= NEAR_UNIT_SWITCH || ln_w == f64::NEG_INFINITY {
        return pfq(&spec, zc).map(ScaledValue::from_value);
    }
    let m = params.order();
    let decomposable = (0..=m).all(|k| !is_near_integer(params.p_shift(k)));
    if !decomposable {
        return pfq(&spec, zc).map(ScaledValue::from_value);
    }
    let mut total = ScaledValue::zero();
    let mut zpow = ONE;
    for k in 0..=m {
        let coef = params.weight(k) / pochhammer(params.mu(), k) * zpow;
        if coef != ZERO {
            let alpha = params.a() + k as f64;
            let beta = params.b() + k as f64;
            let gamma = params.mu() + k as f64;
            total = total.add(gauss_near_unit(alpha, beta, gamma, w, ln_w)?.mul(coef));
        }
        zpow *= zc;
    }
    Ok(total)
}

fn is_near_integer(z: Complex64) -> bool {
    z.im.abs() <= 1e-8 && (z.re - z.re.round()).abs() <= 1e-8
}

/// `₂F₁(α, β; γ; 1-w)` by the two-term connection formula in `w`.
/// Requires `γ - α - β` non-integer (checked by the caller) and `w ∈ (0, 1)`.
/// The `w^ψ` branch is kept in the log slot of the result, since its
/// magnitude leaves the f64 range long before the quadrature that consumes
/// it runs out of nodes.
fn gauss_near_unit(
    alpha: Complex64,
    beta: Complex64,
    gamma: Complex64,
    w: f64,
    ln_w: f64,
) -> Result<ScaledValue> {
    let psi = gamma - alpha - beta;
    let wc = Complex64::new(w, 0.0);
    let c1 = gamma_ratio(&GammaRatioSpec {
        numerator: vec![gamma, psi],
        denominator: vec![gamma - alpha, gamma - beta],
    })?;
    let c2 = gamma_ratio(&GammaRatioSpec {
        numerator: vec![gamma, -psi],
        denominator: vec![alpha, beta],
    })?;
    let mut value = ScaledValue::zero();
    if c1 != ZERO {
        let f1 = pfq(&PfqSpec::new(vec![alpha, beta], vec![ONE - psi]), wc)?;
        value = value.add(ScaledValue::from_value(c1 * f1));
    }
    if c2 != ZERO {
        let f2 = pfq(
            &PfqSpec::new(vec![gamma - alpha, gamma - beta], vec![ONE + psi]),
            wc,
        )?;
        let e = psi * ln_w;
        value = value.add(ScaledValue {
            mantissa: c2 * f2 * Complex64::new(0.0, e.im).exp(),
            log_scale: e.re,
        });
    }
    Ok(value)
}
