//! Fox H-functions by Mellin-Barnes contour quadrature, Fox-Wright series,
//! and the reduction between the two.
//!
//! The H-function here is
//!
//! ```text
//!                      1    ⌠
//! H[z | (a,A);(b,B)] = ——— ⎮ 𝔥(s) z^{-s} ds,
//!                      2πi ⌡
//!
//!        Π_{j≤m} Γ(b_j + B_j s) · Π_{i≤n} Γ(1 - a_i - A_i s)
//! 𝔥(s) = ——————————————————————————————————————————————————————
//!        Π_{j>m} Γ(1 - b_j - B_j s) · Π_{i>n} Γ(a_i + A_i s)
//! ```
//!
//! integrated along a vertical line `Re s = c` that separates the poles of
//! the `Γ(b_j + B_j s)` (left of the contour) from those of the
//! `Γ(1 - a_i - A_i s)` (right of it).  The abscissa is chosen automatically
//! at the integrand's real-axis saddle, which keeps the quadrature free of
//! the catastrophic cancellation a fixed abscissa suffers for large `|z|`:
//! an exponentially small H value is then the integral of an integrand whose
//! peak is already at that scale, rather than a difference of huge
//! oscillations.

use crate::error::{Error, Result};
use crate::par;
use crate::quad::legendre_32;
use crate::special::{digamma_real, gamma_ratio, log_gamma, nearest_pole, GammaRatioSpec};
use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A gamma-factor pair `(a, A)`: the complex offset and the positive slope
/// in `Γ(a + A s)`-type factors.
pub type GammaPair = (Complex64, f64);

/// Parameters of `H^{m,n}_{p,q}`.
#[derive(Debug, Clone, PartialEq)]
pub struct HFunctionSpec {
    m: usize,
    n: usize,
    upper: Vec<GammaPair>,
    lower: Vec<GammaPair>,
}

impl HFunctionSpec {
    pub fn new(m: usize, n: usize, upper: Vec<GammaPair>, lower: Vec<GammaPair>) -> Result<Self> {
        if m > lower.len() || n > upper.len() {
            return Err(Error::Shape(format!(
                "H indices (m={m}, n={n}) exceed parameter counts (p={}, q={})",
                upper.len(),
                lower.len()
            )));
        }
        for &(a, w) in upper.iter().chain(lower.iter()) {
            if !a.re.is_finite() || !a.im.is_finite() || !w.is_finite() || w <= 0.0 {
                return Err(Error::Shape(format!(
                    "gamma pair ({a}, {w}) needs finite offset and positive slope"
                )));
            }
        }
        Ok(Self { m, n, upper, lower })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn upper(&self) -> &[GammaPair] {
        &self.upper
    }

    pub fn lower(&self) -> &[GammaPair] {
        &self.lower
    }

    /// Rightmost real part among poles left of the contour, `None` if `m = 0`.
    pub fn left_pole_bound(&self) -> Option<f64> {
        self.lower[..self.m]
            .iter()
            .map(|&(b, w)| -b.re / w)
            .fold(None, |acc, x| Some(acc.map_or(x, |a: f64| a.max(x))))
    }

    /// Leftmost real part among poles right of the contour, `None` if `n = 0`.
    pub fn right_pole_bound(&self) -> Option<f64> {
        self.upper[..self.n]
            .iter()
            .map(|&(a, w)| (1.0 - a.re) / w)
            .fold(None, |acc, x| Some(acc.map_or(x, |a: f64| a.min(x))))
    }

    /// True when `𝔥(s̄) = 𝔥(s)̄`, so the two contour halves are conjugate.
    fn conjugate_symmetric(&self) -> bool {
        self.upper
            .iter()
            .chain(self.lower.iter())
            .all(|&(a, _)| a.im == 0.0)
    }

    pub fn indices(&self) -> HIndices {
        HIndices::of(self)
    }
}

/// The five convergence indices of an H-function.  All are assembled with
/// compensated summation, so structurally cancelling slope lists (as in the
/// Laplace kernels, where every `1/ν` appears once with each sign) come out
/// exact rather than merely close.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HIndices {
    /// `a* = Σ_{i≤n} A_i - Σ_{i>n} A_i + Σ_{j≤m} B_j - Σ_{j>m} B_j`.
    pub a_star: f64,
    /// `Δ = Σ B_j - Σ A_i`.
    pub delta: f64,
    /// `δ* = Π A_i^{-A_i} Π B_j^{B_j}`.
    pub delta_star: f64,
    /// `μ* = Σ b_j - Σ a_i + (p - q)/2`.
    pub mu_star: Complex64,
    /// `a₁* = Σ_{j≤m} B_j - Σ_{i>n} A_i`.
    pub a1_star: f64,
}

impl HIndices {
    fn of(spec: &HFunctionSpec) -> Self {
        let (m, n) = (spec.m, spec.n);
        let a_star = neumaier_sum(
            spec.upper
                .iter()
                .enumerate()
                .map(|(i, &(_, w))| if i < n { w } else { -w })
                .chain(
                    spec.lower
                        .iter()
                        .enumerate()
                        .map(|(j, &(_, w))| if j < m { w } else { -w }),
                ),
        );
        let delta = neumaier_sum(
            spec.lower
                .iter()
                .map(|&(_, w)| w)
                .chain(spec.upper.iter().map(|&(_, w)| -w)),
        );
        let delta_star = neumaier_sum(
            spec.lower
                .iter()
                .map(|&(_, w)| w * w.ln())
                .chain(spec.upper.iter().map(|&(_, w)| -w * w.ln())),
        )
        .exp();
        let mu_star = Complex64::new(
            neumaier_sum(
                spec.lower
                    .iter()
                    .map(|&(b, _)| b.re)
                    .chain(spec.upper.iter().map(|&(a, _)| -a.re))
                    .chain(std::iter::once(
                        (spec.upper.len() as f64 - spec.lower.len() as f64) / 2.0,
                    )),
            ),
            neumaier_sum(
                spec.lower
                    .iter()
                    .map(|&(b, _)| b.im)
                    .chain(spec.upper.iter().map(|&(a, _)| -a.im)),
            ),
        );
        let a1_star = neumaier_sum(
            spec.lower[..m]
                .iter()
                .map(|&(_, w)| w)
                .chain(spec.upper[n..].iter().map(|&(_, w)| -w)),
        );
        Self {
            a_star,
            delta,
            delta_star,
            mu_star,
            a1_star,
        }
    }
}

/// Neumaier's compensated sum: exact cancellation of structurally paired
/// entries survives, and rounding stays O(ε) independent of length.
pub fn neumaier_sum(xs: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in xs {
        let t = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - t) + x;
        } else {
            comp += (x - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// A complex value carried as `mantissa · e^{log_scale}`, for quantities
/// whose magnitude can leave the f64 range.
#[derive(Debug, Clone, Copy)]
pub struct ScaledValue {
    pub mantissa: Complex64,
    pub log_scale: f64,
}

impl ScaledValue {
    pub fn zero() -> Self {
        Self {
            mantissa: ZERO,
            log_scale: 0.0,
        }
    }

    pub fn from_value(v: Complex64) -> Self {
        Self {
            mantissa: v,
            log_scale: 0.0,
        }
        .normalized()
    }

    /// Fold the mantissa's magnitude into the exponent.
    pub fn normalized(self) -> Self {
        let m = self.mantissa.norm();
        if m == 0.0 || !m.is_finite() {
            return self;
        }
        Self {
            mantissa: self.mantissa / m,
            log_scale: self.log_scale + m.ln(),
        }
    }

    /// Collapse to a plain complex number (may over/underflow, by design).
    /// A zero mantissa is exactly zero whatever the scale says.
    pub fn value(&self) -> Complex64 {
        if self.mantissa == ZERO {
            return ZERO;
        }
        self.mantissa * self.log_scale.exp()
    }

    /// `ln |v|`; `-∞` for zero.
    pub fn ln_norm(&self) -> f64 {
        let m = self.mantissa.norm();
        if m == 0.0 {
            f64::NEG_INFINITY
        } else {
            m.ln() + self.log_scale
        }
    }

    pub fn mul(self, f: Complex64) -> Self {
        Self {
            mantissa: self.mantissa * f,
            log_scale: self.log_scale,
        }
        .normalized()
    }

    pub fn mul_log(self, dlog: f64) -> Self {
        Self {
            mantissa: self.mantissa,
            log_scale: self.log_scale + dlog,
        }
    }

    pub fn add(self, other: Self) -> Self {
        if self.mantissa == ZERO {
            return other;
        }
        if other.mantissa == ZERO {
            return self;
        }
        let k = self.log_scale.max(other.log_scale);
        Self {
            mantissa: self.mantissa * (self.log_scale - k).exp()
                + other.mantissa * (other.log_scale - k).exp(),
            log_scale: k,
        }
        .normalized()
    }
}

/// Contour quadrature controls.
#[derive(Debug, Clone)]
pub struct ContourConfig {
    /// Fixed abscissa `Re s = c`; `None` selects the real-axis saddle.
    pub abscissa: Option<f64>,
    /// March at least this far before trusting the tail criterion.
    pub min_height: f64,
    /// Give up (with [`Error::ContourTail`]) beyond this height.
    pub max_height: f64,
    /// Stop once a batch of panels contributes below this fraction of the
    /// accumulated integral.
    pub tail_tol: f64,
    /// Cap on individual panel heights; also capped by the local
    /// oscillation scale `~24/(1 + |ln|z||)`.
    pub max_panel_height: f64,
}

impl Default for ContourConfig {
    fn default() -> Self {
        Self {
            abscissa: None,
            min_height: 40.0,
            max_height: 5120.0,
            tail_tol: 1e-12,
            max_panel_height: 4.0,
        }
    }
}

/// Evaluate `H[z]` as a plain complex number.
pub fn h_function(spec: &HFunctionSpec, z: Complex64, cfg: &ContourConfig) -> Result<Complex64> {
    Ok(h_function_scaled(spec, z, cfg)?.value())
}

/// Evaluate `H[z]` in scaled form, exact even when the value's magnitude
/// leaves the f64 range.
pub fn h_function_scaled(
    spec: &HFunctionSpec,
    z: Complex64,
    cfg: &ContourConfig,
) -> Result<ScaledValue> {
    if z == ZERO {
        return Err(Error::Domain("H-function argument must be nonzero".into()));
    }
    let idx = spec.indices();
    if idx.a_star <= 0.0 {
        return Err(Error::ConvergenceDomain(
            "contour evaluation needs a* > 0".into(),
        ));
    }
    if z.arg().abs() >= idx.a_star * std::f64::consts::FRAC_PI_2 - 1e-12 {
        return Err(Error::ConvergenceDomain(format!(
            "|arg z| = {:.4} outside the sector a*π/2 = {:.4}",
            z.arg().abs(),
            idx.a_star * std::f64::consts::FRAC_PI_2
        )));
    }
    let lo = spec.left_pole_bound();
    let hi = spec.right_pole_bound();
    if let (Some(l), Some(r)) = (lo, hi) {
        if l >= r {
            return Err(Error::ContourSeparation { left: l, right: r });
        }
    }
    let c = match cfg.abscissa {
        Some(c) => {
            if lo.is_some_and(|l| c <= l) || hi.is_some_and(|r| c >= r) {
                return Err(Error::ContourSeparation {
                    left: lo.unwrap_or(f64::NEG_INFINITY),
                    right: hi.unwrap_or(f64::INFINITY),
                });
            }
            c
        }
        None => saddle_abscissa(spec, z.norm().ln(), lo, hi)?,
    };
    integrate_contour(spec, z, c, cfg, lo, hi)
}

/// ln 𝔥(s).  `Ok(None)` marks an exact zero (a denominator gamma is at a
/// pole); a numerator pole on the contour is an error.
fn log_chi(spec: &HFunctionSpec, s: Complex64) -> Result<Option<Complex64>> {
    let mut acc = ZERO;
    for &(b, w) in &spec.lower[..spec.m] {
        let arg = b + w * s;
        if nearest_pole(arg).is_some() {
            return Err(Error::GammaPole(arg));
        }
        acc += log_gamma(arg)?;
    }
    for &(a, w) in &spec.upper[..spec.n] {
        let arg = ONE - a - w * s;
        if nearest_pole(arg).is_some() {
            return Err(Error::GammaPole(arg));
        }
        acc += log_gamma(arg)?;
    }
    for &(b, w) in &spec.lower[spec.m..] {
        let arg = ONE - b - w * s;
        if nearest_pole(arg).is_some() {
            return Ok(None);
        }
        acc -= log_gamma(arg)?;
    }
    for &(a, w) in &spec.upper[spec.n..] {
        let arg = a + w * s;
        if nearest_pole(arg).is_some() {
            return Ok(None);
        }
        acc -= log_gamma(arg)?;
    }
    Ok(Some(acc))
}

/// `d/dc Re ln[𝔥(c) z^{-c}]` on the real axis, with complex offsets reduced
/// to their real parts.  Used only to pick a well-conditioned abscissa, so
/// the heuristic is harmless for complex parameters.
fn saddle_slope(spec: &HFunctionSpec, c: f64, ln_abs_z: f64) -> f64 {
    let mut d = -ln_abs_z;
    for &(b, w) in &spec.lower[..spec.m] {
        d += w * digamma_real(b.re + w * c);
    }
    for &(a, w) in &spec.upper[..spec.n] {
        d -= w * digamma_real(1.0 - a.re - w * c);
    }
    for &(b, w) in &spec.lower[spec.m..] {
        d += w * digamma_real(1.0 - b.re - w * c);
    }
    for &(a, w) in &spec.upper[spec.n..] {
        d -= w * digamma_real(a.re + w * c);
    }
    d
}

/// Find the real-axis saddle of the integrand inside the pole-free window.
/// The slope runs from -∞ at the left pole bound to +∞ at the right one, so
/// bisection is safe; unbounded sides are bracketed by doubling.
fn saddle_abscissa(
    spec: &HFunctionSpec,
    ln_abs_z: f64,
    lo: Option<f64>,
    hi: Option<f64>,
) -> Result<f64> {
    let margin = match (lo, hi) {
        (Some(l), Some(r)) => (r - l) * 1e-4,
        _ => 1e-4,
    };
    let mut cl = match lo {
        Some(l) => l + margin,
        None => hi.map_or(0.0, |r| r - 1.0),
    };
    if lo.is_none() {
        let mut steps = 0;
        while saddle_slope(spec, cl, ln_abs_z) > 0.0 {
            cl = 2.0 * cl - 1.0;
            steps += 1;
            if steps > 1100 || cl < -1e250 {
                return Err(Error::Domain("no contour saddle to the left".into()));
            }
        }
    }
    let mut ch = match hi {
        Some(r) => r - margin,
        None => cl.max(0.0) + 1.0,
    };
    if hi.is_none() {
        let mut steps = 0;
        while saddle_slope(spec, ch, ln_abs_z) < 0.0 {
            ch = 2.0 * ch + 1.0;
            steps += 1;
            if steps > 1100 || ch > 1e250 {
                return Err(Error::Domain("no contour saddle to the right".into()));
            }
        }
    }
    if cl >= ch {
        return Err(Error::ContourSeparation {
            left: cl,
            right: ch,
        });
    }
    // The slope can fail to change sign across a bounded window (saddle
    // pushed against a pole); the midpoint of the best-conditioned side
    // still integrates correctly, just less optimally.
    let (mut fl, mut fh) = (
        saddle_slope(spec, cl, ln_abs_z),
        saddle_slope(spec, ch, ln_abs_z),
    );
    if fl > 0.0 || fh < 0.0 {
        return Ok(0.5 * (cl + ch));
    }
    for _ in 0..120 {
        let mid = 0.5 * (cl + ch);
        let fm = saddle_slope(spec, mid, ln_abs_z);
        if fm < 0.0 {
            cl = mid;
            fl = fm;
        } else {
            ch = mid;
            fh = fm;
        }
        if ch - cl < 1e-10 * ch.abs().max(1.0) {
            break;
        }
    }
    let _ = (fl, fh);
    Ok(0.5 * (cl + ch))
}

fn integrate_contour(
    spec: &HFunctionSpec,
    z: Complex64,
    c: f64,
    cfg: &ContourConfig,
    lo: Option<f64>,
    hi: Option<f64>,
) -> Result<ScaledValue> {
    let ln_z = z.ln();
    // Reference scale: the integrand's largest log-magnitude among a few
    // probe heights.  Everything is integrated relative to e^{K}.
    let mut k_off = f64::NEG_INFINITY;
    for t in [0.0, 0.5, 2.0, 8.0, 32.0] {
        for sgn in [1.0, -1.0] {
            let s = Complex64::new(c, sgn * t);
            if let Some(chi) = log_chi(spec, s)? {
                k_off = k_off.max((chi - s * ln_z).re);
            }
            if t == 0.0 {
                break;
            }
        }
    }
    if !k_off.is_finite() {
        return Err(Error::Domain(
            "contour integrand vanished at every probe height".into(),
        ));
    }

    // Panel grading: start at the pole-clearance scale near t = 0, then
    // double up to a cap set by the oscillation rate of z^{-it}.
    let clearance = [lo.map(|l| c - l), hi.map(|r| r - c)]
        .into_iter()
        .flatten()
        .fold(f64::INFINITY, f64::min);
    let h0 = (0.5 * clearance.min(2.0)).clamp(1e-4, cfg.max_panel_height);
    let hmax = cfg
        .max_panel_height
        .min(24.0 / (1.0 + ln_z.re.abs()))
        .max(h0.min(1e-4));

    let node_at = |t: f64| -> Result<Complex64> {
        let s = Complex64::new(c, t);
        match log_chi(spec, s)? {
            None => Ok(ZERO),
            Some(chi) => {
                let lg = chi - s * ln_z - k_off;
                if lg.re > 700.0 {
                    return Err(Error::Overflow("contour integrand"));
                }
                Ok(lg.exp())
            }
        }
    };
    let panel = |t0: f64, t1: f64, sign: f64| -> Result<Complex64> {
        let half = 0.5 * (t1 - t0);
        let mid = 0.5 * (t0 + t1);
        let mut acc = ZERO;
        for &(x, w) in legendre_32() {
            acc += w * node_at(sign * (mid + half * x))?;
        }
        Ok(half * acc)
    };

    let symmetric = spec.conjugate_symmetric() && z.im == 0.0 && z.re > 0.0;
    let sides: &[f64] = if symmetric { &[1.0] } else { &[1.0, -1.0] };
    let mut total = ZERO;
    for &sign in sides {
        let mut t = 0.0f64;
        let mut h = h0;
        let mut side_sum = ZERO;
        let mut tail_ratio = f64::INFINITY;
        let mut stopped = false;
        while t < cfg.max_height {
            // A batch of panel intervals, integrated in parallel but summed
            // in ladder order, so the result is thread-count independent.
            let mut batch = Vec::with_capacity(8);
            while batch.len() < 8 && t < cfg.max_height {
                let t1 = (t + h).min(cfg.max_height);
                batch.push((t, t1));
                t = t1;
                h = (2.0 * h).min(hmax);
            }
            let vals = par::try_map(&batch, |&(t0, t1)| panel(t0, t1, sign))?;
            let mut batch_max = 0.0f64;
            for v in &vals {
                side_sum += v;
                batch_max = batch_max.max(v.norm());
            }
            tail_ratio = batch_max / side_sum.norm().max(1e-300);
            if t >= cfg.min_height && tail_ratio <= cfg.tail_tol {
                stopped = true;
                break;
            }
        }
        if !stopped {
            return Err(Error::ContourTail {
                height: cfg.max_height,
                tail: tail_ratio,
            });
        }
        total += if symmetric {
            2.0 * Complex64::new(side_sum.re, 0.0)
        } else {
            side_sum
        };
    }
    Ok(ScaledValue {
        mantissa: total / (2.0 * std::f64::consts::PI),
        log_scale: k_off,
    }
    .normalized())
}

/// Parameters of a Fox-Wright series `pΨq`.
#[derive(Debug, Clone, PartialEq)]
pub struct FoxWrightSpec {
    pub upper: Vec<GammaPair>,
    pub lower: Vec<GammaPair>,
}

impl FoxWrightSpec {
    pub fn new(upper: Vec<GammaPair>, lower: Vec<GammaPair>) -> Result<Self> {
        for &(a, w) in upper.iter().chain(lower.iter()) {
            if !a.re.is_finite() || !a.im.is_finite() || !w.is_finite() || w <= 0.0 {
                return Err(Error::Shape(format!(
                    "Fox-Wright pair ({a}, {w}) needs finite offset and positive slope"
                )));
            }
        }
        Ok(Self { upper, lower })
    }
}

/// Convergence balance `Δ' = Σ β_j - Σ α_i`; the series converges for all
/// `z` when `Δ' > -1`.  Compensated, so structurally cancelling slopes give
/// an exact zero.
pub fn delta_prime(spec: &FoxWrightSpec) -> f64 {
    neumaier_sum(
        spec.lower
            .iter()
            .map(|&(_, w)| w)
            .chain(spec.upper.iter().map(|&(_, w)| -w)),
    )
}

const WRIGHT_MAX_TERMS: usize = 200_000;

/// Evaluate `pΨq(z) = Σ_k Π Γ(a_i + α_i k) / Π Γ(b_j + β_j k) · z^k / k!`.
///
/// A numerator gamma hitting a pole at some summed `k` is an error; a
/// denominator pole merely zeroes that term.
pub fn fox_wright(spec: &FoxWrightSpec, z: Complex64) -> Result<Complex64> {
    let dp = delta_prime(spec);
    if dp <= -1.0 - 1e-12 {
        return Err(Error::ConvergenceDomain(format!(
            "Fox-Wright series needs Δ' ≥ -1, got {dp}"
        )));
    }
    if dp <= -1.0 + 1e-12 {
        // Borderline balance: the series has the finite radius
        // ρ = Π α^{-α} Π β^β (classical slopes give ρ = 1).
        let radius = neumaier_sum(
            spec.lower
                .iter()
                .map(|&(_, w)| w * w.ln())
                .chain(spec.upper.iter().map(|&(_, w)| -w * w.ln())),
        )
        .exp();
        if z.norm() >= radius * (1.0 - 1e-12) {
            return Err(Error::ConvergenceDomain(format!(
                "Fox-Wright series with Δ' = -1 needs |z| < {radius}, got {}",
                z.norm()
            )));
        }
    }
    if z == ZERO {
        return gamma_ratio(&GammaRatioSpec {
            numerator: spec.upper.iter().map(|&(a, _)| a).collect(),
            denominator: spec.lower.iter().map(|&(b, _)| b).collect(),
        });
    }
    let ln_z = z.ln();
    let mut sum = ZERO;
    let mut small = 0u32;
    let mut ln_kfact = 0.0f64;
    for k in 0..WRIGHT_MAX_TERMS {
        if k > 0 {
            ln_kfact += (k as f64).ln();
        }
        let kc = k as f64;
        let mut lg = kc * ln_z - ln_kfact;
        let mut zero_term = false;
        for &(a, w) in &spec.upper {
            let arg = a + w * kc;
            if nearest_pole(arg).is_some() {
                return Err(Error::GammaPole(arg));
            }
            lg += log_gamma(arg)?;
        }
        for &(b, w) in &spec.lower {
            let arg = b + w * kc;
            if nearest_pole(arg).is_some() {
                zero_term = true;
                break;
            }
            lg -= log_gamma(arg)?;
        }
        if !zero_term {
            if lg.re > 705.0 {
                return Err(Error::Overflow("Fox-Wright term"));
            }
            let term = lg.exp();
            sum += term;
            if term.norm() <= 1e-16 * sum.norm() && sum != ZERO {
                small += 1;
                if small >= 3 {
                    return Ok(sum);
                }
            } else {
                small = 0;
            }
        }
    }
    Err(Error::NoConvergence {
        what: "Fox-Wright series",
        limit: WRIGHT_MAX_TERMS,
        unit: "terms",
    })
}

/// Rewrite `H^{1,p}_{p,q+1}[z | (a,A); (0,1),(b,B)]` as a Fox-Wright series:
/// summing the residues of the single left gamma `Γ(s)` gives
/// `H(z) = pΨq[(1-a, A); (1-b, B) | -z]`.
///
/// The shape must match exactly: `m = 1`, `n = p`, and the first lower pair
/// must be `(0, 1)` bit-for-bit.
pub fn reduce_h_to_fox_wright(spec: &HFunctionSpec) -> Result<FoxWrightSpec> {
    let p = spec.upper.len();
    if spec.m != 1 || spec.n != p || spec.lower.is_empty() {
        return Err(Error::Shape(format!(
            "reduction needs H^(1,p)_(p,q+1), got m={}, n={}, p={}, q={}",
            spec.m,
            spec.n,
            p,
            spec.lower.len()
        )));
    }
    let (b0, w0) = spec.lower[0];
    if b0 != ZERO || w0 != 1.0 {
        return Err(Error::Shape(format!(
            "reduction needs first lower pair (0, 1), got ({b0}, {w0})"
        )));
    }
    FoxWrightSpec::new(
        spec.upper.iter().map(|&(a, w)| (ONE - a, w)).collect(),
        spec.lower[1..].iter().map(|&(b, w)| (ONE - b, w)).collect(),
    )
}
