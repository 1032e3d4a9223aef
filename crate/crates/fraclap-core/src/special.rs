//! Complex gamma-function machinery: principal log-gamma, Pochhammer symbols
//! and log-space gamma ratios.
//!
//! Everything downstream (series terms, contour integrands, power-function
//! images) is assembled from ratios and products of gamma values, so the
//! primitives here work in log space and only exponentiate once per composite
//! quantity.

use num_complex::Complex64;

use crate::{Error, Result};

/// Distance below which an argument counts as sitting on a nonpositive
/// integer, i.e. on a gamma pole.
pub const POLE_TOL: f64 = 1e-14;

/// Lanczos coefficients for `g = 671/128`, full double precision on the right
/// half-plane.
const LANCZOS_G: f64 = 5.242_187_5;
const LANCZOS_C0: f64 = 0.999999999999997092;
const LANCZOS_COF: [f64; 14] = [
    57.1562356658629235,
    -59.5979603554754912,
    14.1360979747417471,
    -0.491913816097620199,
    0.339946499848118887e-4,
    0.465236289270485756e-4,
    -0.983744753048795646e-4,
    0.158088703224912494e-3,
    -0.210264441724104883e-3,
    0.217439618115212643e-3,
    -0.164318106536763890e-3,
    0.844182239838527433e-4,
    -0.261908384015814087e-4,
    0.368991826595316234e-5,
];
const SQRT_TWO_PI: f64 = 2.5066282746310005;

/// Nearest gamma pole to `z`, if `z` is within [`POLE_TOL`] of one.
pub fn nearest_pole(z: Complex64) -> Option<i64> {
    let n = z.re.round();
    if n <= 0.0 && (z - n).norm() <= POLE_TOL {
        Some(n as i64)
    } else {
        None
    }
}

fn log_gamma_right(z: Complex64) -> Complex64 {
    // Valid for re(z) > 0.  Computes log Γ(z) through Γ(z+1)/z.
    let base = z + LANCZOS_G;
    let mut ser = Complex64::new(LANCZOS_C0, 0.0);
    let mut y = z;
    for &c in &LANCZOS_COF {
        y += 1.0;
        ser += c / y;
    }
    (z + 0.5) * base.ln() - base + (SQRT_TWO_PI * ser / z).ln()
}

/// Principal-branch log of `sin(πz)`, stable for large `|Im z|` where the
/// direct sine overflows.
fn log_sin_pi(z: Complex64) -> Complex64 {
    if z.im.abs() < 20.0 {
        return (Complex64::new(std::f64::consts::PI, 0.0) * z).sin().ln();
    }
    // sin(πz) = -e^{∓iπz}(1 - e^{±2iπz}) / (2i) with the sign following Im z,
    // keeping the dominant exponential explicit.
    let i = Complex64::i();
    let pi = std::f64::consts::PI;
    if z.im > 0.0 {
        let small = (2.0 * pi * i * z).exp();
        -i * pi * z + (-(1.0 - small) / (2.0 * i)).ln()
    } else {
        let small = (-2.0 * pi * i * z).exp();
        i * pi * z + ((1.0 - small) / (2.0 * i)).ln()
    }
}

/// Log of the gamma function.
///
/// Real on the positive real axis; elsewhere the imaginary part is reported
/// modulo `2π` (each value exponentiates to the correct `Γ(z)`, which is all
/// the log-space composition in this crate relies on).  Arguments within
/// [`POLE_TOL`] of a nonpositive integer are rejected.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(Error::Domain(format!("log_gamma of non-finite {z}")));
    }
    if nearest_pole(z).is_some() {
        return Err(Error::GammaPole(z));
    }
    if z.re >= 0.5 {
        Ok(log_gamma_right(z))
    } else {
        // Reflection: Γ(z) Γ(1-z) = π / sin(πz).
        let pi = std::f64::consts::PI;
        Ok(Complex64::new(pi.ln(), 0.0) - log_sin_pi(z) - log_gamma_right(1.0 - z))
    }
}

/// Gamma function via [`log_gamma`].
pub fn gamma(z: Complex64) -> Result<Complex64> {
    Ok(log_gamma(z)?.exp())
}

/// Real digamma (asymptotic series after recurrence, reflection for the
/// negative axis).  Used for contour placement, where a few ulps of slack
/// are irrelevant; arguments at nonpositive integers return ±∞ rather than
/// panicking so that bracketing searches can steer past them.
pub fn digamma_real(mut x: f64) -> f64 {
    if x <= 0.0 {
        if x == x.round() {
            return f64::INFINITY;
        }
        // ψ(x) = ψ(1-x) - π cot(πx); the argument of the tangent is reduced
        // to the fractional part to keep the reflection accurate far out.
        let pi = std::f64::consts::PI;
        return digamma_real(1.0 - x) - pi / (pi * (x - x.floor())).tan();
    }
    let mut acc = 0.0;
    while x < 8.0 {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    acc + x.ln() - 0.5 / x
        - inv2
            * (1.0 / 12.0
                - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 * (1.0 / 240.0 - inv2 / 132.0))))
}

/// Rising factorial `(a)_k = a (a+1) ⋯ (a+k-1)`.
///
/// `(a)_0 = 1` for every `a`, including `a = 0` (the empty product; some
/// treatments exclude `a = 0` from that convention, but the operator
/// coefficient sums require the `k = 0` term to survive when `a` vanishes).
/// Small orders are evaluated as exact products so that nonpositive-integer
/// `a` yields exact zeros; large orders fall back to a gamma ratio.
pub fn pochhammer(a: Complex64, k: u32) -> Complex64 {
    const PRODUCT_LIMIT: u32 = 64;
    if k == 0 {
        return Complex64::new(1.0, 0.0);
    }
    if k <= PRODUCT_LIMIT {
        return product_pochhammer(a, k);
    }
    if let Some(n) = nearest_pole(a) {
        // (a)_k touches the zero factor a + |n| once k exceeds |n|.
        if (-n as u32) < k {
            return Complex64::new(0.0, 0.0);
        }
    }
    match (log_gamma(a + k as f64), log_gamma(a)) {
        (Ok(top), Ok(bottom)) => (top - bottom).exp(),
        _ => product_pochhammer(a, k),
    }
}

fn product_pochhammer(a: Complex64, k: u32) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    for j in 0..k {
        acc *= a + j as f64;
    }
    acc
}

/// A ratio `Π Γ(numerator_i) / Π Γ(denominator_j)` evaluated in log space
/// with a single exponentiation.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaRatioSpec {
    pub numerator: Vec<Complex64>,
    pub denominator: Vec<Complex64>,
}

/// Evaluate a gamma ratio.
///
/// A pole in any numerator argument is an error; a pole that occurs only in
/// the denominator makes the whole ratio an exact zero.
pub fn gamma_ratio(spec: &GammaRatioSpec) -> Result<Complex64> {
    for &z in &spec.numerator {
        if nearest_pole(z).is_some() {
            return Err(Error::GammaPole(z));
        }
    }
    if spec
        .denominator
        .iter()
        .any(|&z| nearest_pole(z).is_some())
    {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let mut log_acc = Complex64::new(0.0, 0.0);
    for &z in &spec.numerator {
        log_acc += log_gamma(z)?;
    }
    for &z in &spec.denominator {
        log_acc -= log_gamma(z)?;
    }
    Ok(log_acc.exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel_err(got: Complex64, want: Complex64) -> f64 {
        (got - want).norm() / want.norm().max(1e-300)
    }

    #[test]
    fn log_gamma_at_one_and_two_vanishes() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-14);
        assert!(log_gamma(c(2.0, 0.0)).unwrap().norm() < 1e-14);
    }

    #[test]
    fn log_gamma_half_matches_sqrt_pi() {
        // Oracle: Γ(1/2) = √π by the reflection formula at z = 1/2.
        let expect = std::f64::consts::PI.sqrt().ln();
        assert!((expect - 0.5723649429247001).abs() < 1e-15);
        let got = log_gamma(c(0.5, 0.0)).unwrap();
        assert!((got.re - expect).abs() < 1e-14, "got {got}");
        assert!(got.im.abs() < 1e-14);
    }

    #[test]
    fn log_gamma_five_matches_factorial() {
        // Oracle: Γ(5) = 4!.
        let factorial: f64 = (1..=4).product::<u32>() as f64;
        let expect = factorial.ln();
        assert!((expect - 3.1780538303479458).abs() < 1e-15);
        let got = log_gamma(c(5.0, 0.0)).unwrap();
        assert!((got.re - expect).abs() < 1e-13);
        assert!(got.im.abs() < 1e-14);
    }

    #[test]
    fn poles_are_rejected() {
        for z in [c(0.0, 0.0), c(-3.0, 0.0), c(-3.0, 1e-15), c(-7.0 + 5e-15, 0.0)] {
            assert!(matches!(log_gamma(z), Err(Error::GammaPole(_))), "{z}");
            assert!(gamma(z).is_err());
        }
        // Just outside the pole tolerance: finite.
        assert!(log_gamma(c(-3.0 + 1e-12, 0.0)).is_ok());
    }

    #[test]
    fn recurrence_holds_on_random_arguments() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..10_000 {
            let z = c(rng.gen_range(1e-3..30.0), rng.gen_range(-30.0..30.0));
            let ratio = (log_gamma(z + 1.0).unwrap() - log_gamma(z).unwrap()).exp();
            assert!(
                rel_err(ratio, z) <= 1e-12,
                "Γ(z+1)/Γ(z) = {ratio} vs z = {z}"
            );
        }
    }

    #[test]
    fn reflection_holds_away_from_poles() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let pi = std::f64::consts::PI;
        let mut checked = 0;
        while checked < 10_000 {
            let z = c(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
            if (z.re - z.re.round()).abs() < 0.05 && z.im.abs() < 0.05 {
                continue;
            }
            let lhs = (log_gamma(z).unwrap() + log_gamma(1.0 - z).unwrap()).exp();
            let rhs = pi / (pi * z).sin();
            assert!(rel_err(lhs, rhs) <= 1e-11, "z = {z}: {lhs} vs {rhs}");
            checked += 1;
        }
    }

    #[test]
    fn conjugate_symmetry_on_right_half_plane() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1_000 {
            let z = c(rng.gen_range(0.5..20.0), rng.gen_range(0.0..20.0));
            let a = log_gamma(z).unwrap();
            let b = log_gamma(z.conj()).unwrap();
            assert!((a - b.conj()).norm() <= 1e-12 * a.norm().max(1.0));
        }
    }

    #[test]
    fn digamma_matches_known_values() {
        // ψ(1) = -γ and ψ(1/2) = -γ - 2 ln 2.
        let euler_gamma = 0.5772156649015329;
        assert!((digamma_real(1.0) + euler_gamma).abs() < 1e-12);
        assert!((digamma_real(0.5) + euler_gamma + 2.0 * 2.0_f64.ln()).abs() < 1e-12);
        // Reflection branch: ψ(-1/2) = ψ(1/2) + 1/(1/2) = 2 - γ - 2 ln 2,
        // and the recurrence carries across several poles.
        assert!((digamma_real(-0.5) - (2.0 - euler_gamma - 2.0 * 2.0_f64.ln())).abs() < 1e-12);
        let via_recurrence = digamma_real(-2.3) + 1.0 / 3.3;
        assert!((digamma_real(-3.3) - via_recurrence).abs() < 1e-10);
        assert!(digamma_real(-4.0).is_infinite());
    }

    #[test]
    fn pochhammer_small_orders_are_exact_products() {
        assert_eq!(pochhammer(c(0.0, 0.0), 0), c(1.0, 0.0));
        assert_eq!(pochhammer(c(7.25, -1.0), 0), c(1.0, 0.0));
        assert_eq!(pochhammer(c(0.0, 0.0), 3), c(0.0, 0.0));
        // (2)_3 = 2·3·4.
        assert_eq!(pochhammer(c(2.0, 0.0), 3), c(24.0, 0.0));
        // (1/2)_2 = 0.5·1.5.
        assert_eq!(pochhammer(c(0.5, 0.0), 2), c(0.75, 0.0));
        // (-2)_4 includes the zero factor.
        assert_eq!(pochhammer(c(-2.0, 0.0), 4), c(0.0, 0.0));
        // (-5)_3 = (-5)(-4)(-3).
        assert_eq!(pochhammer(c(-5.0, 0.0), 3), c(-60.0, 0.0));
    }

    #[test]
    fn pochhammer_large_order_matches_product_form() {
        let a = c(0.75, 0.3);
        let direct = product_pochhammer(a, 100);
        let via_gamma = pochhammer(a, 100);
        assert!(rel_err(via_gamma, direct) <= 1e-12);
        // Nonpositive integer base with the zero factor inside the range.
        assert_eq!(pochhammer(c(-10.0, 0.0), 100), c(0.0, 0.0));
    }

    proptest::proptest! {
        // (a)_{k+j} = (a)_k (a+k)_j with all three in exact-product range.
        #[test]
        fn pochhammer_addition_rule(
            re in -5.0f64..5.0,
            im in -5.0f64..5.0,
            k in 0u32..20,
            j in 0u32..20,
        ) {
            let a = c(re, im);
            let whole = pochhammer(a, k + j);
            let split = pochhammer(a, k) * pochhammer(a + k as f64, j);
            let scale = whole.norm().max(split.norm()).max(1.0);
            proptest::prop_assert!((whole - split).norm() <= 1e-13 * scale);
        }
    }

    #[test]
    fn gamma_ratio_basic_values() {
        // Γ(5)/Γ(3) = 4·3.
        let spec = GammaRatioSpec {
            numerator: vec![c(5.0, 0.0)],
            denominator: vec![c(3.0, 0.0)],
        };
        assert!(rel_err(gamma_ratio(&spec).unwrap(), c(12.0, 0.0)) < 1e-14);
        // Balanced large arguments stay finite in log space.
        let spec = GammaRatioSpec {
            numerator: vec![c(170.25, 0.0), c(0.5, 0.0)],
            denominator: vec![c(170.0, 0.0), c(0.75, 0.0)],
        };
        assert!(gamma_ratio(&spec).unwrap().is_finite());
    }

    #[test]
    fn gamma_ratio_pole_semantics() {
        let num_pole = GammaRatioSpec {
            numerator: vec![c(-2.0, 0.0)],
            denominator: vec![c(1.0, 0.0)],
        };
        assert!(matches!(gamma_ratio(&num_pole), Err(Error::GammaPole(_))));
        let den_pole = GammaRatioSpec {
            numerator: vec![c(1.5, 0.0)],
            denominator: vec![c(-4.0, 0.0)],
        };
        assert_eq!(gamma_ratio(&den_pole).unwrap(), c(0.0, 0.0));
        // Pole on both sides is still an error.
        let both = GammaRatioSpec {
            numerator: vec![c(-1.0, 0.0)],
            denominator: vec![c(-1.0, 0.0)],
        };
        assert!(both.numerator[0] == both.denominator[0]);
        assert!(gamma_ratio(&both).is_err());
    }

    #[test]
    fn gamma_ratio_matches_recurrence() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(99);
        for _ in 0..1_000 {
            let z = c(rng.gen_range(0.1..40.0), rng.gen_range(-10.0..10.0));
            let spec = GammaRatioSpec {
                numerator: vec![z + 1.0],
                denominator: vec![z],
            };
            assert!(rel_err(gamma_ratio(&spec).unwrap(), z) <= 1e-12);
        }
    }
}
