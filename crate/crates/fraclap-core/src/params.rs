//! Operator parameter sets and the canonical index shifts built from them.
//!
//! A parameter set fixes the kernel
//! `F[a, b, (f_i + m_i); μ, (f_i); ·]` together with the order `ν`, the
//! weight offset `h`, and the homogeneity degree `δ`.  Everything downstream
//! (closed-form power images, Laplace kernels, asymptotic exponents) is
//! phrased through the two affine shifts
//!
//! ```text
//! c₁(t) = 1 + h + t/ν
//! c₂(t) = c₁(δ - 1) - t/ν
//! p_k   = μ - a - b - k
//! ```
//!
//! which are provided here as methods so call sites cannot drift apart.

use crate::coeffs::CoefficientTable;
use crate::error::{Error, Result};
use crate::special::pochhammer;
use num_complex::Complex64;

/// Validated parameter set for the integral operator pair.
#[derive(Debug, Clone)]
pub struct OperatorParams {
    mu: Complex64,
    a: Complex64,
    b: Complex64,
    h: f64,
    nu: f64,
    delta: Complex64,
    shifts: Vec<Complex64>,
    multiplicities: Vec<u32>,
    table: CoefficientTable,
}

impl OperatorParams {
    /// Validates `Re μ > 0`, `ν > 0`, `h ≥ 0`, matching shift/multiplicity
    /// shapes, and a nonzero leading coefficient `A_0 = Π (f_i)_{m_i}`.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        mu: Complex64,
        a: Complex64,
        b: Complex64,
        h: f64,
        nu: f64,
        delta: Complex64,
        shifts: Vec<Complex64>,
        multiplicities: Vec<u32>,
    ) -> Result<Self> {
        if !mu.re.is_finite() || !mu.im.is_finite() || mu.re <= 0.0 {
            return Err(Error::Condition(format!(
                "order mu must have positive real part, got {mu}"
            )));
        }
        if !nu.is_finite() || nu <= 0.0 {
            return Err(Error::Condition(format!("nu must be positive, got {nu}")));
        }
        if !h.is_finite() || h < 0.0 {
            return Err(Error::Condition(format!(
                "h must be finite and non-negative, got {h}"
            )));
        }
        for z in [a, b, delta].iter().chain(shifts.iter()) {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::Condition(format!("non-finite parameter {z}")));
            }
        }
        let table = CoefficientTable::build(&shifts, &multiplicities)?;
        Ok(Self {
            mu,
            a,
            b,
            h,
            nu,
            delta,
            shifts,
            multiplicities,
            table,
        })
    }

    pub fn mu(&self) -> Complex64 {
        self.mu
    }

    pub fn a(&self) -> Complex64 {
        self.a
    }

    pub fn b(&self) -> Complex64 {
        self.b
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn nu(&self) -> f64 {
        self.nu
    }

    pub fn delta(&self) -> Complex64 {
        self.delta
    }

    pub fn shifts(&self) -> &[Complex64] {
        &self.shifts
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicities
    }

    pub fn table(&self) -> &CoefficientTable {
        &self.table
    }

    /// Total multiplicity `m = Σ m_i`, the polynomial degree of the kernel's
    /// coefficient expansion.
    pub fn order(&self) -> u32 {
        self.table.order()
    }

    /// `c₁(t) = 1 + h + t/ν`.
    pub fn c1(&self, t: Complex64) -> Complex64 {
        Complex64::new(1.0 + self.h, 0.0) + t / self.nu
    }

    /// `c₂(t) = c₁(δ - 1) - t/ν`.  Kept as a literal composition of `c₁` so
    /// the pair satisfies `c₁(t) + c₂(t) = c₁(0) + c₁(δ - 1)` exactly.
    pub fn c2(&self, t: Complex64) -> Complex64 {
        self.c1(self.delta - 1.0) - t / self.nu
    }

    /// `p_k = μ - a - b - k`.
    pub fn p_shift(&self, k: u32) -> Complex64 {
        self.mu - self.a - self.b - Complex64::new(k as f64, 0.0)
    }

    /// Series weight `(A_k/A_0) (a)_k (b)_k` shared by the power images and
    /// both Laplace kernels.
    pub fn weight(&self, k: u32) -> Complex64 {
        self.table.normalized(k) * pochhammer(self.a, k) * pochhammer(self.b, k)
    }

    /// `min(0, Re p_m)`: the endpoint exponent correction from the kernel's
    /// near-unit behaviour.
    pub fn shift_floor(&self) -> f64 {
        self.p_shift(self.order()).re.min(0.0)
    }

    /// Existence condition for the left-sided power image of `t^λ`:
    /// `Re c₁(λ) > -min(0, Re p_m)`.
    pub fn lemma_condition_i(&self, lambda: Complex64) -> bool {
        self.c1(lambda).re > -self.shift_floor()
    }

    /// Existence condition for the right-sided power image of `t^λ`:
    /// `Re c₂(λ) > -min(0, Re p_m)`.
    pub fn lemma_condition_j(&self, lambda: Complex64) -> bool {
        self.c2(lambda).re > -self.shift_floor()
    }
}

/// Test profile `φ(t) = scale · t^power · e^{-decay·t}`, the family used by
/// the verification harness.  Powers may be complex; `decay ≥ 0`.
#[derive(Debug, Clone, Copy)]
pub struct TestFunction {
    pub scale: Complex64,
    pub power: Complex64,
    pub decay: f64,
}

impl TestFunction {
    pub fn new(scale: Complex64, power: Complex64, decay: f64) -> Result<Self> {
        if !decay.is_finite() || decay < 0.0 {
            return Err(Error::Condition(format!(
                "decay must be finite and non-negative, got {decay}"
            )));
        }
        if !power.re.is_finite() || !power.im.is_finite() {
            return Err(Error::Condition("non-finite power".into()));
        }
        Ok(Self {
            scale,
            power,
            decay,
        })
    }

    /// Pure power `t^λ` (no exponential factor).
    pub fn power_only(power: Complex64) -> Self {
        Self {
            scale: Complex64::new(1.0, 0.0),
            power,
            decay: 0.0,
        }
    }

    /// Evaluate at `t > 0` in log space, so large `|power|` and strong decay
    /// cannot overflow intermediates.
    pub fn eval(&self, t: f64) -> Complex64 {
        debug_assert!(t > 0.0, "test functions are evaluated on (0, ∞)");
        self.scale * (self.power * t.ln() - self.decay * t).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample() -> OperatorParams {
        OperatorParams::new(
            c(1.5, 0.0),
            c(0.3, 0.0),
            c(0.4, 0.0),
            0.2,
            1.5,
            c(0.7, 0.1),
            vec![c(1.0, 0.0)],
            vec![2],
        )
        .unwrap()
    }

    #[test]
    fn rejects_invalid_parameters() {
        let p = |mu: Complex64, h: f64, nu: f64| {
            OperatorParams::new(mu, c(0.0, 0.0), c(0.0, 0.0), h, nu, c(0.0, 0.0), vec![], vec![])
        };
        assert!(p(c(0.0, 0.0), 0.0, 1.0).is_err());
        assert!(p(c(-1.0, 2.0), 0.0, 1.0).is_err());
        assert!(p(c(1.0, 0.0), -0.1, 1.0).is_err());
        assert!(p(c(1.0, 0.0), 0.0, 0.0).is_err());
        assert!(p(c(1.0, 0.0), 0.0, -2.0).is_err());
        assert!(p(c(f64::NAN, 0.0), 0.0, 1.0).is_err());
    }

    #[test]
    fn rejects_shape_mismatch_and_zero_leading_coefficient() {
        let r = OperatorParams::new(
            c(1.0, 0.0),
            c(0.1, 0.0),
            c(0.2, 0.0),
            0.0,
            1.0,
            c(0.0, 0.0),
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![1],
        );
        assert!(r.is_err());
        // (f)_m = (-1)_2 = 0 makes A_0 vanish.
        let r = OperatorParams::new(
            c(1.0, 0.0),
            c(0.1, 0.0),
            c(0.2, 0.0),
            0.0,
            1.0,
            c(0.0, 0.0),
            vec![c(-1.0, 0.0)],
            vec![2],
        );
        assert!(r.is_err());
    }

    #[test]
    fn shifts_match_direct_formulas() {
        let p = sample();
        let t = c(0.3, -0.2);
        let c1 = p.c1(t);
        assert!((c1 - (c(1.2, 0.0) + t / 1.5)).norm() < 1e-15);
        // c₂(t) = 1 + h + (δ - 1 - t)/ν, written out.
        let direct = c(1.2, 0.0) + (p.delta() - 1.0 - t) / 1.5;
        assert!((p.c2(t) - direct).norm() < 1e-15);
    }

    #[test]
    fn shift_pair_sum_rule() {
        // c₁(t) + c₂(t) is independent of t.
        let p = sample();
        let reference = p.c1(c(0.0, 0.0)) + p.c1(p.delta() - 1.0);
        for t in [c(0.0, 0.0), c(2.5, 1.0), c(-3.0, 0.25)] {
            assert!((p.c1(t) + p.c2(t) - reference).norm() < 1e-14);
        }
    }

    #[test]
    fn p_shift_and_weights() {
        let p = sample();
        assert!((p.p_shift(0) - c(0.8, 0.0)).norm() < 1e-15);
        assert!((p.p_shift(2) - c(-1.2, 0.0)).norm() < 1e-15);
        assert_eq!(p.weight(0), c(1.0, 0.0));
        // A = [2, 4, 1] for f = [1], m = [2]; weight(2) = (1/2)(a)_2(b)_2.
        let w2 = p.weight(2);
        let expect = 0.5 * (0.3 * 1.3) * (0.4 * 1.4);
        assert!((w2 - c(expect, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn lemma_conditions_follow_shift_floor() {
        let p = sample();
        // p_m = 1.5 - 0.3 - 0.4 - 2 = -1.2, so conditions need Re c > 1.2.
        assert!((p.shift_floor() + 1.2).abs() < 1e-14);
        assert!(p.lemma_condition_i(c(0.5, 0.0))); // c1 = 1.2 + 0.5/1.5 ≈ 1.533
        assert!(!p.lemma_condition_i(c(-0.1, 0.0))); // c1 ≈ 1.133
        assert!(!p.lemma_condition_j(c(1.0, 0.0)));
    }

    #[test]
    fn test_function_matches_direct_evaluation() {
        let f = TestFunction::new(c(2.0, 0.0), c(1.5, 0.0), 3.0).unwrap();
        let t = 2.0f64;
        let expect = 2.0 * t.powf(1.5) * (-3.0 * t).exp();
        assert!((f.eval(t) - c(expect, 0.0)).norm() < 1e-15 * expect.abs());

        // Complex power: t^i = cos(ln t) + i sin(ln t).
        let g = TestFunction::power_only(c(0.0, 1.0));
        let v = g.eval(3.0);
        assert!((v - c(3.0f64.ln().cos(), 3.0f64.ln().sin())).norm() < 1e-15);
    }

    #[test]
    fn test_function_rejects_bad_decay() {
        assert!(TestFunction::new(c(1.0, 0.0), c(0.0, 0.0), -1.0).is_err());
        assert!(TestFunction::new(c(1.0, 0.0), c(0.0, 0.0), f64::NAN).is_err());
    }
}
