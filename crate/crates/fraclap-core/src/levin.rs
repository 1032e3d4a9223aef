//! Levin u-transform for accelerating slowly convergent series.
//!
//! Used by the hypergeometric evaluator near the unit circle, where direct
//! summation converges algebraically (or logarithmically) and useful accuracy
//! would otherwise need millions of terms.

use num_complex::Complex64;

/// Transform order beyond which rounding noise (amplified by the alternating
/// binomial weights) overwhelms the extrapolation in f64.  Estimates peak
/// around order 14-18; further terms only corrupt the table.
pub const MAX_ORDER: usize = 24;

/// Incremental Levin u-transform with remainder estimates `ω_k = (β+k) a_k`.
///
/// After each [`push`](Self::push) the highest-order estimate uses every term
/// seen so far, up to [`MAX_ORDER`]; later pushes are ignored.  The recursion
/// operates on the numerator and denominator tables separately; the estimate
/// is their ratio.  Drivers should watch [`last_delta`](Self::last_delta) and
/// keep the estimate where it bottoms out, rather than trusting the final
/// order unconditionally.
#[derive(Debug, Clone)]
pub struct LevinU {
    beta: f64,
    num: Vec<Complex64>,
    den: Vec<Complex64>,
    estimate: Option<Complex64>,
    previous: Option<Complex64>,
}

impl LevinU {
    pub fn new() -> Self {
        Self::with_beta(1.0)
    }

    pub fn with_beta(beta: f64) -> Self {
        Self {
            beta,
            num: Vec::new(),
            den: Vec::new(),
            estimate: None,
            previous: None,
        }
    }

    /// Feed the partial sum `S_k` and the term `a_k` that produced it.
    /// Returns the current accelerated estimate.  Once the table is
    /// [saturated](Self::saturated) the state is frozen and the existing
    /// estimate is returned unchanged.
    pub fn push(&mut self, partial_sum: Complex64, term: Complex64) -> Complex64 {
        if self.saturated() {
            return self.estimate.unwrap_or(partial_sum);
        }
        let j = self.num.len();
        let omega = (self.beta + j as f64) * term;
        if omega.norm() < 1e-290 {
            // The series terminated (or its terms underflowed); the partial
            // sum itself is the best available value.
            self.previous = self.estimate;
            self.estimate = Some(partial_sum);
            return partial_sum;
        }
        self.num.push(partial_sum / omega);
        self.den.push(Complex64::new(1.0, 0.0) / omega);
        // In-place triangle update: after this loop, slot k holds the
        // level-(j-k) quantity built from entries k..=j.
        for k in (0..j).rev() {
            let level = j - k;
            let c = coefficient(self.beta, k, level);
            self.num[k] = self.num[k + 1] - c * self.num[k];
            self.den[k] = self.den[k + 1] - c * self.den[k];
        }
        self.previous = self.estimate;
        let est = if self.den[0].norm() > 1e-290 {
            self.num[0] / self.den[0]
        } else {
            partial_sum
        };
        self.estimate = Some(est);
        est
    }

    pub fn estimate(&self) -> Option<Complex64> {
        self.estimate
    }

    /// Absolute change between the two most recent estimates; `None` until
    /// two estimates exist.
    pub fn last_delta(&self) -> Option<f64> {
        match (self.estimate, self.previous) {
            (Some(a), Some(b)) => Some((a - b).norm()),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        self.num.len()
    }

    pub fn is_empty(&self) -> bool {
        self.num.is_empty()
    }

    /// True once further terms can no longer change the estimate.
    pub fn saturated(&self) -> bool {
        self.num.len() > MAX_ORDER
    }
}

impl Default for LevinU {
    fn default() -> Self {
        Self::new()
    }
}

/// Recursion factor `(β+k)(β+k+i-1)^{i-2} / (β+k+i)^{i-1}` for level `i`,
/// evaluated in log space to stay finite at high order.
fn coefficient(beta: f64, k: usize, level: usize) -> f64 {
    let bk = beta + k as f64;
    let i = level as f64;
    if level == 1 {
        return 1.0;
    }
    (bk.ln() + (i - 2.0) * (bk + i - 1.0).ln() - (i - 1.0) * (bk + i).ln()).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accelerates_alternating_harmonic_series() {
        // Σ (-1)^{k+1}/k = ln 2.
        let mut acc = LevinU::new();
        let mut sum = Complex64::new(0.0, 0.0);
        let mut est = sum;
        for k in 1..=25 {
            let term = Complex64::new(if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64, 0.0);
            sum += term;
            est = acc.push(sum, term);
        }
        assert!(
            (est.re - 2.0_f64.ln()).abs() < 1e-12,
            "estimate {est} vs ln 2"
        );
        // Direct summation of 25 terms is only good to ~2e-2.
        assert!((sum.re - 2.0_f64.ln()).abs() > 1e-2);
    }

    #[test]
    fn accelerates_leibniz_series() {
        // Σ (-1)^k/(2k+1) = π/4.
        let mut acc = LevinU::new();
        let mut sum = Complex64::new(0.0, 0.0);
        let mut est = sum;
        for k in 0..30 {
            let term = Complex64::new(
                if k % 2 == 0 { 1.0 } else { -1.0 } / (2 * k + 1) as f64,
                0.0,
            );
            sum += term;
            est = acc.push(sum, term);
        }
        assert!((est.re - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
    }

    #[test]
    fn accelerates_slow_monotone_series() {
        // Σ 1/k² = π²/6 converges like 1/k; 16 raw terms give ~1 digit.
        let mut acc = LevinU::new();
        let mut sum = Complex64::new(0.0, 0.0);
        let mut est = sum;
        for k in 1..=16u32 {
            let term = Complex64::new(1.0 / (k as f64 * k as f64), 0.0);
            sum += term;
            est = acc.push(sum, term);
        }
        let target = std::f64::consts::PI.powi(2) / 6.0;
        assert!((est.re - target).abs() < 1e-8, "estimate {est}");
    }

    #[test]
    fn saturation_freezes_the_table() {
        let mut acc = LevinU::new();
        let mut sum = Complex64::new(0.0, 0.0);
        for k in 1..=(MAX_ORDER as u32 + 10) {
            let term = Complex64::new(1.0 / (k as f64 * k as f64), 0.0);
            sum += term;
            acc.push(sum, term);
        }
        assert!(acc.saturated());
        assert_eq!(acc.len(), MAX_ORDER + 1);
        let frozen = acc.estimate().unwrap();
        let after = acc.push(sum, Complex64::new(1.0, 0.0));
        assert_eq!(after, frozen);
    }

    #[test]
    fn exact_geometric_series_is_reproduced() {
        // Complex ratio, |q| < 1: Levin is exact for geometric series after a
        // few terms.
        let q = Complex64::new(0.4, 0.3);
        let mut acc = LevinU::new();
        let mut sum = Complex64::new(0.0, 0.0);
        let mut term = Complex64::new(1.0, 0.0);
        let mut est = sum;
        for _ in 0..12 {
            sum += term;
            est = acc.push(sum, term);
            term *= q;
        }
        let target = Complex64::new(1.0, 0.0) / (Complex64::new(1.0, 0.0) - q);
        assert!((est - target).norm() < 1e-12);
    }

    #[test]
    fn terminated_series_returns_partial_sum() {
        let mut acc = LevinU::new();
        let sum = Complex64::new(2.5, 0.0);
        let est = acc.push(sum, Complex64::new(0.0, 0.0));
        assert_eq!(est, sum);
    }
}
