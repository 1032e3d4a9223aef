use num_complex::Complex64;
use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A gamma-function argument sits on (or numerically at) a nonpositive
    /// integer where the function has a pole.
    #[error("gamma pole at argument {re}{im:+}i", re = .0.re, im = .0.im)]
    GammaPole(Complex64),

    /// Input outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A convergence condition attached to a closed-form identity is violated
    /// by the supplied parameters.
    #[error("condition violated: {0}")]
    Condition(String),

    /// An iterative computation failed to reach its tolerance.
    #[error("{what} did not converge within {limit} {unit}")]
    NoConvergence {
        what: &'static str,
        limit: usize,
        unit: &'static str,
    },

    /// A series lies outside its absolute-convergence domain.
    #[error("outside convergence domain: {0}")]
    ConvergenceDomain(String),

    /// An exact integer computation exceeded the available width.
    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    /// A floating-point magnitude left the representable range.
    #[error("floating-point range exceeded in {0}")]
    Range(&'static str),

    /// Magnitudes on a probe window are too small to carry information.
    #[error("underflow: {0}")]
    Underflow(String),

    /// No vertical line separates the two pole families of a Mellin-Barnes
    /// integrand.
    #[error("contour cannot separate pole families (left edge {left}, right edge {right})")]
    ContourSeparation { left: f64, right: f64 },

    /// The contour integrand failed the tail-decay test at the maximum
    /// truncation height.
    #[error("contour tail still {tail:.2e} of total at height {height}")]
    ContourTail { height: f64, tail: f64 },

    /// A structural precondition on a spec (shapes, pair counts, fixed slots)
    /// does not hold.
    #[error("shape mismatch: {0}")]
    Shape(String),

    /// An integrand is not integrable at an endpoint of the integration range.
    #[error("non-integrable endpoint: {0}")]
    NonIntegrable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
