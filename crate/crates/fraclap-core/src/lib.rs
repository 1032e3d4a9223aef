//! Generalized fractional integral operators of hypergeometric type.
//!
//! The pair of operators implemented here act on functions over `(0, ∞)` and
//! carry a `(r+2)F(r+1)` hypergeometric kernel whose upper parameters exceed
//! the lower ones by nonnegative integers.  Images of power functions are
//! finite sums of gamma-function ratios; Laplace transforms of the operator
//! images admit closed kernel representations through Fox H and Fox-Wright
//! functions.  The crate provides:
//!
//! * [`special`]: complex log-gamma, Pochhammer symbols, gamma ratios.
//! * [`coeffs`]: Stirling numbers of the second kind and the coefficient
//!   tables `A_k` attached to the kernel's integer parameter shifts.
//! * [`hypergeom`]: generalized hypergeometric series `pFq`, the operator
//!   kernel `F`, and its near-unit-argument classification.
//! * [`mellin`]: Fox H-functions by Mellin-Barnes contour quadrature,
//!   Fox-Wright series, and the reduction between the two.
//! * [`params`] / [`operators`]: operator parameter sets, power-function
//!   images, direct quadrature evaluation, and the Laplace-dual kernels.
//! * [`laplace`]: Laplace transforms on `(0, ∞)`, verification of the
//!   kernel-duality identities, and asymptotic-rate probes.
//!
//! With the default `parallel` feature, contour panels, verification grids
//! and suite queries run on rayon with deterministic, fixed-order reduction;
//! without it every code path is sequential.

pub mod coeffs;
mod error;
pub mod hypergeom;
pub mod laplace;
pub mod levin;
pub mod mellin;
pub mod operators;
pub mod par;
pub mod params;
pub mod quad;
pub mod special;

pub use error::{Error, Result};
pub use num_complex::Complex64;
