//! Stirling numbers of the second kind and the kernel coefficient tables.
//!
//! For parameter vectors `f = (f_1, …, f_r)` and nonnegative integer
//! multiplicities `m = (m_1, …, m_r)` with `m = m_1 + ⋯ + m_r`, the numbers
//! `σ_0, …, σ_m` are defined by the generating polynomial
//!
//! ```text
//! (f_1 + x)_{m_1} ⋯ (f_r + x)_{m_r} = Σ_{j=0}^{m} σ_{m-j} x^j,
//! ```
//!
//! and the coefficients attached to the kernel's integer shifts are
//!
//! ```text
//! A_k = Σ_{j=k}^{m} S(j, k) σ_{m-j},    k = 0, …, m,
//! ```
//!
//! with `S(j, k)` a Stirling number of the second kind.  Two structural
//! identities pin the table down: `A_0 = (f_1)_{m_1} ⋯ (f_r)_{m_r}` and
//! `A_m = 1`.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::special::pochhammer;
use crate::{Error, Result};

/// Largest first argument served by [`stirling2`].
pub const STIRLING_MAX_N: u32 = 64;

fn stirling_table() -> &'static Vec<Vec<Option<u128>>> {
    static TABLE: OnceLock<Vec<Vec<Option<u128>>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let n_max = STIRLING_MAX_N as usize;
        let mut rows: Vec<Vec<Option<u128>>> = Vec::with_capacity(n_max + 1);
        rows.push(vec![Some(1)]);
        for n in 1..=n_max {
            let prev = &rows[n - 1];
            let mut row: Vec<Option<u128>> = vec![Some(0); n + 1];
            for k in 1..=n {
                let carry = if k < prev.len() { prev[k] } else { Some(0) };
                let diag = prev[k - 1];
                // S(n, k) = k·S(n-1, k) + S(n-1, k-1); None marks overflow.
                row[k] = match (carry, diag) {
                    (Some(c), Some(d)) => c.checked_mul(k as u128).and_then(|v| v.checked_add(d)),
                    _ => None,
                };
            }
            rows.push(row);
        }
        rows
    })
}

/// Stirling number of the second kind `S(n, k)`: the number of partitions of
/// an `n`-set into `k` nonempty blocks.
///
/// Backed by a lazily built, read-only triangle up to `n = 64`; values beyond
/// the `u128` width (or `n > 64`) are errors.
pub fn stirling2(n: u32, k: u32) -> Result<u128> {
    if n > STIRLING_MAX_N {
        return Err(Error::Domain(format!(
            "stirling2 first argument {n} exceeds table bound {STIRLING_MAX_N}"
        )));
    }
    if k > n {
        return Ok(0);
    }
    stirling_table()[n as usize][k as usize].ok_or(Error::Overflow("stirling2"))
}

/// Coefficients `σ_0, …, σ_m` of the generating polynomial, indexed so that
/// `σ_{m-j}` multiplies `x^j`.
///
/// Computed by expanding the product of linear factors `(x + f_i + ℓ)`,
/// `ℓ = 0, …, m_i - 1`; no special-function evaluation is involved.
pub fn sigma_coefficients(f: &[Complex64], multiplicities: &[u32]) -> Result<Vec<Complex64>> {
    if f.len() != multiplicities.len() {
        return Err(Error::Shape(format!(
            "{} shift parameters but {} multiplicities",
            f.len(),
            multiplicities.len()
        )));
    }
    // poly[j] is the coefficient of x^j, ascending degree.
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    for (&fi, &mi) in f.iter().zip(multiplicities) {
        for l in 0..mi {
            let root = fi + l as f64;
            poly.push(Complex64::new(0.0, 0.0));
            for j in (0..poly.len()).rev() {
                let lower = poly[j] * root;
                poly[j] = if j > 0 { poly[j - 1] + lower } else { lower };
            }
        }
    }
    let m = poly.len() - 1;
    Ok((0..=m).map(|i| poly[m - i]).collect())
}

/// The coefficient table `A_0, …, A_m` for one parameter set, together with
/// the quantities needed to reuse it.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    sigma: Vec<Complex64>,
    a: Vec<Complex64>,
    a0: Complex64,
}

impl CoefficientTable {
    /// Build the table.  Fails if the shapes disagree, if `m` exceeds the
    /// Stirling bound, or if `A_0 = Π (f_i)_{m_i}` vanishes (a degenerate
    /// parameter set in which the kernel normalization is undefined).
    pub fn build(f: &[Complex64], multiplicities: &[u32]) -> Result<Self> {
        let sigma = sigma_coefficients(f, multiplicities)?;
        let m = sigma.len() - 1;
        let mut a = Vec::with_capacity(m + 1);
        for k in 0..=m {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in k..=m {
                let s = stirling2(j as u32, k as u32)? as f64;
                acc += s * sigma[m - j];
            }
            a.push(acc);
        }
        let a0 = f
            .iter()
            .zip(multiplicities)
            .map(|(&fi, &mi)| pochhammer(fi, mi))
            .product::<Complex64>();
        if a0.norm() == 0.0 {
            return Err(Error::Domain(
                "A_0 vanishes: some (f_i)_{m_i} is an exact zero".into(),
            ));
        }
        Ok(Self { sigma, a, a0 })
    }

    /// Total multiplicity `m`.
    pub fn order(&self) -> u32 {
        (self.a.len() - 1) as u32
    }

    /// `σ_0, …, σ_m`.
    pub fn sigma(&self) -> &[Complex64] {
        &self.sigma
    }

    /// `A_0, …, A_m`.
    pub fn a(&self) -> &[Complex64] {
        &self.a
    }

    /// `A_k / A_0`, the normalized weight of the `k`-th shift.
    pub fn normalized(&self, k: u32) -> Complex64 {
        self.a[k as usize] / self.a0
    }

    /// `A_0` as the closed product `Π (f_i)_{m_i}`.
    pub fn a0(&self) -> Complex64 {
        self.a0
    }
}
