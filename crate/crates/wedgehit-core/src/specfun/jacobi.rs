//! Jacobi, Gegenbauer and Chebyshev-U polynomials.
//!
//! The standard normalization is used throughout: P_j^{(a,b)}(1) =
//! (a+1)_j / j!, with the Gauss-hypergeometric argument (1−x)/2.

use alloc::format;
#[allow(unused_imports)]
use num_traits::Float;

use super::gamma::ln_gamma_unchecked;
use super::quad::refine_symmetric;
use crate::error::{Error, Result};
use crate::model::SeriesControl;

/// Divisor convention for [`jacobi_orthonormal`].
///
/// The norm formula is announced as a *squared* L²-norm but the source
/// text divides by it directly; `Orthonormal` divides by its square root
/// (true orthonormal polynomials), `Literal` keeps the literal division
/// for sensitivity tests.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormConvention {
    Orthonormal,
    Literal,
}

/// Jacobi polynomial P_j^{(a,b)}(x) by the three-term recurrence in j.
pub fn jacobi_p(j: usize, a: f64, b: f64, x: f64) -> f64 {
    if j == 0 {
        return 1.0;
    }
    let mut pm1 = 1.0;
    let mut p = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0;
    for n in 2..=j {
        let n = n as f64;
        let c = 2.0 * n + a + b;
        let a1 = 2.0 * n * (n + a + b) * (c - 2.0);
        let a2 = (c - 1.0) * (a * a - b * b);
        let a3 = (c - 1.0) * c * (c - 2.0);
        let a4 = 2.0 * (n + a - 1.0) * (n + b - 1.0) * c;
        let next = ((a2 + a3 * x) * p - a4 * pm1) / a1;
        pm1 = p;
        p = next;
    }
    p
}

/// Squared L²-norm of P_j^{(a,b)} against the weight (1−u)^a (1+u)^b.
pub fn jacobi_sq_norm(j: usize, a: f64, b: f64) -> f64 {
    ln_jacobi_sq_norm(j, a, b).exp()
}

/// Log of [`jacobi_sq_norm`]; the Gamma ratios grow quickly in j.
pub fn ln_jacobi_sq_norm(j: usize, a: f64, b: f64) -> f64 {
    let jf = j as f64;
    if j == 0 {
        // Equivalent form that stays finite when a + b + 1 = 0.
        return (a + b + 1.0) * 2f64.ln() + ln_gamma_unchecked(a + 1.0)
            + ln_gamma_unchecked(b + 1.0)
            - ln_gamma_unchecked(a + b + 2.0);
    }
    (a + b + 1.0) * 2f64.ln() - (2.0 * jf + a + b + 1.0).ln()
        + ln_gamma_unchecked(jf + a + 1.0)
        + ln_gamma_unchecked(jf + b + 1.0)
        - ln_gamma_unchecked(jf + a + b + 1.0)
        - ln_gamma_unchecked(jf + 1.0)
}

/// p_j^{(a,b)}(x): the Jacobi polynomial divided by the normalization
/// selected by `convention`.
pub fn jacobi_orthonormal(j: usize, a: f64, b: f64, x: f64, convention: NormConvention) -> f64 {
    let ln_h = ln_jacobi_sq_norm(j, a, b);
    let divisor = match convention {
        NormConvention::Orthonormal => (0.5 * ln_h).exp(),
        NormConvention::Literal => ln_h.exp(),
    };
    jacobi_p(j, a, b, x) / divisor
}

/// Gegenbauer polynomial C_j^{(ν)}(x) = ((2ν)_j / (ν+1/2)_j) P_j^{(ν−1/2,ν−1/2)}(x).
pub fn gegenbauer_c(j: usize, nu: f64, x: f64) -> f64 {
    // Termwise ratio avoids overflow of the two Pochhammer products.
    let mut ratio = 1.0;
    for i in 0..j {
        ratio *= (2.0 * nu + i as f64) / (nu + 0.5 + i as f64);
    }
    ratio * jacobi_p(j, nu - 0.5, nu - 0.5, x)
}

/// Chebyshev polynomial of the second kind, U_j(cos φ) = sin((j+1)φ)/sin φ.
pub fn chebyshev_u(j: usize, x: f64) -> f64 {
    if j == 0 {
        return 1.0;
    }
    let mut um1 = 1.0;
    let mut u = 2.0 * x;
    for _ in 2..=j {
        let next = 2.0 * x * u - um1;
        um1 = u;
        u = next;
    }
    u
}

/// Relative residual of the Gegenbauer product identity
/// C_j^{(k)}(2x²−1) = ∫ C_{2j}^{(2k)}(ux) μ^k(du).
pub fn xu_identity_check(j: usize, k: f64, x: f64, ctrl: &SeriesControl) -> Result<f64> {
    if !(k > 0.0) {
        return Err(Error::Domain(format!("xu identity requires k > 0, got {k}")));
    }
    let lhs = gegenbauer_c(j, k, 2.0 * x * x - 1.0);
    let rhs = refine_symmetric(k, ctrl.quad_nodes, |rule| {
        rule.integrate(|u| gegenbauer_c(2 * j, 2.0 * k, u * x))
    })?;
    let scale = lhs.abs().max(rhs.abs()).max(1e-300);
    Ok((lhs - rhs).abs() / scale)
}
