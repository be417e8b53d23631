//! Modified Bessel function I_κ and its normalized variant i_κ.
//!
//! Everything is summed in log space so that the exponentially scaled
//! value e^{−u} I_κ(u) stays representable across u ∈ [0, 700]; the tail
//! formulas always pair I_κ with such an exponential factor.

use alloc::format;
#[allow(unused_imports)]
use num_traits::Float;

use super::gamma::ln_gamma_unchecked;
use crate::error::{Error, Result};

const LN_MAX: f64 = 709.0;

/// ln I_κ(u) for u > 0, κ > −1.
pub fn ln_bessel_i(kappa: f64, u: f64) -> Result<f64> {
    if !(kappa > -1.0) {
        return Err(Error::Domain(format!("bessel_i requires kappa > -1, got {kappa}")));
    }
    if u < 0.0 {
        return Err(Error::Domain(format!("bessel_i requires u >= 0, got {u}")));
    }
    if u == 0.0 {
        return Ok(if kappa == 0.0 {
            0.0
        } else if kappa > 0.0 {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        });
    }
    let ln_half_u = (0.5 * u).ln();
    // Streaming log-sum-exp over the ascending series; terms are positive
    // and unimodal in j.
    let mut lterm = kappa * ln_half_u - ln_gamma_unchecked(kappa + 1.0);
    let mut scale = lterm;
    let mut sum = 1.0_f64;
    let quarter_u2 = 0.25 * u * u;
    for j in 1..200_000usize {
        let jf = j as f64;
        lterm += quarter_u2.ln() - (jf * (kappa + jf)).ln();
        if lterm > scale {
            sum = sum * (scale - lterm).exp() + 1.0;
            scale = lterm;
        } else {
            let t = (lterm - scale).exp();
            sum += t;
            if t < 1e-18 * sum && quarter_u2 < jf * (kappa + jf) {
                break;
            }
        }
    }
    Ok(scale + sum.ln())
}

/// I_κ(u). Errors with [`Error::Overflow`] if the unscaled value exceeds
/// the floating range; use [`bessel_i_scaled`] in that regime.
pub fn bessel_i(kappa: f64, u: f64) -> Result<f64> {
    let ln = ln_bessel_i(kappa, u)?;
    if ln > LN_MAX {
        return Err(Error::Overflow(format!(
            "I_{kappa}({u}) exceeds the floating range; request the scaled value"
        )));
    }
    Ok(ln.exp())
}

/// Exponentially scaled e^{−u} I_κ(u).
pub fn bessel_i_scaled(kappa: f64, u: f64) -> Result<f64> {
    Ok((ln_bessel_i(kappa, u)? - u).exp())
}

/// Normalized i_κ(u) = (2/u)^κ Γ(κ+1) I_κ(u), continuous at 0 with
/// i_κ(0) = 1.
pub fn bessel_i_normalized(kappa: f64, u: f64) -> Result<f64> {
    if !(kappa > -1.0) {
        return Err(Error::Domain(format!(
            "bessel_i_normalized requires kappa > -1, got {kappa}"
        )));
    }
    let u = u.abs(); // i_κ is even in u
    if u < 20.0 {
        // Direct series Σ (u²/4)^j / ((κ+1)_j j!): positive terms, exact 1 at 0.
        let q = 0.25 * u * u;
        let mut term = 1.0;
        let mut sum = 1.0;
        for j in 1..1000usize {
            let jf = j as f64;
            term *= q / (jf * (kappa + jf));
            sum += term;
            if term < 1e-17 * sum {
                break;
            }
        }
        Ok(sum)
    } else {
        let ln = kappa * (2.0 / u).ln() + ln_gamma_unchecked(kappa + 1.0) + ln_bessel_i(kappa, u)?;
        if ln > LN_MAX {
            return Err(Error::Overflow(format!("i_{kappa}({u}) exceeds the floating range")));
        }
        Ok(ln.exp())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::super::quad::refine_symmetric;
    use core::f64::consts::PI;

    fn rel_close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol * b.abs(), "{a} vs {b}");
    }

    #[test]
    fn half_integer_closed_forms() {
        // I_{1/2}(u) = √(2/(πu)) sinh u.
        for u in [0.5, 2.0, 10.0, 40.0] {
            let expected = (2.0 / (PI * u)).sqrt() * u.sinh();
            rel_close(bessel_i(0.5, u).unwrap(), expected, 1e-12);
        }
        // I_{−1/2}(u) = √(2/(πu)) cosh u.
        let u = 3.0;
        rel_close(
            bessel_i(-0.5, u).unwrap(),
            (2.0 / (PI * u)).sqrt() * u.cosh(),
            1e-12,
        );
        // i_{1/2}(u) = sinh(u)/u.
        rel_close(bessel_i_normalized(0.5, 3.0).unwrap(), 3f64.sinh() / 3.0, 1e-12);
    }

    #[test]
    fn series_anchor() {
        rel_close(bessel_i(0.0, 1.0).unwrap(), 1.266_065_877_752_008_3, 1e-12);
        assert_eq!(bessel_i_normalized(0.3, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_i(0.3, 0.0).unwrap(), 0.0);
        assert_eq!(bessel_i(0.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn scaled_large_argument_vs_asymptotics() {
        // e^{−u} I_κ(u) ~ (1/√(2πu)) [1 − m1/(8u) + m1 m2 / (2 (8u)²) − …],
        // m_i = 4κ² − (2i−1)².
        for (kappa, u) in [(0.3, 120.0), (1.5, 700.0), (0.0, 300.0)] {
            let m1 = 4.0 * kappa * kappa - 1.0;
            let m2 = 4.0 * kappa * kappa - 9.0;
            let m3 = 4.0 * kappa * kappa - 25.0;
            let asym = (1.0 - m1 / (8.0 * u) + m1 * m2 / (2.0 * (8.0 * u).powi(2))
                - m1 * m2 * m3 / (6.0 * (8.0 * u).powi(3)))
                / (2.0 * PI * u).sqrt();
            rel_close(bessel_i_scaled(kappa, u).unwrap(), asym, 1e-7);
        }
    }

    #[test]
    fn overflow_is_reported() {
        assert!(matches!(bessel_i(0.5, 800.0), Err(Error::Overflow(_))));
        assert!(bessel_i_scaled(0.5, 800.0).unwrap().is_finite());
    }

    #[test]
    fn poisson_integral_representation() {
        // i_{κ−1/2}(u) = ∫ e^{zu} μ^κ(dz).
        for (kappa, u) in [(0.8, 1.5), (1.2, 4.0), (0.55, 0.3)] {
            let quad = refine_symmetric(kappa, 16, |rule| rule.integrate(|z| (z * u).exp())).unwrap();
            rel_close(bessel_i_normalized(kappa - 0.5, u).unwrap(), quad, 1e-11);
        }
    }

    #[test]
    fn large_order_decay() {
        // Scaled values decay fast in the order at fixed argument.
        let x = 1.0;
        let mut prev = bessel_i_scaled(2.0, x).unwrap();
        for ord in [5.0, 10.0, 20.0, 40.0] {
            let cur = bessel_i_scaled(ord, x).unwrap();
            assert!(cur < prev);
            prev = cur;
        }
        assert!(prev < 1e-40);
    }
}
