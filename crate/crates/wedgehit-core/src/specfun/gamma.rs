//! Gamma function machinery: log-Gamma, Pochhammer symbols and the lower
//! incomplete Gamma integral.

use alloc::format;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

// Lanczos approximation, g = 7, 9 terms.
const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln Γ(x) for x > 0.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("ln_gamma requires x > 0, got {x}")));
    }
    Ok(ln_gamma_unchecked(x))
}

pub(crate) fn ln_gamma_unchecked(x: f64) -> f64 {
    // Reflection is never needed (x > 0); for x < 0.5 use the recurrence
    // ln Γ(x) = ln Γ(x+1) − ln x to keep the Lanczos sum well conditioned.
    if x < 0.5 {
        return ln_gamma_unchecked(x + 1.0) - x.ln();
    }
    let z = x - 1.0;
    let mut acc = LANCZOS[0];
    for (i, c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * core::f64::consts::PI).ln() + (z + 0.5) * t.ln() - t + acc.ln()
}

/// Pochhammer symbol (a)_k = a(a+1)…(a+k−1), with (a)₀ = 1.
///
/// The iterated product realizes all the conventions at once: (0)_k is
/// the Kronecker delta δ_{k0}, and for a = −n a negative integer the
/// product vanishes as soon as k > n and otherwise equals the signed
/// binomial value (−1)^k n!/(n−k)!.
pub fn pochhammer(a: f64, k: usize) -> f64 {
    let mut prod = 1.0;
    for i in 0..k {
        prod *= a + i as f64;
    }
    prod
}

/// Lower incomplete Gamma integral γ(a, x) = ∫₀ˣ e^{−u} u^{a−1} du.
pub fn lower_inc_gamma(a: f64, x: f64) -> Result<f64> {
    let p = reg_lower_inc_gamma(a, x)?;
    Ok(p * ln_gamma_unchecked(a).exp())
}

/// Regularized lower incomplete Gamma P(a, x) = γ(a, x)/Γ(a).
///
/// Series representation for x < a + 1, Lentz continued fraction for the
/// complement otherwise.
pub fn reg_lower_inc_gamma(a: f64, x: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::Domain(format!("incomplete gamma requires a > 0, got {a}")));
    }
    if x < 0.0 {
        return Err(Error::Domain(format!("incomplete gamma requires x >= 0, got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let ln_pref = a * x.ln() - x - ln_gamma_unchecked(a);
    if x < a + 1.0 {
        // γ(a,x) = x^a e^{-x} Σ_n x^n / (a)_{n+1}.
        let mut term = 1.0 / a;
        let mut sum = term;
        let mut n = a;
        for _ in 0..10_000 {
            n += 1.0;
            term *= x / n;
            sum += term;
            if term.abs() < sum.abs() * 1e-16 {
                return Ok((ln_pref.exp() * sum).min(1.0));
            }
        }
        Err(Error::Nonconvergence {
            context: "reg_lower_inc_gamma series".into(),
            partial: sum,
            last_term: term,
            terms: 10_000,
        })
    } else {
        // Q(a,x) by modified Lentz continued fraction.
        let tiny = 1e-300;
        let mut b = x + 1.0 - a;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..10_000 {
            let an = -(i as f64) * (i as f64 - a);
            b += 2.0;
            d = an * d + b;
            if d.abs() < tiny {
                d = tiny;
            }
            c = b + an / c;
            if c.abs() < tiny {
                c = tiny;
            }
            d = 1.0 / d;
            let delta = d * c;
            h *= delta;
            if (delta - 1.0).abs() < 1e-16 {
                return Ok(1.0 - ln_pref.exp() * h);
            }
        }
        Err(Error::Nonconvergence {
            context: "reg_lower_inc_gamma continued fraction".into(),
            partial: h,
            last_term: 0.0,
            terms: 10_000,
        })
    }
}
