//! Planar Brownian motion in an even dihedral wedge: exit-tail series
//! in modified Bessel functions, the winding-angle characteristic
//! function, and the square-wave Fourier representation of the tail.
//!
//! The wedge is C = {0 < θ < π/(2p)}; the exit time coincides with the
//! boundary-hitting time of the radial Dunkl model at k₀ = k₁ = 1
//! (flipped multiplicities zero), which the test-suite asserts.
//!
//! A note on constants: with Θ the winding angle of a free planar
//! Brownian motion started at angle φ and W_p the square wave of
//! period π/p, the exit tail satisfies
//!
//!   P(T₀ > t) = E[W_p(Θ_t)] = (4/π) Σ_{j≥0} E[cos(2(2j+1)pΘ_t)] sin(2(2j+1)pφ)/(2j+1),
//!
//! i.e. the full square-wave expectation, not half of it. Both the
//! t → 0⁺ limit (each characteristic-function factor tends to 1 and the
//! Fourier sum of W_p at an interior angle is 1) and the p = 1
//! quarter-plane product law erf(ρcosφ/√(2t))·erf(ρsinφ/√(2t)) pin the
//! constant down; see the unit tests. Equivalently, the expectation of
//! W_p(Θ_t) over the paths that have already left the wedge vanishes,
//! by reflection across the exit ray.

use alloc::format;
use alloc::string::String;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::model::SeriesControl;
use crate::specfun::bessel_i_scaled;

/// The square wave of period π/p and amplitude one: sgn(sin(2px)).
pub fn square_wave(p: u32, x: f64) -> i32 {
    let s = (2.0 * p as f64 * x).sin();
    if s > 0.0 {
        1
    } else if s < 0.0 {
        -1
    } else {
        0
    }
}

/// Fourier coefficient integral S(j) = ∫₀^π sin((j+1)y) dy
/// = (1 − cos((j+1)π))/(j+1): 2/(j+1) for even j, 0 for odd j.
pub fn coeff_s(j: usize) -> f64 {
    if j % 2 == 1 {
        0.0
    } else {
        2.0 / (j as f64 + 1.0)
    }
}

/// The Brownian-motion winding law at a fixed horizon: start radius ρ
/// and time t, with the Bessel argument x = ρ²/(4t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindingLaw {
    rho: f64,
    t: f64,
}

impl WindingLaw {
    pub fn new(rho: f64, t: f64) -> Result<Self> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::Domain(format!("rho = {rho} must be > 0")));
        }
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::Domain(format!("t = {t} must be > 0")));
        }
        Ok(WindingLaw { rho, t })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Bessel argument x = ρ²/(4t).
    pub fn x(&self) -> f64 {
        self.rho * self.rho / (4.0 * self.t)
    }

    /// Characteristic function E[e^{iλΘ_t}] of the winding angle started
    /// at angle 0; real and even in λ:
    /// (√π/2) √(ρ²/(2t)) e^{−x} [I_{(|λ|−1)/2}(x) + I_{(|λ|+1)/2}(x)].
    pub fn cf(&self, lambda: f64) -> Result<f64> {
        let x = self.x();
        let l = lambda.abs();
        let bracket = bessel_i_scaled((l - 1.0) * 0.5, x)? + bessel_i_scaled((l + 1.0) * 0.5, x)?;
        Ok(0.5 * core::f64::consts::PI.sqrt() * (2.0 * x).sqrt() * bracket)
    }
}

/// Free-function form of [`WindingLaw::cf`].
pub fn spitzer_cf(lambda: f64, rho: f64, t: f64) -> Result<f64> {
    WindingLaw::new(rho, t)?.cf(lambda)
}

fn check_wedge_args(p: u32, rho: f64, phi: f64) -> Result<()> {
    if p < 1 {
        return Err(Error::Domain(format!("p = {p} must be >= 1")));
    }
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(Error::Domain(format!("rho = {rho} must be > 0")));
    }
    let opening = core::f64::consts::PI / (2.0 * p as f64);
    if !(phi > 0.0 && phi < opening) {
        return Err(Error::Domain(format!(
            "phi = {phi} outside the open wedge (0, {opening})"
        )));
    }
    Ok(())
}

/// Exit-time tail P(T₀ > t) of planar Brownian motion started at (ρ,φ)
/// through the Bessel series
/// (2/√π) √(ρ²/(2t)) e^{−x} Σ_{j≥0} [I_{(2j+1)p−1/2}(x) + I_{(2j+1)p+1/2}(x)] sin(2(2j+1)pφ)/(2j+1).
pub fn bm_tail_bessel(t: f64, p: u32, rho: f64, phi: f64, ctrl: &SeriesControl) -> Result<f64> {
    check_wedge_args(p, rho, phi)?;
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("t = {t} must be > 0")));
    }
    let x = rho * rho / (4.0 * t);
    let pf = p as f64;
    let pref = 2.0 / core::f64::consts::PI.sqrt() * (2.0 * x).sqrt();
    let mut sum = 0.0;
    let mut small = 0;
    for j in 0..ctrl.max_terms {
        let order = (2.0 * j as f64 + 1.0) * pf;
        let bracket = bessel_i_scaled(order - 0.5, x)? + bessel_i_scaled(order + 0.5, x)?;
        let term = bracket * (2.0 * order * phi).sin() / (2.0 * j as f64 + 1.0);
        sum += term;
        // the scaled-Bessel envelope is positive and eventually decays
        // superexponentially in the order; terminate on it rather than
        // on the sign-carrying term
        if bracket * pref <= ctrl.rel_tol * (pref * sum.abs()).max(f64::MIN_POSITIVE) {
            small += 1;
            if small >= ctrl.consec_small {
                return Ok(pref * sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::Nonconvergence {
        context: String::from("Bessel exit-tail series"),
        partial: pref * sum,
        last_term: 0.0,
        terms: ctrl.max_terms,
    })
}

/// The same tail through the square-wave Fourier representation,
/// P(T₀ > t) = (4/π) Σ_{j≥0} cf(2(2j+1)p) sin(2(2j+1)pφ)/(2j+1),
/// with cf the winding-angle characteristic function.
pub fn bm_tail_squarewave(t: f64, p: u32, rho: f64, phi: f64, ctrl: &SeriesControl) -> Result<f64> {
    check_wedge_args(p, rho, phi)?;
    let law = WindingLaw::new(rho, t)?;
    let pf = p as f64;
    let mut sum = 0.0;
    let mut small = 0;
    for j in 0..ctrl.max_terms {
        let lambda = 2.0 * (2.0 * j as f64 + 1.0) * pf;
        let cf = law.cf(lambda)?;
        sum += cf * (lambda * phi).sin() / (2.0 * j as f64 + 1.0);
        if cf <= ctrl.rel_tol * sum.abs().max(f64::MIN_POSITIVE) {
            small += 1;
            if small >= ctrl.consec_small {
                return Ok(4.0 / core::f64::consts::PI * sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::Nonconvergence {
        context: String::from("square-wave exit-tail series"),
        partial: 4.0 / core::f64::consts::PI * sum,
        last_term: 0.0,
        terms: ctrl.max_terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hittime::{tail_hitting_normalized, NormalizationCache};
    use crate::model::{StartPoint, WedgeModel};
    use crate::specfun::reg_lower_inc_gamma;
    use core::f64::consts::{FRAC_PI_4, FRAC_PI_8, PI};

    fn ctrl() -> SeriesControl {
        SeriesControl::default()
    }

    fn erf(z: f64) -> f64 {
        // erf(z) = P(1/2, z²) for z ≥ 0
        reg_lower_inc_gamma(0.5, z * z).unwrap()
    }

    #[test]
    fn square_wave_values() {
        assert_eq!(square_wave(2, 0.1), 1);
        assert_eq!(square_wave(2, FRAC_PI_4 + 0.1), -1);
        assert_eq!(square_wave(2, 0.0), 0);
        assert_eq!(square_wave(1, PI / 4.0), 1);
        assert_eq!(square_wave(1, 3.0 * PI / 4.0), -1);
        // period π/p
        for x in [0.05, 0.3, 1.1] {
            assert_eq!(square_wave(3, x), square_wave(3, x + PI / 3.0));
        }
    }

    #[test]
    fn coeff_s_closed_form() {
        for j in 0..20 {
            let direct = (1.0 - ((j as f64 + 1.0) * PI).cos()) / (j as f64 + 1.0);
            assert!((coeff_s(j) - direct).abs() < 1e-12, "j={j}");
        }
        assert_eq!(coeff_s(1), 0.0);
        assert_eq!(coeff_s(0), 2.0);
        assert_eq!(coeff_s(2), 2.0 / 3.0);
    }

    #[test]
    fn cf_is_one_at_zero_and_even() {
        for (rho, t) in [(1.0, 0.37), (2.5, 1.0), (0.3, 4.0)] {
            let law = WindingLaw::new(rho, t).unwrap();
            assert!((law.cf(0.0).unwrap() - 1.0).abs() <= 1e-12);
            for l in [0.7, 3.0, 11.0] {
                assert_eq!(law.cf(l).unwrap(), law.cf(-l).unwrap());
            }
        }
    }

    #[test]
    fn cf_decays_in_lambda() {
        let law = WindingLaw::new(2.0, 1.0).unwrap(); // x = 1
        assert!(law.cf(40.0).unwrap() < 1e-6);
        let mut prev = law.cf(4.0).unwrap();
        for l in [6.0, 8.0, 12.0, 20.0, 40.0] {
            let c = law.cf(l).unwrap();
            assert!(c < prev, "lambda={l}");
            prev = c;
        }
    }

    #[test]
    fn quarter_plane_product_oracle() {
        // p = 1: the wedge is the first quadrant and the two coordinates
        // exit independently, so P(T₀>t) = erf(ρcosφ/√(2t))·erf(ρsinφ/√(2t)).
        let c = ctrl();
        for (rho, phi, t) in [
            (1.0, FRAC_PI_4, 0.5),
            (1.0, PI / 6.0, 0.2),
            (2.0, PI / 3.0, 1.0),
            (1.0, FRAC_PI_4, 3.0),
        ] {
            let s = (2.0 * t).sqrt();
            let exact = erf(rho * phi.cos() / s) * erf(rho * phi.sin() / s);
            for val in [
                bm_tail_bessel(t, 1, rho, phi, &c).unwrap(),
                bm_tail_squarewave(t, 1, rho, phi, &c).unwrap(),
            ] {
                assert!(
                    (val - exact).abs() <= 1e-10 * exact.max(1e-3),
                    "(rho,phi,t)=({rho},{phi},{t}): {val} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn two_routes_agree() {
        let c = ctrl();
        for p in [1u32, 2, 3] {
            let opening = PI / (2.0 * p as f64);
            for frac in [0.2, 0.5, 0.8] {
                let phi = frac * opening;
                for t_over_rho2 in [0.1, 0.5, 1.0, 2.0] {
                    let a = bm_tail_bessel(t_over_rho2, p, 1.0, phi, &c).unwrap();
                    let b = bm_tail_squarewave(t_over_rho2, p, 1.0, phi, &c).unwrap();
                    assert!(
                        (a - b).abs() <= 1e-10,
                        "p={p} phi={phi} t={t_over_rho2}: {a} vs {b}"
                    );
                    assert!((0.0..=1.0).contains(&a));
                }
            }
        }
    }

    #[test]
    fn tail_tends_to_one_for_small_t() {
        let c = ctrl();
        let v = bm_tail_bessel(0.002, 2, 1.0, FRAC_PI_8, &c).unwrap();
        assert!((v - 1.0).abs() <= 1e-8, "small-t tail {v}");
    }

    #[test]
    fn matches_dunkl_tail_at_unit_multiplicities() {
        // The k₀ = k₁ = 1 radial Dunkl model has flipped multiplicities
        // zero: its hitting law is the planar Brownian exit law.
        let big = SeriesControl::for_large_argument();
        let m = WedgeModel::equal(2, 1.0).unwrap();
        let s = StartPoint::new(&m, 1.0, FRAC_PI_8).unwrap();
        let mut cache = NormalizationCache::new();
        for t in [0.1, 0.5, 2.0] {
            let dunkl = tail_hitting_normalized(t, &m, &s, &big, &mut cache).unwrap();
            let bm = bm_tail_bessel(t, 2, 1.0, FRAC_PI_8, &big).unwrap();
            assert!((dunkl - bm).abs() <= 1e-7, "t={t}: {dunkl} vs {bm}");
        }
    }

    #[test]
    fn domain_errors() {
        let c = ctrl();
        assert!(bm_tail_bessel(-1.0, 2, 1.0, 0.1, &c).is_err());
        assert!(bm_tail_bessel(1.0, 2, 1.0, FRAC_PI_4, &c).is_err());
        assert!(bm_tail_bessel(1.0, 2, -1.0, 0.1, &c).is_err());
        assert!(bm_tail_bessel(1.0, 0, 1.0, 0.1, &c).is_err());
        assert!(WindingLaw::new(1.0, 0.0).is_err());
        assert!(WindingLaw::new(0.0, 1.0).is_err());
    }
}
