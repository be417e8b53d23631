//! Wedge geometry, multiplicities and evaluation controls.
//!
//! All types are immutable value objects; construction validates the
//! invariants once and every downstream routine can rely on them.

use alloc::format;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};

/// An even dihedral wedge of angle π/(2p) together with the two root
/// multiplicities. `p = 1` is the abelian ℤ₂×ℤ₂ case.
///
/// The process of interest is the one with *flipped* multiplicities
/// `1 − k₀`, `1 − k₁` (indices `−ν₁`, `−ν₀`), which hits the boundary
/// almost surely when at least one `k_j` exceeds 1/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WedgeModel {
    p: u32,
    k0: f64,
    k1: f64,
}

impl WedgeModel {
    /// Validates `p ≥ 1`, `1/2 ≤ k_j ≤ 1` and the hitting-regime
    /// condition `k₀ > 1/2 or k₁ > 1/2`.
    pub fn new(p: u32, k0: f64, k1: f64) -> Result<Self> {
        if p < 1 {
            return Err(Error::Domain(format!("p = {p} must be >= 1")));
        }
        for (name, k) in [("k0", k0), ("k1", k1)] {
            if !(0.5..=1.0).contains(&k) || !k.is_finite() {
                return Err(Error::Domain(format!("{name} = {k} out of [1/2, 1]")));
            }
        }
        if k0 <= 0.5 && k1 <= 0.5 {
            return Err(Error::Domain(
                "both multiplicities equal 1/2; the flipped process does not hit the boundary a.s."
                    .into(),
            ));
        }
        Ok(WedgeModel { p, k0, k1 })
    }

    /// Equal-multiplicity constructor, `k₀ = k₁ = k`.
    pub fn equal(p: u32, k: f64) -> Result<Self> {
        Self::new(p, k, k)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn k0(&self) -> f64 {
        self.k0
    }

    pub fn k1(&self) -> f64 {
        self.k1
    }

    /// Index ν₀ = k₀ − 1/2.
    pub fn nu0(&self) -> f64 {
        self.k0 - 0.5
    }

    /// Index ν₁ = k₁ − 1/2.
    pub fn nu1(&self) -> f64 {
        self.k1 - 0.5
    }

    /// γ = p (k₀ + k₁).
    pub fn gamma(&self) -> f64 {
        self.p as f64 * (self.k0 + self.k1)
    }

    /// Wedge opening angle π/(2p). Computed on demand, never stored.
    pub fn wedge_angle(&self) -> f64 {
        PI / (2.0 * self.p as f64)
    }

    /// Whether k₀ = k₁ (the regime of the π/4-wedge density formulas).
    pub fn equal_multiplicities(&self) -> bool {
        self.k0 == self.k1
    }
}

/// Polar starting point strictly inside the wedge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StartPoint {
    rho: f64,
    phi: f64,
}

impl StartPoint {
    /// Validates `ρ > 0` and `0 < φ < π/(2p)` for the given model.
    ///
    /// The boundary is excluded: all the series vanish there and the
    /// hitting time degenerates to zero.
    pub fn new(model: &WedgeModel, rho: f64, phi: f64) -> Result<Self> {
        if !(rho > 0.0) || !rho.is_finite() {
            return Err(Error::Domain(format!("rho = {rho} must be > 0")));
        }
        let opening = model.wedge_angle();
        if !(phi > 0.0 && phi < opening) {
            return Err(Error::Domain(format!(
                "phi = {phi} outside the open wedge (0, {opening})"
            )));
        }
        Ok(StartPoint { rho, phi })
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// v = ρ²/(2t), the scaled reciprocal-time variable.
    pub fn v_of_t(&self, t: f64) -> f64 {
        self.rho * self.rho / (2.0 * t)
    }

    /// Inverse of [`Self::v_of_t`]: t = ρ²/(2v).
    pub fn t_of_v(&self, v: f64) -> f64 {
        self.rho * self.rho / (2.0 * v)
    }
}

/// Truncation and tolerance policy shared by every series and quadrature.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesControl {
    /// Relative termination tolerance.
    pub rel_tol: f64,
    /// Hard cap on the series index.
    pub max_terms: usize,
    /// Initial Gauss–Jacobi node count (doubled adaptively).
    pub quad_nodes: usize,
    /// Consecutive below-tolerance increments required before stopping.
    pub consec_small: usize,
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize, quad_nodes: usize, consec_small: usize) -> Result<Self> {
        if !(rel_tol > 0.0) {
            return Err(Error::Domain(format!("rel_tol = {rel_tol} must be > 0")));
        }
        if max_terms < 8 {
            return Err(Error::Domain(format!("max_terms = {max_terms} must be >= 8")));
        }
        if quad_nodes < 4 {
            return Err(Error::Domain(format!("quad_nodes = {quad_nodes} must be >= 4")));
        }
        if consec_small < 1 {
            return Err(Error::Domain("consec_small must be >= 1".into()));
        }
        Ok(SeriesControl {
            rel_tol,
            max_terms,
            quad_nodes,
            consec_small,
        })
    }

    /// A control loose enough for large series arguments (v ≳ 100).
    pub fn for_large_argument() -> Self {
        SeriesControl {
            rel_tol: 1e-12,
            max_terms: 20_000,
            quad_nodes: 64,
            consec_small: 3,
        }
    }
}

impl Default for SeriesControl {
    fn default() -> Self {
        // Terms of the tail/density series decay factorially through the
        // Gamma ratios; 500 terms is far beyond need at desk scale.
        SeriesControl {
            rel_tol: 1e-12,
            max_terms: 500,
            quad_nodes: 64,
            consec_small: 3,
        }
    }
}

/// A grid of abscissae with values and, for Monte Carlo output, standard
/// errors. The universal numeric result carrier.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    abscissae: Vec<f64>,
    values: Vec<f64>,
    std_errors: Option<Vec<f64>>,
}

impl Curve {
    pub fn new(abscissae: Vec<f64>, values: Vec<f64>, std_errors: Option<Vec<f64>>) -> Result<Self> {
        if abscissae.len() != values.len() {
            return Err(Error::Domain("abscissae/values length mismatch".into()));
        }
        if let Some(se) = &std_errors {
            if se.len() != abscissae.len() {
                return Err(Error::Domain("std_errors length mismatch".into()));
            }
        }
        if abscissae.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Domain("abscissae must be strictly increasing".into()));
        }
        Ok(Curve {
            abscissae,
            values,
            std_errors,
        })
    }

    pub fn abscissae(&self) -> &[f64] {
        &self.abscissae
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn std_errors(&self) -> Option<&[f64]> {
        self.std_errors.as_deref()
    }

    pub fn len(&self) -> usize {
        self.abscissae.len()
    }

    pub fn is_empty(&self) -> bool {
        self.abscissae.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn model_arithmetic_identities() {
        let m = WedgeModel::new(2, 0.75, 0.75).unwrap();
        assert_eq!(m.nu0(), 0.25);
        assert_eq!(m.nu1(), 0.25);
        assert_eq!(m.gamma(), 3.0);

        let m = WedgeModel::new(1, 1.0, 1.0).unwrap();
        assert_eq!(m.nu0(), 0.5);
        assert_eq!(m.gamma(), 2.0);
    }

    #[test]
    fn model_rejects_non_hitting_regime() {
        assert!(matches!(WedgeModel::new(2, 0.5, 0.5), Err(Error::Domain(_))));
        assert!(WedgeModel::new(2, 0.5, 0.75).is_ok());
        assert!(matches!(WedgeModel::new(2, 0.4, 0.75), Err(Error::Domain(_))));
        assert!(matches!(WedgeModel::new(2, 0.75, 1.1), Err(Error::Domain(_))));
        assert!(matches!(WedgeModel::new(0, 0.75, 0.75), Err(Error::Domain(_))));
    }

    #[test]
    fn flipped_multiplicities_in_hitting_range() {
        for (p, k0, k1) in [(1, 0.6, 0.5), (2, 0.75, 0.75), (3, 1.0, 0.5)] {
            let m = WedgeModel::new(p, k0, k1).unwrap();
            let f0 = 1.0 - m.k0();
            let f1 = 1.0 - m.k1();
            assert!(f0 < 0.5 || f1 < 0.5);
            assert!((0.0..=0.5).contains(&f0) && (0.0..=0.5).contains(&f1));
        }
    }

    #[test]
    fn start_point_open_wedge() {
        let m = WedgeModel::new(2, 0.75, 0.75).unwrap();
        assert!(StartPoint::new(&m, 1.0, core::f64::consts::FRAC_PI_8).is_ok());
        assert!(StartPoint::new(&m, 1.0, core::f64::consts::FRAC_PI_4).is_err());
        assert!(StartPoint::new(&m, 0.0, 0.1).is_err());
        assert!(StartPoint::new(&m, -1.0, 0.1).is_err());

        let m3 = WedgeModel::new(3, 0.75, 0.75).unwrap();
        assert!(StartPoint::new(&m3, 2.0, PI / 5.0).is_err()); // pi/5 > pi/6
        assert!(StartPoint::new(&m3, 2.0, PI / 7.0).is_ok()); // pi/7 < pi/6
    }

    #[test]
    fn v_t_round_trip() {
        let m = WedgeModel::new(2, 0.75, 0.75).unwrap();
        let s = StartPoint::new(&m, 1.7, 0.3).unwrap();
        for t in [1e-6, 0.1, 1.0, 42.0, 1e6] {
            let v = s.v_of_t(t);
            assert!((s.t_of_v(v) - t).abs() <= 1e-15 * t);
        }
    }

    #[test]
    fn curve_invariants() {
        assert!(Curve::new(vec![1.0, 2.0], vec![0.0, 0.0], None).is_ok());
        assert!(Curve::new(vec![2.0, 1.0], vec![0.0, 0.0], None).is_err());
        assert!(Curve::new(vec![1.0, 2.0], vec![0.0], None).is_err());
        assert!(Curve::new(vec![1.0, 2.0], vec![0.0, 0.0], Some(vec![0.1])).is_err());
    }

    #[test]
    fn series_control_bounds() {
        assert!(SeriesControl::new(1e-10, 100, 32, 2).is_ok());
        assert!(SeriesControl::new(0.0, 100, 32, 2).is_err());
        assert!(SeriesControl::new(1e-10, 4, 32, 2).is_err());
        assert!(SeriesControl::new(1e-10, 100, 2, 2).is_err());
        assert!(SeriesControl::new(1e-10, 100, 32, 0).is_err());
    }
}
