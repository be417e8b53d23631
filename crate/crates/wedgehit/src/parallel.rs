//! Parallel drivers over the per-path simulators.
//!
//! Each path draws from an RNG stream keyed by `(master_seed,
//! path_index)` and the indexed parallel iterator collects in path
//! order, so the result is bit-identical to the sequential drivers in
//! `wedgehit_core::mcsim` for any thread count.

use rayon::prelude::*;
use wedgehit_core::error::Result;
use wedgehit_core::mcsim::{self, HittingSample, McConfig, WindingSample};
use wedgehit_core::{StartPoint, WedgeModel};

/// Parallel version of [`mcsim::simulate_hitting`].
pub fn simulate_hitting_par(
    model: &WedgeModel,
    start: &StartPoint,
    cfg: &McConfig,
) -> Result<Vec<HittingSample>> {
    cfg.validate(model.p())?;
    Ok((0..cfg.n_paths as u64)
        .into_par_iter()
        .map(|i| mcsim::simulate_hitting_path(model, start, cfg, i))
        .collect())
}

/// Parallel version of [`mcsim::simulate_bm_winding`].
pub fn simulate_bm_winding_par(
    rho: f64,
    phi: f64,
    t: f64,
    p: u32,
    cfg: &McConfig,
) -> Result<Vec<WindingSample>> {
    // Reuse the sequential driver's argument validation on a single path.
    let probe = McConfig { n_paths: 1, ..*cfg };
    mcsim::simulate_bm_winding(rho, phi, t, p, &probe)?;
    (0..cfg.n_paths as u64)
        .into_par_iter()
        .map(|i| mcsim::simulate_bm_winding_path(rho, phi, t, p, cfg, i))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: usize) -> McConfig {
        McConfig {
            n_paths: n,
            dt0: 1e-3,
            eps_boundary: 1e-7,
            t_max: 2.0,
            master_seed: 99,
        }
    }

    #[test]
    fn hitting_parallel_matches_sequential() {
        let model = WedgeModel::new(2, 0.75, 0.75).unwrap();
        let start = StartPoint::new(&model, 1.0, core::f64::consts::PI / 8.0).unwrap();
        let c = cfg(200);
        let par = simulate_hitting_par(&model, &start, &c).unwrap();
        let seq = mcsim::simulate_hitting(&model, &start, &c).unwrap();
        assert_eq!(par, seq);
    }

    #[test]
    fn winding_parallel_matches_sequential() {
        let c = cfg(200);
        let phi = core::f64::consts::PI / 8.0;
        let par = simulate_bm_winding_par(1.0, phi, 0.7, 2, &c).unwrap();
        let seq = mcsim::simulate_bm_winding(1.0, phi, 0.7, 2, &c).unwrap();
        assert_eq!(par, seq);
    }

    #[test]
    fn invalid_config_is_rejected() {
        let model = WedgeModel::new(2, 0.75, 0.75).unwrap();
        let start = StartPoint::new(&model, 1.0, 0.3).unwrap();
        let mut c = cfg(10);
        c.dt0 = 0.0;
        assert!(simulate_hitting_par(&model, &start, &c).is_err());
        assert!(simulate_bm_winding_par(1.0, 0.3, 0.5, 2, &c).is_err());
    }
}
