//! Monte Carlo oracle: Euler–Maruyama simulation of the radial process
//! with flipped multiplicities until boundary absorption, and exact
//! planar Brownian motion with continuously lifted winding angle.
//!
//! Every path is a pure function of `(master_seed, path_index)` through
//! a counter-based RNG stream, so results are bit-identical no matter
//! how paths are distributed across threads. The sequential drivers
//! here simply fold the per-path functions in index order; a parallel
//! driver can do the same fold in any order.

use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::model::{Curve, StartPoint, WedgeModel};

/// Simulation controls shared by both samplers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    /// Number of independent paths.
    pub n_paths: usize,
    /// Base time step; shrunk adaptively near the boundary.
    pub dt0: f64,
    /// Absorption threshold on the angular distance to the boundary
    /// (and on the radius).
    pub eps_boundary: f64,
    /// Censoring horizon for the hitting-time sampler.
    pub t_max: f64,
    /// Master seed; path i uses the RNG stream (master_seed, i).
    pub master_seed: u64,
}

impl McConfig {
    /// Validates the configuration against a wedge opening π/(2p).
    pub fn validate(&self, p: u32) -> Result<()> {
        if self.n_paths < 1 {
            return Err(Error::Config("n_paths must be >= 1".into()));
        }
        if !(self.dt0 > 0.0) || !self.dt0.is_finite() {
            return Err(Error::Config(format!("dt0 = {} must be > 0", self.dt0)));
        }
        let opening = core::f64::consts::PI / (2.0 * p as f64);
        if !(self.eps_boundary > 0.0) || self.eps_boundary >= opening / 100.0 {
            return Err(Error::Config(format!(
                "eps_boundary = {} must lie in (0, {})",
                self.eps_boundary,
                opening / 100.0
            )));
        }
        if !(self.t_max > 0.0) || !self.t_max.is_finite() {
            return Err(Error::Config(format!("t_max = {} must be finite and > 0", self.t_max)));
        }
        Ok(())
    }
}

/// One simulated boundary-hitting time; `None` marks censoring at the
/// horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HittingSample {
    pub t0: Option<f64>,
    pub path_index: u64,
}

/// One simulated winding-angle path summary at a fixed horizon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindingSample {
    /// Continuously lifted angular position at the horizon (absolute,
    /// i.e. including the start angle).
    pub theta_t: f64,
    /// Whether the path left the wedge (0, π/(2p)) before the horizon.
    pub exited_before_t: bool,
    /// First grid time at which the exit was observed, if any.
    pub t0: Option<f64>,
    pub path_index: u64,
}

fn path_rng(master_seed: u64, path_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(path_index);
    rng
}

/// Near-boundary step shrink: dt ≤ STEP_FRAC·d²·r² where d is the
/// angular distance to the boundary. Together with the Heun drift
/// corrector this keeps the hitting-time discretization bias at the
/// 1e-3 level (validated against the p = 1 product law and the p = 2
/// series at 10⁵ paths).
const STEP_FRAC: f64 = 0.01;

/// Simulates one path of the radial process with flipped multiplicities
/// k'_j = 1 − k_j on the polar SDE pair
/// dr = (2γ'+1)/(2r) dt + dB¹,  dθ = p(k'₀ cot(pθ) − k'₁ tan(pθ))/r² dt + dB²/r,
/// until absorption at angular distance `eps_boundary` from the
/// boundary (or r < eps), censored at `t_max`. The singular angular
/// drift is integrated by a Heun predictor–corrector; a plain frozen
/// drift under-repels on approach and biases the hits early.
pub fn simulate_hitting_path(
    model: &WedgeModel,
    start: &StartPoint,
    cfg: &McConfig,
    path_index: u64,
) -> HittingSample {
    let p = model.p() as f64;
    let k0f = 1.0 - model.k0();
    let k1f = 1.0 - model.k1();
    let gamma_f = p * (k0f + k1f);
    let opening = model.wedge_angle();
    let eps = cfg.eps_boundary;
    let mut rng = path_rng(cfg.master_seed, path_index);
    let ang_drift = |th: f64, rr: f64| p * (k0f / (p * th).tan() - k1f * (p * th).tan()) / (rr * rr);

    let mut r = start.rho();
    let mut theta = start.phi();
    let mut t = 0.0_f64;
    loop {
        if t >= cfg.t_max {
            return HittingSample { t0: None, path_index };
        }
        let dist = theta.min(opening - theta);
        let dt = cfg.dt0.min(STEP_FRAC * dist * dist * r * r).max(1e-8 * cfg.dt0);
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        let sqrt_dt = dt.sqrt();
        let r_new = r + (2.0 * gamma_f + 1.0) / (2.0 * r) * dt + sqrt_dt * z1;
        let a0 = ang_drift(theta, r);
        let noise = sqrt_dt / r * z2;
        let predictor = theta + a0 * dt + noise;
        let theta_new = if predictor > eps && predictor < opening - eps {
            theta + 0.5 * (a0 + ang_drift(predictor, r)) * dt + noise
        } else {
            predictor
        };

        // absorption: linear interpolation of the first threshold crossing
        if theta_new <= eps {
            let frac = ((theta - eps) / (theta - theta_new)).clamp(0.0, 1.0);
            return HittingSample { t0: Some(t + frac * dt), path_index };
        }
        if theta_new >= opening - eps {
            let hi = opening - eps;
            let frac = ((hi - theta) / (theta_new - theta)).clamp(0.0, 1.0);
            return HittingSample { t0: Some(t + frac * dt), path_index };
        }
        if r_new <= eps {
            // only reachable (up to discretization noise) when both
            // flipped multiplicities are below 1/2; counted as a hit
            let frac = ((r - eps) / (r - r_new)).clamp(0.0, 1.0);
            return HittingSample { t0: Some(t + frac * dt), path_index };
        }
        r = r_new;
        theta = theta_new;
        t += dt;
    }
}

/// Sequential driver over all paths.
pub fn simulate_hitting(
    model: &WedgeModel,
    start: &StartPoint,
    cfg: &McConfig,
) -> Result<Vec<HittingSample>> {
    cfg.validate(model.p())?;
    Ok((0..cfg.n_paths as u64)
        .map(|i| simulate_hitting_path(model, start, cfg, i))
        .collect())
}

/// Empirical survival curve P(T₀ > t) on a strictly increasing grid,
/// with binomial standard errors. Grid points at or beyond the
/// censoring horizon are rejected.
pub fn estimate_tail(samples: &[HittingSample], times: &[f64], t_max: f64) -> Result<Curve> {
    if samples.is_empty() {
        return Err(Error::Domain("no samples".into()));
    }
    let n = samples.len() as f64;
    let mut values = Vec::with_capacity(times.len());
    let mut ses = Vec::with_capacity(times.len());
    for &t in times {
        if t >= t_max {
            return Err(Error::Domain(format!(
                "grid point t = {t} at or beyond the censoring horizon {t_max}"
            )));
        }
        if t < 0.0 {
            return Err(Error::Domain(format!("grid point t = {t} negative")));
        }
        let alive = samples
            .iter()
            .filter(|s| s.t0.is_none_or(|t0| t0 > t))
            .count() as f64;
        let p_hat = alive / n;
        values.push(p_hat);
        ses.push((p_hat * (1.0 - p_hat) / n).sqrt());
    }
    Curve::new(times.to_vec(), values, Some(ses))
}

/// Simulates one planar-Brownian path to the horizon with exact
/// Gaussian increments, lifting the argument continuously and detecting
/// the first exit from the wedge (0, π/(2p)) on the grid. The start
/// angle may be 0 ≤ φ < π/(2p); φ = 0 starts on the boundary (useful
/// for pure winding statistics) and is flagged as exited at time 0.
pub fn simulate_bm_winding_path(
    rho: f64,
    phi: f64,
    t: f64,
    p: u32,
    cfg: &McConfig,
    path_index: u64,
) -> Result<WindingSample> {
    let opening = core::f64::consts::PI / (2.0 * p as f64);
    // remedial halving when a single step turns by too much
    let mut dt_target = cfg.dt0.min(t);
    for _attempt in 0..8 {
        match bm_winding_once(rho, phi, t, opening, dt_target, cfg.master_seed, path_index) {
            Ok(s) => return Ok(s),
            Err(Error::LiftingViolation { .. }) => dt_target *= 0.5,
            Err(e) => return Err(e),
        }
    }
    bm_winding_once(rho, phi, t, opening, dt_target, cfg.master_seed, path_index)
}

fn bm_winding_once(
    rho: f64,
    phi: f64,
    t: f64,
    opening: f64,
    dt_target: f64,
    master_seed: u64,
    path_index: u64,
) -> Result<WindingSample> {
    let n_steps = (t / dt_target).ceil().max(1.0) as usize;
    let dt = t / n_steps as f64;
    let sqrt_dt = dt.sqrt();
    let mut rng = path_rng(master_seed, path_index);

    let mut x = rho * phi.cos();
    let mut y = rho * phi.sin();
    let mut theta = phi; // lifted absolute angle
    let mut exited = phi <= 0.0 || phi >= opening;
    let mut t0 = if exited { Some(0.0) } else { None };
    for step in 1..=n_steps {
        let zx: f64 = rng.sample(StandardNormal);
        let zy: f64 = rng.sample(StandardNormal);
        let xn = x + sqrt_dt * zx;
        let yn = y + sqrt_dt * zy;
        let cross = x * yn - y * xn;
        let dot = x * xn + y * yn;
        let inc = cross.atan2(dot);
        if inc.abs() >= core::f64::consts::PI - 1e-9 || (dot == 0.0 && cross == 0.0) {
            return Err(Error::LiftingViolation { step, increment: inc });
        }
        theta += inc;
        x = xn;
        y = yn;
        if !exited && (theta <= 0.0 || theta >= opening) {
            exited = true;
            t0 = Some(step as f64 * dt);
        }
    }
    Ok(WindingSample {
        theta_t: theta,
        exited_before_t: exited,
        t0,
        path_index,
    })
}

/// Sequential driver over all winding paths.
pub fn simulate_bm_winding(
    rho: f64,
    phi: f64,
    t: f64,
    p: u32,
    cfg: &McConfig,
) -> Result<Vec<WindingSample>> {
    if p < 1 {
        return Err(Error::Domain(format!("p = {p} must be >= 1")));
    }
    if !(rho > 0.0) || !(t > 0.0) {
        return Err(Error::Domain("rho and t must be > 0".into()));
    }
    let opening = core::f64::consts::PI / (2.0 * p as f64);
    if !(0.0..opening).contains(&phi) {
        return Err(Error::Domain(format!("phi = {phi} outside [0, {opening})")));
    }
    cfg.validate(p)?;
    (0..cfg.n_paths as u64)
        .map(|i| simulate_bm_winding_path(rho, phi, t, p, cfg, i))
        .collect()
}

/// Empirical mean and SE of W_p(Θ_t)·1{exited before t}. By reflection
/// across the first exit ray this expectation is exactly zero, which
/// the cross-validation suites assert within Monte Carlo error.
pub fn estimate_wp_indicator(samples: &[WindingSample], p: u32) -> Result<(f64, f64)> {
    mean_se(samples, |s| {
        if s.exited_before_t {
            crate::planarbm::square_wave(p, s.theta_t) as f64
        } else {
            0.0
        }
    })
}

/// Empirical mean and SE of the full square-wave expectation
/// W_p(Θ_t), which equals the exit tail P(T₀ > t).
pub fn estimate_wp_mean(samples: &[WindingSample], p: u32) -> Result<(f64, f64)> {
    mean_se(samples, |s| crate::planarbm::square_wave(p, s.theta_t) as f64)
}

/// Empirical exit-tail (fraction of paths still inside at the horizon)
/// with binomial SE.
pub fn estimate_winding_tail(samples: &[WindingSample]) -> Result<(f64, f64)> {
    if samples.is_empty() {
        return Err(Error::Domain("no samples".into()));
    }
    let n = samples.len() as f64;
    let alive = samples.iter().filter(|s| !s.exited_before_t).count() as f64;
    let p_hat = alive / n;
    Ok((p_hat, (p_hat * (1.0 - p_hat) / n).sqrt()))
}

/// Empirical mean and SE of cos(λ(Θ_t − φ₀)) for a start angle φ₀: the
/// real part of the winding-angle characteristic function.
pub fn estimate_cf(samples: &[WindingSample], lambda: f64, phi0: f64) -> Result<(f64, f64)> {
    mean_se(samples, |s| (lambda * (s.theta_t - phi0)).cos())
}

fn mean_se(samples: &[WindingSample], f: impl Fn(&WindingSample) -> f64) -> Result<(f64, f64)> {
    if samples.is_empty() {
        return Err(Error::Domain("no samples".into()));
    }
    let n = samples.len() as f64;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for s in samples {
        let v = f(s);
        sum += v;
        sum_sq += v * v;
    }
    let mean = sum / n;
    let var = (sum_sq / n - mean * mean).max(0.0);
    Ok((mean, (var / n).sqrt()))
}
