//! Named verification suites, shared by the CLI `check` subcommand and
//! the acceptance tests.
//!
//! Each criterion function runs a batch of checks with pinned
//! tolerances and returns a [`SuiteReport`] with one [`CheckResult`]
//! per named check. The CLI suites group the criteria:
//!
//! - `identities`: special-function identity batch + structural assertions
//! - `lemma1`: the two routes of the beta-mixture lemma
//! - `corollaries`: density route equivalence, Laplace-type moment,
//!   ℤ₂×ℤ₂ product-law oracle
//! - `spitzer`: planar-Brownian three-route agreement
//! - `mc-cross`: seeded Monte Carlo cross-validation

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wedgehit_core::error::Result;
use wedgehit_core::hittime::{
    coeff_f, density_series_equal_k, density_v0_bessel, density_v0_integral, density_v0_z2z2,
    laplace_moment_numeric, laplace_moment_pi8, lemma1_lhs, lemma1_rhs, normalize_density,
    tail_hitting_normalized, DensityFormula, NormalizationCache,
};
use wedgehit_core::mcsim::{
    estimate_cf, estimate_tail, estimate_winding_tail, estimate_wp_indicator, estimate_wp_mean,
    McConfig,
};
use wedgehit_core::planarbm::{bm_tail_bessel, bm_tail_squarewave, spitzer_cf};
use wedgehit_core::specfun::{
    bessel_i_normalized, erdelyi_multiplication_check, gauss_jacobi_general, gauss_jacobi_rule,
    hyp_1f1, hyp_1f1_euler, hyp_2f1, jacobi_orthonormal, jacobi_p, ln_gamma, pochhammer,
    reg_lower_inc_gamma, xu_identity_check, NormConvention,
};
use wedgehit_core::{SeriesControl, StartPoint, WedgeModel};

use crate::parallel::{simulate_bm_winding_par, simulate_hitting_par};

/// One named check: the worst observed residual against its tolerance.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: String,
    pub residual: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckResult {
    fn of(name: impl Into<String>, residual: f64, tolerance: f64) -> Self {
        CheckResult {
            name: name.into(),
            passed: residual.is_finite() && residual <= tolerance,
            residual,
            tolerance,
        }
    }
}

/// A batch of checks with its wall-clock time.
#[derive(Debug, Clone)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckResult>,
    pub elapsed_secs: f64,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn max_residual(&self) -> f64 {
        self.checks.iter().fold(0.0, |m, c| m.max(c.residual))
    }

    /// Plain-text per-check table.
    pub fn render_table(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "suite: {} ({:.2} s)", self.suite, self.elapsed_secs);
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(5).max(5);
        let _ = writeln!(out, "  {:width$}  {:>12}  {:>9}  status", "check", "residual", "tol");
        for c in &self.checks {
            let _ = writeln!(
                out,
                "  {:width$}  {:>12.3e}  {:>9.1e}  {}",
                c.name,
                c.residual,
                c.tolerance,
                if c.passed { "pass" } else { "FAIL" }
            );
        }
        out
    }
}

fn report(suite: &str, started: Instant, checks: Vec<CheckResult>) -> SuiteReport {
    SuiteReport {
        suite: suite.to_string(),
        checks,
        elapsed_secs: started.elapsed().as_secs_f64(),
    }
}

/// Relative difference |a − b| / max(|a|, |b|, 1e-300).
fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-300)
}

/// Sample standard deviation.
fn std_dev(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    (xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)).sqrt()
}

/// Naive Taylor sum of ₁F₁ — intentionally independent of the library's
/// Kummer-routed evaluator so transformation checks have two routes.
/// Only sensible for moderate |z| where cancellation is mild.
fn naive_1f1(a: f64, b: f64, z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..400 {
        let nf = n as f64;
        term *= (a + nf) / (b + nf) * z / (nf + 1.0);
        sum += term;
        if term.abs() <= 1e-18 * sum.abs().max(1e-300) && n > 4 {
            break;
        }
    }
    sum
}

/// Special-function identity batch: ≥ 50 random draws per identity,
/// relative residual ≤ 1e-9 (finite-difference check ≤ 1e-6).
pub fn criterion1_identities(seed: u64) -> Result<SuiteReport> {
    let started = Instant::now();
    let ctrl = SeriesControl::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();

    // Legendre duplication, in log form: √π Γ(2x+1) = 2^{2x} Γ(x+1/2) Γ(x+1).
    let mut worst = 0.0_f64;
    for _ in 0..60 {
        let x = rng.gen_range(1e-3..50.0);
        let lhs = 0.5 * PI.ln() + ln_gamma(2.0 * x + 1.0)?;
        let rhs = 2.0 * x * 2f64.ln() + ln_gamma(x + 0.5)? + ln_gamma(x + 1.0)?;
        worst = worst.max((lhs - rhs).abs() / lhs.abs().max(1.0));
    }
    checks.push(CheckResult::of("gamma duplication", worst, 1e-9));

    // First Kummer transformation at positive argument, against a naive
    // alternating Taylor sum of the transformed side.
    let mut worst = 0.0_f64;
    for _ in 0..50 {
        let a = rng.gen_range(0.2..4.0);
        let b = a + rng.gen_range(0.2..4.0);
        let z = rng.gen_range(0.1..6.0);
        let lhs = hyp_1f1(a, b, z, &ctrl)?;
        let rhs = z.exp() * naive_1f1(b - a, b, -z);
        worst = worst.max(rel(lhs, rhs));
    }
    checks.push(CheckResult::of("kummer transform (z > 0)", worst, 1e-9));

    // Kummer-routed evaluation at negative argument against the Euler
    // integral representation (independent quadrature route).
    let mut worst = 0.0_f64;
    for _ in 0..50 {
        let a = rng.gen_range(0.2..3.0);
        let b = a + rng.gen_range(0.3..3.0);
        let z = -rng.gen_range(0.0..20.0);
        worst = worst.max(rel(hyp_1f1(a, b, z, &ctrl)?, hyp_1f1_euler(a, b, z, &ctrl)?));
    }
    checks.push(CheckResult::of("kummer transform (z < 0)", worst, 1e-9));

    // Quadratic transformation of ₂F₁:
    // 2F1(a,b;2a;u) = (1−u/2)^{−b} 2F1(b/2,(b+1)/2;a+1/2;u²/(2−u)²).
    let mut worst = 0.0_f64;
    for _ in 0..50 {
        let a = rng.gen_range(0.6..2.5);
        let b = rng.gen_range(0.3..2.5);
        let u = rng.gen_range(-0.6..0.6);
        let lhs = hyp_2f1(a, b, 2.0 * a, u, &ctrl)?;
        let w = u * u / ((2.0 - u) * (2.0 - u));
        let rhs =
            (1.0 - u / 2.0).powf(-b) * hyp_2f1(b / 2.0, (b + 1.0) / 2.0, a + 0.5, w, &ctrl)?;
        worst = worst.max(rel(lhs, rhs));
    }
    checks.push(CheckResult::of("2F1 quadratic transform", worst, 1e-9));

    // Poisson-type integral representation of the normalized Bessel
    // function: i_{κ−1/2}(u) = ∫ e^{zu} μ^κ(dz).
    let mut worst = 0.0_f64;
    for _ in 0..50 {
        let kappa = rng.gen_range(0.55..2.5);
        let u = rng.gen_range(0.1..20.0);
        let quad = gauss_jacobi_rule(kappa, 64)?.integrate(|z| (z * u).exp());
        worst = worst.max(rel(bessel_i_normalized(kappa - 0.5, u)?, quad));
    }
    checks.push(CheckResult::of("bessel poisson integral", worst, 1e-9));

    // Jacobi derivative identity, by central finite difference:
    // d/dx P_j^{(a,b)}(x) = (j+a+b+1)/2 · P_{j−1}^{(a+1,b+1)}(x).
    let mut worst = 0.0_f64;
    let h = 1e-5;
    for _ in 0..50 {
        let j = rng.gen_range(1..=8usize);
        let a = rng.gen_range(-0.4..1.5);
        let b = rng.gen_range(-0.4..1.5);
        let x = rng.gen_range(-0.9..0.9);
        let fd = (jacobi_p(j, a, b, x + h) - jacobi_p(j, a, b, x - h)) / (2.0 * h);
        let exact = 0.5 * (j as f64 + a + b + 1.0) * jacobi_p(j - 1, a + 1.0, b + 1.0, x);
        worst = worst.max((fd - exact).abs() / exact.abs().max(1.0));
    }
    checks.push(CheckResult::of("jacobi derivative (fd)", worst, 1e-6));

    // Endpoint special values: P_j^{(a,b)}(1) = (a+1)_j/j! and
    // P_j^{(a,b)}(−1) = (−1)^j (b+1)_j/j!.
    let mut worst = 0.0_f64;
    for _ in 0..60 {
        let j = rng.gen_range(0..=20usize);
        let a = rng.gen_range(-0.4..2.0);
        let b = rng.gen_range(-0.4..2.0);
        let fact: f64 = (1..=j).map(|i| i as f64).product();
        worst = worst.max(rel(jacobi_p(j, a, b, 1.0), pochhammer(a + 1.0, j) / fact));
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        worst = worst.max(rel(jacobi_p(j, a, b, -1.0), sign * pochhammer(b + 1.0, j) / fact));
    }
    checks.push(CheckResult::of("jacobi endpoint values", worst, 1e-9));

    // Orthonormality of the normalized polynomials against the exact
    // Gauss–Jacobi rule: ∫ p̂_i p̂_j dμ = δ_ij.
    let mut worst = 0.0_f64;
    for _ in 0..50 {
        let a = rng.gen_range(-0.4..1.5);
        let b = rng.gen_range(-0.4..1.5);
        let i = rng.gen_range(0..=8usize);
        let j = rng.gen_range(0..=8usize);
        let (nodes, weights) = gauss_jacobi_general(a, b, 32)?;
        let mut acc = 0.0;
        for (&x, &w) in nodes.iter().zip(&weights) {
            acc += w
                * jacobi_orthonormal(i, a, b, x, NormConvention::Orthonormal)
                * jacobi_orthonormal(j, a, b, x, NormConvention::Orthonormal);
        }
        let delta = if i == j { 1.0 } else { 0.0 };
        worst = worst.max((acc - delta).abs());
    }
    checks.push(CheckResult::of("jacobi orthonormality", worst, 1e-9));

    // Product-linearization identity for Gegenbauer/Jacobi data.
    let mut worst = 0.0_f64;
    for _ in 0..50 {
        let j = rng.gen_range(0..=6usize);
        let k = rng.gen_range(0.55..1.5);
        let x = rng.gen_range(-0.95..0.95);
        worst = worst.max(xu_identity_check(j, k, x, &ctrl)?);
    }
    checks.push(CheckResult::of("product linearization", worst, 1e-9));

    // Multiplication theorem for the confluent function.
    let mut worst = 0.0_f64;
    for _ in 0..50 {
        let a = rng.gen_range(0.5..3.0);
        let b = rng.gen_range(0.5..4.0);
        let c = rng.gen_range(0.6..3.0);
        let y = rng.gen_range(-0.4..0.4);
        let z = rng.gen_range(0.0..2.0);
        worst = worst.max(erdelyi_multiplication_check(a, b, c, y, z, &ctrl)?);
    }
    checks.push(CheckResult::of("1F1 multiplication theorem", worst, 1e-9));

    Ok(report("identities", started, checks))
}

/// Beta-mixture lemma: the two routes agree to 1e-8 on the pinned
/// 36-point grid v ∈ {0.1,1,5,10} × k ∈ {0.6,0.8,1.0} × φ ∈ {0.1,π/8,0.7}.
pub fn criterion2_lemma1() -> Result<SuiteReport> {
    let started = Instant::now();
    let ctrl = SeriesControl::default();
    let mut worst = 0.0_f64;
    for v in [0.1, 1.0, 5.0, 10.0] {
        for k in [0.6, 0.8, 1.0] {
            for phi in [0.1, PI / 8.0, 0.7] {
                let lhs = lemma1_lhs(v, k, phi, &ctrl)?;
                let rhs = lemma1_rhs(v, k, phi, &ctrl)?;
                worst = worst.max(rel(lhs, rhs));
            }
        }
    }
    let checks = vec![CheckResult::of("lemma routes, 36-point grid", worst, 1e-8)];
    Ok(report("lemma1", started, checks))
}

/// Route equivalence for the reciprocal-hitting-time density at p = 2:
/// even-part series, integral and Bessel-convolution forms are pairwise
/// proportional (log-ratio standard deviation ≤ 1e-6) and strictly
/// positive over a 50-point grid in [0.01, 20].
pub fn criterion3_route_equivalence() -> Result<SuiteReport> {
    let started = Instant::now();
    let ctrl = SeriesControl::default();
    let phi = 0.3;
    let grid: Vec<f64> = (0..50)
        .map(|i| 0.01 * (20.0f64 / 0.01).powf(i as f64 / 49.0))
        .collect();
    let mut checks = Vec::new();
    for nu in [0.3, 0.45, 0.5] {
        let k = nu + 0.5;
        let mut series = Vec::with_capacity(grid.len());
        let mut integral = Vec::with_capacity(grid.len());
        let mut bessel = Vec::with_capacity(grid.len());
        let mut min_val = f64::INFINITY;
        for &v in &grid {
            let s = density_series_equal_k(v, 2, k, phi, &ctrl)?;
            let i = density_v0_integral(v, nu, phi, &ctrl)?;
            let b = density_v0_bessel(v, nu, phi, &ctrl)?;
            min_val = min_val.min(s).min(i).min(b);
            series.push(s);
            integral.push(i);
            bessel.push(b);
        }
        let sd_si = std_dev(&series.iter().zip(&integral).map(|(a, b)| (a / b).ln()).collect::<Vec<_>>());
        let sd_bi = std_dev(&bessel.iter().zip(&integral).map(|(a, b)| (a / b).ln()).collect::<Vec<_>>());
        let sd_sb = std_dev(&series.iter().zip(&bessel).map(|(a, b)| (a / b).ln()).collect::<Vec<_>>());
        checks.push(CheckResult::of(
            format!("route log-ratio sd, nu={nu}"),
            sd_si.max(sd_bi).max(sd_sb),
            1e-6,
        ));
        checks.push(CheckResult::of(
            format!("route positivity, nu={nu}"),
            if min_val > 0.0 { 0.0 } else { f64::INFINITY },
            0.0,
        ));
    }
    Ok(report("route-equivalence", started, checks))
}

/// Laplace-type moment on the bisector: the numeric moment of the
/// density is proportional to the closed form, with the ratio constant
/// in y to 1e-4; at ν = 1/2 the closed form reduces to the classical
/// expression 1/(√(1+y)·[2(1+2y)²−1]) up to one constant, to 1e-8.
pub fn criterion4_laplace_moment() -> Result<SuiteReport> {
    let started = Instant::now();
    let ctrl = SeriesControl::default();
    let ys = [0.0, 0.5, 1.0, 2.0, 5.0];
    let mut checks = Vec::new();
    for nu in [0.3, 0.4, 0.5] {
        let ratios: Vec<f64> = ys
            .iter()
            .map(|&y| {
                Ok(laplace_moment_numeric(y, nu, &ctrl)? / laplace_moment_pi8(y, nu, &ctrl)?)
            })
            .collect::<Result<_>>()?;
        let worst = ratios
            .iter()
            .map(|r| (r / ratios[0] - 1.0).abs())
            .fold(0.0_f64, f64::max);
        checks.push(CheckResult::of(format!("moment ratio constant, nu={nu}"), worst, 1e-4));
    }
    // Classical reduction at nu = 1/2.
    let consts: Vec<f64> = ys
        .iter()
        .map(|&y| {
            let closed = 1.0 / ((1.0 + y).sqrt() * (2.0 * (1.0 + 2.0 * y).powi(2) - 1.0));
            Ok(laplace_moment_pi8(y, 0.5, &ctrl)? / closed)
        })
        .collect::<Result<_>>()?;
    let worst = consts
        .iter()
        .map(|c| (c / consts[0] - 1.0).abs())
        .fold(0.0_f64, f64::max);
    checks.push(CheckResult::of("classical reduction at nu=1/2", worst, 1e-8));
    Ok(report("laplace-moment", started, checks))
}

/// ℤ₂×ℤ₂ product law against the brute-force construction from the
/// minimum of two inverse-Gamma hitting times: the density equals the
/// analytic derivative of the product CDF up to one constant, ≤ 1e-8.
pub fn criterion5_z2z2_oracle() -> Result<SuiteReport> {
    let started = Instant::now();
    let mut checks = Vec::new();
    let grid: Vec<f64> = (0..40)
        .map(|i| 0.05 * (20.0f64 / 0.05).powf(i as f64 / 39.0))
        .collect();
    let gamma_nu = |nu: f64| ln_gamma(nu).map(f64::exp);
    for nu in [0.15, 0.25, 0.4] {
        let g_nu = gamma_nu(nu)?;
        for phi in [PI / 6.0, PI / 4.0] {
            let s = phi.sin().powi(2);
            let c = phi.cos().powi(2);
            // d/dv [P(ν, vs)·P(ν, vc)] with the Gamma density in closed form.
            let oracle = |v: f64| -> Result<f64> {
                let dens = |x: f64| x.powf(nu - 1.0) * (-x).exp() / g_nu;
                Ok(s * dens(v * s) * reg_lower_inc_gamma(nu, v * c)?
                    + c * dens(v * c) * reg_lower_inc_gamma(nu, v * s)?)
            };
            let ratios: Vec<f64> = grid
                .iter()
                .map(|&v| Ok(density_v0_z2z2(v, nu, phi)? / oracle(v)?))
                .collect::<Result<_>>()?;
            let worst = ratios
                .iter()
                .map(|r| (r / ratios[0] - 1.0).abs())
                .fold(0.0_f64, f64::max);
            checks.push(CheckResult::of(
                format!("product-law ratio, nu={nu}, phi={phi:.3}"),
                worst,
                1e-8,
            ));
        }
    }
    Ok(report("z2z2-oracle", started, checks))
}

/// Planar-Brownian three-route agreement: the Bessel-series and
/// square-wave Fourier exit tails agree to 1e-8, and the normalized
/// hitting tail at unit multiplicities matches both to 1e-7, on
/// t/ρ² ∈ {0.1,0.5,1,2} × φ ∈ {π/16,π/8,3π/16}. The characteristic
/// function equals 1 at frequency zero to 1e-12.
pub fn criterion6_bm_routes() -> Result<SuiteReport> {
    let started = Instant::now();
    let ctrl = SeriesControl::default();
    let p = 2u32;
    let rho = 1.0;
    let model = WedgeModel::new(p, 1.0, 1.0)?;
    let mut cache = NormalizationCache::new();
    let (mut worst_bs, mut worst_d) = (0.0_f64, 0.0_f64);
    for t in [0.1, 0.5, 1.0, 2.0] {
        for phi in [PI / 16.0, PI / 8.0, 3.0 * PI / 16.0] {
            let b = bm_tail_bessel(t, p, rho, phi, &ctrl)?;
            let s = bm_tail_squarewave(t, p, rho, phi, &ctrl)?;
            worst_bs = worst_bs.max(rel(b, s));
            let start = StartPoint::new(&model, rho, phi)?;
            let d = tail_hitting_normalized(t, &model, &start, &ctrl, &mut cache)?;
            worst_d = worst_d.max(rel(d, b)).max(rel(d, s));
        }
    }
    let mut worst_cf = 0.0_f64;
    for (rho, t) in [(1.0, 0.5), (0.7, 2.0), (2.0, 0.1)] {
        worst_cf = worst_cf.max((spitzer_cf(0.0, rho, t)? - 1.0).abs());
    }
    let checks = vec![
        CheckResult::of("bessel vs square-wave tail", worst_bs, 1e-8),
        CheckResult::of("hitting tail at unit multiplicities", worst_d, 1e-7),
        CheckResult::of("characteristic function at zero", worst_cf, 1e-12),
    ];
    Ok(report("bm-routes", started, checks))
}

/// Seeded Monte Carlo cross-validation with `n_paths` paths per
/// experiment (acceptance pins 10⁵). Agreement is measured in units of
/// the Monte Carlo standard error; every check passes at 3 SE.
pub fn criterion7_mc_cross(n_paths: usize, master_seed: u64) -> Result<SuiteReport> {
    let started = Instant::now();
    let ctrl = SeriesControl::default();
    let cfg = McConfig {
        n_paths,
        dt0: 1e-3,
        eps_boundary: 1e-7,
        t_max: 5.0,
        master_seed,
    };
    let mut checks = Vec::new();

    // (a) general wedge, p = 2, k = 0.75: empirical survival curve
    // against the normalized analytic tail at 10 time points.
    {
        let model = WedgeModel::new(2, 0.75, 0.75)?;
        let start = StartPoint::new(&model, 1.0, PI / 8.0)?;
        let samples = simulate_hitting_par(&model, &start, &cfg)?;
        let times: Vec<f64> = (0..10).map(|i| 0.2 + 0.5 * i as f64).collect();
        let curve = estimate_tail(&samples, &times, cfg.t_max)?;
        let ses = curve.std_errors().expect("mc curve carries standard errors");
        let mut cache = NormalizationCache::new();
        let mut worst = 0.0_f64;
        for ((&t, &est), &se) in times.iter().zip(curve.values()).zip(ses) {
            let exact = tail_hitting_normalized(t, &model, &start, &ctrl, &mut cache)?;
            worst = worst.max((est - exact).abs() / se.max(1e-12));
        }
        checks.push(CheckResult::of("dihedral tail p=2 k=0.75 (SE units)", worst, 3.0));
    }

    // (b) planar Brownian winding at the horizon where the exit
    // probability is ≈ 1/2; exit tail, characteristic function at
    // λ = 2p, the square-wave indicator identity, and a bit-identical
    // rerun under the same seed.
    {
        let p = 2u32;
        let (rho, phi) = (1.0, PI / 8.0);
        // Bisect bm_tail(t) = 1/2 in t.
        let (mut lo, mut hi) = (0.01, 20.0);
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if bm_tail_bessel(mid, p, rho, phi, &ctrl)? > 0.5 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t_star = 0.5 * (lo + hi);
        // Exit detection on the sampling grid misses short boundary
        // excursions, an O(√dt) bias; the horizon here is small enough
        // that refining the winding step until the analytic agreement
        // stabilizes is affordable (measured: +7.6 SE at dt 1e-4,
        // +3.3 SE at 1e-5, +1.7 SE at 5e-6 for 10⁵ paths).
        let fine = McConfig { dt0: 2.5e-6, ..cfg };
        let samples = simulate_bm_winding_par(rho, phi, t_star, p, &fine)?;
        let exact_tail = bm_tail_bessel(t_star, p, rho, phi, &ctrl)?;

        let (tail_est, tail_se) = estimate_winding_tail(&samples)?;
        checks.push(CheckResult::of(
            "bm exit tail (SE units)",
            (tail_est - exact_tail).abs() / tail_se.max(1e-12),
            3.0,
        ));

        let lambda = 2.0 * p as f64;
        let (cf_est, cf_se) = estimate_cf(&samples, lambda, phi)?;
        let cf_exact = spitzer_cf(lambda, rho, t_star)?;
        checks.push(CheckResult::of(
            "winding cf at lambda=2p (SE units)",
            (cf_est - cf_exact).abs() / cf_se.max(1e-12),
            3.0,
        ));

        // Square-wave decomposition E[W] = E[W·1{survive}] + E[W·1{exit}]:
        // the surviving part is the exit tail and the exited part has
        // mean zero by reflection across the first exit ray, so the
        // full mean matches the tail and the indicator term vanishes.
        let (ind_est, ind_se) = estimate_wp_indicator(&samples, p)?;
        checks.push(CheckResult::of(
            "square-wave exit indicator (SE units)",
            ind_est.abs() / ind_se.max(1e-12),
            3.0,
        ));
        let (w_est, w_se) = estimate_wp_mean(&samples, p)?;
        checks.push(CheckResult::of(
            "square-wave mean vs tail (SE units)",
            (w_est - exact_tail).abs() / w_se.max(1e-12),
            3.0,
        ));

        // Reproducibility is independent of the step size; demonstrate
        // the bit-identical rerun on the coarse configuration.
        let once = simulate_bm_winding_par(rho, phi, t_star, p, &cfg)?;
        let again = simulate_bm_winding_par(rho, phi, t_star, p, &cfg)?;
        checks.push(CheckResult::of(
            "bit-identical rerun under fixed seed",
            if once == again { 0.0 } else { f64::INFINITY },
            0.0,
        ));
    }

    // (c) ℤ₂×ℤ₂ flipped model against the closed product law.
    {
        let model = WedgeModel::new(1, 0.75, 0.75)?;
        let start = StartPoint::new(&model, 1.0, PI / 4.0)?;
        let samples = simulate_hitting_par(&model, &start, &cfg)?;
        let times = [0.3, 0.6, 1.0, 1.7, 2.8, 4.5];
        let curve = estimate_tail(&samples, &times, cfg.t_max)?;
        let ses = curve.std_errors().expect("mc curve carries standard errors");
        let nu = model.nu0();
        let mut worst = 0.0_f64;
        for ((&t, &est), &se) in times.iter().zip(curve.values()).zip(ses) {
            let v = start.v_of_t(t);
            let exact = reg_lower_inc_gamma(nu, v * start.phi().sin().powi(2))?
                * reg_lower_inc_gamma(nu, v * start.phi().cos().powi(2))?;
            worst = worst.max((est - exact).abs() / se.max(1e-12));
        }
        checks.push(CheckResult::of("product-law tail p=1 (SE units)", worst, 3.0));
    }

    Ok(report("mc-cross", started, checks))
}

/// Structural assertions: odd survival-series coefficients vanish under
/// equal multiplicities, the normalization constant is independent of
/// the start angle, and normalized tails are monotone and in [0, 1].
pub fn criterion8_structural() -> Result<SuiteReport> {
    let started = Instant::now();
    let ctrl = SeriesControl::default();
    let mut checks = Vec::new();

    let mut worst = 0.0_f64;
    for model in [WedgeModel::equal(2, 0.8)?, WedgeModel::equal(3, 0.6)?] {
        for j in (1..=20).step_by(2) {
            worst = worst.max(coeff_f(j, &model, &ctrl).abs());
        }
    }
    checks.push(CheckResult::of("odd series coefficients vanish", worst, 1e-12));

    let model = WedgeModel::new(2, 0.75, 0.75)?;
    let c1 = normalize_density(DensityFormula::Integral, &model, 0.25, &ctrl)?.constant;
    let c2 = normalize_density(DensityFormula::Integral, &model, 0.55, &ctrl)?.constant;
    checks.push(CheckResult::of("normalization angle-independent", rel(c1, c2), 1e-6));

    let mut worst_range = 0.0_f64;
    let mut worst_mono = 0.0_f64;
    for (model, phi) in [(WedgeModel::new(2, 0.75, 0.75)?, PI / 8.0), (WedgeModel::new(1, 0.6, 0.9)?, 0.5)] {
        let start = StartPoint::new(&model, 1.0, phi)?;
        let mut cache = NormalizationCache::new();
        let mut prev = f64::INFINITY;
        for i in 0..15 {
            let t = 0.05 * (10.0f64 / 0.05).powf(i as f64 / 14.0);
            let tail = tail_hitting_normalized(t, &model, &start, &ctrl, &mut cache)?;
            worst_range = worst_range.max((-tail).max(tail - 1.0));
            worst_mono = worst_mono.max(tail - prev);
            prev = tail;
        }
    }
    checks.push(CheckResult::of("normalized tails within [0,1]", worst_range.max(0.0), 0.0));
    checks.push(CheckResult::of("normalized tails monotone", worst_mono.max(0.0), 1e-12));

    Ok(report("structural", started, checks))
}

/// The CLI-facing suite names.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Identities,
    Lemma1,
    Corollaries,
    Spitzer,
    McCross,
}

impl Suite {
    pub fn parse(name: &str) -> Option<Suite> {
        match name {
            "identities" => Some(Suite::Identities),
            "lemma1" => Some(Suite::Lemma1),
            "corollaries" => Some(Suite::Corollaries),
            "spitzer" => Some(Suite::Spitzer),
            "mc-cross" => Some(Suite::McCross),
            _ => None,
        }
    }

    pub const ALL_NAMES: &'static [&'static str] =
        &["identities", "lemma1", "corollaries", "spitzer", "mc-cross"];
}

/// Runs one named suite; `seed` feeds the random identity draws and the
/// Monte Carlo streams, `n_paths` only affects `mc-cross`.
pub fn run_suite(suite: Suite, seed: u64, n_paths: usize) -> Result<Vec<SuiteReport>> {
    match suite {
        Suite::Identities => Ok(vec![criterion1_identities(seed)?, criterion8_structural()?]),
        Suite::Lemma1 => Ok(vec![criterion2_lemma1()?]),
        Suite::Corollaries => Ok(vec![
            criterion3_route_equivalence()?,
            criterion4_laplace_moment()?,
            criterion5_z2z2_oracle()?,
        ]),
        Suite::Spitzer => Ok(vec![criterion6_bm_routes()?]),
        Suite::McCross => Ok(vec![criterion7_mc_cross(n_paths, seed)?]),
    }
}
