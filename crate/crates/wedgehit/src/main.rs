//! `wedgehit` — evaluate hitting-time densities and tails for radial
//! Dunkl processes in dihedral wedges, run Monte Carlo simulations, and
//! execute the cross-validation suites.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use wedgehit::checks::{self, Suite};
use wedgehit::config::{parse_phi_frac, FileConfig, Grid};
use wedgehit::output::{render_csv, render_json, Row};
use wedgehit::parallel::simulate_hitting_par;
use wedgehit_core::error::Error as CoreError;
use wedgehit_core::hittime::{
    density_series_equal_k, density_v0_bessel, density_v0_integral, tail_hitting_normalized,
    DensityFormula, NormalizationCache,
};
use wedgehit_core::mcsim::{estimate_tail, McConfig};
use wedgehit_core::planarbm::{bm_tail_bessel, bm_tail_squarewave};
use wedgehit_core::{SeriesControl, StartPoint, WedgeModel};

#[derive(Parser)]
#[command(
    name = "wedgehit",
    version,
    about = "Hitting-time laws for radial Dunkl processes in dihedral wedges"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Evaluate the normalized reciprocal-hitting-time density on a v-grid.
    Density(CommonArgs),
    /// Evaluate the survival probability P(T0 > t) on a t-grid.
    Tail(CommonArgs),
    /// Evaluate the planar-Brownian exit tail.
    BmTail(CommonArgs),
    /// Run the Monte Carlo hitting-time sampler and emit the empirical tail.
    Simulate(CommonArgs),
    /// Run a named verification suite and print its per-check table.
    Check(CommonArgs),
}

#[derive(Args, Debug, Default)]
struct CommonArgs {
    /// Dihedral order p (wedge opening pi/(2p)).
    #[arg(long)]
    p: Option<u32>,
    /// Multiplicity on the reflection axis theta = 0.
    #[arg(long)]
    k0: Option<f64>,
    /// Multiplicity on the reflection axis theta = pi/(2p).
    #[arg(long)]
    k1: Option<f64>,
    /// Shorthand for equal multiplicities: sets k0 = k1 = k.
    #[arg(long, conflicts_with_all = ["k0", "k1"])]
    k: Option<f64>,
    /// Start radius.
    #[arg(long)]
    rho: Option<f64>,
    /// Start angle in radians.
    #[arg(long)]
    phi: Option<f64>,
    /// Start angle as a fraction of pi, e.g. `1/8` for pi/8.
    #[arg(long, value_name = "A/B", conflicts_with = "phi")]
    phi_frac: Option<String>,
    /// Evaluation grid `start:stop:count`.
    #[arg(long)]
    grid: Option<String>,
    /// Single evaluation abscissa (alternative to --grid).
    #[arg(long, conflicts_with = "grid")]
    t: Option<f64>,
    /// Evaluation method (subcommand-dependent).
    #[arg(long)]
    method: Option<String>,
    /// Master seed for Monte Carlo streams and identity draws.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of Monte Carlo paths.
    #[arg(long)]
    n_paths: Option<usize>,
    /// Base Monte Carlo time step.
    #[arg(long)]
    dt0: Option<f64>,
    /// Absorption threshold near the boundary.
    #[arg(long)]
    eps_boundary: Option<f64>,
    /// Censoring horizon for the hitting-time sampler.
    #[arg(long)]
    t_max: Option<f64>,
    /// Check suite name (for `check`).
    #[arg(long)]
    suite: Option<String>,
    /// Output file (defaults to stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv (default) or json.
    #[arg(long)]
    format: Option<String>,
    /// JSON config file; command-line flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
}

/// Errors mapped to exit codes: configuration problems exit 2, numeric
/// failures (nonconvergence or tolerance breach) exit 1.
#[derive(Debug)]
enum CliError {
    Config(String),
    Numeric(String),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Domain(m) | CoreError::Config(m) => CliError::Config(m),
            other => CliError::Numeric(other.to_string()),
        }
    }
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

/// Flag-over-file merged view of one invocation.
struct Effective {
    args: CommonArgs,
    file: FileConfig,
}

impl Effective {
    fn new(mut args: CommonArgs) -> Result<Self, CliError> {
        let file = match args.config.take() {
            Some(path) => FileConfig::load(&path).map_err(config_err)?,
            None => FileConfig::default(),
        };
        Ok(Effective { args, file })
    }

    fn p(&self) -> Result<u32, CliError> {
        self.args.p.or(self.file.p).ok_or_else(|| config_err("missing --p"))
    }

    fn multiplicities(&self) -> Result<(f64, f64), CliError> {
        if let Some(k) = self.args.k.or(self.file.k) {
            if self.args.k0.is_some() || self.args.k1.is_some() {
                return Err(config_err("--k conflicts with --k0/--k1"));
            }
            return Ok((k, k));
        }
        let k0 = self.args.k0.or(self.file.k0).ok_or_else(|| config_err("missing --k0 (or --k)"))?;
        let k1 = self.args.k1.or(self.file.k1).ok_or_else(|| config_err("missing --k1 (or --k)"))?;
        Ok((k0, k1))
    }

    fn rho(&self) -> f64 {
        self.args.rho.or(self.file.rho).unwrap_or(1.0)
    }

    fn phi(&self) -> Result<f64, CliError> {
        if let Some(frac) = self.args.phi_frac.as_deref().or(self.file.phi_frac.as_deref()) {
            if self.args.phi.is_some() {
                return Err(config_err("--phi conflicts with --phi-frac"));
            }
            return parse_phi_frac(frac).map_err(config_err);
        }
        self.args.phi.or(self.file.phi).ok_or_else(|| config_err("missing --phi or --phi-frac"))
    }

    /// Grid from `--grid`, or a single point from `--t`.
    fn abscissae(&self) -> Result<Vec<f64>, CliError> {
        if let Some(t) = self.args.t.or(self.file.t) {
            if self.args.grid.is_some() {
                return Err(config_err("--t conflicts with --grid"));
            }
            return Ok(vec![t]);
        }
        let spec = self
            .args
            .grid
            .as_deref()
            .or(self.file.grid.as_deref())
            .ok_or_else(|| config_err("missing --grid (or --t)"))?;
        Ok(Grid::parse(spec).map_err(config_err)?.points())
    }

    fn method(&self, default: &str) -> String {
        self.args
            .method
            .clone()
            .or_else(|| self.file.method.clone())
            .unwrap_or_else(|| default.to_string())
    }

    fn seed(&self) -> u64 {
        self.args.seed.or(self.file.seed).unwrap_or(1)
    }

    fn mc_config(&self, times: &[f64]) -> McConfig {
        let max_t = times.iter().fold(0.0_f64, |m, &t| m.max(t));
        McConfig {
            n_paths: self.args.n_paths.or(self.file.n_paths).unwrap_or(10_000),
            dt0: self.args.dt0.or(self.file.dt0).unwrap_or(1e-3),
            eps_boundary: self.args.eps_boundary.or(self.file.eps_boundary).unwrap_or(1e-7),
            t_max: self.args.t_max.or(self.file.t_max).unwrap_or(max_t * 1.05),
            master_seed: self.seed(),
        }
    }

    fn emit(&self, rows: &[Row]) -> Result<(), CliError> {
        let format = self
            .args
            .format
            .as_deref()
            .or(self.file.format.as_deref())
            .unwrap_or("csv");
        let rendered = match format {
            "csv" => render_csv(rows),
            "json" => render_json(rows),
            other => return Err(config_err(format!("unknown format `{other}`"))),
        };
        let out = self
            .args
            .out
            .clone()
            .or_else(|| self.file.out.as_deref().map(PathBuf::from));
        match out {
            Some(path) => std::fs::write(&path, rendered)
                .map_err(|e| config_err(format!("cannot write {}: {e}", path.display()))),
            None => {
                print!("{rendered}");
                Ok(())
            }
        }
    }
}

fn run_density(eff: &Effective) -> Result<(), CliError> {
    let p = eff.p()?;
    let (k0, k1) = eff.multiplicities()?;
    let model = WedgeModel::new(p, k0, k1)?;
    let phi = eff.phi()?;
    let grid = eff.abscissae()?;
    let method = eff.method("integral");
    let ctrl = SeriesControl::default();
    let nu = model.nu0();
    if !model.equal_multiplicities() {
        return Err(config_err("density evaluation requires equal multiplicities"));
    }
    let formula = match method.as_str() {
        "series" => DensityFormula::SeriesEqualK,
        "integral" => DensityFormula::Integral,
        "bessel" => DensityFormula::Bessel,
        other => return Err(config_err(format!("unknown density method `{other}`"))),
    };
    let mut cache = NormalizationCache::new();
    let c = cache.get_or_compute(formula, &model, phi, &ctrl)?.constant;
    let mut rows = Vec::with_capacity(grid.len());
    for &v in &grid {
        let raw = match formula {
            DensityFormula::SeriesEqualK => density_series_equal_k(v, p, model.k0(), phi, &ctrl)?,
            DensityFormula::Integral => density_v0_integral(v, nu, phi, &ctrl)?,
            DensityFormula::Bessel => density_v0_bessel(v, nu, phi, &ctrl)?,
            _ => unreachable!("restricted above"),
        };
        rows.push(Row {
            abscissa: v,
            value: c * raw,
            std_error: None,
            method: method.clone(),
            p,
            k0: Some(model.k0()),
            k1: Some(model.k1()),
            rho: eff.rho(),
            phi,
            seed: None,
        });
    }
    eff.emit(&rows)
}

fn run_tail(eff: &Effective) -> Result<(), CliError> {
    let p = eff.p()?;
    let (k0, k1) = eff.multiplicities()?;
    let model = WedgeModel::new(p, k0, k1)?;
    let phi = eff.phi()?;
    let rho = eff.rho();
    let start = StartPoint::new(&model, rho, phi)?;
    let grid = eff.abscissae()?;
    let method = eff.method("series");
    match method.as_str() {
        "series" => {
            let ctrl = SeriesControl::default();
            let mut cache = NormalizationCache::new();
            let mut rows = Vec::with_capacity(grid.len());
            for &t in &grid {
                let value = tail_hitting_normalized(t, &model, &start, &ctrl, &mut cache)?;
                rows.push(Row {
                    abscissa: t,
                    value,
                    std_error: None,
                    method: method.clone(),
                    p,
                    k0: Some(k0),
                    k1: Some(k1),
                    rho,
                    phi,
                    seed: None,
                });
            }
            eff.emit(&rows)
        }
        "mc" => run_simulate(eff),
        other => Err(config_err(format!("unknown tail method `{other}`"))),
    }
}

fn run_simulate(eff: &Effective) -> Result<(), CliError> {
    let p = eff.p()?;
    let (k0, k1) = eff.multiplicities()?;
    let model = WedgeModel::new(p, k0, k1)?;
    let phi = eff.phi()?;
    let rho = eff.rho();
    let start = StartPoint::new(&model, rho, phi)?;
    let grid = eff.abscissae()?;
    let cfg = eff.mc_config(&grid);
    let samples = simulate_hitting_par(&model, &start, &cfg)?;
    let curve = estimate_tail(&samples, &grid, cfg.t_max)?;
    let ses = curve.std_errors().expect("mc curve carries standard errors");
    let rows: Vec<Row> = grid
        .iter()
        .zip(curve.values())
        .zip(ses)
        .map(|((&t, &value), &se)| Row {
            abscissa: t,
            value,
            std_error: Some(se),
            method: "mc".into(),
            p,
            k0: Some(k0),
            k1: Some(k1),
            rho,
            phi,
            seed: Some(cfg.master_seed),
        })
        .collect();
    eff.emit(&rows)
}

fn run_bm_tail(eff: &Effective) -> Result<(), CliError> {
    let p = eff.p()?;
    let phi = eff.phi()?;
    let rho = eff.rho();
    let grid = eff.abscissae()?;
    let method = eff.method("bessel");
    let ctrl = SeriesControl::default();
    let mut rows = Vec::with_capacity(grid.len());
    for &t in &grid {
        let value = match method.as_str() {
            "bessel" => bm_tail_bessel(t, p, rho, phi, &ctrl)?,
            "squarewave" => bm_tail_squarewave(t, p, rho, phi, &ctrl)?,
            other => return Err(config_err(format!("unknown bm-tail method `{other}`"))),
        };
        rows.push(Row {
            abscissa: t,
            value,
            std_error: None,
            method: method.clone(),
            p,
            k0: None,
            k1: None,
            rho,
            phi,
            seed: None,
        });
    }
    eff.emit(&rows)
}

fn run_check(eff: &Effective) -> Result<(), CliError> {
    let name = eff
        .args
        .suite
        .clone()
        .or_else(|| eff.file.suite.clone())
        .ok_or_else(|| {
            config_err(format!("missing --suite (one of: {})", Suite::ALL_NAMES.join(", ")))
        })?;
    let suite = Suite::parse(&name).ok_or_else(|| {
        config_err(format!("unknown suite `{name}` (one of: {})", Suite::ALL_NAMES.join(", ")))
    })?;
    let n_paths = eff.args.n_paths.or(eff.file.n_paths).unwrap_or(100_000);
    let reports = checks::run_suite(suite, eff.seed(), n_paths)?;
    let mut all_ok = true;
    for rep in &reports {
        print!("{}", rep.render_table());
        all_ok &= rep.all_passed();
    }
    if all_ok {
        Ok(())
    } else {
        Err(CliError::Numeric(format!("suite `{name}` has failing checks")))
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Density(a) => run_density(&Effective::new(a)?),
        Cmd::Tail(a) => run_tail(&Effective::new(a)?),
        Cmd::BmTail(a) => run_bm_tail(&Effective::new(a)?),
        Cmd::Simulate(a) => run_simulate(&Effective::new(a)?),
        Cmd::Check(a) => run_check(&Effective::new(a)?),
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Numeric(msg)) => {
            eprintln!("numeric failure: {msg}");
            ExitCode::from(1)
        }
    }
}
