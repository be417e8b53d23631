//! Run configuration: grid and angle-fraction parsing, the JSON config
//! file schema, and the flag-over-file merge rule.

use std::path::Path;

use serde::Deserialize;

/// A linear evaluation grid `start:stop:count`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    /// Parses `start:stop:count` with count ≥ 1 and stop ≥ start
    /// (equal only when count = 1).
    pub fn parse(s: &str) -> Result<Grid, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("grid `{s}` must have the form start:stop:count"));
        }
        let start: f64 = parts[0].parse().map_err(|_| format!("bad grid start `{}`", parts[0]))?;
        let stop: f64 = parts[1].parse().map_err(|_| format!("bad grid stop `{}`", parts[1]))?;
        let count: usize = parts[2].parse().map_err(|_| format!("bad grid count `{}`", parts[2]))?;
        if count < 1 {
            return Err("grid count must be >= 1".into());
        }
        if !(start.is_finite() && stop.is_finite()) {
            return Err(format!("grid endpoints must be finite, got {start}:{stop}"));
        }
        if count == 1 {
            if stop != start {
                return Err("a 1-point grid requires stop == start".into());
            }
        } else if stop <= start {
            return Err(format!("grid needs stop > start, got {start}:{stop}"));
        }
        Ok(Grid { start, stop, count })
    }

    /// The evaluation points, strictly increasing.
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let h = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.start + h * i as f64).collect()
    }
}

/// Parses an angle fraction `a/b` meaning (a/b)·π, e.g. `1/8` for π/8.
pub fn parse_phi_frac(s: &str) -> Result<f64, String> {
    let (num, den) = s
        .split_once('/')
        .ok_or_else(|| format!("phi fraction `{s}` must have the form a/b"))?;
    let a: f64 = num.trim().parse().map_err(|_| format!("bad numerator `{num}`"))?;
    let b: f64 = den.trim().parse().map_err(|_| format!("bad denominator `{den}`"))?;
    if !(b > 0.0) || !a.is_finite() {
        return Err(format!("phi fraction `{s}` needs a finite numerator and b > 0"));
    }
    Ok(a * std::f64::consts::PI / b)
}

/// JSON config file schema: every field optional, command-line flags
/// take precedence over file values.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub p: Option<u32>,
    pub k0: Option<f64>,
    pub k1: Option<f64>,
    pub k: Option<f64>,
    pub rho: Option<f64>,
    pub phi: Option<f64>,
    pub phi_frac: Option<String>,
    pub grid: Option<String>,
    pub t: Option<f64>,
    pub method: Option<String>,
    pub seed: Option<u64>,
    pub n_paths: Option<usize>,
    pub dt0: Option<f64>,
    pub eps_boundary: Option<f64>,
    pub t_max: Option<f64>,
    pub suite: Option<String>,
    pub out: Option<String>,
    pub format: Option<String>,
}

impl FileConfig {
    pub fn load(path: &Path) -> Result<FileConfig, String> {
        let raw = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        serde_json::from_str(&raw).map_err(|e| format!("bad config {}: {e}", path.display()))
    }
}
