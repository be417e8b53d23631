//! Result rows and their CSV/JSON renderings.
//!
//! CSV values are rendered with 17 significant digits, which
//! round-trips every f64 exactly, so identical configurations produce
//! byte-identical files.

use serde::Serialize;

/// One output row; optional fields render as empty CSV cells.
#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub abscissa: f64,
    pub value: f64,
    pub std_error: Option<f64>,
    pub method: String,
    pub p: u32,
    pub k0: Option<f64>,
    pub k1: Option<f64>,
    pub rho: f64,
    pub phi: f64,
    pub seed: Option<u64>,
}

/// 17-significant-digit decimal rendering.
fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

/// Renders rows as CSV with the fixed header.
pub fn render_csv(rows: &[Row]) -> String {
    let mut out = String::from("abscissa,value,std_error,method,p,k0,k1,rho,phi,seed\n");
    for r in rows {
        out.push_str(&fmt17(r.abscissa));
        out.push(',');
        out.push_str(&fmt17(r.value));
        out.push(',');
        if let Some(se) = r.std_error {
            out.push_str(&fmt17(se));
        }
        out.push(',');
        out.push_str(&r.method);
        out.push(',');
        out.push_str(&r.p.to_string());
        out.push(',');
        if let Some(k0) = r.k0 {
            out.push_str(&fmt17(k0));
        }
        out.push(',');
        if let Some(k1) = r.k1 {
            out.push_str(&fmt17(k1));
        }
        out.push(',');
        out.push_str(&fmt17(r.rho));
        out.push(',');
        out.push_str(&fmt17(r.phi));
        out.push(',');
        if let Some(seed) = r.seed {
            out.push_str(&seed.to_string());
        }
        out.push('\n');
    }
    out
}

/// Renders rows as a JSON array.
pub fn render_json(rows: &[Row]) -> String {
    let mut s = serde_json::to_string_pretty(rows).expect("rows are plain data");
    s.push('\n');
    s
}
