use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use fairdice::{Die, Mode, Scalar, SumDistribution};
use serde::Serialize;
use serde_json::{json, Value};

/// Echoed into every JSON output.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub params: Value,
    pub seed: Option<u64>,
    pub mode: Mode,
    pub json: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl RunManifest {
    pub fn new(subcommand: &str, params: Value, mode: Mode, out: &Outputs) -> Self {
        RunManifest {
            subcommand: subcommand.to_owned(),
            params,
            seed: out.seed,
            mode,
            json: out.json.clone(),
            csv: out.csv.clone(),
            version: env!("CARGO_PKG_VERSION"),
            timestamp: (!out.no_timestamp).then(|| {
                SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0)
            }),
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct Outputs {
    pub json: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub seed: Option<u64>,
    pub no_timestamp: bool,
}

impl Outputs {
    /// Writes `body` with the manifest merged in under `"manifest"`.
    pub fn write_json(&self, manifest: &RunManifest, mut body: Value) -> Result<()> {
        let Some(path) = &self.json else { return Ok(()) };
        body["manifest"] = serde_json::to_value(manifest)?;
        let mut text = serde_json::to_string_pretty(&body)?;
        text.push('\n');
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
    }

    pub fn write_csv(&self, text: &str) -> Result<()> {
        let Some(path) = &self.csv else { return Ok(()) };
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
    }
}

/// `x` to 12 significant digits.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    if !(-5..=15).contains(&mag) {
        return format!("{x:.11e}");
    }
    format!("{:.*}", (11 - mag).max(0) as usize, x)
}

/// Exact and decimal forms for rationals, decimal only for floats.
pub fn show<T: Scalar>(x: &T) -> String {
    match T::MODE {
        Mode::Rational => format!("{x} ({})", sig12(x.to_f64())),
        Mode::Float => sig12(x.to_f64()),
    }
}

pub fn dice_table<T: Scalar>(dice: &[Die<T>]) -> String {
    let mut out = String::new();
    for (k, d) in dice.iter().enumerate() {
        let cells: Vec<String> = d
            .weights()
            .iter()
            .map(|w| match T::MODE {
                Mode::Rational => w.to_string(),
                Mode::Float => sig12(w.to_f64()),
            })
            .collect();
        let _ = writeln!(out, "  die {}: ({})", k + 1, cells.join(", "));
    }
    out
}

pub fn distribution_table<T: Scalar>(dist: &SumDistribution<T>) -> String {
    let mut out = String::from("  j    c_j\n");
    for (j, c) in dist.iter() {
        let _ = writeln!(out, "  {j:<4} {}", show(c));
    }
    out
}

/// `die,side,weight` rows.
pub fn dice_csv<T: Scalar>(dice: &[Die<T>]) -> String {
    let mut out = String::from("die,side,weight\n");
    for (k, d) in dice.iter().enumerate() {
        for (i, w) in d.weights().iter().enumerate() {
            let _ = writeln!(out, "{},{},{}", k + 1, i + 1, w.to_f64());
        }
    }
    out
}

/// The dice-file keys, so any output can be read back by `distance`.
pub fn dice_file_body<T: Scalar>(dice: &[Die<T>]) -> Value {
    let weights: Vec<Vec<Value>> = dice
        .iter()
        .map(|d| d.weights().iter().map(Scalar::to_json).collect())
        .collect();
    json!({
        "n": dice.first().map(Die::n),
        "m": dice.len(),
        "mode": T::MODE,
        "allow_negative": dice.iter().any(Die::allow_negative),
        "dice": weights,
    })
}
