//! The dice file read by `distance` and written by every subcommand that
//! produces dice: `{"n": 3, "mode": "rational", "allow_negative": false,
//! "dice": [["1/2", "0", "1/2"], ...]}`. Extra keys are ignored, so any JSON
//! output of this tool can be fed back in.

use anyhow::{bail, Context, Result};
use fairdice::{Die, Mode, Scalar};
use num_rational::BigRational;
use serde::Deserialize;

#[derive(Debug, Deserialize)]
struct RawDiceFile {
    n: Option<usize>,
    mode: Option<Mode>,
    #[serde(default)]
    allow_negative: bool,
    dice: Vec<Vec<serde_json::Value>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DiceSet {
    Rational(Vec<Die<BigRational>>),
    Float(Vec<Die<f64>>),
}

impl DiceSet {
    pub fn mode(&self) -> Mode {
        match self {
            DiceSet::Rational(_) => Mode::Rational,
            DiceSet::Float(_) => Mode::Float,
        }
    }
}

fn parse_dice<T: Scalar>(raw: &RawDiceFile) -> Result<Vec<Die<T>>> {
    if raw.dice.is_empty() {
        bail!("`dice` is empty");
    }
    raw.dice
        .iter()
        .enumerate()
        .map(|(d, weights)| {
            if let Some(n) = raw.n {
                if weights.len() != n {
                    bail!("die {} has {} weights but n = {n}", d + 1, weights.len());
                }
            }
            let w = weights
                .iter()
                .map(T::from_json)
                .collect::<Result<Vec<T>, String>>()
                .map_err(anyhow::Error::msg)
                .with_context(|| format!("die {}", d + 1))?;
            Die::new(w, raw.allow_negative).with_context(|| format!("die {}", d + 1))
        })
        .collect()
}

/// Parses a dice file; `default_mode` applies when the file has no `mode`.
pub fn parse(text: &str, default_mode: Mode) -> Result<DiceSet> {
    let raw: RawDiceFile = serde_json::from_str(text).context("not a dice file")?;
    Ok(match raw.mode.unwrap_or(default_mode) {
        Mode::Rational => DiceSet::Rational(parse_dice(&raw)?),
        Mode::Float => DiceSet::Float(parse_dice(&raw)?),
    })
}
