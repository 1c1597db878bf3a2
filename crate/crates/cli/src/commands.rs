use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use fairdice::optimizer::deviation_up_to_permutation;
use fairdice::{
    check_symmetry, conjectured_m_dice, construct_uniform_dice, convolve, d_min, minimize,
    optimal_pair, optimal_sum_profile, Die, Mode, OptimizerConfig, Scalar,
};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::dicefile::{self, DiceSet};
use crate::output::{
    dice_csv, dice_file_body, dice_table, distribution_table, show, Outputs, RunManifest,
};

const EXIT_IMPOSSIBLE: u8 = 3;
const SYMMETRY_TOL: f64 = 1e-6;

fn float_only(sub: &str, mode: Option<Mode>) -> Result<()> {
    if mode == Some(Mode::Rational) {
        bail!("`{sub}` runs in float mode only");
    }
    Ok(())
}

fn to_float(dice: &[Die<BigRational>]) -> Vec<Die<f64>> {
    dice.iter().map(Die::to_f64).collect()
}

pub fn optimal(n: usize, mode: Option<Mode>, out: &Outputs) -> Result<ExitCode> {
    let mode = mode.unwrap_or(Mode::Rational);
    let pair = optimal_pair(n)?;
    let profile = optimal_sum_profile(n)?;
    let manifest = RunManifest::new("optimal", json!({ "n": n }), mode, out);

    println!("optimal pair of {n}-sided dice (thm1)");
    let (mut body, table, csv) = match mode {
        Mode::Rational => (
            dice_file_body(&pair.dice()),
            dice_table(&pair.dice()),
            profile.to_csv(),
        ),
        Mode::Float => {
            let dice = to_float(&pair.dice());
            (dice_file_body(&dice), dice_table(&dice), profile.to_f64().to_csv())
        }
    };
    print!("{table}");
    println!("d_min = {}", show(&pair.d_min));
    println!("sum distribution:");
    match mode {
        Mode::Rational => print!("{}", distribution_table(&profile)),
        Mode::Float => print!("{}", distribution_table(&profile.to_f64())),
    }

    body["theorem"] = json!(fairdice::closed_form::OPTIMAL_PAIR_THEOREM);
    body["d_min"] = pair.d_min.to_json();
    body["d_min_f64"] = json!(pair.d_min.to_f64());
    body["distribution"] = match mode {
        Mode::Rational => serde_json::to_value(&profile)?,
        Mode::Float => serde_json::to_value(profile.to_f64())?,
    };
    out.write_json(&manifest, body)?;
    out.write_csv(&csv)?;
    Ok(ExitCode::SUCCESS)
}

pub fn optimize(
    n: usize,
    m: usize,
    cfg: OptimizerConfig,
    mode: Option<Mode>,
    out: &Outputs,
) -> Result<ExitCode> {
    float_only("optimize", mode)?;
    let params = json!({ "n": n, "m": m, "config": &cfg });
    let manifest = RunManifest::new("optimize", params, Mode::Float, out);
    let r = minimize(n, m, &cfg)?;
    let symmetric = check_symmetry(&r.dice, SYMMETRY_TOL);

    println!("best dice found for m = {m}, n = {n} ({}, seed {})", r.claim(), cfg.seed);
    print!("{}", dice_table(&r.dice));
    println!("D = {}", show(&r.d_value));
    println!(
        "converged: {} (projected gradient norm {:.3e}, start {}, {} iterations)",
        r.converged, r.grad_norm, r.best_start_index, r.iterations_used
    );
    for (k, s) in symmetric.iter().enumerate() {
        println!("  die {} symmetric: {s}", k + 1);
    }

    let mut body = dice_file_body(&r.dice);
    if m == 2 && n >= 2 {
        let pair = optimal_pair(n)?;
        let weight_dev = deviation_up_to_permutation(&r.dice, &pair.dice())
            .context("dice shapes differ from the optimal pair")?;
        let gap = r.d_value - d_min(n)?.to_f64();
        println!("vs optimal pair: max weight deviation {weight_dev:.3e}, D - d_min = {gap:.3e}");
        body["optimal_pair_deviation"] = json!({ "max_weight_deviation": weight_dev, "d_minus_d_min": gap });
    }
    body["d_value"] = json!(r.d_value);
    body["converged"] = json!(r.converged);
    body["grad_norm"] = json!(r.grad_norm);
    body["best_start_index"] = json!(r.best_start_index);
    body["iterations_used"] = json!(r.iterations_used);
    body["claim"] = json!(r.claim());
    body["config"] = serde_json::to_value(&r.config)?;
    body["seed"] = json!(cfg.seed);
    body["starts"] = serde_json::to_value(&r.starts)?;
    body["symmetric"] = json!(symmetric);
    out.write_json(&manifest, body)?;
    out.write_csv(&dice_csv(&r.dice))?;
    // a run that stopped short of the tolerance is still a valid result
    Ok(ExitCode::SUCCESS)
}

/// `"1,2;3,4"` into `[[1, 2], [3, 4]]`.
fn parse_partition(s: &str) -> Result<Vec<Vec<usize>>> {
    s.split(';')
        .map(|group| {
            group
                .split(',')
                .map(|k| {
                    k.trim()
                        .parse::<usize>()
                        .with_context(|| format!("bad factor index `{}` in partition", k.trim()))
                })
                .collect()
        })
        .collect()
}

pub fn construct(
    n: usize,
    m: usize,
    partition: Option<&str>,
    mode: Option<Mode>,
    out: &Outputs,
) -> Result<ExitCode> {
    float_only("construct", mode)?;
    let parsed = partition.map(parse_partition).transpose()?;
    let params = json!({ "n": n, "m": m, "partition": partition });
    let manifest = RunManifest::new("construct", params, Mode::Float, out);
    let r = construct_uniform_dice(n, m, parsed.as_deref())?;

    let Some(dice) = r.dice() else {
        println!("impossible: n even");
        out.write_json(&manifest, serde_json::to_value(&r)?)?;
        return Ok(ExitCode::from(EXIT_IMPOSSIBLE));
    };
    println!("{m} real-weighted {n}-sided dice with a uniform total");
    let groups: Vec<String> = r
        .partition
        .iter()
        .map(|g| g.iter().map(usize::to_string).collect::<Vec<_>>().join(","))
        .collect();
    println!("partition: {}", groups.join(";"));
    print!("{}", dice_table(dice));
    let err = r.max_uniform_error.unwrap_or(0.0);
    println!("max |c_j - uniform| = {err:.3e}");

    let mut body = dice_file_body(dice);
    body["outcome"] = json!("dice");
    body["partition"] = json!(r.partition);
    body["max_uniform_error"] = json!(err);
    out.write_json(&manifest, body)?;
    out.write_csv(&dice_csv(dice))?;
    Ok(ExitCode::SUCCESS)
}

fn report_distance<T: Scalar>(dice: &[Die<T>], manifest: &RunManifest, out: &Outputs) -> Result<()> {
    let dist = convolve(dice)?;
    let d = dist.distance_to_uniform();
    println!("{} dice with {} sides ({} mode)", dice.len(), dist.n(), T::MODE);
    print!("{}", distribution_table(&dist));
    println!("D = {}", show(&d));

    let mut body = dice_file_body(dice);
    body["distribution"] = serde_json::to_value(&dist)?;
    body["d"] = d.to_json();
    body["d_f64"] = json!(d.to_f64());
    out.write_json(manifest, body)?;
    out.write_csv(&dist.to_csv())
}

pub fn distance(file: &Path, mode: Option<Mode>, out: &Outputs) -> Result<ExitCode> {
    let text = std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let set = dicefile::parse(&text, mode.unwrap_or(Mode::Rational))
        .with_context(|| format!("parsing {}", file.display()))?;
    let params = json!({ "file": file });
    let manifest = RunManifest::new("distance", params, set.mode(), out);
    match &set {
        DiceSet::Rational(d) => report_distance(d, &manifest, out)?,
        DiceSet::Float(d) => report_distance(d, &manifest, out)?,
    }
    Ok(ExitCode::SUCCESS)
}

pub fn conjecture(n: usize, m: usize, mode: Option<Mode>, out: &Outputs) -> Result<ExitCode> {
    let mode = mode.unwrap_or(Mode::Rational);
    let c = conjectured_m_dice(n, m)?;
    let manifest = RunManifest::new("conjecture", json!({ "n": n, "m": m }), mode, out);
    println!("conjectured optimum for m = {m}, n = {n} (status: {})", c.status());

    let (mut body, d): (Value, String) = match mode {
        Mode::Rational => {
            print!("{}", dice_table(&c.dice));
            let d = convolve(&c.dice)?.distance_to_uniform();
            out.write_csv(&dice_csv(&c.dice))?;
            (dice_file_body(&c.dice), show(&d))
        }
        Mode::Float => {
            let dice = to_float(&c.dice);
            print!("{}", dice_table(&dice));
            let d = convolve(&dice)?.distance_to_uniform();
            out.write_csv(&dice_csv(&dice))?;
            (dice_file_body(&dice), show(&d))
        }
    };
    println!("D = {d}");
    body["status"] = json!(c.status());
    out.write_json(&manifest, body)?;
    Ok(ExitCode::SUCCESS)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partitions_parse() {
        assert_eq!(parse_partition("1,2;3,4").unwrap(), vec![vec![1, 2], vec![3, 4]]);
        assert_eq!(parse_partition(" 2 ; 1").unwrap(), vec![vec![2], vec![1]]);
        assert!(parse_partition("1,x;2").is_err());
        assert!(parse_partition("").is_err());
    }
}
