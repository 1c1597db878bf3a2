//! Dice with real (possibly negative) weights whose total is exactly uniform.
//!
//! The uniform total of `m` dice has generating polynomial proportional to
//! `T(x) = 1 + x + ... + x^N-1` with `N = m(n-1)+1`. For odd `n`, `N` is odd and `T`
//! splits into `(N-1)/2` real quadratics `x² - 2cos(2πk/N)x + 1`; any way of handing
//! `(n-1)/2` of them to each die gives that die a degree `n-1` polynomial, and the
//! normalized coefficients are its weights. For even `n` every die polynomial has
//! odd degree, hence a real root, which `T` lacks, so no weighting exists.

use std::f64::consts::PI;

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::die::Die;
use crate::dist::{convolve, poly_mul};
use crate::error::{invalid, DiceError, Result};

pub const IMPOSSIBLE_REASON: &str = "n even (Theorem 2)";

/// `x² - 2cos(2πk/N)x + 1`, the real factor pairing the `k`-th and `(N-k)`-th roots of unity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticFactor {
    pub k: usize,
    pub modulus: usize,
    /// Ascending: constant, linear, quadratic.
    pub coefficients: [f64; 3],
}

impl QuadraticFactor {
    pub fn new(k: usize, modulus: usize) -> Self {
        let b = -2.0 * (2.0 * PI * k as f64 / modulus as f64).cos();
        QuadraticFactor {
            k,
            modulus,
            coefficients: [1.0, b, 1.0],
        }
    }

    /// `2 - 2cos(2πk/N) = 4 sin²(πk/N)`, always positive.
    pub fn value_at_one(&self) -> f64 {
        let s = (PI * self.k as f64 / self.modulus as f64).sin();
        4.0 * s * s
    }
}

fn check_odd(n: usize, m: usize) -> Result<()> {
    if m < 2 {
        return Err(invalid(format!("need at least 2 dice, got m = {m}")));
    }
    if n.is_multiple_of(2) {
        return Err(DiceError::EvenSides { n });
    }
    if n < 3 {
        return Err(invalid(format!("need n >= 3, got n = {n}")));
    }
    Ok(())
}

/// The `m(n-1)/2` real quadratic factors of `T(x)`, for `k = 1..=(N-1)/2`.
pub fn t_polynomial_factors(n: usize, m: usize) -> Result<Vec<QuadraticFactor>> {
    check_odd(n, m)?;
    let modulus = m * (n - 1) + 1;
    Ok((1..=(modulus - 1) / 2)
        .map(|k| QuadraticFactor::new(k, modulus))
        .collect())
}

/// Multiplies the factors out into ascending coefficients.
///
/// Factors are taken in Leja order of their roots (each next root as far as
/// possible, in product of distances, from those already used). Multiplying
/// neighbouring roots first loses up to 1e-7 by `N = 41`; Leja order stays near 1e-14.
pub fn expand(factors: &[QuadraticFactor]) -> Vec<f64> {
    leja_order(factors)
        .iter()
        .fold(vec![1.0], |acc, q| poly_mul(&acc, &q.coefficients))
}

fn leja_order(factors: &[QuadraticFactor]) -> Vec<QuadraticFactor> {
    let angle = |q: &QuadraticFactor| 2.0 * PI * q.k as f64 / q.modulus as f64;
    // log of |e^{ia} - e^{ib}| * |e^{ia} - e^{-ib}|, the distance from a root to both roots of a factor
    let log_gap = |a: f64, b: f64| {
        ((2.0 * ((a - b) / 2.0).sin()).abs() * (2.0 * ((a + b) / 2.0).sin()).abs()).ln()
    };
    let mut rest: Vec<QuadraticFactor> = factors.to_vec();
    let mut ordered = Vec::with_capacity(rest.len());
    let mut score = vec![0.0_f64; rest.len()];
    while !rest.is_empty() {
        let pick = if ordered.is_empty() {
            0
        } else {
            (0..rest.len())
                .max_by(|&i, &j| score[i].total_cmp(&score[j]).then(j.cmp(&i)))
                .expect("nonempty")
        };
        let chosen = rest.remove(pick);
        score.remove(pick);
        let a = angle(&chosen);
        for (s, q) in score.iter_mut().zip(&rest) {
            *s += log_gap(angle(q), a);
        }
        ordered.push(chosen);
    }
    ordered
}

/// Factor index `k` goes to die `(k-1) mod m`.
pub fn round_robin_partition(n: usize, m: usize) -> Vec<Vec<usize>> {
    let count = m * (n - 1) / 2;
    let mut groups = vec![Vec::new(); m];
    for k in 1..=count {
        groups[(k - 1) % m].push(k);
    }
    groups
}

fn check_partition(partition: &[Vec<usize>], n: usize, m: usize) -> Result<()> {
    let per_die = (n - 1) / 2;
    let count = m * per_die;
    if partition.len() != m {
        return Err(invalid(format!("partition has {} groups, need one per die ({m})", partition.len())));
    }
    let mut seen = vec![false; count + 1];
    for (d, group) in partition.iter().enumerate() {
        if group.len() != per_die {
            return Err(invalid(format!(
                "die {} gets {} factors, need exactly {per_die}",
                d + 1,
                group.len()
            )));
        }
        for &k in group {
            if k == 0 || k > count {
                return Err(invalid(format!("factor index {k} outside 1..={count}")));
            }
            if std::mem::replace(&mut seen[k], true) {
                return Err(invalid(format!("factor index {k} assigned twice")));
            }
        }
    }
    Ok(())
}

/// Every assignment of the factor indices to dice, `(n-1)/2` per die, in lexicographic order.
pub fn all_partitions(n: usize, m: usize) -> Vec<Vec<Vec<usize>>> {
    fn place(k: usize, count: usize, cap: usize, groups: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if k > count {
            out.push(groups.clone());
            return;
        }
        for d in 0..groups.len() {
            if groups[d].len() < cap {
                groups[d].push(k);
                place(k + 1, count, cap, groups, out);
                groups[d].pop();
            }
        }
    }
    let mut out = Vec::new();
    if m == 0 || n < 3 || n.is_multiple_of(2) {
        return out;
    }
    place(1, m * (n - 1) / 2, (n - 1) / 2, &mut vec![Vec::new(); m], &mut out);
    out
}

#[derive(Debug, Clone, PartialEq)]
pub enum Outcome {
    Dice(Vec<Die<f64>>),
    /// Even side count: no real weighting has a uniform total.
    Impossible,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstructionResult {
    pub n: usize,
    pub m: usize,
    pub outcome: Outcome,
    /// Factor indices `k` per die; empty when impossible.
    pub partition: Vec<Vec<usize>>,
    /// `max_j |c_j - 1/N|`; `None` when impossible.
    pub max_uniform_error: Option<f64>,
}

impl ConstructionResult {
    pub fn dice(&self) -> Option<&[Die<f64>]> {
        match &self.outcome {
            Outcome::Dice(d) => Some(d),
            Outcome::Impossible => None,
        }
    }

    pub fn is_impossible(&self) -> bool {
        self.outcome == Outcome::Impossible
    }
}

impl Serialize for ConstructionResult {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match &self.outcome {
            Outcome::Impossible => {
                let mut st = serializer.serialize_struct("ConstructionResult", 2)?;
                st.serialize_field("outcome", "impossible")?;
                st.serialize_field("reason", IMPOSSIBLE_REASON)?;
                st.end()
            }
            Outcome::Dice(dice) => {
                let mut st = serializer.serialize_struct("ConstructionResult", 6)?;
                st.serialize_field("outcome", "dice")?;
                st.serialize_field("n", &self.n)?;
                st.serialize_field("m", &self.m)?;
                st.serialize_field("partition", &self.partition)?;
                let weights: Vec<&[f64]> = dice.iter().map(Die::weights).collect();
                st.serialize_field("dice", &weights)?;
                st.serialize_field("max_uniform_error", &self.max_uniform_error)?;
                st.end()
            }
        }
    }
}

/// Builds `m` real-weighted `n`-sided dice with a uniform total, or reports that
/// none exist (even `n`). Without an explicit `partition` the round-robin one is used.
pub fn construct_uniform_dice(
    n: usize,
    m: usize,
    partition: Option<&[Vec<usize>]>,
) -> Result<ConstructionResult> {
    if m < 2 {
        return Err(invalid(format!("need at least 2 dice, got m = {m}")));
    }
    if n < 2 {
        return Err(invalid(format!("need n >= 2, got n = {n}")));
    }
    if n.is_multiple_of(2) {
        return Ok(ConstructionResult {
            n,
            m,
            outcome: Outcome::Impossible,
            partition: Vec::new(),
            max_uniform_error: None,
        });
    }
    let factors = t_polynomial_factors(n, m)?;
    let partition = match partition {
        Some(p) => {
            check_partition(p, n, m)?;
            p.to_vec()
        }
        None => round_robin_partition(n, m),
    };
    let dice = partition
        .iter()
        .map(|group| {
            let chosen: Vec<QuadraticFactor> = group.iter().map(|&k| factors[k - 1]).collect();
            let coeffs = expand(&chosen);
            // the leading factor x only shifts sides, so coefficient i is side i+1;
            // the coefficient sum is the value at 1
            let at_one: f64 = coeffs.iter().sum();
            Die::new(coeffs.iter().map(|c| c / at_one).collect(), true)
        })
        .collect::<Result<Vec<_>>>()?;
    let max_uniform_error = verify_uniform(&dice)?;
    Ok(ConstructionResult {
        n,
        m,
        outcome: Outcome::Dice(dice),
        partition,
        max_uniform_error: Some(max_uniform_error),
    })
}

/// `max_j |c_j - 1/(m(n-1)+1)|` for the total of `dice`.
pub fn verify_uniform(dice: &[Die<f64>]) -> Result<f64> {
    Ok(convolve(dice)?.max_uniform_error())
}
