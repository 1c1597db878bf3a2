//! Multi-start projected gradient descent for D over products of probability simplices.
//!
//! Each start draws every die uniformly from its simplex, then iterates
//! `x <- P(x - t ∇D)` with Armijo backtracking on `t`. Starts are independent and
//! run in parallel; the best one wins, ties going to the lowest start index, so the
//! answer does not depend on scheduling. Nothing here certifies a global minimum.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::Serialize;

use crate::die::Die;
use crate::dist::{convolve, poly_mul, support_size};
use crate::error::{invalid, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizerConfig {
    pub starts: usize,
    pub max_iters: usize,
    pub step: f64,
    pub armijo_beta: f64,
    pub armijo_c: f64,
    pub grad_tol: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            starts: 200,
            max_iters: 50_000,
            step: 0.5,
            armijo_beta: 0.5,
            armijo_c: 1e-4,
            grad_tol: 1e-12,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(seed: u64) -> Self {
        OptimizerConfig {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.starts == 0 || self.max_iters == 0 {
            return Err(invalid("starts and max_iters must be positive"));
        }
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(invalid(format!("{name} must be a positive finite number, got {v}")))
            }
        };
        positive("step", self.step)?;
        positive("grad_tol", self.grad_tol)?;
        for (name, v) in [("armijo_beta", self.armijo_beta), ("armijo_c", self.armijo_c)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(invalid(format!("{name} must lie in (0, 1), got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StartSummary {
    pub start_index: usize,
    pub d_value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub grad_norm: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizationResult {
    pub n: usize,
    pub m: usize,
    pub dice: Vec<Die<f64>>,
    pub d_value: f64,
    pub best_start_index: usize,
    /// Projected-gradient norm below `grad_tol` at the returned point.
    pub converged: bool,
    pub grad_norm: f64,
    pub iterations_used: usize,
    pub config: OptimizerConfig,
    pub starts: Vec<StartSummary>,
}

impl OptimizationResult {
    /// What the result claims: a local search outcome, never a certified optimum.
    pub fn claim(&self) -> String {
        format!("best of {} starts", self.starts.len())
    }
}

/// D and the residual `c - uniform` for raw weight vectors.
fn objective(dice: &[Vec<f64>]) -> (f64, Vec<f64>) {
    let c = dice[1..]
        .iter()
        .fold(dice[0].clone(), |acc, w| poly_mul(&acc, w));
    let u = 1.0 / c.len() as f64;
    let resid: Vec<f64> = c.iter().map(|v| v - u).collect();
    let d = resid.iter().map(|e| e * e).sum();
    (d, resid)
}

/// `∂D/∂w` for die `which`: twice the correlation of the residual with the
/// convolution of all the other dice.
fn gradient_of(dice: &[Vec<f64>], which: usize, resid: &[f64]) -> Vec<f64> {
    let others = dice
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != which)
        .map(|(_, w)| w);
    let g = others.fold(vec![1.0], |acc, w| poly_mul(&acc, w));
    (0..dice[which].len())
        .map(|i| 2.0 * g.iter().enumerate().map(|(k, gk)| resid[i + k] * gk).sum::<f64>())
        .collect()
}

fn full_gradient(dice: &[Vec<f64>], resid: &[f64]) -> Vec<Vec<f64>> {
    (0..dice.len()).map(|a| gradient_of(dice, a, resid)).collect()
}

/// Gradient of D with respect to the weights of die `which` (0-based).
pub fn gradient_d(dice: &[Die<f64>], which: usize) -> Result<Vec<f64>> {
    if which >= dice.len() {
        return Err(invalid(format!("die index {which} out of range for {} dice", dice.len())));
    }
    let raw = raw_weights(dice)?;
    let (_, resid) = objective(&raw);
    Ok(gradient_of(&raw, which, &resid))
}

fn raw_weights(dice: &[Die<f64>]) -> Result<Vec<Vec<f64>>> {
    let n = dice.first().ok_or_else(|| invalid("no dice given"))?.n();
    if dice.iter().any(|d| d.n() != n) {
        return Err(invalid("all dice must share one side count"));
    }
    Ok(dice.iter().map(|d| d.weights().to_vec()).collect())
}

/// Euclidean projection onto `{w : w_i >= 0, Σ w_i = 1}` by sorting and thresholding.
pub fn project_simplex(v: &[f64]) -> Result<Vec<f64>> {
    if v.is_empty() {
        return Err(invalid("cannot project an empty vector"));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(invalid("cannot project a vector with non-finite entries"));
    }
    Ok(project_unchecked(v))
}

fn project_unchecked(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (k, &x) in sorted.iter().enumerate() {
        cumsum += x;
        let t = (cumsum - 1.0) / (k + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    let mut w: Vec<f64> = v.iter().map(|x| (x - theta).max(0.0)).collect();
    // thresholding leaves a few ulps of drift in the sum
    let s: f64 = w.iter().sum();
    if s > 0.0 {
        w.iter_mut().for_each(|x| *x /= s);
    }
    w
}

fn project_all(dice: &[Vec<f64>]) -> Vec<Vec<f64>> {
    dice.iter().map(|w| project_unchecked(w)).collect()
}

/// `‖x - P(x - ∇D)‖` over all dice; zero exactly at first-order stationary points.
fn gradient_mapping_norm(dice: &[Vec<f64>], grad: &[Vec<f64>]) -> f64 {
    dice.iter()
        .zip(grad)
        .map(|(w, g)| {
            let stepped: Vec<f64> = w.iter().zip(g).map(|(a, b)| a - b).collect();
            project_unchecked(&stepped)
                .iter()
                .zip(w)
                .map(|(p, a)| (a - p) * (a - p))
                .sum::<f64>()
        })
        .sum::<f64>()
        .sqrt()
}

/// Projected-gradient norm of D at the given dice.
pub fn projected_gradient_norm(dice: &[Die<f64>]) -> Result<f64> {
    let raw = raw_weights(dice)?;
    let (_, resid) = objective(&raw);
    Ok(gradient_mapping_norm(&raw, &full_gradient(&raw, &resid)))
}

/// One local descent.
#[derive(Debug, Clone, PartialEq)]
pub struct Descent {
    pub dice: Vec<Vec<f64>>,
    pub d_value: f64,
    pub iterations: usize,
    pub converged: bool,
    pub grad_norm: f64,
}

/// `c(trial) - c(base)`, expanded as a telescoping sum of convolutions that each
/// carry one die's weight change, so it stays accurate relative to the step.
fn sum_change(base: &[Vec<f64>], trial: &[Vec<f64>]) -> Vec<f64> {
    let len = base.iter().map(|w| w.len() - 1).sum::<usize>() + 1;
    let mut total = vec![0.0; len];
    for a in 0..base.len() {
        let delta: Vec<f64> = trial[a].iter().zip(&base[a]).map(|(t, b)| t - b).collect();
        if delta.iter().all(|v| *v == 0.0) {
            continue;
        }
        let term = trial[..a]
            .iter()
            .chain(&base[a + 1..])
            .fold(delta, |acc, w| poly_mul(&acc, w));
        total.iter_mut().zip(term).for_each(|(t, v)| *t += v);
    }
    total
}

/// Runs projected gradient descent from `start` (projected first), calling
/// `observe(iteration, iterate, D)` for the start point and every accepted step.
///
/// Near a minimum the per-step decrease of D falls far below the rounding error
/// of D itself, so the sufficient-decrease test uses the change in D computed
/// directly from the change in the sum distribution.
pub fn descend(
    start: &[Vec<f64>],
    cfg: &OptimizerConfig,
    mut observe: impl FnMut(usize, &[Vec<f64>], f64),
) -> Descent {
    let mut x = project_all(start);
    let (mut d, mut resid) = objective(&x);
    observe(0, &x, d);
    let mut iterations = 0;
    loop {
        let grad = full_gradient(&x, &resid);
        let grad_norm = gradient_mapping_norm(&x, &grad);
        if grad_norm < cfg.grad_tol || iterations >= cfg.max_iters {
            return Descent {
                dice: x,
                d_value: d,
                iterations,
                converged: grad_norm < cfg.grad_tol,
                grad_norm,
            };
        }
        let mut t = cfg.step;
        let accepted = loop {
            let trial: Vec<Vec<f64>> = x
                .iter()
                .zip(&grad)
                .map(|(w, g)| {
                    let stepped: Vec<f64> = w.iter().zip(g).map(|(a, b)| a - t * b).collect();
                    project_unchecked(&stepped)
                })
                .collect();
            let predicted: f64 = trial
                .iter()
                .zip(&x)
                .zip(&grad)
                .flat_map(|((nw, w), g)| nw.iter().zip(w).zip(g).map(|((a, b), gi)| gi * (a - b)))
                .sum();
            let dc = sum_change(&x, &trial);
            let change: f64 = dc.iter().zip(&resid).map(|(v, e)| v * (2.0 * e + v)).sum();
            // Each die's weights sum to 1 only up to a few ulps, and that drift times the
            // gradient's constant part can swamp the true decrease near a minimum. Remove
            // its first-order contribution, taken over the sides that moved, from both sides of
            // the test.
            let drift: f64 = trial
                .iter()
                .zip(&x)
                .zip(&grad)
                .map(|((nw, w), g)| {
                    let (mut moved, mut g_sum, mut count) = (0.0, 0.0, 0usize);
                    for ((a, b), gi) in nw.iter().zip(w).zip(g) {
                        if a != b {
                            moved += a - b;
                            g_sum += gi;
                            count += 1;
                        }
                    }
                    if count == 0 {
                        0.0
                    } else {
                        moved * g_sum / count as f64
                    }
                })
                .sum();
            let predicted = predicted - drift;
            let change = change - drift;
            if change <= cfg.armijo_c * predicted && predicted < 0.0 {
                break Some(trial);
            }
            t *= cfg.armijo_beta;
            if t < f64::MIN_POSITIVE {
                break None;
            }
        };
        iterations += 1;
        match accepted {
            Some(trial) => {
                let (dt, rt) = objective(&trial);
                x = trial;
                d = dt;
                resid = rt;
                observe(iterations, &x, d);
            }
            // no step size decreases D any further: stationary up to rounding
            None => {
                return Descent {
                    dice: x,
                    d_value: d,
                    iterations,
                    converged: false,
                    grad_norm,
                }
            }
        }
    }
}

/// Uniform draw from the `n`-simplex (Dirichlet(1, ..., 1)).
fn uniform_simplex_point(n: usize, rng: &mut impl Rng) -> Vec<f64> {
    let e: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

/// Random start `index` for the given seed; independent of every other start.
pub fn random_start(n: usize, m: usize, seed: u64, index: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    (0..m).map(|_| uniform_simplex_point(n, &mut rng)).collect()
}

pub fn minimize(n: usize, m: usize, cfg: &OptimizerConfig) -> Result<OptimizationResult> {
    if n < 2 || m < 2 {
        return Err(invalid(format!("need n >= 2 and m >= 2, got n = {n}, m = {m}")));
    }
    cfg.validate()?;
    let runs: Vec<Descent> = (0..cfg.starts)
        .into_par_iter()
        .map(|k| descend(&random_start(n, m, cfg.seed, k), cfg, |_, _, _| {}))
        .collect();
    let (best_start_index, best) = runs
        .iter()
        .enumerate()
        .min_by(|(i, a), (j, b)| a.d_value.total_cmp(&b.d_value).then(i.cmp(j)))
        .expect("at least one start");
    let dice = best
        .dice
        .iter()
        .map(|w| Die::probabilities(w.clone()))
        .collect::<Result<Vec<_>>>()?;
    let d_value = convolve(&dice)?.distance_to_uniform();
    debug_assert_eq!(support_size(m, n), 1 + m * (n - 1));
    let starts = runs
        .iter()
        .enumerate()
        .map(|(k, r)| StartSummary {
            start_index: k,
            d_value: r.d_value,
            iterations: r.iterations,
            converged: r.converged,
            grad_norm: r.grad_norm,
        })
        .collect();
    Ok(OptimizationResult {
        n,
        m,
        dice,
        d_value,
        best_start_index,
        converged: best.converged,
        grad_norm: best.grad_norm,
        iterations_used: best.iterations,
        config: cfg.clone(),
        starts,
    })
}

/// Per die: is `|w_i - w_{n+1-i}| <= tol` for every side?
pub fn check_symmetry<T: Scalar>(dice: &[Die<T>], tol: f64) -> Vec<bool> {
    dice.iter()
        .map(|d| {
            let w = d.weights();
            w.iter()
                .zip(w.iter().rev())
                .all(|(a, b)| (a.clone() - b.clone()).abs().to_f64() <= tol)
        })
        .collect()
}

/// Largest per-weight difference between two lists of dice, minimized over
/// reorderings of the second list. `None` if the lists differ in shape.
pub fn deviation_up_to_permutation<A: Scalar, B: Scalar>(a: &[Die<A>], b: &[Die<B>]) -> Option<f64> {
    if a.len() != b.len() || a.iter().zip(b).any(|(x, y)| x.n() != y.n()) {
        return None;
    }
    let fa: Vec<Vec<f64>> = a.iter().map(|d| d.weights().iter().map(Scalar::to_f64).collect()).collect();
    let fb: Vec<Vec<f64>> = b.iter().map(|d| d.weights().iter().map(Scalar::to_f64).collect()).collect();
    let dist = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(p, q)| (p - q).abs()).fold(0.0, f64::max);

    fn search(k: usize, fa: &[Vec<f64>], fb: &[Vec<f64>], used: &mut [bool], worst: f64, best: &mut f64, dist: &dyn Fn(&[f64], &[f64]) -> f64) {
        if worst >= *best {
            return;
        }
        if k == fa.len() {
            *best = worst;
            return;
        }
        for j in 0..fb.len() {
            if !used[j] {
                used[j] = true;
                search(k + 1, fa, fb, used, worst.max(dist(&fa[k], &fb[j])), best, dist);
                used[j] = false;
            }
        }
    }

    let mut best = f64::INFINITY;
    search(0, &fa, &fb, &mut vec![false; fb.len()], 0.0, &mut best, &dist);
    Some(best)
}
