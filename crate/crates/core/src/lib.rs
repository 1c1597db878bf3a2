//! Weighted `n`-sided dice whose total is as close to uniform as possible.
//!
//! - [`dist`]: sum distributions by convolution and the squared distance D to uniform
//! - [`closed_form`]: the exact two-dice optimum and the inequalities that certify it,
//!   plus the conjectured optimum for more dice
//! - [`optimizer`]: multi-start projected gradient descent over the dice simplices
//! - [`negative`]: real-weighted dice with an exactly uniform total (odd `n` only)
//!
//! Exact work uses [`num_rational::BigRational`], numeric work uses `f64`; see [`Scalar`].

pub mod closed_form;
pub mod die;
pub mod dist;
pub mod error;
pub mod negative;
pub mod optimizer;
pub mod scalar;

pub use closed_form::{
    amgm_residual, conjectured_m_dice, d_min, gasarch_kruskal_die, lemma2_decomposition,
    lower_bound_f, optimal_pair, optimal_sum_profile, ConjecturedDice, LowerBoundCurve,
    OptimalPair, SquareSumDecomposition,
};
pub use die::{validate_die, Die, ValidityReport};
pub use dist::{convolve, poly_mul, SumDistribution};
pub use error::{DiceError, Result};
pub use negative::{
    construct_uniform_dice, t_polynomial_factors, verify_uniform, ConstructionResult, Outcome,
    QuadraticFactor,
};
pub use optimizer::{
    check_symmetry, gradient_d, minimize, project_simplex, OptimizationResult, OptimizerConfig,
};
pub use scalar::{Mode, Scalar};
