//! Exact optimal dice for two-dice sums, the inequalities that certify them,
//! and the conjectured family for more than two dice.

use num_rational::BigRational;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::die::Die;
use crate::dist::SumDistribution;
use crate::error::{invalid, DiceError, Result};
use crate::scalar::{ratio, Scalar};

/// Status tag attached to [`conjectured_m_dice`] output.
pub const CONJECTURE_STATUS: &str = "conjecture";

/// Tag attached to the proven two-dice optimum.
pub const OPTIMAL_PAIR_THEOREM: &str = "thm1";

fn check_n(n: usize, min: usize) -> Result<i64> {
    if n < min {
        return Err(invalid(format!("n must be at least {min}, got {n}")));
    }
    i64::try_from(n).map_err(|_| invalid(format!("n = {n} is too large")))
}

/// Minimum of D over pairs of nonnegative `n`-sided dice: `1 / (2(2n-1)(3n-2))`.
pub fn d_min(n: usize) -> Result<BigRational> {
    let n = check_n(n, 2)?;
    Ok(ratio(1, 2 * (2 * n - 1) * (3 * n - 2)))
}

/// The unique (up to swapping) pair of `n`-sided dice minimizing D.
///
/// `point_mass_die` always comes first: `(1/2, 0, ..., 0, 1/2)`. The plateau die
/// is `(2, 3, ..., 3, 2) / (3n-2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimalPair {
    pub n: usize,
    pub point_mass_die: Die<BigRational>,
    pub plateau_die: Die<BigRational>,
    pub d_min: BigRational,
}

impl OptimalPair {
    /// `[point_mass_die, plateau_die]`.
    pub fn dice(&self) -> [Die<BigRational>; 2] {
        [self.point_mass_die.clone(), self.plateau_die.clone()]
    }
}

impl Serialize for OptimalPair {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("OptimalPair", 5)?;
        st.serialize_field("theorem", OPTIMAL_PAIR_THEOREM)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("point_mass_die", &self.point_mass_die)?;
        st.serialize_field("plateau_die", &self.plateau_die)?;
        st.serialize_field("d_min", &self.d_min.to_json())?;
        st.end()
    }
}

fn point_mass_die(n: usize) -> Die<BigRational> {
    let mut w = vec![ratio(0, 1); n];
    w[0] = ratio(1, 2);
    w[n - 1] = ratio(1, 2);
    Die::probabilities(w).expect("point-mass die is a probability vector")
}

/// Die with weight `end/den` on sides 1 and n and `inner/den` elsewhere.
fn end_inner_die(n: usize, end: i64, inner: i64, den: i64) -> Result<Die<BigRational>> {
    let mut w = vec![ratio(inner, den); n];
    w[0] = ratio(end, den);
    w[n - 1] = ratio(end, den);
    Die::probabilities(w)
}

pub fn optimal_pair(n: usize) -> Result<OptimalPair> {
    let k = check_n(n, 2)?;
    Ok(OptimalPair {
        n,
        point_mass_die: point_mass_die(n),
        plateau_die: end_inner_die(n, 2, 3, 3 * k - 2)?,
        d_min: d_min(n)?,
    })
}

/// The sum distribution of [`optimal_pair`]: `c_2 = c_2n = 1/(3n-2)`,
/// `c_{n+1} = 2/(3n-2)`, every other total `3/(2(3n-2))`.
pub fn optimal_sum_profile(n: usize) -> Result<SumDistribution<BigRational>> {
    let k = check_n(n, 2)?;
    let mut c = vec![ratio(3, 2 * (3 * k - 2)); 2 * n - 1];
    c[0] = ratio(1, 3 * k - 2);
    c[2 * n - 2] = ratio(1, 3 * k - 2);
    // total n+1 sits at index n-1
    c[n - 1] = ratio(2, 3 * k - 2);
    SumDistribution::from_parts(2, n, c)
}

/// `c_{n+1} - 2 sqrt(c_2 c_{2n})` for a two-dice distribution.
///
/// Nonnegative (up to rounding) whenever the dice are nonnegative, with
/// equality at the optimal pair.
pub fn amgm_residual<T: Scalar>(dist: &SumDistribution<T>) -> Result<f64> {
    if dist.m() != 2 {
        return Err(invalid(format!("AM-GM residual needs m = 2, got m = {}", dist.m())));
    }
    let n = dist.n();
    let at = |j: usize| dist.get(j).expect("total within support").to_f64();
    let product = at(2) * at(2 * n);
    if product < 0.0 {
        return Err(invalid("c_2 * c_2n is negative; the residual needs nonnegative dice"));
    }
    Ok(at(n + 1) - 2.0 * product.sqrt())
}

/// Both sides of `8(x²+y²+z²) - 3(x+y+z)² = 2(z²-4xy) + (z-x-y)² + (z-2x)² + (z-2y)²`.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareSumDecomposition<T> {
    pub lhs: T,
    /// `[2(z²-4xy), (z-x-y)², (z-2x)², (z-2y)²]`
    pub terms: [T; 4],
}

impl<T: Scalar> SquareSumDecomposition<T> {
    pub fn rhs(&self) -> T {
        self.terms.iter().fold(T::zero(), |acc, t| acc + t.clone())
    }
}

/// Evaluates the identity behind `x² + y² + z² >= (3/8)(x+y+z)²` when `z² >= 4xy`.
pub fn lemma2_decomposition<T: Scalar>(x: T, y: T, z: T) -> SquareSumDecomposition<T> {
    let sq = |v: T| v.clone() * v;
    let int = T::from_int;
    let total = x.clone() + y.clone() + z.clone();
    let lhs = int(8) * (sq(x.clone()) + sq(y.clone()) + sq(z.clone())) - int(3) * sq(total);
    let terms = [
        int(2) * (sq(z.clone()) - int(4) * x.clone() * y.clone()),
        sq(z.clone() - x.clone() - y.clone()),
        sq(z.clone() - int(2) * x),
        sq(z - int(2) * y),
    ];
    SquareSumDecomposition { lhs, terms }
}

/// The parabola `f(s) = (3/8)s² + (1-s)²/(2n-4)` bounding `Σ c_j²` from below,
/// where `s = c_2 + c_{n+1} + c_2n`.
#[derive(Debug, Clone, PartialEq)]
pub struct LowerBoundCurve<T> {
    pub n: usize,
    /// `4/(3n-2)`.
    pub vertex_s: T,
    /// `3/(2(3n-2))`.
    pub vertex_value: T,
}

impl<T: Scalar> LowerBoundCurve<T> {
    /// Only defined for `n >= 3`; at `n = 2` no totals remain besides 2, n+1 and 2n.
    pub fn new(n: usize) -> Result<Self> {
        let k = check_n(n, 3)?;
        Ok(LowerBoundCurve {
            n,
            vertex_s: T::from_ratio(4, 3 * k - 2),
            vertex_value: T::from_ratio(3, 2 * (3 * k - 2)),
        })
    }

    pub fn eval(&self, s: &T) -> T {
        let rest = T::one() - s.clone();
        T::from_ratio(3, 8) * s.clone() * s.clone()
            + rest.clone() * rest / T::from_int(2 * self.n as i64 - 4)
    }
}

pub fn lower_bound_f<T: Scalar>(n: usize, s: &T) -> Result<T> {
    Ok(LowerBoundCurve::<T>::new(n)?.eval(s))
}

/// The pattern numerically observed to minimize D for `m` dice. Not proven.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjecturedDice {
    pub n: usize,
    pub m: usize,
    /// One plateau die followed by `m - 1` point-mass dice.
    pub dice: Vec<Die<BigRational>>,
}

impl ConjecturedDice {
    pub fn status(&self) -> &'static str {
        CONJECTURE_STATUS
    }
}

impl Serialize for ConjecturedDice {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("ConjecturedDice", 4)?;
        st.serialize_field("status", CONJECTURE_STATUS)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("dice", &self.dice)?;
        st.end()
    }
}

/// First die: ends `m/den`, interior `(2m-1)/den` with `den = (n-2)(2m-1)+2m`;
/// remaining `m - 1` dice are `(1/2, 0, ..., 0, 1/2)`.
pub fn conjectured_m_dice(n: usize, m: usize) -> Result<ConjecturedDice> {
    let k = check_n(n, 2)?;
    if m < 2 {
        return Err(invalid(format!("m must be at least 2, got {m}")));
    }
    let mm = i64::try_from(m).map_err(|_| invalid("m too large"))?;
    let den = (k - 2) * (2 * mm - 1) + 2 * mm;
    let mut dice = Vec::with_capacity(m);
    dice.push(end_inner_die(n, mm, 2 * mm - 1, den)?);
    dice.extend(std::iter::repeat_with(|| point_mass_die(n)).take(m - 1));
    Ok(ConjecturedDice { n, m, dice })
}

const GASARCH_KRUSKAL_D6: [f64; 6] = [0.243883, 0.137480, 0.118637, 0.118637, 0.137480, 0.243883];

/// The symmetric die reported by an earlier numerical search as optimal for
/// two identical six-sided dice. It is not optimal: see [`optimal_pair`].
pub fn gasarch_kruskal_die(n: usize) -> Result<Die<f64>> {
    if n != 6 {
        return Err(DiceError::Unsupported(format!(
            "published weights exist only for n = 6, got n = {n}"
        )));
    }
    let total: f64 = GASARCH_KRUSKAL_D6.iter().sum();
    Die::probabilities(GASARCH_KRUSKAL_D6.iter().map(|w| w / total).collect())
}
