//! Sum distributions of several dice and their distance from uniform.

use std::fmt::Write as _;

use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::die::Die;
use crate::error::{invalid, Result};
use crate::scalar::Scalar;

/// Product of two polynomials given by ascending coefficient vectors.
///
/// This is the one convolution routine in the crate: dice sums and
/// generating-polynomial expansion both go through it.
pub fn poly_mul<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![T::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (k, y) in b.iter().enumerate() {
            out[i + k] = out[i + k].clone() + x.clone() * y.clone();
        }
    }
    out
}

/// Probabilities `c_j` of each total `j = m..=m*n` when `m` dice are rolled.
///
/// Stored 0-based (`c[j - m]`); every accessor takes or reports the total `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SumDistribution<T> {
    m: usize,
    n: usize,
    c: Vec<T>,
    uniform_value: T,
}

impl<T: Scalar> SumDistribution<T> {
    /// Wraps a raw `c` vector; its length must be `m(n-1)+1`.
    pub fn from_parts(m: usize, n: usize, c: Vec<T>) -> Result<Self> {
        if m == 0 || n < 2 {
            return Err(invalid(format!("need m >= 1 and n >= 2, got m = {m}, n = {n}")));
        }
        let len = support_size(m, n);
        if c.len() != len {
            return Err(invalid(format!("expected {len} sums for m = {m}, n = {n}, got {}", c.len())));
        }
        Ok(SumDistribution {
            m,
            n,
            c,
            uniform_value: T::from_ratio(1, len as i64),
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn min_sum(&self) -> usize {
        self.m
    }

    pub fn max_sum(&self) -> usize {
        self.m * self.n
    }

    /// `1 / (m(n-1)+1)`.
    pub fn uniform_value(&self) -> &T {
        &self.uniform_value
    }

    /// `c_j` for total `j`; `None` outside `m..=m*n`.
    pub fn get(&self, j: usize) -> Option<&T> {
        j.checked_sub(self.m).and_then(|k| self.c.get(k))
    }

    pub fn values(&self) -> &[T] {
        &self.c
    }

    /// `(j, c_j)` pairs in increasing `j`.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &T)> + '_ {
        self.c.iter().enumerate().map(move |(k, v)| (k + self.m, v))
    }

    pub fn total(&self) -> T {
        self.c.iter().fold(T::zero(), |acc, v| acc + v.clone())
    }

    /// `Σ_j (c_j - 1/(m(n-1)+1))²`.
    pub fn distance_to_uniform(&self) -> T {
        self.c.iter().fold(T::zero(), |acc, v| {
            let e = v.clone() - self.uniform_value.clone();
            acc + e.clone() * e
        })
    }

    /// `Σ_j c_j²`. Equals `distance_to_uniform() + uniform_value()` whenever the entries sum to 1.
    pub fn sum_of_squares(&self) -> T {
        self.c
            .iter()
            .fold(T::zero(), |acc, v| acc + v.clone() * v.clone())
    }

    /// `max_j |c_j - 1/(m(n-1)+1)|`.
    pub fn max_uniform_error(&self) -> f64 {
        self.c
            .iter()
            .map(|v| (v.clone() - self.uniform_value.clone()).abs().to_f64())
            .fold(0.0, f64::max)
    }

    pub fn to_f64(&self) -> SumDistribution<f64> {
        SumDistribution {
            m: self.m,
            n: self.n,
            c: self.c.iter().map(Scalar::to_f64).collect(),
            uniform_value: self.uniform_value.to_f64(),
        }
    }

    /// `j,c_j` table, one row per total. Values are written as decimals so the
    /// file plots directly; the JSON form keeps exact rationals.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,c_j\n");
        for (j, v) in self.iter() {
            let _ = writeln!(out, "{j},{}", v.to_f64());
        }
        out
    }
}

impl<T: Scalar> Serialize for SumDistribution<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("SumDistribution", 7)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("mode", &T::MODE)?;
        st.serialize_field("min_sum", &self.min_sum())?;
        st.serialize_field("max_sum", &self.max_sum())?;
        st.serialize_field("uniform_value", &self.uniform_value.to_json())?;
        let c: Vec<_> = self.c.iter().map(Scalar::to_json).collect();
        st.serialize_field("c", &c)?;
        st.end()
    }
}

/// Number of distinct totals for `m` dice with `n` sides.
pub fn support_size(m: usize, n: usize) -> usize {
    m * (n - 1) + 1
}

/// Distribution of the total of `dice`, by iterated pairwise convolution.
pub fn convolve<T: Scalar>(dice: &[Die<T>]) -> Result<SumDistribution<T>> {
    let (first, rest) = dice
        .split_first()
        .ok_or_else(|| invalid("cannot convolve an empty list of dice"))?;
    let n = first.n();
    if let Some(bad) = rest.iter().find(|d| d.n() != n) {
        return Err(invalid(format!(
            "all dice must share one side count: found {n} and {}",
            bad.n()
        )));
    }
    let c = rest
        .iter()
        .fold(first.weights().to_vec(), |acc, d| poly_mul(&acc, d.weights()));
    SumDistribution::from_parts(dice.len(), n, c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::ratio;
    use num_rational::BigRational;

    fn die(w: &[(i64, i64)]) -> Die<BigRational> {
        Die::probabilities(w.iter().map(|&(a, b)| ratio(a, b)).collect()).unwrap()
    }

    #[test]
    fn point_masses_on_side_one() {
        let d = Die::probabilities(vec![1.0, 0.0, 0.0, 0.0]).unwrap();
        let dist = convolve(&[d.clone(), d]).unwrap();
        assert_eq!(dist.get(2), Some(&1.0));
        assert!(dist.iter().filter(|(j, _)| *j != 2).all(|(_, v)| *v == 0.0));
        assert_eq!(dist.values().len(), 7);
    }

    #[test]
    fn two_fair_d6_roll_three_in_two_ways() {
        let d = Die::<BigRational>::fair(6).unwrap();
        let dist = convolve(&[d.clone(), d]).unwrap();
        assert_eq!(dist.get(3), Some(&ratio(2, 36)));
        assert_eq!(dist.get(7), Some(&ratio(6, 36)));
        assert_eq!(dist.get(1), None);
        assert_eq!(dist.get(13), None);
    }

    #[test]
    fn hand_convolution_of_the_n3_pair() {
        let a = die(&[(1, 2), (0, 1), (1, 2)]);
        let b = die(&[(2, 7), (3, 7), (2, 7)]);
        let dist = convolve(&[a, b]).unwrap();
        let expected = [ratio(1, 7), ratio(3, 14), ratio(2, 7), ratio(3, 14), ratio(1, 7)];
        assert_eq!(dist.values(), &expected);
        assert_eq!(dist.distance_to_uniform(), ratio(1, 70));
        assert_eq!(dist.sum_of_squares(), ratio(3, 14));
    }

    #[test]
    fn two_fair_coins() {
        let c = Die::<BigRational>::fair(2).unwrap();
        let dist = convolve(&[c.clone(), c]).unwrap();
        assert_eq!(dist.values(), &[ratio(1, 4), ratio(1, 2), ratio(1, 4)]);
        assert_eq!(dist.distance_to_uniform(), ratio(1, 24));
    }

    #[test]
    fn uniform_distribution_has_zero_distance() {
        for n in 2..8usize {
            let len = support_size(2, n);
            let dist =
                SumDistribution::from_parts(2, n, vec![ratio(1, len as i64); len]).unwrap();
            assert_eq!(dist.distance_to_uniform(), ratio(0, 1));
            assert_eq!(dist.sum_of_squares(), ratio(1, 2 * n as i64 - 1));
        }
    }

    #[test]
    fn single_die_distribution_is_its_weights() {
        let d = die(&[(1, 3), (1, 6), (1, 2)]);
        let dist = convolve(std::slice::from_ref(&d)).unwrap();
        assert_eq!(dist.values(), d.weights());
        assert_eq!(dist.min_sum(), 1);
    }

    #[test]
    fn rejects_empty_and_mismatched() {
        assert!(convolve::<f64>(&[]).is_err());
        let a = Die::<f64>::fair(3).unwrap();
        let b = Die::<f64>::fair(4).unwrap();
        assert!(convolve(&[a, b]).is_err());
    }

    #[test]
    fn csv_lists_every_total() {
        let c = Die::<BigRational>::fair(2).unwrap();
        let csv = convolve(&[c.clone(), c]).unwrap().to_csv();
        assert_eq!(csv, "j,c_j\n2,0.25\n3,0.5\n4,0.25\n");
    }
}
