use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{invalid, Result};
use crate::scalar::Scalar;

/// An `n`-sided die: `weights()[i - 1]` is the weight of side `i`.
///
/// Construction checks that the weights sum to 1 (exactly for rationals,
/// within 1e-12 for floats) and, unless `allow_negative` is set, that no
/// weight is negative.
#[derive(Debug, Clone, PartialEq)]
pub struct Die<T> {
    weights: Vec<T>,
    allow_negative: bool,
}

/// Outcome of [`validate_die`].
#[derive(Debug, Clone, PartialEq)]
pub struct ValidityReport<T> {
    pub sides: usize,
    pub sum: T,
    /// `sum - 1`.
    pub sum_deviation: T,
    /// 1-based sides carrying a negative weight; only filled when negatives are not allowed.
    pub negative_sides: Vec<usize>,
    pub sum_ok: bool,
}

impl<T> ValidityReport<T> {
    pub fn is_valid(&self) -> bool {
        self.sides >= 2 && self.sum_ok && self.negative_sides.is_empty()
    }
}

/// Checks a raw weight vector against the die invariants without building a [`Die`].
pub fn validate_die<T: Scalar>(weights: &[T], allow_negative: bool) -> ValidityReport<T> {
    let sum = weights.iter().fold(T::zero(), |acc, w| acc + w.clone());
    let sum_deviation = sum.clone() - T::one();
    let sum_ok = sum_deviation.abs() <= T::sum_tolerance();
    let negative_sides = if allow_negative {
        Vec::new()
    } else {
        weights
            .iter()
            .enumerate()
            .filter(|(_, w)| w.is_negative())
            .map(|(i, _)| i + 1)
            .collect()
    };
    ValidityReport {
        sides: weights.len(),
        sum,
        sum_deviation,
        negative_sides,
        sum_ok,
    }
}

impl<T: Scalar> Die<T> {
    pub fn new(weights: Vec<T>, allow_negative: bool) -> Result<Self> {
        let report = validate_die(&weights, allow_negative);
        if report.sides < 2 {
            return Err(invalid(format!("a die needs at least 2 sides, got {}", report.sides)));
        }
        if !report.sum_ok {
            return Err(invalid(format!("die weights sum to {}, not 1", report.sum)));
        }
        if !report.negative_sides.is_empty() {
            return Err(invalid(format!(
                "negative weight on side(s) {:?} of a die that forbids negatives",
                report.negative_sides
            )));
        }
        Ok(Die {
            weights,
            allow_negative,
        })
    }

    /// A nonnegative die.
    pub fn probabilities(weights: Vec<T>) -> Result<Self> {
        Self::new(weights, false)
    }

    /// The fair die with `n` sides.
    pub fn fair(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(invalid(format!("a die needs at least 2 sides, got {n}")));
        }
        Self::new(vec![T::from_ratio(1, n as i64); n], false)
    }

    pub fn n(&self) -> usize {
        self.weights.len()
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Weight of `side`, 1-based.
    pub fn weight(&self, side: usize) -> &T {
        &self.weights[side - 1]
    }

    pub fn allow_negative(&self) -> bool {
        self.allow_negative
    }

    pub fn validate(&self) -> ValidityReport<T> {
        validate_die(&self.weights, self.allow_negative)
    }

    pub fn to_f64(&self) -> Die<f64> {
        Die {
            weights: self.weights.iter().map(Scalar::to_f64).collect(),
            allow_negative: self.allow_negative,
        }
    }

    pub fn into_weights(self) -> Vec<T> {
        self.weights
    }
}

impl<T: Scalar> Serialize for Die<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("Die", 4)?;
        st.serialize_field("n", &self.n())?;
        st.serialize_field("mode", &T::MODE)?;
        st.serialize_field("allow_negative", &self.allow_negative)?;
        let weights: Vec<_> = self.weights.iter().map(Scalar::to_json).collect();
        st.serialize_field("weights", &weights)?;
        st.end()
    }
}
