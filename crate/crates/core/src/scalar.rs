//! Number fields the dice computations run over.
//!
//! A computation is generic over one [`Scalar`] type, so exact rational work
//! and `f64` work can never be mixed: there is no conversion between the two
//! except the explicit [`Scalar::to_f64`].

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

/// Arithmetic mode of a computation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Rational,
    Float,
}

impl Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Rational => f.write_str("rational"),
            Mode::Float => f.write_str("float"),
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "rational" => Ok(Mode::Rational),
            "float" => Ok(Mode::Float),
            other => Err(format!("unknown mode `{other}` (expected rational|float)")),
        }
    }
}

pub trait Scalar: Signed + Clone + PartialOrd + Debug + Display + Send + Sync + 'static {
    const MODE: Mode;

    fn from_ratio(num: i64, den: i64) -> Self;

    fn from_int(v: i64) -> Self {
        Self::from_ratio(v, 1)
    }

    fn to_f64(&self) -> f64;

    /// How far a weight vector's sum may drift from 1 and still count as valid.
    fn sum_tolerance() -> Self;

    /// JSON encoding: `{"num": "...", "den": "..."}` for rationals, a plain number for floats.
    fn to_json(&self) -> serde_json::Value;

    fn from_json(v: &serde_json::Value) -> Result<Self, String>;
}

impl Scalar for f64 {
    const MODE: Mode = Mode::Float;

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn sum_tolerance() -> Self {
        1e-12
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::Number::from_f64(*self)
            .map(serde_json::Value::Number)
            .unwrap_or(serde_json::Value::Null)
    }

    fn from_json(v: &serde_json::Value) -> Result<Self, String> {
        match v {
            serde_json::Value::Number(x) => x.as_f64().ok_or_else(|| format!("bad number {x}")),
            serde_json::Value::String(s) => s
                .trim()
                .parse::<f64>()
                .map_err(|e| format!("bad float `{s}`: {e}")),
            other => Err(format!("expected a number, got {other}")),
        }
    }
}

impl Scalar for BigRational {
    const MODE: Mode = Mode::Rational;

    fn from_ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn sum_tolerance() -> Self {
        Self::from_int(0)
    }

    fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "num": self.numer().to_string(),
            "den": self.denom().to_string(),
        })
    }

    fn from_json(v: &serde_json::Value) -> Result<Self, String> {
        match v {
            serde_json::Value::String(s) => parse_rational(s),
            serde_json::Value::Object(obj) => {
                let part = |key: &str| -> Result<BigInt, String> {
                    let raw = obj.get(key).ok_or_else(|| format!("missing `{key}`"))?;
                    let text = match raw {
                        serde_json::Value::String(s) => s.clone(),
                        serde_json::Value::Number(x) if x.is_i64() || x.is_u64() => x.to_string(),
                        other => return Err(format!("`{key}` must be an integer string, got {other}")),
                    };
                    text.trim()
                        .parse::<BigInt>()
                        .map_err(|e| format!("bad integer `{text}`: {e}"))
                };
                let den = part("den")?;
                if den == BigInt::from(0) {
                    return Err("zero denominator".into());
                }
                Ok(BigRational::new(part("num")?, den))
            }
            serde_json::Value::Number(x) if x.is_i64() => Ok(Self::from_int(x.as_i64().unwrap())),
            other => Err(format!(
                "expected a rational as \"num/den\" or {{\"num\",\"den\"}}, got {other}"
            )),
        }
    }
}

/// Parses `"p/q"` or `"p"` into a reduced rational.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|e| format!("bad numerator in `{s}`: {e}"))?;
    let den: BigInt = den.parse().map_err(|e| format!("bad denominator in `{s}`: {e}"))?;
    if den == BigInt::from(0) {
        return Err(format!("zero denominator in `{s}`"));
    }
    Ok(BigRational::new(num, den))
}

/// Shorthand for an exact `num/den`.
pub fn ratio(num: i64, den: i64) -> BigRational {
    <BigRational as Scalar>::from_ratio(num, den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rationals_are_reduced_with_positive_denominator() {
        let r = ratio(6, -8);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(4));
        let p = parse_rational("10/-4").unwrap();
        assert_eq!(p, ratio(-5, 2));
        assert_eq!(p.denom(), &BigInt::from(2));
    }

    #[test]
    fn rational_json_forms() {
        let r = ratio(1, 352);
        let v = r.to_json();
        assert_eq!(v["den"], "352");
        assert_eq!(BigRational::from_json(&v).unwrap(), r);
        assert_eq!(BigRational::from_json(&serde_json::json!("2/7")).unwrap(), ratio(2, 7));
        assert!(BigRational::from_json(&serde_json::json!("1/0")).is_err());
        assert!(BigRational::from_json(&serde_json::json!(0.5)).is_err());
    }

    #[test]
    fn mode_parses() {
        assert_eq!("float".parse::<Mode>().unwrap(), Mode::Float);
        assert!("double".parse::<Mode>().is_err());
    }
}
