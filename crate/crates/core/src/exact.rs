//! Exact success probabilities.
//!
//! Classical successes are counts over a uniform ensemble of `2^(2n+1)`
//! instances, so a `u64` ratio is always exact.

use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

pub type Fraction = Ratio<u64>;

pub fn to_f64(value: Fraction) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Serialized form of an exact ratio: `"num/den"` plus the nearest double.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExactValue {
    pub fraction: String,
    pub decimal: f64,
}

impl From<Fraction> for ExactValue {
    fn from(value: Fraction) -> Self {
        Self {
            fraction: format!("{}/{}", value.numer(), value.denom()),
            decimal: to_f64(value),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduced_on_construction() {
        let v = ExactValue::from(Fraction::new(24, 32));
        assert_eq!(v.fraction, "3/4");
        assert_eq!(v.decimal, 0.75);
    }

    #[test]
    fn integer_keeps_denominator() {
        assert_eq!(ExactValue::from(Fraction::from_integer(1)).fraction, "1/1");
    }
}
