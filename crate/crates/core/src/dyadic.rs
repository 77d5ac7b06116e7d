//! Dyadic rationals `numerator / 2^exponent`.
//!
//! Product-to-sum expansion only ever introduces halves, so this is the
//! smallest exact field-like domain the trigonometric algebra needs.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact value `numerator / 2^exponent`, kept canonical: when the exponent
/// is positive the numerator is odd, and zero is always `0 / 2^0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Dyadic {
    numerator: BigInt,
    exponent: u32,
}

impl Dyadic {
    pub fn new(numerator: BigInt, exponent: u32) -> Self {
        let mut d = Dyadic {
            numerator,
            exponent,
        };
        d.canonicalize();
        d
    }

    pub fn zero() -> Self {
        Dyadic::default()
    }

    pub fn one() -> Self {
        Dyadic::from_integer(BigInt::one())
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Dyadic {
            numerator: value.into(),
            exponent: 0,
        }
    }

    fn canonicalize(&mut self) {
        if self.numerator.is_zero() {
            self.exponent = 0;
            return;
        }
        if self.exponent == 0 {
            return;
        }
        let tz = self.numerator.trailing_zeros().unwrap_or(0);
        let shift = tz.min(u64::from(self.exponent)) as u32;
        if shift > 0 {
            self.numerator >>= shift as usize;
            self.exponent -= shift;
        }
    }

    pub fn numerator(&self) -> &BigInt {
        &self.numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.exponent == 0
    }

    pub fn is_positive(&self) -> bool {
        self.numerator.is_positive()
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_integer().then(|| self.numerator.clone())
    }

    /// Numerator rescaled to a larger common exponent.
    pub(crate) fn scaled_numerator(&self, exponent: u32) -> BigInt {
        debug_assert!(exponent >= self.exponent);
        &self.numerator << (exponent - self.exponent) as usize
    }

    pub fn half(&self) -> Self {
        Dyadic::new(self.numerator.clone(), self.exponent + 1)
    }

    pub fn to_f64(&self) -> f64 {
        let n = self.numerator.to_f64().unwrap_or(f64::NAN);
        n * (-(self.exponent as f64)).exp2()
    }

    /// True when the numerator is exactly representable in an f64 mantissa.
    pub fn fits_f64_mantissa(&self) -> bool {
        self.numerator.magnitude().bits() <= 53
    }
}

impl From<i64> for Dyadic {
    fn from(v: i64) -> Self {
        Dyadic::from_integer(v)
    }
}

impl From<BigInt> for Dyadic {
    fn from(v: BigInt) -> Self {
        Dyadic::from_integer(v)
    }
}

impl Add<&Dyadic> for &Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exponent.max(rhs.exponent);
        Dyadic::new(self.scaled_numerator(e) + rhs.scaled_numerator(e), e)
    }
}

impl Sub<&Dyadic> for &Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: &Dyadic) -> Dyadic {
        let e = self.exponent.max(rhs.exponent);
        Dyadic::new(self.scaled_numerator(e) - rhs.scaled_numerator(e), e)
    }
}

impl Mul<&Dyadic> for &Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: &Dyadic) -> Dyadic {
        Dyadic::new(
            &self.numerator * &rhs.numerator,
            self.exponent + rhs.exponent,
        )
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            numerator: -self.numerator,
            exponent: self.exponent,
        }
    }
}

impl Neg for &Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        -self.clone()
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exponent.max(other.exponent);
        self.scaled_numerator(e).cmp(&other.scaled_numerator(e))
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "{}", self.numerator)
        } else {
            write!(f, "{}/2^{}", self.numerator, self.exponent)
        }
    }
}

/// Serde adapter writing `Vec<BigInt>` as JSON integer literals of any length.
pub(crate) mod bigint_vec {
    use std::str::FromStr;

    use num_bigint::BigInt;
    use serde::{de::Error as _, Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(values: &[BigInt], serializer: S) -> Result<S::Ok, S::Error> {
        let numbers: Vec<serde_json::Number> = values
            .iter()
            .map(|v| serde_json::Number::from_str(&v.to_string()).expect("integer literal"))
            .collect();
        numbers.serialize(serializer)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        deserializer: D,
    ) -> Result<Vec<BigInt>, D::Error> {
        let numbers = Vec::<serde_json::Number>::deserialize(deserializer)?;
        numbers
            .iter()
            .map(|n| BigInt::from_str(&n.to_string()).map_err(D::Error::custom))
            .collect()
    }
}
