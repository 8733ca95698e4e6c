//! Scalar fields used throughout the crate.
//!
//! Every algorithm is written against [`Scalar`], an ordered field with a
//! textual form. The exact instances are `BigRational` (the crate default,
//! aliased as [`crate::Rat`]) and `Ratio<i64>`; `f64` and `f32` are provided
//! for plotting and quick experiments, where the structural equalities the
//! checks rely on are only approximate.

use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Num, Signed, ToPrimitive};

/// An ordered field with a round-trippable text encoding.
pub trait Scalar:
    Num + Signed + Clone + Debug + Display + PartialOrd + ToPrimitive + Send + Sync + 'static
{
    /// `num / den`; `den` must be nonzero.
    fn ratio(num: i64, den: i64) -> Self;

    /// Parse `"p/q"`, `"p"`, or (for floating types) a decimal literal.
    fn parse_text(s: &str) -> Option<Self>;

    /// Whether arithmetic in this type is exact.
    fn is_exact() -> bool;

    /// Greatest integer `<= self`; `None` if it does not fit in `i64`.
    fn floor_i64(&self) -> Option<i64>;

    fn int(n: i64) -> Self {
        Self::ratio(n, 1)
    }

    fn half() -> Self {
        Self::ratio(1, 2)
    }
}

impl Scalar for BigRational {
    fn ratio(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn parse_text(s: &str) -> Option<Self> {
        parse_fraction(s.trim())
    }

    fn is_exact() -> bool {
        true
    }

    fn floor_i64(&self) -> Option<i64> {
        self.floor().to_integer().to_i64()
    }
}

impl Scalar for Ratio<i64> {
    fn ratio(num: i64, den: i64) -> Self {
        Ratio::new(num, den)
    }

    fn parse_text(s: &str) -> Option<Self> {
        parse_fraction(s.trim())
    }

    fn is_exact() -> bool {
        true
    }

    fn floor_i64(&self) -> Option<i64> {
        Some(self.floor().to_integer())
    }
}

fn parse_fraction<I>(s: &str) -> Option<Ratio<I>>
where
    I: Clone + num_integer::Integer + std::str::FromStr,
{
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: I = num.parse().ok()?;
    let den: I = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Ratio::new(num, den))
}

macro_rules! float_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            fn ratio(num: i64, den: i64) -> Self {
                num as $t / den as $t
            }

            fn parse_text(s: &str) -> Option<Self> {
                let s = s.trim();
                match s.split_once('/') {
                    Some((n, d)) => {
                        let n: $t = n.trim().parse().ok()?;
                        let d: $t = d.trim().parse().ok()?;
                        (d != 0.0).then(|| n / d)
                    }
                    None => s.parse().ok(),
                }
            }

            fn is_exact() -> bool {
                false
            }

            fn floor_i64(&self) -> Option<i64> {
                let f = self.floor();
                (f.is_finite() && f.abs() < 9.0e18).then(|| f as i64)
            }
        }
    };
}

float_scalar!(f64);
float_scalar!(f32);

pub(crate) fn min_of<T: Scalar>(a: T, b: T) -> T {
    if b < a {
        b
    } else {
        a
    }
}

pub(crate) fn max_of<T: Scalar>(a: T, b: T) -> T {
    if b > a {
        b
    } else {
        a
    }
}

/// Convert between scalar types through `f64` unless both are exact, in
/// which case the textual form is used so no precision is lost.
pub fn convert<S: Scalar, T: Scalar>(x: &S) -> T {
    if S::is_exact() && T::is_exact() {
        T::parse_text(&x.to_string()).expect("exact scalars share the p/q text form")
    } else {
        let v = x.to_f64().unwrap_or(f64::NAN);
        T::parse_text(&format!("{v:e}")).unwrap_or_else(|| T::zero())
    }
}

/// Integer conversion used by the grid code.
pub(crate) fn from_usize<T: Scalar>(n: usize) -> T {
    T::int(i64::from_usize(n).expect("grid sizes fit in i64"))
}

/// Serde adapter writing a scalar as its `"p/q"` text.
pub mod text {
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    use super::Scalar;

    pub fn serialize<S: Serializer, T: Scalar>(v: &T, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>, T: Scalar>(d: D) -> Result<T, D::Error> {
        let s = String::deserialize(d)?;
        T::parse_text(&s).ok_or_else(|| D::Error::custom(format!("cannot parse {s:?} as a rational")))
    }
}
