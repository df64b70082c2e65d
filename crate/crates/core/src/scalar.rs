//! Numeric back-ends for probabilities and values.
//!
//! Exact rationals where comparisons must not be disturbed by rounding,
//! `f64` where histories get long. Floats compare equal within
//! [`FLOAT_TOLERANCE`] (relative to magnitude, floored at one).

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Sub};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio, Rational64};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, ToPrimitive, Zero};

pub const FLOAT_TOLERANCE: f64 = 1e-12;

pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn from_rational(r: Rational64) -> Self;
    fn from_big(r: &BigRational) -> Self;
    fn as_f64(&self) -> f64;
    /// Equality for tie-breaking: exact for rationals, tolerant for floats.
    fn ties(&self, other: &Self) -> bool;

    /// Strictly greater, beyond a tie.
    fn beats(&self, other: &Self) -> bool {
        self > other && !self.ties(other)
    }
}

impl Scalar for f64 {
    fn from_rational(r: Rational64) -> Self {
        *r.numer() as f64 / *r.denom() as f64
    }

    fn from_big(r: &BigRational) -> Self {
        ToPrimitive::to_f64(r).unwrap_or(f64::NAN)
    }

    fn as_f64(&self) -> f64 {
        *self
    }

    fn ties(&self, other: &Self) -> bool {
        let scale = self.abs().max(other.abs()).max(1.0);
        (self - other).abs() <= FLOAT_TOLERANCE * scale
    }
}

impl Scalar for BigRational {
    fn from_rational(r: Rational64) -> Self {
        BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
    }

    fn from_big(r: &BigRational) -> Self {
        r.clone()
    }

    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn ties(&self, other: &Self) -> bool {
        self == other
    }
}

/// Exact rational with 128-bit parts: no allocation, for short histories
/// whose denominators stay small. Every operation panics on overflow
/// rather than wrap.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Exact128(pub Ratio<i128>);

impl Exact128 {
    pub fn new(numer: i128, denom: i128) -> Self {
        Self(Ratio::new(numer, denom))
    }
}

macro_rules! checked_op {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for Exact128 {
            type Output = Exact128;

            fn $method(self, rhs: Exact128) -> Exact128 {
                Exact128(self.0.$checked(&rhs.0).expect(concat!("Exact128 overflow in ", stringify!($method))))
            }
        }
    };
}

checked_op!(Add, add, checked_add);
checked_op!(Sub, sub, checked_sub);
checked_op!(Mul, mul, checked_mul);
checked_op!(Div, div, checked_div);

impl Zero for Exact128 {
    fn zero() -> Self {
        Self(Ratio::zero())
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for Exact128 {
    fn one() -> Self {
        Self(Ratio::one())
    }
}

impl Scalar for Exact128 {
    fn from_rational(r: Rational64) -> Self {
        Self::new(*r.numer() as i128, *r.denom() as i128)
    }

    fn from_big(r: &BigRational) -> Self {
        let part = |x: &BigInt| x.to_i128().expect("Exact128 overflow converting a rational");
        Self::new(part(r.numer()), part(r.denom()))
    }

    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(&self.0).unwrap_or(f64::NAN)
    }

    fn ties(&self, other: &Self) -> bool {
        self == other
    }
}

/// Parse `"3/4"`, `"1"` or `"0.25"` (decimals are converted exactly).
pub fn parse_rational(s: &str) -> Option<Rational64> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: i64 = n.trim().parse().ok()?;
        let d: i64 = d.trim().parse().ok()?;
        return (d != 0).then(|| Rational64::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.len() > 15 || !frac.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let denom = 10i64.pow(frac.len() as u32);
        let int: i64 = if int.is_empty() { 0 } else { int.parse().ok()? };
        let frac_val: i64 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
        return Some(Rational64::new(int * denom + frac_val, denom));
    }
    s.parse::<i64>().ok().map(Rational64::from_integer)
}

/// Serde helpers storing a [`Rational64`] as a `"n/d"` string.
pub mod serde_rational {
    use num_rational::Rational64;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational64, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rational(&s)
            .ok_or_else(|| serde::de::Error::custom(format!("not a rational number: {s:?}")))
    }
}
