//! Weight scalars.
//!
//! Every graph and solver in the crate is generic over [`Scalar`]. Exact
//! lanes (`i64`, `i128`, [`BigInt`], [`Rational`]) give exact `w²`
//! comparisons; the float lanes are approximate and exist for quick
//! experiments.

use std::fmt::Debug;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact arbitrary precision rational.
pub type Rational = BigRational;

pub trait Scalar: Clone + Debug + PartialOrd + Num + Send + Sync + 'static {
    /// Exact rational value, `None` for non-finite floats.
    fn to_rational(&self) -> Option<Rational>;

    /// Conversion from an exact rational. Integer lanes only accept
    /// integral values; float lanes round.
    fn from_rational(r: &Rational) -> Option<Self>;

    fn as_f64(&self) -> f64;

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }

    fn positive(&self) -> bool {
        *self > Self::zero()
    }
}

macro_rules! int_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            fn to_rational(&self) -> Option<Rational> {
                Some(Rational::from_integer(BigInt::from(*self)))
            }
            fn from_rational(r: &Rational) -> Option<Self> {
                if r.is_integer() { r.to_integer().to_string().parse().ok() } else { None }
            }
            fn as_f64(&self) -> f64 {
                *self as f64
            }
        }
    )*};
}
int_scalar!(i64, i128);

impl Scalar for BigInt {
    fn to_rational(&self) -> Option<Rational> {
        Some(Rational::from_integer(self.clone()))
    }
    fn from_rational(r: &Rational) -> Option<Self> {
        r.is_integer().then(|| r.to_integer())
    }
    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for Rational {
    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn from_rational(r: &Rational) -> Option<Self> {
        Some(r.clone())
    }
    fn as_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

macro_rules! float_scalar {
    ($($t:ty),*) => {$(
        impl Scalar for $t {
            fn to_rational(&self) -> Option<Rational> {
                Rational::from_float(*self)
            }
            fn from_rational(r: &Rational) -> Option<Self> {
                ToPrimitive::to_f64(r).map(|x| x as $t)
            }
            fn as_f64(&self) -> f64 {
                *self as f64
            }
        }
    )*};
}
float_scalar!(f32, f64);

/// Parses `p/q`, a plain integer, or a finite decimal such as `0.25`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse { line: 0, msg: format!("invalid rational `{s}`") };
    if let Some((num, den)) = s.split_once('/') {
        let num = BigInt::from_str(num.trim()).map_err(|_| bad())?;
        let den = BigInt::from_str(den.trim()).map_err(|_| bad())?;
        if den.is_zero() {
            return Err(Error::Parse { line: 0, msg: format!("zero denominator in `{s}`") });
        }
        return Ok(Rational::new(num, den));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = int.starts_with('-');
        let int_part = if int.is_empty() || int == "-" || int == "+" {
            BigInt::zero()
        } else {
            BigInt::from_str(int).map_err(|_| bad())?
        };
        let scale = BigInt::from(10u32).pow(frac.len() as u32);
        let frac_part = BigInt::from_str(frac).map_err(|_| bad())?;
        let mag = int_part.abs() * &scale + frac_part;
        let num = if negative { -mag } else { mag };
        return Ok(Rational::new(num, scale));
    }
    BigInt::from_str(s).map(Rational::from_integer).map_err(|_| bad())
}

/// Canonical `p/q` rendering, denominator always present.
pub fn format_rational(r: &Rational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Serde adapter storing rationals as `p/q` strings.
pub mod rational_serde {
    use super::{format_rational, parse_rational, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }

    pub mod option {
        use super::{format_rational, parse_rational, Rational};
        use serde::{Deserialize, Deserializer, Serializer};

        pub fn serialize<S: Serializer>(r: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match r {
                Some(r) => s.serialize_some(&format_rational(r)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            Option::<String>::deserialize(d)?.map(|s| parse_rational(&s).map_err(serde::de::Error::custom)).transpose()
        }
    }
}

/// `⌊log_base(value)⌋` for integers `value ≥ 1`, `base ≥ 2`.
pub fn floor_log(value: &BigInt, base: u32) -> usize {
    assert!(base >= 2 && value.is_positive());
    let base = BigInt::from(base);
    let mut power = BigInt::one();
    let mut exp = 0usize;
    loop {
        power *= &base;
        if &power > value {
            return exp;
        }
        exp += 1;
    }
}

/// Exact `⌊c · log_base(n)⌋` for a non-negative rational `c` and `n ≥ 1`.
///
/// With `c = p/q` this is `⌊⌊log_base(n^p)⌋ / q⌋`.
pub fn floor_scaled_log(c: &Rational, n: usize, base: u32) -> usize {
    assert!(!c.is_negative(), "negative log coefficient");
    if n <= 1 || c.is_zero() {
        return 0;
    }
    let p = c.numer().to_u32().expect("log coefficient numerator too large");
    let q = c.denom().to_usize().expect("log coefficient denominator too large");
    let np = BigInt::from(n).pow(p);
    Integer::div_floor(&floor_log(&np, base), &q)
}

/// Renders any scalar through its exact rational value when possible.
pub fn display_scalar<W: Scalar>(w: &W) -> String {
    match w.to_rational() {
        Some(r) => format_rational(&r),
        None => format!("{w:?}"),
    }
}

/// Sum of a weight sequence.
pub fn sum<W: Scalar, I: IntoIterator<Item = W>>(it: I) -> W {
    it.into_iter().fold(W::zero(), |acc, x| acc + x)
}
