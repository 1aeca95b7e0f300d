//! Closed rational intervals with outward-rounded square roots.

use std::ops::{Add, Mul, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::scalar::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rational,
    pub hi: Rational,
}

fn exact_root(x: &BigInt) -> Option<BigInt> {
    let r = x.sqrt();
    (&r * &r == *x).then_some(r)
}

impl Interval {
    pub fn point(r: Rational) -> Self {
        Interval { lo: r.clone(), hi: r }
    }

    pub fn int(n: i64) -> Self {
        Self::point(Rational::from_integer(n.into()))
    }

    /// Encloses `√r` in an interval of width at most `2^-bits`, or exactly
    /// when `r` is the square of a rational.
    pub fn sqrt(r: &Rational, bits: u32) -> Self {
        assert!(!r.is_negative(), "square root of a negative number");
        if let (Some(p), Some(q)) = (exact_root(r.numer()), exact_root(r.denom())) {
            return Self::point(Rational::new(p, q));
        }
        let scale = BigInt::one() << bits;
        let scaled = (r * Rational::from_integer(&scale * &scale)).floor().to_integer();
        let s = scaled.sqrt();
        Interval { lo: Rational::new(s.clone(), scale.clone()), hi: Rational::new(s + 1, scale) }
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// `None` when the divisor straddles zero.
    pub fn div(&self, other: &Interval) -> Option<Interval> {
        if other.contains_zero() {
            return None;
        }
        let inv = Interval { lo: other.hi.recip(), hi: other.lo.recip() };
        Some(self * &inv)
    }

    pub fn powi(&self, e: u32) -> Interval {
        (0..e).fold(Interval::int(1), |acc, _| &acc * self)
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }
}

impl Add for &Interval {
    type Output = Interval;
    fn add(self, o: &Interval) -> Interval {
        Interval { lo: &self.lo + &o.lo, hi: &self.hi + &o.hi }
    }
}

impl Sub for &Interval {
    type Output = Interval;
    fn sub(self, o: &Interval) -> Interval {
        Interval { lo: &self.lo - &o.hi, hi: &self.hi - &o.lo }
    }
}

impl Mul for &Interval {
    type Output = Interval;
    fn mul(self, o: &Interval) -> Interval {
        let p = [&self.lo * &o.lo, &self.lo * &o.hi, &self.hi * &o.lo, &self.hi * &o.hi];
        let lo = p.iter().min().unwrap().clone();
        let hi = p.iter().max().unwrap().clone();
        Interval { lo, hi }
    }
}

/// Decides `a < b`, or `None` if the intervals overlap.
pub fn decide_lt(a: &Interval, b: &Interval) -> Option<bool> {
    if a.hi < b.lo {
        Some(true)
    } else if a.lo >= b.hi {
        Some(false)
    } else {
        None
    }
}

/// Decides `a ≤ b`, or `None` if the intervals overlap.
pub fn decide_le(a: &Interval, b: &Interval) -> Option<bool> {
    if a.hi <= b.lo {
        Some(true)
    } else if a.lo > b.hi {
        Some(false)
    } else {
        None
    }
}
