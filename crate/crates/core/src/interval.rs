//! Rational-endpoint interval arithmetic with outward-rounded square roots.
//!
//! Sums, differences, products and quotients of rationals are exact, so the
//! only rounding in this crate happens inside [`Interval::sqrt`], which
//! widens outward by less than `10^-digits`. Every inequality decided through
//! these intervals is therefore rigorous: `hi < q` proves the enclosed value
//! is below `q`, and `lo > q` proves it is above.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, Zero};
use std::fmt;

use crate::error::{Error, Result};
use crate::rational::{rational_string, Rational};

/// Default ceiling for precision escalation, in sqrt digits.
pub const DEFAULT_PRECISION_CEILING: u32 = 4096;

#[derive(Clone, PartialEq, Eq)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
}

impl Interval {
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn point(q: Rational) -> Self {
        Interval {
            lo: q.clone(),
            hi: q,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::point(Rational::from_integer(BigInt::from(n)))
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn width(&self) -> Rational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, q: &Rational) -> bool {
        self.lo <= *q && *q <= self.hi
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// True when every enclosed value is strictly below `q`.
    pub fn strictly_below(&self, q: &Rational) -> bool {
        self.hi < *q
    }

    /// True when every enclosed value is strictly above `q`.
    pub fn strictly_above(&self, q: &Rational) -> bool {
        self.lo > *q
    }

    /// True when the two intervals are separated with `self` on the left.
    pub fn strictly_left_of(&self, other: &Interval) -> bool {
        self.hi < other.lo
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval::new(&self.lo + &other.lo, &self.hi + &other.hi)
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        Interval::new(&self.lo - &other.hi, &self.hi - &other.lo)
    }

    pub fn neg(&self) -> Interval {
        Interval::new(-&self.hi, -&self.lo)
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let products = [
            &self.lo * &other.lo,
            &self.lo * &other.hi,
            &self.hi * &other.lo,
            &self.hi * &other.hi,
        ];
        let lo = products.iter().min().unwrap().clone();
        let hi = products.iter().max().unwrap().clone();
        Interval::new(lo, hi)
    }

    /// Reciprocal; fails when the interval straddles or touches zero.
    pub fn recip(&self) -> Result<Interval> {
        if self.lo <= Rational::zero() && self.hi >= Rational::zero() {
            return Err(Error::domain("reciprocal of an interval containing zero"));
        }
        Ok(Interval::new(self.hi.recip(), self.lo.recip()))
    }

    pub fn div(&self, other: &Interval) -> Result<Interval> {
        Ok(self.mul(&other.recip()?))
    }

    pub fn add_rat(&self, q: &Rational) -> Interval {
        Interval::new(&self.lo + q, &self.hi + q)
    }

    pub fn scale(&self, q: &Rational) -> Interval {
        if q.is_negative() {
            Interval::new(&self.hi * q, &self.lo * q)
        } else {
            Interval::new(&self.lo * q, &self.hi * q)
        }
    }

    /// Outward enclosure of the square root.
    ///
    /// Exact when both endpoints are squares of rationals; otherwise each
    /// endpoint is rounded outward to `digits` decimal places. A slightly
    /// negative lower endpoint is clamped to zero so that enclosures of
    /// provably nonnegative quantities stay usable at low precision; the
    /// upper endpoint must be nonnegative.
    pub fn sqrt(&self, digits: u32) -> Result<Interval> {
        if self.hi.is_negative() {
            return Err(Error::domain("square root of a negative interval"));
        }
        let lo = if self.lo.is_negative() {
            Rational::zero()
        } else {
            sqrt_lower(&self.lo, digits)
        };
        let hi = sqrt_upper(&self.hi, digits);
        Ok(Interval::new(lo, hi))
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            rational_string(&self.lo),
            rational_string(&self.hi)
        )
    }
}

/// `sqrt(q)` as an exact rational when `q` is a perfect square.
fn exact_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let ns = q.numer().sqrt();
    let ds = q.denom().sqrt();
    if &(&ns * &ns) == q.numer() && &(&ds * &ds) == q.denom() {
        Some(Rational::new(ns, ds))
    } else {
        None
    }
}

fn pow10(digits: u32) -> BigInt {
    BigInt::from(10u32).pow(digits)
}

/// `10^-digits` as a rational.
pub fn pow10_neg(digits: u32) -> Rational {
    Rational::new(BigInt::one(), pow10(digits))
}

/// Largest multiple of `10^-digits` not exceeding `sqrt(q)`, for `q >= 0`.
fn sqrt_lower(q: &Rational, digits: u32) -> Rational {
    if let Some(exact) = exact_sqrt(q) {
        return exact;
    }
    let scale = pow10(digits);
    let scaled = q * Rational::from_integer(&scale * &scale);
    let floor = scaled.numer().div_floor(scaled.denom());
    Rational::new(floor.sqrt(), scale)
}

/// Smallest multiple of `10^-digits` not below `sqrt(q)`, for `q >= 0`.
fn sqrt_upper(q: &Rational, digits: u32) -> Rational {
    if let Some(exact) = exact_sqrt(q) {
        return exact;
    }
    let scale = pow10(digits);
    let scaled = q * Rational::from_integer(&scale * &scale);
    let floor = scaled.numer().div_floor(scaled.denom());
    Rational::new(floor.sqrt() + 1, scale)
}

/// Re-evaluates `eval` at growing sqrt precision until the result is narrower
/// than `10^-digits`, failing as indeterminate at the ceiling.
pub fn refine_to_width<F>(eval: F, digits: u32, ceiling: u32) -> Result<(Interval, u32)>
where
    F: Fn(u32) -> Result<Interval>,
{
    let target = pow10_neg(digits);
    let mut sqrt_digits = digits.saturating_add(10);
    loop {
        let iv = eval(sqrt_digits)?;
        if iv.width() < target {
            return Ok((iv, sqrt_digits));
        }
        if sqrt_digits >= ceiling {
            return Err(Error::indeterminate(format!(
                "interval width {} still above 10^-{digits} at the {ceiling}-digit ceiling",
                rational_string(&iv.width())
            )));
        }
        sqrt_digits = sqrt_digits.saturating_mul(2).min(ceiling);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RoundDir {
    Down,
    Up,
}

/// Decimal string of `q` with `digits` fractional places, rounded in the
/// given direction.
pub fn decimal_string(q: &Rational, digits: u32, dir: RoundDir) -> String {
    let scale = pow10(digits);
    let scaled = q * Rational::from_integer(scale.clone());
    let n = match dir {
        RoundDir::Down => scaled.numer().div_floor(scaled.denom()),
        RoundDir::Up => scaled.numer().div_ceil(scaled.denom()),
    };
    let negative = n.is_negative();
    let mut digits_str = n.abs().to_string();
    if digits == 0 {
        return format!("{}{}", if negative { "-" } else { "" }, digits_str);
    }
    let d = digits as usize;
    if digits_str.len() <= d {
        digits_str = format!("{}{}", "0".repeat(d + 1 - digits_str.len()), digits_str);
    }
    let split = digits_str.len() - d;
    format!(
        "{}{}.{}",
        if negative { "-" } else { "" },
        &digits_str[..split],
        &digits_str[split..]
    )
}
