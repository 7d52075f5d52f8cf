//! Outward-rounded interval arithmetic over MPFR floats.
//!
//! Every operation takes the working precision explicitly. Lower endpoints
//! are rounded toward −∞ and upper endpoints toward +∞, so the result always
//! contains the exact real image of the inputs. Nothing here touches global
//! rounding state; values are immutable and `Send + Sync`.

mod elementary;
mod scalar;

use std::cmp::Ordering;
use std::fmt;

use rug::float::Round;
use rug::ops::{AssignRound, Pow};
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use elementary::Elementary;
pub use scalar::Scalar;

/// Working precision used when a caller has no reason to pick another.
pub const DEFAULT_PRECISION: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Endpoint {
    Lower,
    Upper,
}

impl fmt::Display for Endpoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Endpoint::Lower => "lower",
            Endpoint::Upper => "upper",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum IntervalError {
    #[error("division by an interval containing zero: {divisor}")]
    DivisionByIntervalContainingZero { divisor: String },
    #[error("{function} is undefined at the {endpoint} endpoint {value} of {interval}")]
    DomainViolation { function: Elementary, endpoint: Endpoint, value: String, interval: String },
    #[error("{operation} left the representable exponent range")]
    OverflowRange { operation: String },
    #[error("cannot bisect the degenerate interval {0}")]
    DegenerateInterval(String),
    #[error("invalid decimal literal {0:?}")]
    InvalidLiteral(String),
    #[error("interval endpoints out of order: {lo} > {hi}")]
    InvertedEndpoints { lo: String, hi: String },
    #[error("scalar is not finite")]
    NonFinite,
    #[error("malformed hexadecimal scalar {0:?}")]
    MalformedHex(String),
}

/// A closed interval `[lo, hi]` with finite endpoints.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawInterval")]
pub struct Interval {
    lo: Scalar,
    hi: Scalar,
}

#[derive(Deserialize)]
struct RawInterval {
    lo: Scalar,
    hi: Scalar,
}

impl TryFrom<RawInterval> for Interval {
    type Error = IntervalError;

    fn try_from(raw: RawInterval) -> Result<Self, Self::Error> {
        Interval::new(raw.lo, raw.hi)
    }
}

pub(crate) fn rounded<T>(precision: u32, value: T, round: Round) -> Float
where
    Float: AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(precision, value, round).0
}

pub(crate) fn finite(operation: &str, value: Float) -> Result<Scalar, IntervalError> {
    Scalar::from_float(value).map_err(|_| IntervalError::OverflowRange { operation: operation.to_string() })
}

impl Interval {
    pub fn new(lo: Scalar, hi: Scalar) -> Result<Self, IntervalError> {
        if lo > hi {
            return Err(IntervalError::InvertedEndpoints { lo: lo.to_string(), hi: hi.to_string() });
        }
        Ok(Interval { lo, hi })
    }

    pub fn point(value: Scalar) -> Self {
        Interval { lo: value.clone(), hi: value }
    }

    pub fn from_i64(value: i64) -> Self {
        Interval::point(Scalar::from_i64(value, 64))
    }

    pub fn from_f64(value: f64) -> Self {
        Interval::point(Scalar::from_f64(value))
    }

    /// Encloses a decimal literal: exact when the literal is binary
    /// representable at `precision`, otherwise one ulp wide.
    pub fn from_decimal(text: &str, precision: u32) -> Result<Self, IntervalError> {
        let lo = Scalar::from_decimal(text, precision, Round::Down)?;
        let hi = Scalar::from_decimal(text, precision, Round::Up)?;
        Ok(Interval { lo, hi })
    }

    /// Hull of two decimal literals, each converted outward.
    pub fn from_decimal_bounds(lo: &str, hi: &str, precision: u32) -> Result<Self, IntervalError> {
        let lo = Scalar::from_decimal(lo, precision, Round::Down)?;
        let hi = Scalar::from_decimal(hi, precision, Round::Up)?;
        Interval::new(lo, hi)
    }

    pub fn lo(&self) -> &Scalar {
        &self.lo
    }

    pub fn hi(&self) -> &Scalar {
        &self.hi
    }

    pub fn into_bounds(self) -> (Scalar, Scalar) {
        (self.lo, self.hi)
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// `hi - lo`, rounded up.
    pub fn width(&self, precision: u32) -> Scalar {
        Scalar::from_float(rounded(precision, self.hi.as_float() - self.lo.as_float(), Round::Up))
            .expect("difference of finite scalars")
    }

    /// Exact width as a rational.
    pub fn width_exact(&self) -> Rational {
        self.hi.to_rational() - self.lo.to_rational()
    }

    pub fn contains_point(&self, x: &Scalar) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    pub fn contains_zero(&self) -> bool {
        *self.lo.as_float() <= 0 && *self.hi.as_float() >= 0
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn is_subset_of(&self, other: &Interval) -> bool {
        other.contains(self)
    }

    pub fn overlaps(&self, other: &Interval) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }

    pub fn hull(&self, other: &Interval) -> Interval {
        Interval { lo: self.lo.clone().min(other.lo.clone()), hi: self.hi.clone().max(other.hi.clone()) }
    }

    /// A point strictly inside a non-degenerate interval, as close to the
    /// midpoint as the endpoints' precision allows.
    pub fn split_point(&self) -> Result<Scalar, IntervalError> {
        if self.is_point() {
            return Err(IntervalError::DegenerateInterval(self.to_string()));
        }
        let precision = self.lo.precision_bits().max(self.hi.precision_bits());
        let mid = rounded(precision, self.lo.as_float() + self.hi.as_float(), Round::Nearest) / 2u32;
        if mid.is_finite() && self.lo.as_float() < &mid && &mid < self.hi.as_float() {
            return Ok(Scalar::from_float(mid).expect("finite midpoint"));
        }
        let exact = (self.lo.to_rational() + self.hi.to_rational()) / 2u32;
        let mut bits = precision + 1;
        loop {
            let mid = Scalar::from_rational(&exact, bits, Round::Nearest);
            if self.lo < mid && mid < self.hi {
                return Ok(mid);
            }
            bits += 1;
        }
    }

    /// Splits at [`Interval::split_point`]; the halves share that endpoint.
    pub fn bisect(&self) -> Result<(Interval, Interval), IntervalError> {
        let mid = self.split_point()?;
        Ok((Interval { lo: self.lo.clone(), hi: mid.clone() }, Interval { lo: mid, hi: self.hi.clone() }))
    }

    pub fn neg(&self) -> Interval {
        Interval {
            lo: Scalar::from_float(-self.hi.as_float().clone()).expect("finite"),
            hi: Scalar::from_float(-self.lo.as_float().clone()).expect("finite"),
        }
    }

    pub fn add(&self, other: &Interval, precision: u32) -> Result<Interval, IntervalError> {
        let lo = rounded(precision, self.lo.as_float() + other.lo.as_float(), Round::Down);
        let hi = rounded(precision, self.hi.as_float() + other.hi.as_float(), Round::Up);
        Ok(Interval { lo: finite("add", lo)?, hi: finite("add", hi)? })
    }

    pub fn sub(&self, other: &Interval, precision: u32) -> Result<Interval, IntervalError> {
        let lo = rounded(precision, self.lo.as_float() - other.hi.as_float(), Round::Down);
        let hi = rounded(precision, self.hi.as_float() - other.lo.as_float(), Round::Up);
        Ok(Interval { lo: finite("sub", lo)?, hi: finite("sub", hi)? })
    }

    pub fn mul(&self, other: &Interval, precision: u32) -> Result<Interval, IntervalError> {
        let pairs = [(&self.lo, &other.lo), (&self.lo, &other.hi), (&self.hi, &other.lo), (&self.hi, &other.hi)];
        let lo = pairs
            .iter()
            .map(|(a, b)| rounded(precision, a.as_float() * b.as_float(), Round::Down))
            .min_by(|a, b| a.total_cmp(b))
            .expect("four candidates");
        let hi = pairs
            .iter()
            .map(|(a, b)| rounded(precision, a.as_float() * b.as_float(), Round::Up))
            .max_by(|a, b| a.total_cmp(b))
            .expect("four candidates");
        Ok(Interval { lo: finite("mul", lo)?, hi: finite("mul", hi)? })
    }

    pub fn div(&self, other: &Interval, precision: u32) -> Result<Interval, IntervalError> {
        if other.contains_zero() {
            return Err(IntervalError::DivisionByIntervalContainingZero { divisor: other.to_string() });
        }
        let pairs = [(&self.lo, &other.lo), (&self.lo, &other.hi), (&self.hi, &other.lo), (&self.hi, &other.hi)];
        let lo = pairs
            .iter()
            .map(|(a, b)| rounded(precision, a.as_float() / b.as_float(), Round::Down))
            .min_by(|a, b| a.total_cmp(b))
            .expect("four candidates");
        let hi = pairs
            .iter()
            .map(|(a, b)| rounded(precision, a.as_float() / b.as_float(), Round::Up))
            .max_by(|a, b| a.total_cmp(b))
            .expect("four candidates");
        Ok(Interval { lo: finite("div", lo)?, hi: finite("div", hi)? })
    }

    /// Integer power. Negative exponents divide, so they reject intervals
    /// containing zero.
    pub fn powi(&self, exponent: i32, precision: u32) -> Result<Interval, IntervalError> {
        if exponent == 0 {
            return Ok(Interval::from_i64(1));
        }
        if exponent < 0 {
            let positive = self.powi(-exponent, precision)?;
            return Interval::from_i64(1).div(&positive, precision);
        }
        let pow = |x: &Scalar, round| rounded(precision, x.as_float().pow(exponent), round);
        let (lo, hi) = if exponent % 2 == 1 || !self.lo.is_sign_negative() {
            (pow(&self.lo, Round::Down), pow(&self.hi, Round::Up))
        } else if self.hi.is_sign_negative() {
            (pow(&self.hi, Round::Down), pow(&self.lo, Round::Up))
        } else {
            let far = self.lo.abs().max(self.hi.abs());
            (Float::new(precision), pow(&far, Round::Up))
        };
        Ok(Interval { lo: finite("pow", lo)?, hi: finite("pow", hi)? })
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo, self.hi)
    }
}
