use std::cmp::Ordering;
use std::fmt;

use rug::float::Round;
use rug::ops::{AssignRound, DivRounding};
use rug::{Float, Integer, Rational};
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use super::IntervalError;

/// A finite multiprecision binary float.
///
/// The precision travels with the value; arithmetic results are rounded to
/// the precision requested by the caller, not to the precision of the inputs.
#[derive(Clone)]
pub struct Scalar(Float);

impl Scalar {
    /// Wraps a finite [`Float`]. Infinities and NaN are rejected.
    pub fn from_float(value: Float) -> Result<Self, IntervalError> {
        if value.is_finite() {
            Ok(Scalar(value))
        } else {
            Err(IntervalError::NonFinite)
        }
    }

    pub fn zero(precision: u32) -> Self {
        Scalar(Float::new(precision))
    }

    pub fn from_i64(value: i64, precision: u32) -> Self {
        let bits = 64u32.max(precision);
        Scalar(Float::with_val(bits, value))
    }

    /// Exact conversion; panics on non-finite input.
    pub fn from_f64(value: f64) -> Self {
        assert!(value.is_finite(), "Scalar::from_f64 requires a finite value");
        Scalar(Float::with_val(53, value))
    }

    /// Rounds a decimal literal to `precision` bits in the given direction.
    pub fn from_decimal(text: &str, precision: u32, round: Round) -> Result<Self, IntervalError> {
        let parsed = Float::parse(text).map_err(|_| IntervalError::InvalidLiteral(text.to_string()))?;
        let (value, _) = Float::with_val_round(precision, parsed, round);
        Self::from_float(value).map_err(|_| IntervalError::InvalidLiteral(text.to_string()))
    }

    pub fn from_rational(value: &Rational, precision: u32, round: Round) -> Self {
        let (value, _) = Float::with_val_round(precision, value, round);
        Scalar(value)
    }

    pub fn as_float(&self) -> &Float {
        &self.0
    }

    pub fn into_float(self) -> Float {
        self.0
    }

    pub fn precision_bits(&self) -> u32 {
        self.0.prec()
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    pub fn to_rational(&self) -> Rational {
        self.0.to_rational().expect("scalars are finite")
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_sign_negative(&self) -> bool {
        self.0.is_sign_negative() && !self.0.is_zero()
    }

    pub fn abs(&self) -> Scalar {
        Scalar(self.0.clone().abs())
    }

    /// Re-rounds to `precision` bits in the given direction.
    pub fn round_to(&self, precision: u32, round: Round) -> Scalar {
        let mut out = Float::new(precision);
        out.assign_round(&self.0, round);
        Scalar(out)
    }

    /// Exact C99-style hexadecimal rendering, e.g. `-0x1.8p+1`.
    ///
    /// Every digit of the significand is written, so [`Scalar::from_hex`]
    /// recovers the value bit for bit.
    pub fn to_hex(&self) -> String {
        if self.0.is_zero() {
            return if self.0.is_sign_negative() { "-0x0p+0".into() } else { "0x0p+0".into() };
        }
        let (mantissa, exp) = self.0.to_integer_exp().expect("scalars are finite");
        let negative = mantissa < 0;
        let mut mantissa = mantissa.abs();
        let mut exp = i64::from(exp);
        // Strip trailing zero bits so the rendering is canonical.
        let trailing = mantissa.find_one(0).unwrap_or(0);
        mantissa >>= trailing;
        exp += i64::from(trailing);

        let bits = mantissa.significant_bits();
        let frac_bits = bits - 1;
        let exponent = exp + i64::from(frac_bits);
        let fraction = mantissa - (Integer::from(1) << frac_bits);
        let pad = (4 - frac_bits % 4) % 4;
        let digits = (frac_bits + pad) / 4;
        let sign = if negative { "-" } else { "" };
        if digits == 0 {
            format!("{sign}0x1p{exponent:+}")
        } else {
            let frac = (fraction << pad).to_string_radix(16);
            format!("{sign}0x1.{frac:0>width$}p{exponent:+}", width = digits as usize)
        }
    }

    /// Parses the rendering produced by [`Scalar::to_hex`].
    ///
    /// The result carries at least `min_precision` bits, more if the literal
    /// needs them to be exact.
    pub fn from_hex(text: &str, min_precision: u32) -> Result<Self, IntervalError> {
        let bad = || IntervalError::MalformedHex(text.to_string());
        let (negative, rest) = match text.strip_prefix('-') {
            Some(rest) => (true, rest),
            None => (false, text),
        };
        let rest = rest.strip_prefix("0x").ok_or_else(bad)?;
        let (significand, exponent) = rest.split_once('p').ok_or_else(bad)?;
        let exponent: i64 = exponent.parse().map_err(|_| bad())?;
        let (int_part, frac_part) = significand.split_once('.').unwrap_or((significand, ""));
        if !matches!(int_part, "0" | "1") || !frac_part.chars().all(|c| c.is_ascii_hexdigit()) {
            return Err(bad());
        }
        let digits = format!("{int_part}{frac_part}");
        let mut mantissa = Integer::from_str_radix(&digits, 16).map_err(|_| bad())?;
        if negative {
            mantissa = -mantissa;
        }
        let shift = exponent - 4 * frac_part.len() as i64;
        let shift = i32::try_from(shift).map_err(|_| bad())?;
        let precision = min_precision.max(mantissa.significant_bits()).max(1);
        let value = Float::with_val(precision, mantissa) << shift;
        Self::from_float(value)
    }

    /// The exact decimal expansion, without trailing zeros. Every binary
    /// float has a finite one.
    pub fn to_exact_decimal(&self) -> String {
        let den = self.to_rational().into_numer_denom().1;
        let digits = den.find_one(0).unwrap_or(0);
        let text = self.to_decimal(digits, Round::Nearest);
        if text.contains('.') {
            text.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            text
        }
    }

    /// Decimal rendering with a fixed number of fractional digits, rounded in
    /// the given direction (`Down` is floor, `Up` is ceiling, anything else
    /// rounds to nearest).
    pub fn to_decimal(&self, frac_digits: u32, round: Round) -> String {
        let scaled = self.to_rational() * Rational::from(Integer::from(Integer::u_pow_u(10, frac_digits)));
        let (num, den) = scaled.into_numer_denom();
        let q = match round {
            Round::Down => num.div_floor(den),
            Round::Up => num.div_ceil(den),
            _ => num.div_rem_round(den).0,
        };
        let negative = q < 0;
        let digits = q.abs().to_string();
        let width = frac_digits as usize + 1;
        let digits = format!("{digits:0>width$}");
        let (int_part, frac_part) = digits.split_at(digits.len() - frac_digits as usize);
        let sign = if negative { "-" } else { "" };
        if frac_digits == 0 {
            format!("{sign}{int_part}")
        } else {
            format!("{sign}{int_part}.{frac_part}")
        }
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

impl Eq for Scalar {}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.partial_cmp(&other.0).expect("scalars are finite")
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let text = String::deserialize(deserializer)?;
        Scalar::from_hex(&text, super::DEFAULT_PRECISION).map_err(de::Error::custom)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_hex())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}
