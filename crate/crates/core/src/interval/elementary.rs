use std::fmt;

use rug::float::Round;
use rug::Float;
use serde::{Deserialize, Serialize};

use super::{finite, rounded, Endpoint, Interval, IntervalError, Scalar};

/// The function vocabulary understood by the expression grammar.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Elementary {
    Exp,
    Ln,
    Sqrt,
    Cosh,
    Sinh,
    Tanh,
    Arcosh,
    Artanh,
}

impl Elementary {
    pub const ALL: [Elementary; 8] = [
        Elementary::Exp,
        Elementary::Ln,
        Elementary::Sqrt,
        Elementary::Cosh,
        Elementary::Sinh,
        Elementary::Tanh,
        Elementary::Arcosh,
        Elementary::Artanh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Elementary::Exp => "exp",
            Elementary::Ln => "ln",
            Elementary::Sqrt => "sqrt",
            Elementary::Cosh => "cosh",
            Elementary::Sinh => "sinh",
            Elementary::Tanh => "tanh",
            Elementary::Arcosh => "arcosh",
            Elementary::Artanh => "artanh",
        }
    }

    pub fn from_name(name: &str) -> Option<Elementary> {
        Elementary::ALL.into_iter().find(|f| f.name() == name)
    }

    fn round_at(self, x: &Float, precision: u32, round: Round) -> Float {
        match self {
            Elementary::Exp => rounded(precision, x.exp_ref(), round),
            Elementary::Ln => rounded(precision, x.ln_ref(), round),
            Elementary::Sqrt => rounded(precision, x.sqrt_ref(), round),
            Elementary::Cosh => rounded(precision, x.cosh_ref(), round),
            Elementary::Sinh => rounded(precision, x.sinh_ref(), round),
            Elementary::Tanh => rounded(precision, x.tanh_ref(), round),
            Elementary::Arcosh => rounded(precision, x.acosh_ref(), round),
            Elementary::Artanh => rounded(precision, x.atanh_ref(), round),
        }
    }
}

impl fmt::Display for Elementary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Interval {
    /// Encloses `f(self)`.
    ///
    /// Every function but `cosh` is monotone increasing on its domain, so the
    /// endpoints map to endpoints. `cosh` is split at zero.
    pub fn apply(&self, f: Elementary, precision: u32) -> Result<Interval, IntervalError> {
        self.check_domain(f)?;
        let (lo, hi) = match f {
            Elementary::Cosh if !self.lo().is_sign_negative() => (self.lo(), self.hi()),
            Elementary::Cosh if !self.hi().is_sign_negative() && !self.hi().is_zero() => {
                let far = self.lo().abs().max(self.hi().abs());
                let hi = f.round_at(far.as_float(), precision, Round::Up);
                return Interval::new(Scalar::from_i64(1, precision), finite(f.name(), hi)?);
            }
            Elementary::Cosh => (self.hi(), self.lo()),
            _ => (self.lo(), self.hi()),
        };
        let lo = f.round_at(lo.as_float(), precision, Round::Down);
        let hi = f.round_at(hi.as_float(), precision, Round::Up);
        Interval::new(finite(f.name(), lo)?, finite(f.name(), hi)?)
    }

    fn check_domain(&self, f: Elementary) -> Result<(), IntervalError> {
        let violation = |endpoint| {
            let value = match endpoint {
                Endpoint::Lower => self.lo(),
                Endpoint::Upper => self.hi(),
            };
            Err(IntervalError::DomainViolation {
                function: f,
                endpoint,
                value: value.to_string(),
                interval: self.to_string(),
            })
        };
        let lo = self.lo().as_float();
        let hi = self.hi().as_float();
        match f {
            Elementary::Ln if *lo <= 0 => violation(Endpoint::Lower),
            Elementary::Sqrt if *lo < 0 => violation(Endpoint::Lower),
            Elementary::Arcosh if *lo < 1 => violation(Endpoint::Lower),
            Elementary::Artanh if *lo <= -1 => violation(Endpoint::Lower),
            Elementary::Artanh if *hi >= 1 => violation(Endpoint::Upper),
            _ => Ok(()),
        }
    }
}
