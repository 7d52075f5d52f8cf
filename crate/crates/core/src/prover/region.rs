use std::cmp::Ordering;
use std::fmt;

use rug::Rational;
use serde::{Deserialize, Serialize};

use super::ProverError;
use crate::expr::Binding;
use crate::interval::{Interval, DEFAULT_PRECISION};

/// An axis-aligned box: an ordered list of named intervals, one or two long.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<NamedInterval>", into = "Vec<NamedInterval>")]
pub struct Region {
    vars: Vec<(String, Interval)>,
}

#[derive(Serialize, Deserialize)]
struct NamedInterval {
    var: String,
    #[serde(flatten)]
    interval: Interval,
}

impl TryFrom<Vec<NamedInterval>> for Region {
    type Error = ProverError;

    fn try_from(vars: Vec<NamedInterval>) -> Result<Self, Self::Error> {
        Region::new(vars.into_iter().map(|v| (v.var, v.interval)).collect())
    }
}

impl From<Region> for Vec<NamedInterval> {
    fn from(region: Region) -> Self {
        region.vars.into_iter().map(|(var, interval)| NamedInterval { var, interval }).collect()
    }
}

impl Region {
    pub fn new(vars: Vec<(String, Interval)>) -> Result<Self, ProverError> {
        if vars.is_empty() || vars.len() > 2 {
            return Err(ProverError::InvalidRegion(format!("expected 1 or 2 variables, got {}", vars.len())));
        }
        if vars.len() == 2 && vars[0].0 == vars[1].0 {
            return Err(ProverError::InvalidRegion(format!("variable {:?} repeated", vars[0].0)));
        }
        Ok(Region { vars })
    }

    /// One variable over the outward hull of two decimal literals.
    pub fn univariate(var: &str, lo: &str, hi: &str) -> Result<Self, ProverError> {
        let interval = Interval::from_decimal_bounds(lo, hi, DEFAULT_PRECISION)?;
        Region::new(vec![(var.to_string(), interval)])
    }

    pub fn bivariate(x: (&str, &str, &str), y: (&str, &str, &str)) -> Result<Self, ProverError> {
        Region::new(vec![
            (x.0.to_string(), Interval::from_decimal_bounds(x.1, x.2, DEFAULT_PRECISION)?),
            (y.0.to_string(), Interval::from_decimal_bounds(y.1, y.2, DEFAULT_PRECISION)?),
        ])
    }

    pub fn vars(&self) -> &[(String, Interval)] {
        &self.vars
    }

    pub fn dims(&self) -> usize {
        self.vars.len()
    }

    pub fn has_var(&self, name: &str) -> bool {
        self.vars.iter().any(|(v, _)| v == name)
    }

    pub fn interval(&self, name: &str) -> Option<&Interval> {
        self.vars.iter().find(|(v, _)| v == name).map(|(_, iv)| iv)
    }

    pub fn binding(&self) -> Binding {
        self.vars.iter().cloned().collect()
    }

    /// Same variables, in the same order, each interval nested.
    pub fn contains(&self, other: &Region) -> bool {
        self.vars.len() == other.vars.len()
            && self.vars.iter().zip(&other.vars).all(|((a, x), (b, y))| a == b && x.contains(y))
    }

    pub fn same_variables(&self, other: &Region) -> bool {
        self.vars.len() == other.vars.len() && self.vars.iter().zip(&other.vars).all(|((a, _), (b, _))| a == b)
    }

    /// Index of the widest side; the first one wins ties.
    pub fn widest(&self) -> usize {
        let mut best = 0;
        let mut best_width = self.vars[0].1.width_exact();
        for (i, (_, iv)) in self.vars.iter().enumerate().skip(1) {
            let w = iv.width_exact();
            if w > best_width {
                best = i;
                best_width = w;
            }
        }
        best
    }

    pub fn max_width(&self) -> Rational {
        self.vars[self.widest()].1.width_exact()
    }

    pub fn volume(&self) -> Rational {
        self.vars.iter().fold(Rational::from(1), |acc, (_, iv)| acc * iv.width_exact())
    }

    /// Bisects the widest side.
    pub fn split(&self) -> Result<(Region, Region), ProverError> {
        let axis = self.widest();
        let (a, b) = self.vars[axis].1.bisect()?;
        let mut left = self.clone();
        let mut right = self.clone();
        left.vars[axis].1 = a;
        right.vars[axis].1 = b;
        Ok((left, right))
    }

    /// Lexicographic order on the lower corners, then the upper corners.
    pub fn lex_cmp(&self, other: &Region) -> Ordering {
        self.vars
            .iter()
            .zip(&other.vars)
            .map(|((_, x), (_, y))| x.lo().cmp(y.lo()))
            .chain(self.vars.iter().zip(&other.vars).map(|((_, x), (_, y))| x.hi().cmp(y.hi())))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (name, iv)) in self.vars.iter().enumerate() {
            if i > 0 {
                f.write_str(" × ")?;
            }
            write!(f, "{name} ∈ {iv}")?;
        }
        Ok(())
    }
}
