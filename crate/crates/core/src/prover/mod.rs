//! Adaptive bisection certifier for strict inequalities `lhs < rhs` over
//! compact boxes in one or two variables.
//!
//! A box is settled when the upper end of the left-hand enclosure lies
//! strictly below the lower end of the right-hand enclosure. Unsettled boxes
//! are retried at higher precision when they are already narrow, then split
//! along their widest side. Every settled box becomes a certificate leaf that
//! [`certificate_validate`] can re-check without running the search.

mod certificate;
mod region;
mod search;
mod validate;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

pub use certificate::{Certificate, FrontierBox, Leaf, Status, TailReductionRecord};
pub use region::Region;
pub use search::verify_strict;
pub(crate) use validate::check_partition;
pub use validate::{certificate_check, certificate_validate, Rejection};

use crate::expr::{parse_relation, EvalError, Expr, ParseError};
use crate::interval::{IntervalError, Scalar, DEFAULT_PRECISION};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProverError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("variable {0:?} is not bound by the domain")]
    FreeVariable(String),
    #[error("box {region} is not inside the statement domain {domain}")]
    OutsideDomain { region: String, domain: String },
    #[error("invalid prover configuration: {0}")]
    InvalidConfig(String),
    #[error("malformed certificate: {0}")]
    MalformedCertificate(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SplitPolicy {
    /// Split the widest side at its midpoint; ties go to the earlier variable.
    #[default]
    WidestMidpoint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProverConfig {
    pub start_precision: u32,
    pub escalation_factor: u32,
    pub max_precision: u32,
    pub max_depth: u32,
    pub leaf_budget: u64,
    pub split_policy: SplitPolicy,
}

impl Default for ProverConfig {
    fn default() -> Self {
        ProverConfig {
            start_precision: DEFAULT_PRECISION,
            escalation_factor: 2,
            max_precision: 512,
            max_depth: 60,
            leaf_budget: 1_000_000,
            split_policy: SplitPolicy::WidestMidpoint,
        }
    }
}

impl ProverConfig {
    pub fn validate(&self) -> Result<(), ProverError> {
        let bad = |msg: &str| Err(ProverError::InvalidConfig(msg.to_string()));
        if self.start_precision < 2 {
            return bad("start precision must be at least 2 bits");
        }
        if self.escalation_factor < 2 {
            return bad("escalation factor must be at least 2");
        }
        if self.max_precision < self.start_precision {
            return bad("max precision is below the start precision");
        }
        if self.max_depth < 1 {
            return bad("max depth must be at least 1");
        }
        if self.leaf_budget < 1 {
            return bad("leaf budget must be positive");
        }
        Ok(())
    }
}

/// `lhs < rhs` for every point of `domain`.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityStatement {
    pub lhs: Expr,
    pub rhs: Expr,
    pub domain: Region,
}

impl InequalityStatement {
    pub fn new(lhs: Expr, rhs: Expr, domain: Region) -> Result<Self, ProverError> {
        for var in lhs.free_vars().into_iter().chain(rhs.free_vars()) {
            if !domain.has_var(&var) {
                return Err(ProverError::FreeVariable(var));
            }
        }
        Ok(InequalityStatement { lhs, rhs, domain })
    }

    /// Parses `"lhs < rhs"` and attaches a domain.
    pub fn parse(text: &str, domain: Region) -> Result<Self, ProverError> {
        let (lhs, rhs) = parse_relation(text)?;
        Self::new(lhs, rhs, domain)
    }

    /// Canonical text, `"<lhs> < <rhs>"`.
    pub fn render(&self) -> String {
        format!("{} < {}", self.lhs, self.rhs)
    }

    pub fn hash(&self) -> String {
        statement_hash(&self.render())
    }

    pub fn with_domain(&self, domain: Region) -> Result<Self, ProverError> {
        Self::new(self.lhs.clone(), self.rhs.clone(), domain)
    }
}

pub(crate) fn statement_hash(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

#[derive(Debug, Clone, PartialEq)]
pub enum BoxOutcome {
    Proved { lhs_upper: Scalar, rhs_lower: Scalar },
    Unknown,
}

impl BoxOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, BoxOutcome::Proved { .. })
    }
}

/// Evaluates both sides once on `region` and compares the enclosures.
///
/// `Proved` means `upper(lhs) < lower(rhs)` with both enclosures computed at
/// `precision`; it is never returned when the inequality can fail on the box.
pub fn check_box(stmt: &InequalityStatement, region: &Region, precision: u32) -> Result<BoxOutcome, ProverError> {
    if !stmt.domain.contains(region) {
        return Err(ProverError::OutsideDomain { region: region.to_string(), domain: stmt.domain.to_string() });
    }
    let binding = region.binding();
    let lhs = stmt.lhs.eval_interval(&binding, precision)?;
    let rhs = stmt.rhs.eval_interval(&binding, precision)?;
    if lhs.hi() < rhs.lo() {
        let (_, lhs_upper) = lhs.into_bounds();
        let (rhs_lower, _) = rhs.into_bounds();
        Ok(BoxOutcome::Proved { lhs_upper, rhs_lower })
    } else {
        Ok(BoxOutcome::Unknown)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const T3: &str = "cosh(tanh(u)*arcosh(2*cosh(u))) < exp(u*tanh(u))";

    fn t3(lo: &str, hi: &str) -> InequalityStatement {
        InequalityStatement::parse(T3, Region::univariate("u", lo, hi).unwrap()).unwrap()
    }

    #[test]
    fn narrow_box_near_one_is_proved() {
        let stmt = t3("1", "1.01");
        assert!(check_box(&stmt, &stmt.domain, 64).unwrap().is_proved());
    }

    #[test]
    fn wide_box_near_one_is_unknown() {
        // sup lhs = lhs(1.1) ≈ 2.3544 exceeds inf rhs = rhs(1) ≈ 2.1417
        let stmt = t3("1", "1.1");
        assert_eq!(check_box(&stmt, &stmt.domain, 64).unwrap(), BoxOutcome::Unknown);
    }

    #[test]
    fn reflexive_statement_is_unknown() {
        let stmt = InequalityStatement::parse("u < u", Region::univariate("u", "0", "1").unwrap()).unwrap();
        assert_eq!(check_box(&stmt, &stmt.domain, 64).unwrap(), BoxOutcome::Unknown);
    }

    #[test]
    fn whole_compact_core_is_unknown_without_splitting() {
        let stmt = t3("0.3", "3");
        assert_eq!(check_box(&stmt, &stmt.domain, 64).unwrap(), BoxOutcome::Unknown);
    }

    #[test]
    fn box_outside_domain_is_rejected() {
        let stmt = t3("1", "2");
        let outside = Region::univariate("u", "0", "1").unwrap();
        assert!(matches!(check_box(&stmt, &outside, 64), Err(ProverError::OutsideDomain { .. })));
    }

    #[test]
    fn domain_violation_propagates() {
        let stmt = InequalityStatement::parse("ln(u) < u", Region::univariate("u", "-1", "1").unwrap()).unwrap();
        assert!(matches!(check_box(&stmt, &stmt.domain, 64), Err(ProverError::Eval(e)) if e.is_domain_violation()));
    }

    #[test]
    fn unbound_statement_variable() {
        let err = InequalityStatement::parse("x < y", Region::univariate("x", "0", "1").unwrap()).unwrap_err();
        assert_eq!(err, ProverError::FreeVariable("y".into()));
    }

    #[test]
    fn config_validation() {
        assert!(ProverConfig::default().validate().is_ok());
        let cfg = ProverConfig { max_depth: 0, ..ProverConfig::default() };
        assert!(cfg.validate().is_err());
        let cfg = ProverConfig { max_precision: 32, ..ProverConfig::default() };
        assert!(cfg.validate().is_err());
    }
}
