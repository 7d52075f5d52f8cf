//! The shipped corpus: every statement as an item with a domain and a plan,
//! the analytic tail reductions, the axiom ledger, and the two half-line
//! compositions.
//!
//! Items live in `corpus/items.toml`, compiled into the crate.

mod axioms;
mod composite;
mod properties;
mod tails;

use rug::float::Round;
use serde::Deserialize;
use thiserror::Error;

pub use axioms::{axiom, axiom_ledger_check, Axiom, AxiomCheck, AXIOMS};
pub use composite::{
    check_composite, infimum_claim_full_line, verify_full_line, verify_three_full_line, Component, Composite,
    CompositeStatus, LedgerEntry,
};
pub use properties::{
    artanh_coefficients, artanh_series, ch_sampling, l1_sampling, l2_to_l1, limit_behavior_check, metamorphic_case,
    metamorphic_equivalence_check, LimitReport, LimitRow, PropertyReport,
};
pub use tails::{
    covered, infimum_infinity, infimum_near_zero, infimum_origin, margin, recheck_tail, verify_infinity_reduction,
    verify_near_zero_reduction, INFIMUM_INFINITY, INFIMUM_NEAR_ZERO, INFIMUM_ORIGIN, INFINITY, NEAR_ZERO,
};

use crate::certfile::Body;
use crate::expr::{EvalError, ParseError};
use crate::interval::{Interval, IntervalError, Scalar};
use crate::minimize::MinimizeError;
use crate::prover::{certificate_check, verify_strict, InequalityStatement, ProverConfig, ProverError, Region};

pub const L1_STATEMENT: &str = "tanh(x)*tanh(y) < tanh(x*tanh(y))";
pub const L2_STATEMENT: &str = "cosh(K*arcosh(x))*K*sqrt(x^2 - 1) < sinh(K*arcosh(x))*x";
pub const T1_STATEMENT: &str = "cosh(sqrt(1 - 1/t^2)*arcosh(2*t)) < exp(sqrt(1 - 1/t^2)*arcosh(t))";
pub const T2_STATEMENT: &str = "cosh(c*arcosh(2/sqrt(1 - c^2))) < exp(c*artanh(c))";
pub const T3_STATEMENT: &str = "cosh(tanh(u)*arcosh(2*cosh(u))) < exp(u*tanh(u))";
/// The ratio `f` of the two sides of the u form.
pub const RATIO: &str = "cosh(tanh(u)*arcosh(2*cosh(u)))/exp(u*tanh(u))";
/// The lower bound claimed for `f` on the closed half-line.
pub const INFIMUM_BOUND: &str = "0.972";

const ITEMS: &str = include_str!("../../corpus/items.toml");

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CorpusError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error(transparent)]
    Prover(#[from] ProverError),
    #[error(transparent)]
    Minimize(#[from] MinimizeError),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unknown corpus item {0:?}")]
    UnknownItem(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Plan {
    CertifyCompact,
    PropertyTest,
    Composite,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    L1Sampling,
    ArtanhSeries,
    L2ToL1,
    Metamorphic,
    ChSampling,
    LimitBehavior,
    AxiomLedger,
}

#[derive(Deserialize)]
struct CorpusFile {
    item: Vec<RawItem>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawItem {
    id: String,
    anchor: String,
    plan: Plan,
    statement: Option<String>,
    domain: Option<Vec<[String; 3]>>,
    #[serde(default)]
    properties: Vec<Property>,
    #[serde(default)]
    parts: Vec<String>,
    #[serde(default)]
    notes: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusItem {
    pub id: String,
    /// Where the statement comes from, in words.
    pub anchor: String,
    pub plan: Plan,
    /// Present for `certify-compact` items.
    pub statement: Option<InequalityStatement>,
    pub properties: Vec<Property>,
    /// Component names, for composites.
    pub parts: Vec<String>,
    pub notes: String,
}

impl CorpusItem {
    /// Every shipped item is expected to succeed: `proved` for certified and
    /// composite plans, `passes` for property plans.
    pub fn expected(&self) -> &'static str {
        match self.plan {
            Plan::PropertyTest => "passes",
            _ => "proved",
        }
    }
}

fn region(domain: &[[String; 3]]) -> Result<Region, ProverError> {
    match domain {
        [[v, lo, hi]] => Region::univariate(v, lo, hi),
        [[x, xl, xh], [y, yl, yh]] => Region::bivariate((x, xl, xh), (y, yl, yh)),
        _ => Err(ProverError::InvalidRegion(format!("{} variables", domain.len()))),
    }
}

/// The shipped items in file order.
pub fn builtin_items() -> Vec<CorpusItem> {
    let file: CorpusFile = toml::from_str(ITEMS).expect("embedded corpus is valid TOML");
    file.item
        .into_iter()
        .map(|raw| {
            let statement = match (&raw.statement, &raw.domain) {
                (Some(text), Some(domain)) => {
                    let domain = region(domain).expect("embedded domains are valid");
                    Some(InequalityStatement::parse(text, domain).expect("embedded statements parse"))
                }
                _ => None,
            };
            CorpusItem {
                id: raw.id,
                anchor: raw.anchor,
                plan: raw.plan,
                statement,
                properties: raw.properties,
                parts: raw.parts,
                notes: raw.notes,
            }
        })
        .collect()
}

pub fn item(id: &str) -> Result<CorpusItem, CorpusError> {
    builtin_items().into_iter().find(|i| i.id == id).ok_or_else(|| CorpusError::UnknownItem(id.to_string()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub prover: ProverConfig,
    pub seed: u64,
    /// Working precision of the sampling checks.
    pub precision: u32,
    /// Target width for the certified infimum.
    pub target_width: Scalar,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            prover: ProverConfig::default(),
            seed: 0,
            precision: 128,
            target_width: Scalar::from_decimal("1e-4", 64, Round::Down).expect("literal"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ItemStatus {
    Proved,
    Passed,
    Undetermined(String),
    Failed(String),
}

impl ItemStatus {
    pub fn is_success(&self) -> bool {
        matches!(self, ItemStatus::Proved | ItemStatus::Passed)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ItemOutcome {
    pub id: String,
    pub status: ItemStatus,
    /// One-line findings for the report.
    pub details: Vec<String>,
    /// Certificates produced, in order.
    pub artifacts: Vec<Body>,
    pub reports: Vec<PropertyReport>,
}

/// Runs one property check with the sample counts the corpus uses.
pub fn run_property(p: Property, opts: &RunOptions) -> Vec<PropertyReport> {
    let (seed, prec) = (opts.seed, opts.precision);
    match p {
        Property::L1Sampling => vec![l1_sampling(10_000, seed, prec)],
        Property::ArtanhSeries => vec![artanh_series(20, prec)],
        Property::L2ToL1 => vec![l2_to_l1(1_000, seed, prec)],
        Property::Metamorphic => vec![metamorphic_equivalence_check(1_000, prec, seed)],
        Property::ChSampling => vec![ch_sampling(10_000, seed, prec)],
        Property::LimitBehavior => vec![limit_behavior_check(prec).report],
        Property::AxiomLedger => axiom_ledger_check(10_000, seed, prec.max(192)),
    }
}

pub fn run_item(item: &CorpusItem, opts: &RunOptions) -> Result<ItemOutcome, CorpusError> {
    let mut outcome = ItemOutcome {
        id: item.id.clone(),
        status: ItemStatus::Passed,
        details: vec![],
        artifacts: vec![],
        reports: vec![],
    };
    match item.plan {
        Plan::Composite => {
            let composite = match item.id.as_str() {
                "T3-full" => verify_three_full_line(&opts.prover)?,
                "infimum-full" => infimum_claim_full_line(&opts.prover, &opts.target_width)?,
                other => return Err(CorpusError::UnknownItem(other.to_string())),
            };
            for c in &composite.components {
                let verdict = if c.proved { "proved" } else { "not proved" };
                outcome.details.push(format!("{} on {}: {verdict}", c.name, c.covers));
            }
            if let Some(inf) = composite.infimum() {
                outcome.details.push(format!("inf f on the compact part in {}", decimal_interval(&inf, 8)));
            }
            outcome.status = match &composite.status {
                CompositeStatus::Proved => ItemStatus::Proved,
                CompositeStatus::Undetermined { failing } => {
                    ItemStatus::Undetermined(format!("not proved: {}", failing.join(", ")))
                }
            };
            outcome.artifacts.push(Body::Composite(composite));
        }
        Plan::CertifyCompact => {
            let stmt = item.statement.as_ref().expect("certify-compact items carry a statement");
            let cert = verify_strict(stmt, &opts.prover)?;
            outcome.details.push(format!(
                "{} leaves, {} boxes examined on {}",
                cert.leaves.len(),
                cert.boxes_examined,
                stmt.domain
            ));
            outcome.status = if !cert.is_proved() {
                ItemStatus::Undetermined(format!("{} unresolved boxes", cert.frontier().len()))
            } else if let Err(e) = certificate_check(&cert, stmt) {
                ItemStatus::Failed(format!("certificate does not validate: {e}"))
            } else {
                ItemStatus::Proved
            };
            outcome.artifacts.push(Body::Bisection(cert));
        }
        Plan::PropertyTest => {}
    }
    for &p in &item.properties {
        outcome.reports.extend(run_property(p, opts));
    }
    for r in &outcome.reports {
        outcome.details.push(r.summary());
    }
    if let Some(bad) = outcome.reports.iter().find(|r| !r.passed()) {
        if outcome.status.is_success() {
            outcome.status = ItemStatus::Failed(format!("{} failed", bad.name));
        }
    }
    Ok(outcome)
}

/// `[lo, hi]` with `lo` rounded down and `hi` rounded up.
pub fn decimal_interval(iv: &Interval, digits: u32) -> String {
    format!("[{}, {}]", iv.lo().to_decimal(digits, Round::Down), iv.hi().to_decimal(digits, Round::Up))
}
