use serde::{Deserialize, Serialize};

use super::{InequalityStatement, ProverConfig, ProverError, Region};
use crate::interval::{Interval, Scalar};

/// A settled box together with the two bounds that separate the sides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Leaf {
    pub region: Region,
    pub lhs_upper: Scalar,
    pub rhs_lower: Scalar,
    pub depth: u32,
    pub precision: u32,
}

/// A box the search gave up on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontierBox {
    pub region: Region,
    pub depth: u32,
    pub precision: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "lowercase")]
pub enum Status {
    Proved,
    Undetermined { frontier: Vec<FrontierBox> },
}

/// An analytic reduction that extends a compact result to a boundary or
/// unbounded piece of the domain, by way of one finite hypothesis check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailReductionRecord {
    /// Reduction identifier, e.g. `near-zero` or `infinity`.
    pub name: String,
    /// The cut point the hypothesis is instantiated at; it appears in the
    /// hypothesis as its exact decimal expansion.
    pub parameter: Scalar,
    /// Threshold for reductions that bound a value from below.
    #[serde(default)]
    pub bound: Option<String>,
    /// Covered subdomain, `(covered_lo, covered_hi]` or `[covered_lo, ∞)`.
    pub covers: String,
    pub covered_lo: Scalar,
    /// `None` for an unbounded piece.
    pub covered_hi: Option<Scalar>,
    pub hypothesis: String,
    pub precision: u32,
    pub lhs_enclosure: Interval,
    pub rhs_enclosure: Interval,
    pub holds: bool,
    pub axioms: Vec<String>,
    pub conclusion: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub statement: String,
    pub statement_sha256: String,
    pub domain: Region,
    pub parameters: ProverConfig,
    pub status: Status,
    pub boxes_examined: u64,
    /// Sorted by [`Region::lex_cmp`].
    pub leaves: Vec<Leaf>,
    #[serde(default)]
    pub tail_reductions: Vec<TailReductionRecord>,
}

impl Certificate {
    pub fn is_proved(&self) -> bool {
        matches!(self.status, Status::Proved)
    }

    pub fn frontier(&self) -> &[FrontierBox] {
        match &self.status {
            Status::Proved => &[],
            Status::Undetermined { frontier } => frontier,
        }
    }

    /// Rebuilds the statement from the recorded text and domain.
    pub fn statement(&self) -> Result<InequalityStatement, ProverError> {
        InequalityStatement::parse(&self.statement, self.domain.clone())
    }
}
