//! Certificate re-checking.
//!
//! Nothing here depends on the search: the validator re-evaluates each leaf
//! at its recorded precision and checks the covering property from the leaf
//! list alone.

use rug::Rational;
use thiserror::Error;

use super::{Certificate, InequalityStatement, Region};
use crate::corpus::recheck_tail;
use crate::interval::Interval;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Rejection {
    #[error("certificate is for `{found}`, expected `{expected}`")]
    StatementMismatch { expected: String, found: String },
    #[error("recorded statement hash does not match the statement text")]
    HashMismatch,
    #[error("certificate domain differs from the statement domain")]
    DomainMismatch,
    #[error("certificate status is not proved")]
    NotProved,
    #[error("certificate has no leaves")]
    Empty,
    #[error("leaf {0} lies outside the domain")]
    LeafOutsideDomain(usize),
    #[error("leaf {0} does not separate the sides (lhs_upper >= rhs_lower)")]
    NotSeparated(usize),
    #[error("leaf {0}: re-evaluation does not reproduce the recorded bounds")]
    BoundMismatch(usize),
    #[error("leaf {0}: re-evaluation failed: {1}")]
    EvaluationFailed(usize, String),
    #[error("leaves {0} and {1} overlap")]
    Overlap(usize, usize),
    #[error("leaves do not cover the domain")]
    CoverGap,
    #[error("tail reduction {0} does not re-check")]
    TailReduction(String),
}

/// Re-checks `cert` as a proof of `stmt`. Returns the first problem found.
pub fn certificate_check(cert: &Certificate, stmt: &InequalityStatement) -> Result<(), Rejection> {
    let expected = stmt.render();
    if cert.statement != expected {
        return Err(Rejection::StatementMismatch { expected, found: cert.statement.clone() });
    }
    if cert.statement_sha256 != super::statement_hash(&cert.statement) {
        return Err(Rejection::HashMismatch);
    }
    if cert.domain != stmt.domain {
        return Err(Rejection::DomainMismatch);
    }
    if !cert.is_proved() {
        return Err(Rejection::NotProved);
    }
    if cert.leaves.is_empty() {
        return Err(Rejection::Empty);
    }
    for (i, leaf) in cert.leaves.iter().enumerate() {
        if !stmt.domain.contains(&leaf.region) {
            return Err(Rejection::LeafOutsideDomain(i));
        }
        if leaf.lhs_upper >= leaf.rhs_lower {
            return Err(Rejection::NotSeparated(i));
        }
        let binding = leaf.region.binding();
        let lhs = stmt.lhs.eval_interval(&binding, leaf.precision);
        let rhs = stmt.rhs.eval_interval(&binding, leaf.precision);
        match (lhs, rhs) {
            (Ok(lhs), Ok(rhs)) => {
                if lhs.hi() > &leaf.lhs_upper || rhs.lo() < &leaf.rhs_lower {
                    return Err(Rejection::BoundMismatch(i));
                }
            }
            (Err(e), _) | (_, Err(e)) => return Err(Rejection::EvaluationFailed(i, e.to_string())),
        }
    }
    let regions: Vec<&Region> = cert.leaves.iter().map(|l| &l.region).collect();
    check_partition(&stmt.domain, &regions)?;
    for record in &cert.tail_reductions {
        if !recheck_tail(record) {
            return Err(Rejection::TailReduction(record.name.clone()));
        }
    }
    Ok(())
}

/// True iff `cert` is a valid proof of `stmt`.
pub fn certificate_validate(cert: &Certificate, stmt: &InequalityStatement) -> bool {
    certificate_check(cert, stmt).is_ok()
}

/// Checks that `pieces` tile `domain`: each piece lies inside the domain,
/// interiors are pairwise disjoint, and the volumes add up exactly.
///
/// Sides along which the domain is a single point are ignored for volume and
/// overlap, but every piece must agree with the domain there.
pub(crate) fn check_partition(domain: &Region, pieces: &[&Region]) -> Result<(), Rejection> {
    if pieces.is_empty() {
        return Err(Rejection::Empty);
    }
    let active: Vec<usize> = (0..domain.dims()).filter(|&d| !domain.vars()[d].1.is_point()).collect();
    for (i, piece) in pieces.iter().enumerate() {
        if !domain.contains(piece) {
            return Err(Rejection::LeafOutsideDomain(i));
        }
    }
    if active.is_empty() {
        return Ok(());
    }
    let side = |r: &Region, d: usize| -> Interval { r.vars()[d].1.clone() };
    let volume = |r: &Region| active.iter().fold(Rational::from(1), |acc, &d| acc * side(r, d).width_exact());

    let total = pieces.iter().fold(Rational::new(), |acc, r| acc + volume(r));
    if total != volume(domain) {
        return Err(Rejection::CoverGap);
    }

    // Sweep along the first active axis; `open` holds pieces whose extent on
    // that axis has not ended yet.
    let sweep = active[0];
    let mut order: Vec<usize> = (0..pieces.len()).collect();
    order.sort_by(|&a, &b| side(pieces[a], sweep).lo().cmp(side(pieces[b], sweep).lo()));
    let mut open: Vec<usize> = Vec::new();
    for &i in &order {
        let start = side(pieces[i], sweep).lo().clone();
        open.retain(|&j| side(pieces[j], sweep).hi() > &start);
        for &j in &open {
            let interiors_meet = active.iter().all(|&d| {
                let (a, b) = (side(pieces[i], d), side(pieces[j], d));
                a.lo().max(b.lo()) < a.hi().min(b.hi())
            });
            if interiors_meet {
                return Err(Rejection::Overlap(j.min(i), j.max(i)));
            }
        }
        open.push(i);
    }
    Ok(())
}
