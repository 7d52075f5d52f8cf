//! Certified infima of univariate expressions by interval branch-and-bound,
//! and plain scan tables.
//!
//! The search keeps every box that might still hold a global minimizer,
//! ordered by the lower end of its enclosure. The upper bound on the infimum
//! comes only from certified point values at box midpoints. A box is
//! discarded once its lower bound exceeds that upper bound, and the decision
//! is kept in the result so [`check_minimization`] can redo it.

mod scan;

use std::cmp::Ordering;

use rayon::prelude::*;
use rug::Rational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use scan::{scan, ScanRow, ScanTable};

use crate::expr::{EvalError, Expr, ParseError};
use crate::interval::{Interval, IntervalError, Scalar};
use crate::prover::{ProverConfig, ProverError, Region};

/// Boxes refined per round. Fixed so the result does not depend on the
/// number of worker threads.
const WAVE: usize = 64;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MinimizeError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error(transparent)]
    Prover(#[from] ProverError),
    #[error("minimization domain must be one variable, got {0}")]
    NotUnivariate(String),
    #[error("expression variable {found:?} does not match domain variable {expected:?}")]
    VariableMismatch { expected: String, found: String },
    #[error("need at least 2 scan points, got {0}")]
    TooFewPoints(usize),
    #[error("target width must be positive")]
    InvalidTarget,
}

/// A box with a certified lower bound on the expression over it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundedBox {
    pub region: Region,
    pub lower: Scalar,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinimizationResult {
    pub expression: String,
    pub domain: Region,
    pub target_width: Scalar,
    pub parameters: ProverConfig,
    /// Working precision of every enclosure in this record.
    pub precision: u32,
    /// `lo` is a lower bound on the infimum, `hi` a witnessed value.
    pub inf_enclosure: Interval,
    /// The point whose certified value is `inf_enclosure.hi`.
    pub witness: Scalar,
    /// Coalesced live boxes; their union holds every global minimizer.
    pub argmin_boxes: Vec<Interval>,
    pub leaves_processed: u64,
    /// False when the budget or the depth limit ran out first.
    pub converged: bool,
    /// Boxes still in play at termination.
    pub live: Vec<BoundedBox>,
    /// Boxes discarded because `lower > inf_enclosure.hi`.
    pub pruned: Vec<BoundedBox>,
}

impl MinimizationResult {
    pub fn var(&self) -> &str {
        &self.domain.vars()[0].0
    }
}

struct Node {
    region: Region,
    lower: Scalar,
    /// Width of the enclosure over the box.
    spread: Rational,
    depth: u32,
}

struct Probe {
    lower: Scalar,
    spread: Rational,
    witness: Scalar,
    value: Scalar,
}

fn side(region: &Region) -> &Interval {
    &region.vars()[0].1
}

fn univariate(e: &Expr, domain: &Region) -> Result<String, MinimizeError> {
    if domain.dims() != 1 {
        return Err(MinimizeError::NotUnivariate(domain.to_string()));
    }
    let var = domain.vars()[0].0.clone();
    if let Some(found) = e.free_vars().into_iter().find(|v| *v != var) {
        return Err(MinimizeError::VariableMismatch { expected: var, found });
    }
    Ok(var)
}

fn probe(e: &Expr, var: &str, region: &Region, precision: u32) -> Result<Probe, MinimizeError> {
    let iv = side(region);
    let enclosure = e.eval_at(var, iv, precision)?;
    let spread = enclosure.width_exact();
    let lower = enclosure.into_bounds().0;
    let witness = if iv.is_point() { iv.lo().clone() } else { iv.split_point()? };
    let value = e.eval_at(var, &Interval::point(witness.clone()), precision)?.into_bounds().1;
    Ok(Probe { lower, spread, witness, value })
}

fn by_lower(a: &Node, b: &Node) -> Ordering {
    a.lower.cmp(&b.lower).then_with(|| a.region.lex_cmp(&b.region))
}

fn splittable(node: &Node, cfg: &ProverConfig) -> bool {
    node.depth < cfg.max_depth && !side(&node.region).is_point()
}

/// Merges touching intervals of a list sorted by lower end.
fn coalesce(sorted: impl IntoIterator<Item = Interval>) -> Vec<Interval> {
    let mut out: Vec<Interval> = Vec::new();
    for iv in sorted {
        match out.last_mut() {
            Some(last) if last.hi() >= iv.lo() => *last = last.hull(&iv),
            _ => out.push(iv),
        }
    }
    out
}

fn argmin_of(live: &[BoundedBox]) -> Vec<Interval> {
    let mut sides: Vec<Interval> = live.iter().map(|b| side(&b.region).clone()).collect();
    sides.sort_by(|a, b| a.lo().cmp(b.lo()).then_with(|| a.hi().cmp(b.hi())));
    coalesce(sides)
}

/// Encloses `inf e` over `domain` to within `target_width`, or as far as the
/// leaf budget and depth limit of `cfg` allow.
///
/// Once the enclosure is narrow enough, live boxes whose own enclosure is
/// still wider than the target keep being split, so the reported argmin
/// boxes shrink towards the region where the value is within the target of
/// the infimum. All enclosures are computed at `cfg.start_precision`. The
/// outcome is the same for any number of threads.
pub fn certified_infimum(
    e: &Expr,
    domain: &Region,
    target_width: &Scalar,
    cfg: &ProverConfig,
) -> Result<MinimizationResult, MinimizeError> {
    cfg.validate()?;
    if target_width.is_zero() || target_width.is_sign_negative() {
        return Err(MinimizeError::InvalidTarget);
    }
    let var = univariate(e, domain)?;
    let precision = cfg.start_precision;
    let target = target_width.to_rational();

    let root = probe(e, &var, domain, precision)?;
    let mut ub = root.value;
    let mut witness = root.witness;
    let mut live = vec![Node { region: domain.clone(), lower: root.lower, spread: root.spread, depth: 0 }];
    let mut pruned: Vec<BoundedBox> = Vec::new();
    let mut examined: u64 = 1;
    let mut converged;

    loop {
        live.sort_by(by_lower);
        let lb = &live[0].lower;
        converged = (ub.to_rational() - lb.to_rational()) <= target;
        if !converged && !splittable(&live[0], cfg) {
            break;
        }
        let wanted = |n: &Node| splittable(n, cfg) && (!converged || n.spread > target);
        if converged && !live.iter().any(wanted) {
            break;
        }
        let room = usize::try_from((cfg.leaf_budget - examined) / 2).unwrap_or(usize::MAX);
        let cap = WAVE.min(room);
        if cap == 0 {
            break;
        }

        let mut wave = Vec::with_capacity(cap);
        let mut keep = Vec::with_capacity(live.len());
        for node in live {
            if wave.len() < cap && wanted(&node) {
                wave.push(node);
            } else {
                keep.push(node);
            }
        }
        live = keep;

        let children: Vec<(Region, u32)> = wave
            .iter()
            .map(|n| n.region.split().map(|(a, b)| [(a, n.depth + 1), (b, n.depth + 1)]))
            .collect::<Result<Vec<_>, _>>()?
            .into_iter()
            .flatten()
            .collect();
        examined += children.len() as u64;
        let probes: Vec<Probe> =
            children.par_iter().map(|(region, _)| probe(e, &var, region, precision)).collect::<Result<_, _>>()?;

        for ((region, depth), p) in children.into_iter().zip(probes) {
            if p.value < ub {
                ub = p.value;
                witness = p.witness;
            }
            live.push(Node { region, lower: p.lower, spread: p.spread, depth });
        }
        let (keep, gone): (Vec<Node>, Vec<Node>) = live.into_iter().partition(|n| n.lower <= ub);
        live = keep;
        pruned.extend(gone.into_iter().map(|n| BoundedBox { region: n.region, lower: n.lower }));
    }

    live.sort_by(|a, b| a.region.lex_cmp(&b.region));
    pruned.sort_by(|a, b| a.region.lex_cmp(&b.region));
    let lb = live.iter().map(|n| &n.lower).min().expect("the witness box is never pruned").clone();
    let live: Vec<BoundedBox> = live.into_iter().map(|n| BoundedBox { region: n.region, lower: n.lower }).collect();
    Ok(MinimizationResult {
        expression: e.to_string(),
        domain: domain.clone(),
        target_width: target_width.clone(),
        parameters: cfg.clone(),
        precision,
        inf_enclosure: Interval::new(lb, ub)?,
        witness,
        argmin_boxes: argmin_of(&live),
        leaves_processed: examined,
        converged,
        live,
        pruned,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MinimizationRejection {
    #[error("expression or domain does not parse: {0}")]
    Malformed(String),
    #[error("witness lies outside the domain")]
    WitnessOutside,
    #[error("witness value does not reproduce the upper bound")]
    WitnessValue,
    #[error("box {0} does not reproduce its lower bound")]
    LowerBound(String),
    #[error("pruned box {0} has lower bound not above the upper bound")]
    PruneUnjustified(String),
    #[error("the recorded lower bound is not the least live lower bound")]
    LowerEnclosure,
    #[error("argmin boxes do not match the live boxes")]
    ArgminMismatch,
    #[error("boxes do not tile the domain: {0}")]
    Partition(String),
    #[error("marked converged but wider than the target")]
    NotConverged,
}

/// Redoes every decision recorded in `r` without rerunning the search.
pub fn check_minimization(r: &MinimizationResult) -> Result<(), MinimizationRejection> {
    let e: Expr = r.expression.parse().map_err(|err: ParseError| MinimizationRejection::Malformed(err.to_string()))?;
    let var = univariate(&e, &r.domain).map_err(|err| MinimizationRejection::Malformed(err.to_string()))?;
    let ub = r.inf_enclosure.hi();

    if !side(&r.domain).contains_point(&r.witness) {
        return Err(MinimizationRejection::WitnessOutside);
    }
    match e.eval_at(&var, &Interval::point(r.witness.clone()), r.precision) {
        Ok(v) if v.hi() <= ub => {}
        _ => return Err(MinimizationRejection::WitnessValue),
    }

    let recheck = |b: &BoundedBox| match e.eval_at(&var, side(&b.region), r.precision) {
        Ok(v) if v.lo() >= &b.lower => Ok(()),
        _ => Err(MinimizationRejection::LowerBound(b.region.to_string())),
    };
    for b in &r.live {
        recheck(b)?;
    }
    for b in &r.pruned {
        recheck(b)?;
        if &b.lower <= ub {
            return Err(MinimizationRejection::PruneUnjustified(b.region.to_string()));
        }
    }
    match r.live.iter().map(|b| &b.lower).min() {
        Some(least) if least == r.inf_enclosure.lo() => {}
        _ => return Err(MinimizationRejection::LowerEnclosure),
    }
    if argmin_of(&r.live) != r.argmin_boxes {
        return Err(MinimizationRejection::ArgminMismatch);
    }
    let pieces: Vec<&Region> = r.live.iter().chain(&r.pruned).map(|b| &b.region).collect();
    crate::prover::check_partition(&r.domain, &pieces)
        .map_err(|err| MinimizationRejection::Partition(err.to_string()))?;
    if r.converged && r.inf_enclosure.width_exact() > r.target_width.to_rational() {
        return Err(MinimizationRejection::NotConverged);
    }
    Ok(())
}
