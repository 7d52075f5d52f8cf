use rayon::prelude::*;
use rug::Float;

use super::{
    check_box, BoxOutcome, Certificate, FrontierBox, InequalityStatement, Leaf, ProverConfig, ProverError, Region,
    Status,
};

struct Task {
    region: Region,
    depth: u32,
    precision: u32,
}

enum Node {
    Leaf(Leaf),
    Split(Task, Task),
    Stuck(FrontierBox),
}

/// A box this narrow that still fails is limited by rounding rather than
/// by interval dependency: `width < 2^(-depth/2)`.
fn narrow_for_depth(region: &Region, depth: u32) -> bool {
    let w = Float::with_val(64, region.max_width());
    let w2 = Float::with_val(64, &w * &w);
    let threshold = Float::with_val(64, 1) >> depth;
    w2 < threshold
}

fn process(stmt: &InequalityStatement, task: Task, cfg: &ProverConfig) -> Result<Node, ProverError> {
    let mut precision = task.precision;
    loop {
        match check_box(stmt, &task.region, precision)? {
            BoxOutcome::Proved { lhs_upper, rhs_lower } => {
                return Ok(Node::Leaf(Leaf {
                    region: task.region,
                    lhs_upper,
                    rhs_lower,
                    depth: task.depth,
                    precision,
                }));
            }
            BoxOutcome::Unknown if precision < cfg.max_precision && narrow_for_depth(&task.region, task.depth) => {
                precision = precision.saturating_mul(cfg.escalation_factor).min(cfg.max_precision);
            }
            BoxOutcome::Unknown => break,
        }
    }
    let stuck = |task: Task| Node::Stuck(FrontierBox { region: task.region, depth: task.depth, precision });
    if task.depth >= cfg.max_depth {
        return Ok(stuck(task));
    }
    match task.region.split() {
        Ok((a, b)) => {
            let child = |region| Task { region, depth: task.depth + 1, precision: cfg.start_precision };
            Ok(Node::Split(child(a), child(b)))
        }
        Err(_) => Ok(stuck(task)),
    }
}

/// Certifies `stmt` on its whole domain by adaptive bisection.
///
/// Boxes are processed level by level; each level is evaluated in parallel
/// on the current rayon pool and merged in order, so the certificate is the
/// same for any thread count. Exhausting the leaf budget or the depth limit
/// yields [`Status::Undetermined`] with the unresolved boxes, not an error.
pub fn verify_strict(stmt: &InequalityStatement, cfg: &ProverConfig) -> Result<Certificate, ProverError> {
    cfg.validate()?;
    let mut wave = vec![Task { region: stmt.domain.clone(), depth: 0, precision: cfg.start_precision }];
    let mut leaves = Vec::new();
    let mut frontier = Vec::new();
    let mut examined: u64 = 0;

    while !wave.is_empty() {
        let allowed = usize::try_from(cfg.leaf_budget - examined).unwrap_or(usize::MAX);
        if wave.len() > allowed {
            let starved = wave.split_off(allowed);
            frontier.extend(starved.into_iter().map(|t| FrontierBox {
                region: t.region,
                depth: t.depth,
                precision: t.precision,
            }));
        }
        examined += wave.len() as u64;
        let results: Vec<Result<Node, ProverError>> =
            wave.into_par_iter().map(|task| process(stmt, task, cfg)).collect();

        let mut next = Vec::new();
        for result in results {
            match result? {
                Node::Leaf(leaf) => leaves.push(leaf),
                Node::Split(a, b) => {
                    next.push(a);
                    next.push(b);
                }
                Node::Stuck(b) => frontier.push(b),
            }
        }
        wave = next;
    }

    leaves.sort_by(|a, b| a.region.lex_cmp(&b.region));
    frontier.sort_by(|a, b| a.region.lex_cmp(&b.region));
    let status = if frontier.is_empty() { Status::Proved } else { Status::Undetermined { frontier } };
    Ok(Certificate {
        statement: stmt.render(),
        statement_sha256: stmt.hash(),
        domain: stmt.domain.clone(),
        parameters: cfg.clone(),
        status,
        boxes_examined: examined,
        leaves,
        tail_reductions: Vec::new(),
    })
}
