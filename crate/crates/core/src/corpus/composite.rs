//! Half-line claims assembled from a compact certificate and tail
//! reductions.

use rug::float::Round;
use serde::{Deserialize, Serialize};

use super::tails::{self, INFIMUM_INFINITY, INFIMUM_NEAR_ZERO, INFIMUM_ORIGIN, INFINITY, NEAR_ZERO};
use super::{axiom, CorpusError, INFIMUM_BOUND, RATIO, T3_STATEMENT};
use crate::certfile::{content_hash, Body};
use crate::expr::Expr;
use crate::interval::{Interval, Scalar};
use crate::minimize::{certified_infimum, check_minimization, MinimizationResult};
use crate::prover::{certificate_check, verify_strict, InequalityStatement, ProverConfig, Region, TailReductionRecord};

pub const T3_FULL: &str = "T3-full";
pub const INFIMUM_FULL: &str = "infimum-full";

/// Compact core of both compositions' domains.
const T3_CORE: (&str, &str) = ("0.3", "3");
const INFIMUM_CORE: (&str, &str) = ("0.15", "3");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Component {
    pub name: String,
    pub covers: String,
    pub proved: bool,
    /// SHA-256 of the component's own certificate file.
    pub sha256: String,
    pub body: Body,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "state", rename_all = "lowercase")]
pub enum CompositeStatus {
    Proved,
    Undetermined { failing: Vec<String> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub id: String,
    pub statement: String,
    pub proof: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Composite {
    pub id: String,
    pub claim: String,
    pub status: CompositeStatus,
    pub components: Vec<Component>,
    /// Every fact the tail reductions use, with its proof.
    pub axioms: Vec<LedgerEntry>,
}

impl Composite {
    pub fn is_proved(&self) -> bool {
        self.status == CompositeStatus::Proved
    }

    pub fn component(&self, name: &str) -> Option<&Component> {
        self.components.iter().find(|c| c.name == name)
    }

    /// The certified enclosure of the infimum on the compact part, for
    /// infimum compositions.
    pub fn infimum(&self) -> Option<Interval> {
        match &self.component("compact")?.body {
            Body::Minimization(r) => Some(r.inf_enclosure.clone()),
            _ => None,
        }
    }
}

fn infimum_claim() -> String {
    format!("{INFIMUM_BOUND} < {} for all u >= 0", canonical_expr(RATIO))
}

fn canonical(statement: &str) -> String {
    let (l, r) = crate::expr::parse_relation(statement).expect("parses");
    format!("{l} < {r}")
}

fn canonical_expr(text: &str) -> String {
    text.parse::<Expr>().expect("parses").to_string()
}

fn component(name: &str, covers: String, proved: bool, body: Body) -> Component {
    Component { name: name.to_string(), covers, proved, sha256: content_hash(&body), body }
}

fn ledger(records: &[&TailReductionRecord]) -> Vec<LedgerEntry> {
    let used: Vec<&str> = records.iter().flat_map(|r| r.axioms.iter().map(String::as_str)).collect();
    super::AXIOMS
        .iter()
        .filter(|a| used.contains(&a.id))
        .map(|a| LedgerEntry { id: a.id.into(), statement: a.statement.into(), proof: a.proof.into() })
        .collect()
}

fn status(components: &[Component], extra: Vec<String>) -> CompositeStatus {
    let mut failing: Vec<String> = components.iter().filter(|c| !c.proved).map(|c| c.name.clone()).collect();
    failing.extend(extra);
    if failing.is_empty() {
        CompositeStatus::Proved
    } else {
        CompositeStatus::Undetermined { failing }
    }
}

fn core(bounds: (&str, &str)) -> Region {
    Region::univariate("u", bounds.0, bounds.1).expect("valid core")
}

fn core_of(domain: &Region) -> (&Scalar, &Scalar) {
    let iv = &domain.vars()[0].1;
    (iv.lo(), iv.hi())
}

/// The u-form inequality on all of `(0, oo)`: the near-zero reduction up
/// to 0.3, bisection on `[0.3, 3]`, the infinity reduction from 3 on.
pub fn verify_three_full_line(cfg: &ProverConfig) -> Result<Composite, CorpusError> {
    verify_full_line(T3_STATEMENT, cfg)
}

/// As [`verify_three_full_line`] for an arbitrary statement in `u`. The
/// tail reductions are specific to the u form, so for any other statement
/// they are reported as not applicable and only the compact part runs.
pub fn verify_full_line(statement: &str, cfg: &ProverConfig) -> Result<Composite, CorpusError> {
    let stmt = InequalityStatement::parse(statement, core(T3_CORE))?;
    let is_t3 = stmt.render() == canonical(T3_STATEMENT);
    let (delta, u0) = core_of(&stmt.domain);
    let precision = cfg.start_precision;

    let mut cert = verify_strict(&stmt, cfg)?;
    let mut components = Vec::new();
    let mut extra = Vec::new();
    let mut tails = Vec::new();
    if is_t3 {
        let near = tails::verify_near_zero_reduction(delta, precision)?;
        let far = tails::verify_infinity_reduction(u0, precision)?;
        if near.holds && far.holds {
            cert.tail_reductions = vec![near.clone(), far.clone()];
        }
        tails = vec![near, far];
    } else {
        extra.push(format!("{NEAR_ZERO} (not applicable)"));
        extra.push(format!("{INFINITY} (not applicable)"));
    }
    let compact_ok = cert.is_proved() && certificate_check(&cert, &stmt).is_ok();
    let covers = format!("[{}, {}]", delta.to_exact_decimal(), u0.to_exact_decimal());
    let compact = component("compact", covers, compact_ok, Body::Bisection(cert));
    if let [near, far] = &tails[..] {
        components.push(component(NEAR_ZERO, near.covers.clone(), tails::recheck_tail(near), Body::Tail(near.clone())));
        components.push(compact);
        components.push(component(INFINITY, far.covers.clone(), tails::recheck_tail(far), Body::Tail(far.clone())));
    } else {
        components.push(compact);
    }
    let refs: Vec<&TailReductionRecord> = tails.iter().collect();
    Ok(Composite {
        id: T3_FULL.into(),
        claim: format!("{} for all u > 0", stmt.render()),
        status: status(&components, extra),
        components,
        axioms: ledger(&refs),
    })
}

fn bound_scalar() -> Scalar {
    Scalar::from_decimal(INFIMUM_BOUND, 128, Round::Up).expect("literal")
}

fn minimization_proves(r: &MinimizationResult) -> bool {
    check_minimization(r).is_ok() && r.inf_enclosure.lo() > &bound_scalar()
}

/// `f(u) > 0.972` for all `u >= 0`: the value at 0, a bound from
/// `exp(-u^2)` on `(0, 0.15]`, the certified infimum on `[0.15, 3]`, and the
/// bound `2^(tanh u - 1)` from 3 on.
pub fn infimum_claim_full_line(cfg: &ProverConfig, target_width: &Scalar) -> Result<Composite, CorpusError> {
    let domain = core(INFIMUM_CORE);
    let (delta, u0) = core_of(&domain);
    let precision = cfg.start_precision;
    let f: Expr = RATIO.parse()?;

    let origin = tails::infimum_origin(INFIMUM_BOUND, precision)?;
    let near = tails::infimum_near_zero(delta, INFIMUM_BOUND, precision)?;
    let far = tails::infimum_infinity(u0, INFIMUM_BOUND, precision)?;
    let min = certified_infimum(&f, &domain, target_width, cfg)?;

    let tail = |name: &str, r: &TailReductionRecord| {
        component(name, r.covers.clone(), tails::recheck_tail(r), Body::Tail(r.clone()))
    };
    let covers = format!("[{}, {}]", delta.to_exact_decimal(), u0.to_exact_decimal());
    let components = vec![
        tail("origin", &origin),
        tail(NEAR_ZERO, &near),
        component("compact", covers, minimization_proves(&min), Body::Minimization(min)),
        tail(INFINITY, &far),
    ];
    Ok(Composite {
        id: INFIMUM_FULL.into(),
        claim: infimum_claim(),
        status: status(&components, vec![]),
        components,
        axioms: ledger(&[&origin, &near, &far]),
    })
}

fn reject<T>(msg: impl Into<String>) -> Result<T, String> {
    Err(msg.into())
}

fn tail_of<'a>(c: &'a Composite, name: &str, kind: &str) -> Result<&'a TailReductionRecord, String> {
    match c.component(name).map(|x| &x.body) {
        Some(Body::Tail(r)) if r.name == kind => Ok(r),
        _ => reject(format!("component {name} is not a {kind} reduction")),
    }
}

/// Re-checks a composite: component hashes, each component on its own,
/// that the pieces fit together and cover the claimed half-line, the
/// recorded status and the embedded axiom ledger.
pub fn check_composite(c: &Composite) -> Result<(), String> {
    for comp in &c.components {
        if content_hash(&comp.body) != comp.sha256 {
            return reject(format!("component {} does not match its hash", comp.name));
        }
    }
    let names: Vec<&str> = c.components.iter().map(|x| x.name.as_str()).collect();
    let mut records = Vec::new();
    let core_bounds = |body: &Body| -> Result<(Scalar, Scalar), String> {
        let domain = match body {
            Body::Bisection(cert) => &cert.domain,
            Body::Minimization(r) => &r.domain,
            _ => return reject("compact component has the wrong kind"),
        };
        let (lo, hi) = core_of(domain);
        Ok((lo.clone(), hi.clone()))
    };
    let mut extra = Vec::new();
    let proved_by_name: Vec<(String, bool)> = match c.id.as_str() {
        T3_FULL => {
            let compact = c.component("compact").ok_or("missing compact component")?;
            let Body::Bisection(cert) = &compact.body else { return reject("compact component is not a bisection") };
            let stmt = cert.statement().map_err(|e| e.to_string())?;
            if c.claim != format!("{} for all u > 0", stmt.render()) {
                return reject("claim does not match the compact statement");
            }
            let compact_ok = cert.is_proved() && certificate_check(cert, &stmt).is_ok();
            if stmt.render() != canonical(T3_STATEMENT) {
                if names != ["compact"] {
                    return reject("unexpected components");
                }
                extra.push(format!("{NEAR_ZERO} (not applicable)"));
                extra.push(format!("{INFINITY} (not applicable)"));
                vec![("compact".into(), compact_ok)]
            } else {
                if names != [NEAR_ZERO, "compact", INFINITY] {
                    return reject("unexpected components");
                }
                let near = tail_of(c, NEAR_ZERO, NEAR_ZERO)?;
                let far = tail_of(c, INFINITY, INFINITY)?;
                let (lo, hi) = core_bounds(&compact.body)?;
                if near.covered_hi.as_ref() < Some(&lo) || far.covered_lo > hi {
                    return reject("tail reductions do not meet the compact part");
                }
                records.extend([near, far]);
                vec![
                    (NEAR_ZERO.into(), tails::recheck_tail(near)),
                    ("compact".into(), compact_ok),
                    (INFINITY.into(), tails::recheck_tail(far)),
                ]
            }
        }
        INFIMUM_FULL => {
            if c.claim != infimum_claim() {
                return reject("claim text differs");
            }
            if names != ["origin", NEAR_ZERO, "compact", INFINITY] {
                return reject("unexpected components");
            }
            let origin = tail_of(c, "origin", INFIMUM_ORIGIN)?;
            let near = tail_of(c, NEAR_ZERO, INFIMUM_NEAR_ZERO)?;
            let far = tail_of(c, INFINITY, INFIMUM_INFINITY)?;
            for r in [origin, near, far] {
                if r.bound.as_deref() != Some(INFIMUM_BOUND) {
                    return reject(format!("{} uses a different bound", r.name));
                }
            }
            let compact = c.component("compact").ok_or("missing compact component")?;
            let Body::Minimization(min) = &compact.body else {
                return reject("compact component is not a minimization");
            };
            if min.expression != canonical_expr(RATIO) || min.var() != "u" {
                return reject("compact minimization is of a different expression");
            }
            let (lo, hi) = core_bounds(&compact.body)?;
            if near.covered_hi.as_ref() < Some(&lo) || far.covered_lo > hi {
                return reject("tail bounds do not meet the compact part");
            }
            records.extend([origin, near, far]);
            vec![
                ("origin".into(), tails::recheck_tail(origin)),
                (NEAR_ZERO.into(), tails::recheck_tail(near)),
                ("compact".into(), minimization_proves(min)),
                (INFINITY.into(), tails::recheck_tail(far)),
            ]
        }
        other => return reject(format!("unknown composite {other:?}")),
    };
    for (comp, (_, proved)) in c.components.iter().zip(&proved_by_name) {
        if comp.proved != *proved {
            return reject(format!("component {} is recorded with the wrong outcome", comp.name));
        }
    }
    if status(&c.components, extra) != c.status {
        return reject("recorded status does not follow from the components");
    }
    if ledger(&records) != c.axioms {
        return reject("axiom ledger does not list exactly the facts used");
    }
    for entry in &c.axioms {
        if axiom(&entry.id).is_none() {
            return reject(format!("unknown axiom {}", entry.id));
        }
    }
    Ok(())
}
