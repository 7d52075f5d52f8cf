//! Analytic reductions for the two tight ends of the half-line.
//!
//! Each reduction replaces an unbounded or boundary-tight piece by a single
//! closed-form inequality without variables, checked with enclosures. The
//! argument that the closed-form check licenses the piece is written out in
//! the doc comment of each constructor and uses only the facts listed in
//! [`TailReductionRecord::axioms`], which are in the axiom ledger.

use super::{CorpusError, RATIO, T3_STATEMENT};
use crate::expr::{parse_relation, Binding, Expr};
use crate::interval::Scalar;
use crate::prover::TailReductionRecord;

pub const NEAR_ZERO: &str = "near-zero";
pub const INFINITY: &str = "infinity";
pub const INFIMUM_ORIGIN: &str = "infimum-origin";
pub const INFIMUM_NEAR_ZERO: &str = "infimum-near-zero";
pub const INFIMUM_INFINITY: &str = "infimum-infinity";

struct Reduction {
    hypothesis: String,
    covers: String,
    covered: (Scalar, Option<Scalar>),
    axioms: &'static [&'static str],
    conclusion: String,
}

fn zero() -> Scalar {
    Scalar::zero(64)
}

fn reduction(name: &str, p: &Scalar, bound: Option<&str>) -> Result<Reduction, CorpusError> {
    let d = p.to_exact_decimal();
    let q = p.to_rational();
    let pre =
        |ok: bool, what: &str| if ok { Ok(()) } else { Err(CorpusError::Precondition(format!("{name}: {what}"))) };
    let need_bound = || bound.ok_or_else(|| CorpusError::Precondition(format!("{name}: missing bound")));
    let no_bound = || pre(bound.is_none(), "takes no bound");
    let reduction = match name {
        NEAR_ZERO => {
            no_bound()?;
            pre(q > 0, "parameter must be positive")?;
            Reduction {
                hypothesis: format!("(arcosh(2) + 2*(cosh({d}) - 1)/sqrt(3))^2 < 2"),
                covers: format!("(0, {d}]"),
                covered: (zero(), Some(p.clone())),
                axioms: &["cosh-gaussian", "arcosh-tangent", "tanh-below-identity", "cosh-increasing"],
                conclusion: format!("{T3_STATEMENT} for all u in (0, {d}]"),
            }
        }
        INFINITY => {
            no_bound()?;
            pre(q >= 1, "parameter must be at least 1")?;
            Reduction {
                hypothesis: format!("1 + exp(-2*tanh({d})*ln(2))*exp(4*{d}*exp(-2*{d})) < 2*ln(2)*(1 - exp(-2*{d}))"),
                covers: format!("[{d}, oo)"),
                covered: (p.clone(), None),
                axioms: &[
                    "arcosh-upper",
                    "arcosh-lower",
                    "cosh-exp-form",
                    "log1p-below",
                    "tanh-complement",
                    "decay-monotone",
                    "tanh-increasing",
                ],
                conclusion: format!("{T3_STATEMENT} for all u in [{d}, oo)"),
            }
        }
        INFIMUM_ORIGIN => {
            let b = need_bound()?;
            pre(q == 0, "parameter must be 0")?;
            let ratio: Expr = RATIO.parse().expect("parses");
            let at_zero = ratio.substitute("u", &Expr::constant("0"));
            Reduction {
                hypothesis: format!("{b} < {at_zero}"),
                covers: "{0}".into(),
                covered: (zero(), Some(zero())),
                axioms: &[],
                conclusion: format!("f(u) > {b} at u = 0"),
            }
        }
        INFIMUM_NEAR_ZERO => {
            let b = need_bound()?;
            pre(q > 0, "parameter must be positive")?;
            Reduction {
                hypothesis: format!("{b} < exp(-{d}^2)"),
                covers: format!("(0, {d}]"),
                covered: (zero(), Some(p.clone())),
                axioms: &["cosh-at-least-one", "tanh-below-identity"],
                conclusion: format!("f(u) > {b} for all u in (0, {d}]"),
            }
        }
        INFIMUM_INFINITY => {
            let b = need_bound()?;
            pre(q >= 0, "parameter must be nonnegative")?;
            Reduction {
                hypothesis: format!("{b} < exp((tanh({d}) - 1)*ln(2))"),
                covers: format!("[{d}, oo)"),
                covered: (p.clone(), None),
                axioms: &["arcosh-lower", "cosh-above-half-exp", "tanh-increasing"],
                conclusion: format!("f(u) > {b} for all u in [{d}, oo)"),
            }
        }
        other => return Err(CorpusError::Precondition(format!("unknown tail reduction {other:?}"))),
    };
    Ok(reduction)
}

fn build(
    name: &str,
    parameter: &Scalar,
    bound: Option<&str>,
    precision: u32,
) -> Result<TailReductionRecord, CorpusError> {
    let s = reduction(name, parameter, bound)?;
    let (lhs, rhs) = parse_relation(&s.hypothesis)?;
    let empty = Binding::new();
    let lhs_enclosure = lhs.eval_interval(&empty, precision)?;
    let rhs_enclosure = rhs.eval_interval(&empty, precision)?;
    let holds = lhs_enclosure.hi() < rhs_enclosure.lo();
    Ok(TailReductionRecord {
        name: name.to_string(),
        parameter: parameter.clone(),
        bound: bound.map(str::to_string),
        covers: s.covers,
        covered_lo: s.covered.0,
        covered_hi: s.covered.1,
        hypothesis: format!("{lhs} < {rhs}"),
        precision,
        lhs_enclosure,
        rhs_enclosure,
        holds,
        axioms: s.axioms.iter().map(|a| a.to_string()).collect(),
        conclusion: s.conclusion,
    })
}

/// Checks `(arcosh 2 + 2(cosh δ - 1)/√3)^2 < 2`, which licenses the
/// u-form inequality on `(0, δ]`.
///
/// With `τ = tanh u` and `A = arcosh(2 cosh u)`: `cosh(τA) <= exp(τ²A²/2)`,
/// so it suffices that `τA² < 2u`. By the tangent bound at 2,
/// `A <= arcosh 2 + (2 cosh u - 2)/√3`, which increases with `u`, so
/// `A² <= A(δ)²`; and `τ < u`. Hence `τA² < u A(δ)² < 2u` when the
/// hypothesis holds. Requires `δ > 0`; the check fails from about 0.43 on.
pub fn verify_near_zero_reduction(delta: &Scalar, precision: u32) -> Result<TailReductionRecord, CorpusError> {
    build(NEAR_ZERO, delta, None, precision)
}

/// Checks `2 ln 2 (1 - e^(-2U)) > 1 + 2^(-2 tanh U) exp(4U e^(-2U))`, which
/// licenses the u-form inequality on `[U, oo)`.
///
/// With `τ = tanh u`, `z = τ arcosh(2 cosh u)`: `ln cosh z <= z - ln 2 + e^(-2z)`,
/// `z <= τ(u + ln 2 + e^(-2u))` and `z >= τ(u + ln 2)`. The claim
/// `ln cosh z < uτ` then follows from `(1 - τ) ln 2 > τ e^(-2u) + 2^(-2τ) e^(-2τu)`.
/// Multiplying by `e^(2u)` and using `(1 - τ) e^(2u) >= 2(1 - e^(-2u))`,
/// `e^(2u(1 - τ)) <= exp(4u e^(-2u))` and `τ < 1` gives the hypothesis at
/// `u`. Its left side increases and its right side decreases for
/// `u >= 1/2`, so holding at `U` it holds on `[U, oo)`. Requires `U >= 1`.
pub fn verify_infinity_reduction(u0: &Scalar, precision: u32) -> Result<TailReductionRecord, CorpusError> {
    build(INFINITY, u0, None, precision)
}

/// Checks `bound < f(0)` by direct evaluation.
pub fn infimum_origin(bound: &str, precision: u32) -> Result<TailReductionRecord, CorpusError> {
    build(INFIMUM_ORIGIN, &zero(), Some(bound), precision)
}

/// Checks `bound < exp(-δ²)`, which gives `f > bound` on `(0, δ]`: the
/// numerator of `f` is at least 1 and `u tanh u < u² <= δ²`.
pub fn infimum_near_zero(delta: &Scalar, bound: &str, precision: u32) -> Result<TailReductionRecord, CorpusError> {
    build(INFIMUM_NEAR_ZERO, delta, Some(bound), precision)
}

/// Checks `bound < 2^(tanh U - 1)`, which gives `f > bound` on `[U, oo)`:
/// `arcosh(2 cosh u) > u + ln 2` and `cosh z > e^z/2` give
/// `f(u) > 2^(tanh u - 1)`, which increases with `u`.
pub fn infimum_infinity(u0: &Scalar, bound: &str, precision: u32) -> Result<TailReductionRecord, CorpusError> {
    build(INFIMUM_INFINITY, u0, Some(bound), precision)
}

/// True iff `record` is exactly what its constructor produces for the
/// recorded name, parameter, bound and precision, and its hypothesis holds.
pub fn recheck_tail(record: &TailReductionRecord) -> bool {
    record.holds
        && build(&record.name, &record.parameter, record.bound.as_deref(), record.precision).as_ref() == Ok(record)
}

/// The interval a record licenses, as `(lo, hi)` with `None` for `oo`.
pub fn covered(record: &TailReductionRecord) -> (&Scalar, Option<&Scalar>) {
    (&record.covered_lo, record.covered_hi.as_ref())
}

/// Enclosure-free helper for reports: the hypothesis margin
/// `lower(rhs) - upper(lhs)` rounded to `f64`.
pub fn margin(record: &TailReductionRecord) -> f64 {
    let m = record.rhs_enclosure.lo().to_rational() - record.lhs_enclosure.hi().to_rational();
    m.to_f64()
}
