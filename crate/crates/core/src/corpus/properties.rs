//! Sampling and exact checks that back the corpus items which are not, or
//! not only, certified by bisection.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::Rational;
use serde::{Deserialize, Serialize};

use super::{L1_STATEMENT, L2_STATEMENT, RATIO, T1_STATEMENT, T2_STATEMENT, T3_STATEMENT};
use crate::expr::{parse_relation, Binding, EvalError, Expr, PointBinding};
use crate::interval::{Elementary, Interval, Scalar};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub name: String,
    pub cases: usize,
    pub seed: u64,
    pub precision: u32,
    pub failures: Vec<String>,
}

impl PropertyReport {
    pub fn new(name: impl Into<String>, cases: usize, seed: u64, precision: u32, failures: Vec<String>) -> Self {
        PropertyReport { name: name.into(), cases, seed, precision, failures }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn summary(&self) -> String {
        let verdict = if self.passed() { "pass" } else { "FAIL" };
        format!("{}: {verdict} ({} cases, {} failures)", self.name, self.cases, self.failures.len())
    }
}

/// Uniform on `(lo, hi]`.
pub(crate) fn sample_open_closed(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    hi - rng.random_range(0.0..(hi - lo))
}

pub(crate) fn point(e: &Expr, var: &str, x: f64, precision: u32) -> Result<Interval, EvalError> {
    e.eval_at(var, &Interval::from_f64(x), precision)
}

fn relation(text: &str) -> (Expr, Expr) {
    parse_relation(text).expect("corpus statements parse")
}

/// True when both sides evaluate and `upper(lhs) < lower(rhs)`.
fn separated(lhs: &Expr, rhs: &Expr, binding: &Binding, precision: u32) -> bool {
    match (lhs.eval_interval(binding, precision), rhs.eval_interval(binding, precision)) {
        (Ok(a), Ok(b)) => a.hi() < b.lo(),
        _ => false,
    }
}

fn points(pairs: &[(&str, f64)]) -> Binding {
    pairs.iter().map(|(v, x)| (v.to_string(), Interval::from_f64(*x))).collect()
}

/// `tanh x tanh y < tanh(x tanh y)` at `n` random points of `(0, 20]^2`,
/// each with separated enclosures.
pub fn l1_sampling(n: usize, seed: u64, precision: u32) -> PropertyReport {
    let (lhs, rhs) = relation(L1_STATEMENT);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<(f64, f64)> =
        (0..n).map(|_| (sample_open_closed(&mut rng, 0.0, 20.0), sample_open_closed(&mut rng, 0.0, 20.0))).collect();
    let failures = samples
        .par_iter()
        .filter(|&&(x, y)| !separated(&lhs, &rhs, &points(&[("x", x), ("y", y)]), precision))
        .map(|(x, y)| format!("x = {x:e}, y = {y:e}"))
        .collect();
    PropertyReport::new("L1 sampling on (0,20]^2", n, seed, precision, failures)
}

/// Random instances of the L2 sign condition with `x` in `(1, 20]` and `K`
/// in `(0, 1)`, each mapped by `u = arcosh x`, `v = artanh K` to an instance
/// of L1. Both instances must have separated enclosures.
pub fn l2_to_l1(n: usize, seed: u64, precision: u32) -> PropertyReport {
    let (l2_lhs, l2_rhs) = relation(L2_STATEMENT);
    let (l1_lhs, l1_rhs) = relation(L1_STATEMENT);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<(f64, f64)> = (0..n)
        .map(|_| {
            let x = sample_open_closed(&mut rng, 1.0, 20.0);
            let k = loop {
                let k = rng.random_range(0.0..1.0);
                if k > 0.0 {
                    break k;
                }
            };
            (x, k)
        })
        .collect();
    let failures = samples
        .par_iter()
        .filter_map(|&(x, k)| {
            if !separated(&l2_lhs, &l2_rhs, &points(&[("x", x), ("K", k)]), precision) {
                return Some(format!("x = {x:e}, K = {k:e}: sign condition not separated"));
            }
            let u = Interval::from_f64(x).apply(Elementary::Arcosh, precision);
            let v = Interval::from_f64(k).apply(Elementary::Artanh, precision);
            let (Ok(u), Ok(v)) = (u, v) else {
                return Some(format!("x = {x:e}, K = {k:e}: substitution failed"));
            };
            let image: Binding = [("x".to_string(), u), ("y".to_string(), v)].into_iter().collect();
            (!separated(&l1_lhs, &l1_rhs, &image, precision))
                .then(|| format!("x = {x:e}, K = {k:e}: mapped instance not separated"))
        })
        .collect();
    PropertyReport::new("L2 to L1 reduction", n, seed, precision, failures)
}

/// `ln 2 + u < arcosh(2 cosh u)` at `n` random points of `(0, 20]`.
pub fn ch_sampling(n: usize, seed: u64, precision: u32) -> PropertyReport {
    let lhs: Expr = "u + ln(2)".parse().expect("parses");
    let rhs: Expr = "arcosh(2*cosh(u))".parse().expect("parses");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<f64> = (0..n).map(|_| sample_open_closed(&mut rng, 0.0, 20.0)).collect();
    let failures = samples
        .par_iter()
        .filter(|&&u| !separated(&lhs, &rhs, &points(&[("u", u)]), precision))
        .map(|u| format!("u = {u:e}"))
        .collect();
    PropertyReport::new("CH sampling on (0,20]", n, seed, precision, failures)
}

/// Taylor coefficients of artanh up to `t^(2 k_max + 1)`, exactly.
///
/// They come from integrating the series of the derivative `1/(1 - t^2)`,
/// whose coefficients `a_n` satisfy `a_n - a_(n-2) = [n = 0]`.
pub fn artanh_coefficients(k_max: usize) -> Vec<Rational> {
    let len = 2 * k_max + 2;
    let mut derivative = vec![Rational::new(); len];
    for n in 0..len {
        derivative[n] = if n == 0 {
            Rational::from(1)
        } else if n >= 2 {
            derivative[n - 2].clone()
        } else {
            Rational::new()
        };
    }
    let mut series = vec![Rational::new(); len];
    for n in 1..len {
        series[n] = &derivative[n - 1] / Rational::from(n as u32);
    }
    series
}

/// The artanh series has the coefficient `1/(2k+1)` at `t^(2k+1)`, zero at
/// even powers, and its partial sums plus the geometric remainder bound
/// enclose `artanh t` at sample points.
pub fn artanh_series(k_max: usize, precision: u32) -> PropertyReport {
    let c = artanh_coefficients(k_max);
    let mut failures = Vec::new();
    for (n, coeff) in c.iter().enumerate() {
        if n % 2 == 0 {
            if *coeff != 0 {
                failures.push(format!("t^{n}: expected 0, got {coeff}"));
            }
        } else if *coeff != (1, n as u32) || *coeff < 0 {
            failures.push(format!("t^{n}: expected 1/{n}, got {coeff}"));
        }
    }
    let checks = [(1u32, 2u32), (1, 4), (9, 10)];
    for (num, den) in checks {
        let t = Rational::from((num, den));
        let mut sum = Rational::new();
        // c[0] = 0, so the sum starts at t^1.
        let mut power = t.clone();
        for coeff in c.iter().skip(1) {
            sum += Rational::from(coeff * &power);
            power *= &t;
        }
        // `power` is now t^(2 k_max + 2); the remainder is at most
        // t^(2 k_max + 3) / ((2 k_max + 3)(1 - t^2)).
        let next = 2 * k_max as u32 + 3;
        let remainder =
            Rational::from(&power * &t) / Rational::from(next) / (Rational::from(1) - Rational::from(&t * &t));
        let lo = Scalar::from_rational(&sum, precision, rug::float::Round::Down);
        let hi = Scalar::from_rational(&(sum.clone() + remainder), precision, rug::float::Round::Up);
        let partial = Interval::new(lo, hi).expect("ordered");
        let exact = Interval::new(
            Scalar::from_rational(&t, precision, rug::float::Round::Down),
            Scalar::from_rational(&t, precision, rug::float::Round::Up),
        )
        .expect("ordered")
        .apply(Elementary::Artanh, precision);
        match exact {
            Ok(v) if v.overlaps(&partial) => {}
            _ => failures.push(format!("t = {num}/{den}: partial sum does not enclose artanh t")),
        }
    }
    PropertyReport::new("artanh series coefficients", c.len() + checks.len(), 0, precision, failures)
}

/// The three forms of the theorem at `n` random `u` in `(0, 5]`: the `t`
/// form under `t = cosh u`, the `c` form under `c = tanh u`, and the `u`
/// form itself. Left sides must pairwise overlap, right sides likewise, and
/// `exp(c artanh c)` must overlap `exp(c arcosh(1/sqrt(1 - c^2)))`.
pub fn metamorphic_equivalence_check(n: usize, precision: u32, seed: u64) -> PropertyReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let samples: Vec<f64> = (0..n).map(|_| sample_open_closed(&mut rng, 0.0, 5.0)).collect();
    let failures = samples.par_iter().filter_map(|&u| metamorphic_case(u, precision).err()).collect();
    PropertyReport::new("metamorphic equivalence of the three forms", n, seed, precision, failures)
}

/// One metamorphic case; `Err` describes the first disagreement.
pub fn metamorphic_case(u: f64, precision: u32) -> Result<(), String> {
    let cosh_u: Expr = "cosh(u)".parse().expect("parses");
    let tanh_u: Expr = "tanh(u)".parse().expect("parses");
    let (l1, r1) = relation(T1_STATEMENT);
    let (l2, r2) = relation(T2_STATEMENT);
    let (l3, r3) = relation(T3_STATEMENT);
    let r2_alt: Expr = "exp(c*arcosh(1/sqrt(1 - c^2)))".parse().expect("parses");

    let lhs = [l1.substitute("t", &cosh_u), l2.substitute("c", &tanh_u), l3];
    let rhs = [r1.substitute("t", &cosh_u), r2.substitute("c", &tanh_u), r3, r2_alt.substitute("c", &tanh_u)];
    let at: PointBinding = [("u".to_string(), Scalar::from_f64(u))].into_iter().collect();
    let eval = |e: &Expr| e.eval_point(&at, precision).map_err(|err| format!("u = {u:e}: {err}"));
    let lhs: Vec<Interval> = lhs.iter().map(eval).collect::<Result<_, _>>()?;
    let rhs: Vec<Interval> = rhs.iter().map(eval).collect::<Result<_, _>>()?;
    for (side, values) in [("left", &lhs), ("right", &rhs)] {
        for i in 0..values.len() {
            for j in i + 1..values.len() {
                if !values[i].overlaps(&values[j]) {
                    return Err(format!("u = {u:e}: {side} sides of forms {} and {} disagree", i + 1, j + 1));
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitRow {
    pub u: String,
    /// Enclosure of `2^(tanh u - 1)`.
    pub lower: Interval,
    /// Enclosure of the ratio `f(u)`.
    pub f: Interval,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitReport {
    pub rows: Vec<LimitRow>,
    pub report: PropertyReport,
}

/// At `u` = 5, 10, 20: `2^(tanh u - 1) < f(u) < 1` with separated
/// enclosures, `1 - 2^(tanh u - 1)` below 7e-5, 3e-9 and 1e-17, and that
/// distance shrinking at least tenfold from one point to the next.
pub fn limit_behavior_check(precision: u32) -> LimitReport {
    let lower: Expr = "exp((tanh(u) - 1)*ln(2))".parse().expect("parses");
    let f: Expr = RATIO.parse().expect("parses");
    let cases: [(&str, (u32, u64)); 3] =
        [("5", (7, 100_000)), ("10", (3, 1_000_000_000)), ("20", (1, 100_000_000_000_000_000))];
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let mut previous_gap: Option<Rational> = None;
    for (u, (num, den)) in cases {
        let x = Interval::from_decimal(u, precision).expect("literal");
        let (lo, fv) = match (lower.eval_at("u", &x, precision), f.eval_at("u", &x, precision)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                failures.push(format!("u = {u}: {e}"));
                continue;
            }
        };
        if lo.hi() >= fv.lo() {
            failures.push(format!("u = {u}: f not separated from 2^(tanh u - 1)"));
        }
        if fv.hi().to_rational() >= 1 {
            failures.push(format!("u = {u}: f not below 1"));
        }
        let gap_hi = Rational::from(1) - lo.lo().to_rational();
        let gap_lo = Rational::from(1) - lo.hi().to_rational();
        if gap_hi > (num, den) {
            failures.push(format!("u = {u}: 1 - 2^(tanh u - 1) exceeds {num}/{den}"));
        }
        if let Some(prev) = previous_gap.take() {
            if Rational::from(&gap_hi * 10u32) > prev {
                failures.push(format!("u = {u}: distance to 1 did not shrink tenfold"));
            }
        }
        previous_gap = Some(gap_lo);
        rows.push(LimitRow { u: u.to_string(), lower: lo, f: fv });
    }
    LimitReport { rows, report: PropertyReport::new("limit behaviour at u = 5, 10, 20", 3, 0, precision, failures) }
}
