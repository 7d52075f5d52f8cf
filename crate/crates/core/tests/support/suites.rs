//! Containment and inclusion monotonicity of interval evaluation over
//! random expressions, checked against the reference evaluator.

use hypercert::expr::{BinOp, Expr};
use hypercert::interval::{Elementary, Interval, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::oracle::{self, Fixed};

const PRECISIONS: [u32; 3] = [53, 64, 128];

fn random_expr(rng: &mut ChaCha8Rng, depth: u32) -> Expr {
    if depth == 0 || rng.random_bool(0.25) {
        return if rng.random_bool(0.7) {
            Expr::var("u")
        } else {
            Expr::constant(["0.5", "2", "3", "0.1", "1e-3"][rng.random_range(0..5)])
        };
    }
    match rng.random_range(0..10) {
        0..=3 => {
            let f = Elementary::ALL[rng.random_range(0..Elementary::ALL.len())];
            Expr::call(f, random_expr(rng, depth - 1))
        }
        4..=7 => {
            let op = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div][rng.random_range(0..4)];
            Expr::binary(op, random_expr(rng, depth - 1), random_expr(rng, depth - 1))
        }
        8 => Expr::pow(random_expr(rng, depth - 1), rng.random_range(-3..=4)),
        _ => Expr::Neg(Box::new(random_expr(rng, depth - 1))),
    }
}

/// An interval of random centre in [-4, 4] and width between 1e-12 and 2.
fn random_interval(rng: &mut ChaCha8Rng) -> (f64, f64) {
    let c: f64 = rng.random_range(-4.0..4.0);
    let w = 10f64.powf(rng.random_range(-12.0..0.3));
    (c - w / 2.0, c + w / 2.0)
}

fn interval(a: f64, b: f64) -> Interval {
    Interval::new(Scalar::from_f64(a), Scalar::from_f64(b)).unwrap()
}

/// Checks `cases` random expression/box pairs: the interval result, and
/// the point result at sampled points, must enclose the reference value.
pub fn containment(cases: usize, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut checked, mut attempts) = (0, 0);
    while checked < cases {
        attempts += 1;
        if attempts > 50 * cases {
            return Err("too few evaluable cases".into());
        }
        let e = random_expr(&mut rng, 3);
        let (a, b) = random_interval(&mut rng);
        let prec = PRECISIONS[rng.random_range(0..3)];
        let Ok(y) = e.eval_at("u", &interval(a, b), prec) else { continue };
        let t: f64 = rng.random();
        let mut points = vec![a, b, a + t * (b - a)];
        points.retain(|p| (a..=b).contains(p));
        let mut any = false;
        for p in points {
            let Some(v) = oracle::eval(&e, &Fixed::from_scalar(&Scalar::from_f64(p))) else { continue };
            any = true;
            if !oracle::within(&v, y.lo(), y.hi()) {
                return Err(format!("{e} on [{a:e}, {b:e}] at {prec} bits: {y} misses value {} at {p:e}", v.to_f64()));
            }
            // The point evaluation must enclose the same value.
            if let Ok(yp) = e.eval_at("u", &interval(p, p), prec) {
                if !oracle::within(&v, yp.lo(), yp.hi()) {
                    return Err(format!("{e} at {p:e}: {yp} misses {}", v.to_f64()));
                }
            }
        }
        if any {
            checked += 1;
        }
    }
    Ok(())
}

/// Checks `cases` random nested box pairs: the inner result must lie inside
/// the outer one.
pub fn inclusion_monotonicity(cases: usize, seed: u64) -> Result<(), String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut checked, mut attempts) = (0, 0);
    while checked < cases {
        attempts += 1;
        if attempts > 50 * cases {
            return Err("too few evaluable cases".into());
        }
        let e = random_expr(&mut rng, 3);
        let (a, b) = random_interval(&mut rng);
        let (s, t): (f64, f64) = (rng.random(), rng.random());
        let (c, d) = (a + s.min(t) * (b - a), a + s.max(t) * (b - a));
        if !(a <= c && c <= d && d <= b) {
            continue;
        }
        let prec = PRECISIONS[rng.random_range(0..3)];
        let Ok(outer) = e.eval_at("u", &interval(a, b), prec) else { continue };
        let inner = match e.eval_at("u", &interval(c, d), prec) {
            Ok(inner) => inner,
            // A sub-box may only fail where the enclosing box also touches
            // a singularity, which the outer evaluation would have reported.
            Err(err) => {
                return Err(format!("{e}: outer [{a:e}, {b:e}] evaluates but inner [{c:e}, {d:e}] fails: {err}"))
            }
        };
        if !inner.is_subset_of(&outer) {
            return Err(format!("{e} at {prec} bits: [{c:e}, {d:e}] -> {inner} not inside [{a:e}, {b:e}] -> {outer}"));
        }
        checked += 1;
    }
    Ok(())
}
