//! Reference evaluator in fixed-point big-integer arithmetic, independent of
//! MPFR. Values carry 80 decimal digits; results are trusted to 50.

use std::cmp::Ordering;
use std::sync::OnceLock;

use hypercert::expr::{BinOp, Expr};
use hypercert::interval::{Elementary, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

const DIGITS: u32 = 80;

fn scale() -> &'static BigInt {
    static S: OnceLock<BigInt> = OnceLock::new();
    S.get_or_init(|| BigInt::from(10u32).pow(DIGITS))
}

/// `self.0 / 10^80`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Fixed(pub BigInt);

fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    let (q, r) = n.div_mod_floor(d);
    if (r * 2u32).abs() >= d.abs() {
        q + 1
    } else {
        q
    }
}

impl Fixed {
    pub fn from_int(n: i64) -> Fixed {
        Fixed(BigInt::from(n) * scale())
    }

    pub fn from_ratio(num: &BigInt, den: &BigInt) -> Fixed {
        Fixed(round_div(&(num * scale()), den))
    }

    /// Exact value of a scalar, rounded to the fixed grid.
    pub fn from_scalar(x: &Scalar) -> Fixed {
        let q = x.to_rational();
        let num: BigInt = q.numer().to_string().parse().unwrap();
        let den: BigInt = q.denom().to_string().parse().unwrap();
        Fixed::from_ratio(&num, &den)
    }

    /// Decimal literal such as `0.15`, `2`, `1e-4`.
    pub fn from_decimal(text: &str) -> Option<Fixed> {
        let (mantissa, exponent) = match text.split_once(['e', 'E']) {
            Some((m, e)) => (m, e.parse::<i32>().ok()?),
            None => (text, 0),
        };
        let (int, frac) = mantissa.split_once('.').unwrap_or((mantissa, ""));
        let digits: BigInt = format!("{int}{frac}").parse().ok()?;
        let shift = exponent - frac.len() as i32;
        let ten = BigInt::from(10u32);
        Some(if shift >= 0 {
            Fixed::from_ratio(&(digits * ten.pow(shift as u32)), &BigInt::one())
        } else {
            Fixed::from_ratio(&digits, &ten.pow((-shift) as u32))
        })
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn add(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 + &o.0)
    }

    pub fn sub(&self, o: &Fixed) -> Fixed {
        Fixed(&self.0 - &o.0)
    }

    pub fn neg(&self) -> Fixed {
        Fixed(-&self.0)
    }

    pub fn mul(&self, o: &Fixed) -> Fixed {
        Fixed(round_div(&(&self.0 * &o.0), scale()))
    }

    pub fn div(&self, o: &Fixed) -> Option<Fixed> {
        (!o.0.is_zero()).then(|| Fixed(round_div(&(&self.0 * scale()), &o.0)))
    }

    fn half(&self) -> Fixed {
        Fixed(round_div(&self.0, &BigInt::from(2)))
    }

    fn one() -> Fixed {
        Fixed(scale().clone())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_string().parse::<f64>().unwrap() / 1e80
    }

    /// Compares with a scalar exactly: `self - x` in units of 10^-80 against
    /// the exact rational value of `x`.
    pub fn cmp_scalar(&self, x: &Scalar) -> Ordering {
        let q = x.to_rational();
        let num: BigInt = q.numer().to_string().parse().unwrap();
        let den: BigInt = q.denom().to_string().parse().unwrap();
        (&self.0 * &den).cmp(&(num * scale()))
    }
}

fn ln2() -> &'static Fixed {
    static L: OnceLock<Fixed> = OnceLock::new();
    L.get_or_init(|| {
        let third = Fixed::from_ratio(&BigInt::one(), &BigInt::from(3));
        let a = artanh_series(&third);
        a.add(&a)
    })
}

/// `sum z^(2k+1)/(2k+1)`, for `|z| <= 1/2`.
fn artanh_series(z: &Fixed) -> Fixed {
    let z2 = z.mul(z);
    let mut power = z.clone();
    let mut sum = Fixed(BigInt::zero());
    let mut k = 1i64;
    while !power.0.is_zero() {
        sum = sum.add(&Fixed(&power.0 / BigInt::from(k)));
        power = power.mul(&z2);
        k += 2;
    }
    sum
}

pub fn exp(x: &Fixed) -> Option<Fixed> {
    if x.is_negative() {
        return Fixed::one().div(&exp(&x.neg())?);
    }
    if x.0 > BigInt::from(200) * scale() {
        return None;
    }
    // Reduce below 2^-10, sum the series, then square back.
    let mut m = 10u32;
    while x.0 > (scale() << m) >> 10u32 {
        m += 1;
    }
    let r = Fixed(&x.0 >> m);
    let mut term = Fixed::one();
    let mut sum = Fixed::one();
    let mut k = 1i64;
    while !term.0.is_zero() {
        term = Fixed(&term.mul(&r).0 / BigInt::from(k));
        sum = sum.add(&term);
        k += 1;
    }
    for _ in 0..m {
        sum = sum.mul(&sum);
    }
    Some(sum)
}

pub fn ln(x: &Fixed) -> Option<Fixed> {
    if !x.0.is_positive() {
        return None;
    }
    // x = 2^k y with y in [1, 2).
    let mut k: i64 = x.0.bits() as i64 - scale().bits() as i64;
    let mut y = if k >= 0 { Fixed(&x.0 >> k as u64) } else { Fixed(&x.0 << (-k) as u64) };
    while y.0 >= scale() * 2 {
        y = Fixed(&y.0 >> 1u32);
        k += 1;
    }
    while &y.0 < scale() {
        y = Fixed(&y.0 << 1u32);
        k -= 1;
    }
    let z = y.sub(&Fixed::one()).div(&y.add(&Fixed::one()))?;
    let a = artanh_series(&z);
    Some(a.add(&a).add(&Fixed(&ln2().0 * BigInt::from(k))))
}

pub fn sqrt(x: &Fixed) -> Option<Fixed> {
    (!x.is_negative()).then(|| Fixed((&x.0 * scale()).sqrt()))
}

pub fn apply(f: Elementary, x: &Fixed) -> Option<Fixed> {
    let one = Fixed::one();
    match f {
        Elementary::Exp => exp(x),
        Elementary::Ln => ln(x),
        Elementary::Sqrt => sqrt(x),
        // Work with |x| so the large exponential carries the digits.
        Elementary::Cosh => {
            let e = exp(&Fixed(x.0.abs()))?;
            Some(e.add(&one.div(&e)?).half())
        }
        Elementary::Sinh => {
            if x.0.abs() < scale() / 8 {
                return Some(sinh_series(x));
            }
            let e = exp(&Fixed(x.0.abs()))?;
            let s = e.sub(&one.div(&e)?).half();
            Some(if x.is_negative() { s.neg() } else { s })
        }
        Elementary::Tanh => {
            if x.0.abs() < scale() / 8 {
                let s = sinh_series(x);
                let c = sqrt(&one.add(&s.mul(&s)))?;
                return s.div(&c);
            }
            // tanh x = (1 - e^{-2x}) / (1 + e^{-2x}), stable for large |x|.
            let e = exp(&x.add(x).neg())?;
            one.sub(&e).div(&one.add(&e))
        }
        Elementary::Arcosh => {
            if x < &one {
                return None;
            }
            ln(&x.add(&sqrt(&x.mul(x).sub(&one))?))
        }
        Elementary::Artanh => {
            if x.0.abs() >= *scale() {
                return None;
            }
            if x.0.abs() <= scale() / 2 {
                return Some(artanh_series(x));
            }
            Some(ln(&one.add(x).div(&one.sub(x))?)?.half())
        }
    }
}

fn sinh_series(x: &Fixed) -> Fixed {
    let x2 = x.mul(x);
    let mut term = x.clone();
    let mut sum = x.clone();
    let mut k = 2i64;
    while !term.0.is_zero() {
        term = Fixed(&term.mul(&x2).0 / BigInt::from(k * (k + 1)));
        sum = sum.add(&term);
        k += 2;
    }
    sum
}

/// Evaluates `e` with every variable set to `x`. `None` outside the domain.
pub fn eval(e: &Expr, x: &Fixed) -> Option<Fixed> {
    Some(match e {
        Expr::Const(text) => Fixed::from_decimal(text)?,
        Expr::Var(_) => x.clone(),
        Expr::Neg(a) => eval(a, x)?.neg(),
        Expr::Call(f, a) => apply(*f, &eval(a, x)?)?,
        Expr::Binary(op, a, b) => {
            let (a, b) = (eval(a, x)?, eval(b, x)?);
            match op {
                BinOp::Add => a.add(&b),
                BinOp::Sub => a.sub(&b),
                BinOp::Mul => a.mul(&b),
                BinOp::Div => a.div(&b)?,
            }
        }
        Expr::Pow(a, n) => {
            let base = eval(a, x)?;
            let mut acc = Fixed::one();
            for _ in 0..n.unsigned_abs() {
                acc = acc.mul(&base);
            }
            if *n < 0 {
                Fixed::one().div(&acc)?
            } else {
                acc
            }
        }
    })
}

/// Tolerance for trusting 50 significant digits of `v`.
pub fn tolerance(v: &Fixed) -> Fixed {
    let unit = BigInt::from(10u32).pow(DIGITS - 50);
    let magnitude = v.0.abs() / scale();
    Fixed(unit * (magnitude + 1u32))
}

/// `lo - tol <= v <= hi + tol`, with the comparison done exactly.
pub fn within(v: &Fixed, lo: &Scalar, hi: &Scalar) -> bool {
    let tol = tolerance(v);
    v.add(&tol).cmp_scalar(lo) != Ordering::Less && v.sub(&tol).cmp_scalar(hi) != Ordering::Greater
}
