use std::fmt::Write as _;

use rayon::prelude::*;
use rug::float::Round;
use rug::{Integer, Rational};

use super::{side, univariate, MinimizeError};
use crate::expr::Expr;
use crate::interval::{Interval, Scalar};
use crate::prover::Region;

#[derive(Debug, Clone, PartialEq)]
pub struct ScanRow {
    /// The exact sample point.
    pub u: Rational,
    /// Enclosure of the value at `u`, or the evaluation error.
    pub value: Result<Interval, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanTable {
    pub var: String,
    pub precision: u32,
    pub rows: Vec<ScanRow>,
}

/// Evaluates `e` at `n` equally spaced points of `domain`, both ends
/// included. A point where evaluation fails gives an invalid row rather than
/// an error.
pub fn scan(e: &Expr, domain: &Region, n: usize, precision: u32) -> Result<ScanTable, MinimizeError> {
    if n < 2 {
        return Err(MinimizeError::TooFewPoints(n));
    }
    let var = univariate(e, domain)?;
    let iv = side(domain);
    let (lo, hi) = (iv.lo().to_rational(), iv.hi().to_rational());
    let step = Rational::from(&hi - &lo) / Integer::from(n - 1);
    let rows = (0..n)
        .into_par_iter()
        .map(|i| {
            let u = if i == n - 1 { hi.clone() } else { &lo + Rational::from(&step * Integer::from(i)) };
            let x = Interval::new(
                Scalar::from_rational(&u, precision, Round::Down),
                Scalar::from_rational(&u, precision, Round::Up),
            )
            .expect("rounding brackets the point");
            let value = e.eval_at(&var, &x, precision).map_err(|err| err.to_string());
            ScanRow { u, value }
        })
        .collect();
    Ok(ScanTable { var, precision, rows })
}

impl ScanTable {
    /// Fractional digits printed for enclosure endpoints: enough to show
    /// every bit of the working precision.
    pub fn digits(&self) -> u32 {
        (self.precision as f64 * std::f64::consts::LOG10_2).ceil() as u32 + 2
    }

    /// Header `u,lo,hi`; `lo` rounded down and `hi` rounded up. Invalid rows
    /// read `invalid` in both value columns.
    pub fn to_csv(&self) -> String {
        let digits = self.digits();
        let mut out = String::from("u,lo,hi\n");
        for row in &self.rows {
            let u = decimal(&row.u, digits);
            match &row.value {
                Ok(v) => {
                    let lo = v.lo().to_decimal(digits, Round::Down);
                    let hi = v.hi().to_decimal(digits, Round::Up);
                    writeln!(out, "{u},{lo},{hi}").unwrap();
                }
                Err(_) => writeln!(out, "{u},invalid,invalid").unwrap(),
            }
        }
        out
    }

    pub fn invalid_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.value.is_err()).count()
    }
}

/// Shortest exact decimal when one exists within `digits` fractional
/// digits, otherwise rounded to nearest at `digits`.
fn decimal(q: &Rational, digits: u32) -> String {
    let scale = Integer::from(Integer::u_pow_u(10, digits));
    let scaled = Rational::from(q * &scale);
    let (num, den) = scaled.into_numer_denom();
    let (quot, rem) = num.div_rem_round(den);
    let exact = rem == 0;
    let negative = quot < 0;
    let body = quot.abs().to_string();
    let width = digits as usize + 1;
    let body = format!("{body:0>width$}");
    let (int_part, frac) = body.split_at(body.len() - digits as usize);
    let frac = if exact { frac.trim_end_matches('0') } else { frac };
    let sign = if negative { "-" } else { "" };
    if frac.is_empty() {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal(&Rational::from((1, 100)), 20), "0.01");
        assert_eq!(decimal(&Rational::from(6), 20), "6");
        assert_eq!(decimal(&Rational::from((-3, 2)), 5), "-1.5");
        assert_eq!(decimal(&Rational::from((1, 3)), 5), "0.33333");
    }

    #[test]
    fn endpoints_included_and_spacing_exact() {
        let e: Expr = "u^2".parse().unwrap();
        let t = scan(&e, &Region::univariate("u", "0", "6").unwrap(), 601, 64).unwrap();
        assert_eq!(t.rows.len(), 601);
        assert_eq!(t.rows[0].u, 0);
        assert_eq!(t.rows[600].u, 6);
        assert_eq!(t.rows[37].u, Rational::from((37, 100)));
        let csv = t.to_csv();
        let zero = format!("0.{}", "0".repeat(t.digits() as usize));
        assert!(csv.starts_with(&format!("u,lo,hi\n0,{zero},{zero}\n0.01,")));
        assert_eq!(csv.lines().count(), 602);
    }

    #[test]
    fn invalid_rows_are_marked() {
        let e: Expr = "ln(u)".parse().unwrap();
        let t = scan(&e, &Region::univariate("u", "0", "1").unwrap(), 3, 64).unwrap();
        assert_eq!(t.invalid_rows(), 1);
        assert!(t.to_csv().contains("\n0,invalid,invalid\n"));
    }

    #[test]
    fn needs_two_points() {
        let e: Expr = "u".parse().unwrap();
        assert_eq!(
            scan(&e, &Region::univariate("u", "0", "1").unwrap(), 1, 64).unwrap_err(),
            MinimizeError::TooFewPoints(1)
        );
    }
}
