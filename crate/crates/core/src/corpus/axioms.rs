//! The axiom ledger: textbook facts the tail reductions rely on, each with a
//! one-line proof and a sampling check.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::properties::{point, sample_open_closed, PropertyReport};
use crate::expr::Expr;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AxiomCheck {
    /// `lhs(u) < rhs(u)` (or `<=` when not strict) for `u` in `(lo, hi]`.
    Below { lhs: &'static str, rhs: &'static str, strict: bool, lo: f64, hi: f64 },
    /// Both sides agree: their enclosures overlap for `u` in `(lo, hi]`.
    Equal { lhs: &'static str, rhs: &'static str, lo: f64, hi: f64 },
    /// `expr(a) < expr(b)` whenever `lo <= a < b <= hi`.
    Increasing { expr: &'static str, lo: f64, hi: f64 },
    /// `expr(a) > expr(b)` whenever `lo <= a < b <= hi`.
    Decreasing { expr: &'static str, lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axiom {
    pub id: &'static str,
    pub statement: &'static str,
    pub proof: &'static str,
    pub check: AxiomCheck,
}

pub const AXIOMS: &[Axiom] = &[
    Axiom {
        id: "cosh-gaussian",
        statement: "cosh z <= exp(z^2/2)",
        proof: "Compare the series termwise: (2k)! >= 2^k k!.",
        check: AxiomCheck::Below { lhs: "cosh(u)", rhs: "exp(u^2/2)", strict: true, lo: 0.0, hi: 10.0 },
    },
    Axiom {
        id: "tanh-below-identity",
        statement: "tanh u < u for u > 0",
        proof: "tanh 0 = 0 and tanh' = 1 - tanh^2 < 1 for u > 0.",
        check: AxiomCheck::Below { lhs: "tanh(u)", rhs: "u", strict: true, lo: 0.0, hi: 20.0 },
    },
    Axiom {
        id: "sinh-above-identity",
        statement: "sinh u > u for u > 0",
        proof: "sinh 0 = 0 and sinh' = cosh > 1 for u > 0.",
        check: AxiomCheck::Below { lhs: "u", rhs: "sinh(u)", strict: true, lo: 0.0, hi: 20.0 },
    },
    Axiom {
        id: "log1p-below",
        statement: "ln(1 + y) <= y for y >= 0",
        proof: "Equality at 0, and the derivative 1/(1 + y) is at most 1.",
        check: AxiomCheck::Below { lhs: "ln(1 + u)", rhs: "u", strict: false, lo: 0.0, hi: 10.0 },
    },
    Axiom {
        id: "arcosh-tangent",
        statement: "arcosh x <= arcosh 2 + (x - 2)/sqrt(3) for x >= 1",
        proof: "arcosh is concave on [1, oo) and its slope at 2 is 1/sqrt(3).",
        check: AxiomCheck::Below {
            lhs: "arcosh(u)",
            rhs: "arcosh(2) + (u - 2)/sqrt(3)",
            strict: false,
            lo: 1.0,
            hi: 20.0,
        },
    },
    Axiom {
        id: "decay-monotone",
        statement: "u exp(-2u) is decreasing for u >= 1/2",
        proof: "Its derivative is (1 - 2u) exp(-2u).",
        check: AxiomCheck::Decreasing { expr: "u*exp(-2*u)", lo: 0.5, hi: 20.0 },
    },
    Axiom {
        id: "arcosh-upper",
        statement: "arcosh(2 cosh u) <= u + ln 2 + exp(-2u) for u >= 0",
        proof: "arcosh w <= ln(2w), and ln(4 cosh u) = u + ln 2 + ln(1 + exp(-2u)).",
        check: AxiomCheck::Below {
            lhs: "arcosh(2*cosh(u))",
            rhs: "u + ln(2) + exp(-2*u)",
            strict: false,
            lo: 0.0,
            hi: 20.0,
        },
    },
    Axiom {
        id: "arcosh-lower",
        statement: "arcosh(2 cosh u) > u + ln 2 for u >= 0",
        proof: "sqrt(4 cosh^2 u - 1) > 2 sinh u, so 2 cosh u + sqrt(4 cosh^2 u - 1) > 2 exp(u).",
        check: AxiomCheck::Below { lhs: "u + ln(2)", rhs: "arcosh(2*cosh(u))", strict: true, lo: 0.0, hi: 20.0 },
    },
    Axiom {
        id: "cosh-exp-form",
        statement: "cosh z = exp(z) (1 + exp(-2z))/2",
        proof: "Definition of cosh.",
        check: AxiomCheck::Equal { lhs: "cosh(u)", rhs: "exp(u)*(1 + exp(-2*u))/2", lo: -10.0, hi: 10.0 },
    },
    Axiom {
        id: "tanh-complement",
        statement: "1 - tanh u >= 2 exp(-2u) (1 - exp(-2u))",
        proof: "1 - tanh u = 2x/(1 + x) with x = exp(-2u), and 1/(1 + x) >= 1 - x.",
        check: AxiomCheck::Below {
            lhs: "2*exp(-2*u)*(1 - exp(-2*u))",
            rhs: "1 - tanh(u)",
            strict: false,
            lo: 0.0,
            hi: 20.0,
        },
    },
    Axiom {
        id: "tanh-increasing",
        statement: "tanh is increasing",
        proof: "tanh' = 1 - tanh^2 > 0.",
        check: AxiomCheck::Increasing { expr: "tanh(u)", lo: 0.0, hi: 20.0 },
    },
    Axiom {
        id: "cosh-increasing",
        statement: "cosh is increasing on [0, oo)",
        proof: "cosh' = sinh > 0 for u > 0.",
        check: AxiomCheck::Increasing { expr: "cosh(u)", lo: 0.0, hi: 10.0 },
    },
    Axiom {
        id: "cosh-at-least-one",
        statement: "cosh z >= 1",
        proof: "cosh z = 1 + 2 sinh^2(z/2).",
        check: AxiomCheck::Below { lhs: "1", rhs: "cosh(u)", strict: false, lo: -10.0, hi: 10.0 },
    },
    Axiom {
        id: "cosh-above-half-exp",
        statement: "cosh z > exp(z)/2",
        proof: "The difference is exp(-z)/2.",
        check: AxiomCheck::Below { lhs: "exp(u)/2", rhs: "cosh(u)", strict: true, lo: -10.0, hi: 10.0 },
    },
];

pub fn axiom(id: &str) -> Option<&'static Axiom> {
    AXIOMS.iter().find(|a| a.id == id)
}

fn parse(text: &str) -> Expr {
    text.parse().expect("ledger expressions parse")
}

impl Axiom {
    /// Samples the statement at `n` points (pairs, for monotonicity) and
    /// checks it with enclosures at `precision` bits.
    pub fn check(&self, n: usize, seed: u64, precision: u32) -> PropertyReport {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let failures: Vec<String> = match self.check {
            AxiomCheck::Below { lhs, rhs, strict, lo, hi } => {
                let (l, r) = (parse(lhs), parse(rhs));
                let samples: Vec<f64> = (0..n).map(|_| sample_open_closed(&mut rng, lo, hi)).collect();
                samples
                    .par_iter()
                    .filter_map(|&u| {
                        let ok = match (point(&l, "u", u, precision), point(&r, "u", u, precision)) {
                            (Ok(a), Ok(b)) => {
                                if strict {
                                    a.hi() < b.lo()
                                } else {
                                    a.hi() <= b.lo()
                                }
                            }
                            _ => false,
                        };
                        (!ok).then(|| format!("u = {u:e}"))
                    })
                    .collect()
            }
            AxiomCheck::Equal { lhs, rhs, lo, hi } => {
                let (l, r) = (parse(lhs), parse(rhs));
                let samples: Vec<f64> = (0..n).map(|_| sample_open_closed(&mut rng, lo, hi)).collect();
                samples
                    .par_iter()
                    .filter_map(|&u| {
                        let ok = match (point(&l, "u", u, precision), point(&r, "u", u, precision)) {
                            (Ok(a), Ok(b)) => a.overlaps(&b),
                            _ => false,
                        };
                        (!ok).then(|| format!("u = {u:e}"))
                    })
                    .collect()
            }
            AxiomCheck::Increasing { expr, lo, hi } | AxiomCheck::Decreasing { expr, lo, hi } => {
                let e = parse(expr);
                let increasing = matches!(self.check, AxiomCheck::Increasing { .. });
                let pairs: Vec<(f64, f64)> = (0..n)
                    .map(|_| loop {
                        let a = sample_open_closed(&mut rng, lo, hi);
                        let b = sample_open_closed(&mut rng, lo, hi);
                        if a != b {
                            break (a.min(b), a.max(b));
                        }
                    })
                    .collect();
                pairs
                    .par_iter()
                    .filter_map(|&(a, b)| {
                        let ok = match (point(&e, "u", a, precision), point(&e, "u", b, precision)) {
                            (Ok(x), Ok(y)) => {
                                if increasing {
                                    x.hi() < y.lo()
                                } else {
                                    y.hi() < x.lo()
                                }
                            }
                            _ => false,
                        };
                        (!ok).then(|| format!("a = {a:e}, b = {b:e}"))
                    })
                    .collect()
            }
        };
        PropertyReport::new(format!("axiom {}", self.id), n, seed, precision, failures)
    }
}

/// Runs every ledger entry; seeds are derived from `seed` by entry index.
pub fn axiom_ledger_check(n: usize, seed: u64, precision: u32) -> Vec<PropertyReport> {
    AXIOMS.iter().enumerate().map(|(i, a)| a.check(n, seed.wrapping_add(i as u64), precision)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique_and_expressions_parse() {
        for (i, a) in AXIOMS.iter().enumerate() {
            assert!(AXIOMS[..i].iter().all(|b| b.id != a.id), "{} repeated", a.id);
            match a.check {
                AxiomCheck::Below { lhs, rhs, .. } | AxiomCheck::Equal { lhs, rhs, .. } => {
                    parse(lhs);
                    parse(rhs);
                }
                AxiomCheck::Increasing { expr, .. } | AxiomCheck::Decreasing { expr, .. } => {
                    parse(expr);
                }
            }
        }
    }

    #[test]
    fn a_false_fact_fails_its_check() {
        let wrong = Axiom {
            id: "wrong",
            statement: "u < tanh u",
            proof: "",
            check: AxiomCheck::Below { lhs: "u", rhs: "tanh(u)", strict: true, lo: 0.0, hi: 1.0 },
        };
        assert_eq!(wrong.check(50, 0, 128).failures.len(), 50);
        let wrong = Axiom { check: AxiomCheck::Decreasing { expr: "tanh(u)", lo: 0.0, hi: 1.0 }, ..wrong };
        assert!(!wrong.check(50, 0, 128).passed());
    }

    #[test]
    fn ledger_passes_small_sample() {
        for report in axiom_ledger_check(200, 7, 192) {
            assert!(report.passed(), "{}: {:?}", report.name, report.failures);
        }
    }
}
