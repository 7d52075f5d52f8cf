//! Validated interval numerics for certifying strict inequalities between
//! hyperbolic, inverse hyperbolic and exponential expressions.
//!
//! The crate is layered:
//!
//! * [`interval`]: outward-rounded multiprecision intervals and the
//!   elementary-function vocabulary.
//! * [`expr`]: a small expression grammar and interval evaluators.
//! * [`prover`]: adaptive bisection that certifies `lhs < rhs` on a box and
//!   emits re-checkable certificates.
//! * [`minimize`]: certified branch-and-bound infima and scan tables.
//! * [`corpus`]: the shipped inequality corpus, analytic tail reductions and
//!   the full half-line compositions.
//! * [`certfile`]: the versioned text format all results are written in.
//!
//! ```
//! use hypercert::expr::{Binding, Expr};
//! use hypercert::interval::Interval;
//!
//! let e: Expr = "cosh(u)^2 - sinh(u)^2".parse().unwrap();
//! let mut binding = Binding::new();
//! binding.insert("u".into(), Interval::from_decimal_bounds("0", "2", 64).unwrap());
//! // Naive interval evaluation overestimates, but always contains 1.
//! let enclosure = e.eval_interval(&binding, 64).unwrap();
//! assert!(enclosure.contains(&Interval::from_i64(1)));
//! ```

pub mod certfile;
pub mod corpus;
pub mod expr;
pub mod interval;
pub mod minimize;
pub mod prover;

/// Re-exported so callers can name rounding modes and exact rationals.
pub use rug;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../README.md")]
    mod readme {}
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/intervals.md")]
    mod intervals {}
    #[doc = include_str!("../../../book/src/expressions.md")]
    mod expressions {}
    #[doc = include_str!("../../../book/src/prover.md")]
    mod prover {}
    #[doc = include_str!("../../../book/src/minimize.md")]
    mod minimize {}
    #[doc = include_str!("../../../book/src/tails.md")]
    mod tails {}
    #[doc = include_str!("../../../book/src/corpus.md")]
    mod corpus {}
    #[doc = include_str!("../../../book/src/certificates.md")]
    mod certificates {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
