//! Expression trees over the hyperbolic/exponential vocabulary.
//!
//! Grammar (ASCII, whitespace-insensitive):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := atom ('^' integer)?
//! atom   := number | name | name '(' expr ')' | '(' expr ')' | '-' factor
//! ```
//!
//! Function names are exactly `exp ln sqrt cosh sinh tanh arcosh artanh`.
//! There is no simplifier: every expression is evaluated as written, with
//! interval arithmetic at each node.

mod eval;
mod parse;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

pub use eval::{Binding, EvalError, NodePath, PointBinding};
pub use parse::{parse_relation, ParseError};

use crate::interval::Elementary;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Expr {
    /// Decimal literal, kept verbatim so conversion happens at evaluation
    /// precision.
    Const(String),
    Var(String),
    Neg(Box<Expr>),
    Call(Elementary, Box<Expr>),
    Binary(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
}

const PREC_NEG: u8 = 3;
const PREC_POW: u8 = 4;
const PREC_ATOM: u8 = 5;

impl Expr {
    pub fn var(name: &str) -> Expr {
        Expr::Var(name.to_string())
    }

    pub fn constant(literal: &str) -> Expr {
        Expr::Const(literal.to_string())
    }

    pub fn call(f: Elementary, arg: Expr) -> Expr {
        Expr::Call(f, Box::new(arg))
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::Binary(op, Box::new(lhs), Box::new(rhs))
    }

    pub fn pow(base: Expr, exponent: i32) -> Expr {
        Expr::Pow(Box::new(base), exponent)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut vars = BTreeSet::new();
        self.collect_vars(&mut vars);
        vars
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Const(_) => {}
            Expr::Var(name) => {
                out.insert(name.clone());
            }
            Expr::Neg(e) | Expr::Call(_, e) | Expr::Pow(e, _) => e.collect_vars(out),
            Expr::Binary(_, l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    /// Replaces every occurrence of `var` by `replacement`. There are no
    /// binders in the grammar, so substitution cannot capture.
    pub fn substitute(&self, var: &str, replacement: &Expr) -> Expr {
        match self {
            Expr::Var(name) if name == var => replacement.clone(),
            Expr::Const(_) | Expr::Var(_) => self.clone(),
            Expr::Neg(e) => Expr::Neg(Box::new(e.substitute(var, replacement))),
            Expr::Call(f, e) => Expr::Call(*f, Box::new(e.substitute(var, replacement))),
            Expr::Pow(e, n) => Expr::Pow(Box::new(e.substitute(var, replacement)), *n),
            Expr::Binary(op, l, r) => {
                Expr::Binary(*op, Box::new(l.substitute(var, replacement)), Box::new(r.substitute(var, replacement)))
            }
        }
    }

    /// Number of nodes in the tree.
    pub fn size(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Var(_) => 1,
            Expr::Neg(e) | Expr::Call(_, e) | Expr::Pow(e, _) => 1 + e.size(),
            Expr::Binary(_, l, r) => 1 + l.size() + r.size(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Const(_) | Expr::Var(_) | Expr::Call(..) => PREC_ATOM,
            Expr::Pow(..) => PREC_POW,
            Expr::Neg(_) => PREC_NEG,
            Expr::Binary(op, ..) => op.precedence(),
        }
    }

    fn write_child(&self, f: &mut fmt::Formatter<'_>, needs_parens: bool) -> fmt::Result {
        if needs_parens {
            write!(f, "({self})")
        } else {
            write!(f, "{self}")
        }
    }
}

/// Renders the canonical, minimally parenthesised form. Parsing the output
/// yields the same tree.
impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Const(text) => f.write_str(text),
            Expr::Var(name) => f.write_str(name),
            Expr::Call(func, arg) => write!(f, "{}({arg})", func.name()),
            Expr::Neg(e) => {
                f.write_str("-")?;
                e.write_child(f, e.precedence() < PREC_NEG)
            }
            Expr::Pow(base, n) => {
                base.write_child(f, base.precedence() < PREC_ATOM)?;
                write!(f, "^{n}")
            }
            Expr::Binary(op, l, r) => {
                let p = op.precedence();
                l.write_child(f, l.precedence() < p)?;
                write!(f, "{}", op.symbol())?;
                r.write_child(f, r.precedence() <= p)
            }
        }
    }
}

impl FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse::parse_expr(s)
    }
}
