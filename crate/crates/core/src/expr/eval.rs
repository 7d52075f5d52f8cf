use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::{BinOp, Expr};
use crate::interval::{Interval, IntervalError, Scalar};

/// Variable name to enclosure.
pub type Binding = BTreeMap<String, Interval>;

/// Variable name to exact point.
pub type PointBinding = BTreeMap<String, Scalar>;

/// Child indices from the root to a node; `/` is the root.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodePath(pub Vec<usize>);

impl fmt::Display for NodePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("/");
        }
        for i in &self.0 {
            write!(f, "/{i}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("unbound variable {0:?}")]
    UnboundVariable(String),
    #[error("at node {path} `{node}`: {source}")]
    Node {
        path: NodePath,
        node: String,
        #[source]
        source: IntervalError,
    },
}

impl EvalError {
    pub fn is_domain_violation(&self) -> bool {
        matches!(
            self,
            EvalError::Node {
                source: IntervalError::DomainViolation { .. } | IntervalError::DivisionByIntervalContainingZero { .. },
                ..
            }
        )
    }

    pub fn is_overflow(&self) -> bool {
        matches!(self, EvalError::Node { source: IntervalError::OverflowRange { .. }, .. })
    }
}

struct Evaluator<'a> {
    binding: &'a Binding,
    precision: u32,
    path: Vec<usize>,
}

impl Evaluator<'_> {
    fn fail(&self, node: &Expr, source: IntervalError) -> EvalError {
        EvalError::Node { path: NodePath(self.path.clone()), node: node.to_string(), source }
    }

    fn child(&mut self, index: usize, e: &Expr) -> Result<Interval, EvalError> {
        self.path.push(index);
        let out = self.eval(e);
        self.path.pop();
        out
    }

    fn eval(&mut self, e: &Expr) -> Result<Interval, EvalError> {
        let p = self.precision;
        match e {
            Expr::Const(text) => Interval::from_decimal(text, p).map_err(|err| self.fail(e, err)),
            Expr::Var(name) => self.binding.get(name).cloned().ok_or_else(|| EvalError::UnboundVariable(name.clone())),
            Expr::Neg(inner) => Ok(self.child(0, inner)?.neg()),
            Expr::Call(f, arg) => {
                let x = self.child(0, arg)?;
                x.apply(*f, p).map_err(|err| self.fail(e, err))
            }
            Expr::Pow(base, n) => {
                let x = self.child(0, base)?;
                x.powi(*n, p).map_err(|err| self.fail(e, err))
            }
            Expr::Binary(op, l, r) => {
                let a = self.child(0, l)?;
                let b = self.child(1, r)?;
                let out = match op {
                    BinOp::Add => a.add(&b, p),
                    BinOp::Sub => a.sub(&b, p),
                    BinOp::Mul => a.mul(&b, p),
                    BinOp::Div => a.div(&b, p),
                };
                out.map_err(|err| self.fail(e, err))
            }
        }
    }
}

impl Expr {
    /// Encloses the image of the binding box under this expression, rounding
    /// every intermediate result outward at `precision` bits.
    pub fn eval_interval(&self, binding: &Binding, precision: u32) -> Result<Interval, EvalError> {
        Evaluator { binding, precision, path: Vec::new() }.eval(self)
    }

    /// Encloses the value at an exact point.
    pub fn eval_point(&self, point: &PointBinding, precision: u32) -> Result<Interval, EvalError> {
        let binding: Binding = point.iter().map(|(k, v)| (k.clone(), Interval::point(v.clone()))).collect();
        self.eval_interval(&binding, precision)
    }

    /// Univariate convenience: binds `var` to `x`.
    pub fn eval_at(&self, var: &str, x: &Interval, precision: u32) -> Result<Interval, EvalError> {
        let mut binding = Binding::new();
        binding.insert(var.to_string(), x.clone());
        self.eval_interval(&binding, precision)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const T3_LHS: &str = "cosh(tanh(u)*arcosh(2*cosh(u)))";
    const GAP: &str = "u*tanh(u) - ln(cosh(tanh(u)*arcosh(2*cosh(u))))";
    const RATIO: &str = "cosh(tanh(u)*arcosh(2*cosh(u)))/exp(u*tanh(u))";

    fn at(e: &str, u: &str, precision: u32) -> Interval {
        let e: Expr = e.parse().unwrap();
        e.eval_at("u", &Interval::from_decimal(u, precision).unwrap(), precision).unwrap()
    }

    fn encloses(iv: &Interval, decimal: &str, tol: f64) -> bool {
        let v: f64 = decimal.parse().unwrap();
        iv.lo().to_f64() - tol <= v && v <= iv.hi().to_f64() + tol
    }

    #[test]
    fn lhs_at_zero_is_one() {
        assert_eq!(at(T3_LHS, "0", 64), Interval::from_i64(1));
    }

    #[test]
    fn gap_at_one() {
        let g = at(GAP, "1", 64);
        // 50-digit reference: 0.026269656248912888609502...
        assert!(g.lo().to_f64() <= 0.026_269_656_248_912_89 && 0.026_269_656_248_912_89 <= g.hi().to_f64());
        assert!(g.width(64).to_f64() < 1e-15);
    }

    #[test]
    fn ratio_point_values() {
        let f0 = at(RATIO, "0", 128);
        assert!(f0.contains_point(&Scalar::from_f64(1.0)));
        assert!(f0.width(128).to_f64() <= 1e-30);

        let f1 = at(RATIO, "1", 128);
        assert!(f1.width(128).to_f64() <= 1e-30);
        assert!(encloses(&f1, "0.97407238948425815117543429884209572431904162410213", 1e-16));

        let f10 = at(RATIO, "10", 128);
        assert!(f10.lo().to_f64() > 1.0 - 3e-9);
        assert!(f10.hi().to_f64() < 1.0 || f10.hi() < &Scalar::from_f64(1.0));
    }

    #[test]
    fn ln_on_zero_lower_endpoint_is_domain_violation() {
        let e: Expr = "ln(u)".parse().unwrap();
        let err = e.eval_at("u", &Interval::from_decimal_bounds("0", "1", 64).unwrap(), 64).unwrap_err();
        assert!(err.is_domain_violation());
        match err {
            EvalError::Node { path, node, .. } => {
                assert_eq!(path.to_string(), "/");
                assert_eq!(node, "ln(u)");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn error_path_points_at_offending_node() {
        let e: Expr = "1 + sqrt(u - 2)".parse().unwrap();
        let err = e.eval_at("u", &Interval::from_i64(1), 64).unwrap_err();
        match err {
            EvalError::Node { path, node, .. } => {
                assert_eq!(path.to_string(), "/1");
                assert_eq!(node, "sqrt(u-2)");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unbound_variable() {
        let e: Expr = "x + y".parse().unwrap();
        assert_eq!(e.eval_at("x", &Interval::from_i64(1), 64), Err(EvalError::UnboundVariable("y".into())));
    }

    #[test]
    fn overflow_surfaces_as_error() {
        let e: Expr = "exp(exp(u))".parse().unwrap();
        let err = e.eval_at("u", &Interval::from_i64(100), 64).unwrap_err();
        assert!(err.is_overflow());
    }
}
