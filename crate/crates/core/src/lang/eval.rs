//! Exact instance evaluation of identity expressions.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

use super::ast::{Expr, ExprKind, IdentityAst};
use crate::exact::{ExactError, Weight};
use crate::triangle::{self, TriangleError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("negative exponent {0}")]
    NegativeExponent(i64),
    #[error("{context} must be an integer constant, got {value}")]
    NotInteger { context: &'static str, value: String },
    #[error("integer overflow while evaluating {0}")]
    Overflow(&'static str),
    #[error("missing binding for parameter `{0}`")]
    MissingParam(String),
    #[error(transparent)]
    Triangle(#[from] TriangleError),
}

impl From<ExactError> for EvalError {
    fn from(e: ExactError) -> Self {
        match e {
            ExactError::NegativeExponent(n) => EvalError::NegativeExponent(n),
            other => EvalError::NotInteger {
                context: "weight",
                value: other.to_string(),
            },
        }
    }
}

/// How `fib(i)` is extended to negative `i`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub enum FibConvention {
    /// `F_{-i} = (-1)^(i+1) F_i`, the extension that keeps the recurrence.
    #[default]
    Negafibonacci,
    /// `F_{-i} = F_i`.
    Mirror,
    /// `F_{-i} = 0` for `i > 0`.
    Zero,
}

impl FibConvention {
    pub const ALL: [FibConvention; 3] = [FibConvention::Negafibonacci, FibConvention::Mirror, FibConvention::Zero];

    pub fn name(self) -> &'static str {
        match self {
            FibConvention::Negafibonacci => "negafibonacci",
            FibConvention::Mirror => "mirror",
            FibConvention::Zero => "zero",
        }
    }

    pub fn fib(self, i: i64) -> BigInt {
        match self {
            FibConvention::Negafibonacci => triangle::fib(i),
            _ if i >= 0 => triangle::fib(i),
            FibConvention::Mirror => triangle::fib(-i),
            FibConvention::Zero => BigInt::from(0),
        }
    }
}

impl std::str::FromStr for FibConvention {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FibConvention::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown Fibonacci convention `{s}`"))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct EvalOptions {
    pub fib: FibConvention,
}

pub type Bindings = BTreeMap<String, i64>;

struct Env<'a> {
    params: &'a Bindings,
    indeterminates: &'a [String],
    locals: Vec<(&'a str, i64)>,
    options: EvalOptions,
}

impl<'a> Env<'a> {
    fn lookup(&self, name: &str) -> Option<i64> {
        self.locals
            .iter()
            .rev()
            .find(|(n, _)| *n == name)
            .map(|(_, v)| *v)
            .or_else(|| self.params.get(name).copied())
    }

    fn eval(&mut self, e: &'a Expr) -> Result<Weight, EvalError> {
        Ok(match &e.kind {
            ExprKind::Int(n) => Weight::integer(n.clone()),
            ExprKind::Var(name) => match self.lookup(name) {
                Some(v) => Weight::integer(v),
                None if self.indeterminates.iter().any(|i| i == name) => Weight::var(name),
                None => return Err(EvalError::Unbound(name.clone())),
            },
            ExprKind::Neg(a) => -self.eval(a)?,
            ExprKind::Add(a, b) => self.eval(a)? + self.eval(b)?,
            ExprKind::Sub(a, b) => self.eval(a)? - self.eval(b)?,
            ExprKind::Mul(a, b) => self.eval(a)? * self.eval(b)?,
            ExprKind::Pow(base, exp) => {
                let e = self.index(exp, "exponent")?;
                self.eval(base)?.checked_pow(e)?
            }
            ExprKind::Binom(n, k) => {
                let n = self.index(n, "binomial upper index")?;
                let k = self.index(k, "binomial lower index")?;
                Weight::integer(triangle::binom(n, k)?)
            }
            ExprKind::Fib(i) => {
                let i = self.index(i, "Fibonacci index")?;
                Weight::integer(self.options.fib.fib(i))
            }
            ExprKind::Sum { var, lo, hi, body } => {
                let lo = self.index(lo, "summation bound")?;
                let hi = self.index(hi, "summation bound")?;
                let mut acc = Weight::zero();
                for v in lo..=hi {
                    self.locals.push((var.as_str(), v));
                    let term = self.eval(body);
                    self.locals.pop();
                    acc += &term?;
                }
                acc
            }
        })
    }

    /// Evaluates an integer-valued subexpression, using machine integers when
    /// the subtree allows it.
    fn index(&mut self, e: &'a Expr, context: &'static str) -> Result<i64, EvalError> {
        if let Some(v) = self.fast_index(e, context)? {
            return Ok(v);
        }
        let w = self.eval(e)?;
        let n = w.as_integer().ok_or_else(|| EvalError::NotInteger {
            context,
            value: w.to_string(),
        })?;
        n.to_i64().ok_or(EvalError::Overflow(context))
    }

    fn fast_index(&self, e: &Expr, context: &'static str) -> Result<Option<i64>, EvalError> {
        let overflow = || EvalError::Overflow(context);
        Ok(match &e.kind {
            ExprKind::Int(n) => Some(n.to_i64().ok_or_else(overflow)?),
            ExprKind::Var(name) => self.lookup(name),
            ExprKind::Neg(a) => match self.fast_index(a, context)? {
                Some(x) => Some(x.checked_neg().ok_or_else(overflow)?),
                None => None,
            },
            ExprKind::Add(a, b) | ExprKind::Sub(a, b) | ExprKind::Mul(a, b) => {
                let (Some(x), Some(y)) = (self.fast_index(a, context)?, self.fast_index(b, context)?) else {
                    return Ok(None);
                };
                let r = match &e.kind {
                    ExprKind::Add(..) => x.checked_add(y),
                    ExprKind::Sub(..) => x.checked_sub(y),
                    _ => x.checked_mul(y),
                };
                Some(r.ok_or_else(overflow)?)
            }
            _ => None,
        })
    }
}

pub fn eval_expr(e: &Expr, bindings: &Bindings, indeterminates: &[String]) -> Result<Weight, EvalError> {
    eval_expr_with(e, bindings, indeterminates, EvalOptions::default())
}

pub fn eval_expr_with(
    e: &Expr,
    bindings: &Bindings,
    indeterminates: &[String],
    options: EvalOptions,
) -> Result<Weight, EvalError> {
    let mut env = Env {
        params: bindings,
        indeterminates,
        locals: Vec::new(),
        options,
    };
    env.eval(e)
}

/// Evaluates an expression that must reduce to an integer constant.
pub fn eval_integer(e: &Expr, bindings: &Bindings) -> Result<i64, EvalError> {
    let mut env = Env {
        params: bindings,
        indeterminates: &[],
        locals: Vec::new(),
        options: EvalOptions::default(),
    };
    env.index(e, "integer expression")
}

/// Result of checking one parameter instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceOutcome {
    Holds(Weight),
    Fails {
        lhs: Weight,
        rhs: Weight,
    },
    /// The bindings violate a side constraint; nothing was evaluated.
    Skipped,
}

impl InstanceOutcome {
    pub fn holds(&self) -> bool {
        matches!(self, InstanceOutcome::Holds(_))
    }
}

pub fn constraints_hold(ast: &IdentityAst, bindings: &Bindings) -> Result<bool, EvalError> {
    for p in &ast.params {
        if !bindings.contains_key(p) {
            return Err(EvalError::MissingParam(p.clone()));
        }
    }
    for c in &ast.constraints {
        let a = eval_integer(&c.lhs, bindings)?;
        let b = eval_integer(&c.rhs, bindings)?;
        if !c.op.holds(a, b) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn check_instance(ast: &IdentityAst, bindings: &Bindings) -> Result<InstanceOutcome, EvalError> {
    check_instance_with(ast, bindings, EvalOptions::default())
}

pub fn check_instance_with(
    ast: &IdentityAst,
    bindings: &Bindings,
    options: EvalOptions,
) -> Result<InstanceOutcome, EvalError> {
    if !constraints_hold(ast, bindings)? {
        return Ok(InstanceOutcome::Skipped);
    }
    let lhs = eval_expr_with(&ast.lhs, bindings, &ast.indeterminates, options)?;
    let rhs = eval_expr_with(&ast.rhs, bindings, &ast.indeterminates, options)?;
    Ok(if lhs == rhs {
        InstanceOutcome::Holds(lhs)
    } else {
        InstanceOutcome::Fails { lhs, rhs }
    })
}
