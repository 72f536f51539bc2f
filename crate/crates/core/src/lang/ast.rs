use std::collections::BTreeSet;

use num_bigint::BigInt;

/// Byte range in the source text.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

impl Span {
    pub fn new(start: usize, end: usize) -> Self {
        Span { start, end }
    }

    pub fn join(self, other: Span) -> Span {
        Span::new(self.start.min(other.start), self.end.max(other.end))
    }
}

/// Expression node. Equality ignores spans, so a reparsed expression compares
/// equal to the original even when its text moved.
#[derive(Debug, Clone)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: Span,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Expr {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExprKind {
    Int(BigInt),
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, Box<Expr>),
    Binom(Box<Expr>, Box<Expr>),
    Fib(Box<Expr>),
    Sum {
        var: String,
        lo: Box<Expr>,
        hi: Box<Expr>,
        body: Box<Expr>,
    },
}

impl Expr {
    pub fn new(kind: ExprKind, span: Span) -> Self {
        Expr { kind, span }
    }

    fn bare(kind: ExprKind) -> Self {
        Expr::new(kind, Span::default())
    }

    pub fn int(n: impl Into<BigInt>) -> Self {
        Expr::bare(ExprKind::Int(n.into()))
    }

    pub fn var(name: &str) -> Self {
        Expr::bare(ExprKind::Var(name.to_string()))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(e: Expr) -> Self {
        Expr::bare(ExprKind::Neg(Box::new(e)))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(a: Expr, b: Expr) -> Self {
        Expr::bare(ExprKind::Add(Box::new(a), Box::new(b)))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn sub(a: Expr, b: Expr) -> Self {
        Expr::bare(ExprKind::Sub(Box::new(a), Box::new(b)))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(a: Expr, b: Expr) -> Self {
        Expr::bare(ExprKind::Mul(Box::new(a), Box::new(b)))
    }

    pub fn pow(a: Expr, b: Expr) -> Self {
        Expr::bare(ExprKind::Pow(Box::new(a), Box::new(b)))
    }

    pub fn binom(a: Expr, b: Expr) -> Self {
        Expr::bare(ExprKind::Binom(Box::new(a), Box::new(b)))
    }

    pub fn fib(a: Expr) -> Self {
        Expr::bare(ExprKind::Fib(Box::new(a)))
    }

    pub fn sum(var: &str, lo: Expr, hi: Expr, body: Expr) -> Self {
        Expr::bare(ExprKind::Sum {
            var: var.to_string(),
            lo: Box::new(lo),
            hi: Box::new(hi),
            body: Box::new(body),
        })
    }

    /// Variables not bound by an enclosing `sum`.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match &self.kind {
            ExprKind::Int(_) => {}
            ExprKind::Var(name) => {
                if !bound.iter().any(|b| b == name) {
                    out.insert(name.clone());
                }
            }
            ExprKind::Neg(e) | ExprKind::Fib(e) => e.collect_free(bound, out),
            ExprKind::Add(a, b)
            | ExprKind::Sub(a, b)
            | ExprKind::Mul(a, b)
            | ExprKind::Pow(a, b)
            | ExprKind::Binom(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            ExprKind::Sum { var, lo, hi, body } => {
                lo.collect_free(bound, out);
                hi.collect_free(bound, out);
                bound.push(var.clone());
                body.collect_free(bound, out);
                bound.pop();
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelOp {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl RelOp {
    pub fn symbol(self) -> &'static str {
        match self {
            RelOp::Lt => "<",
            RelOp::Le => "<=",
            RelOp::Eq => "==",
            RelOp::Ge => ">=",
            RelOp::Gt => ">",
        }
    }

    pub fn holds(self, a: i64, b: i64) -> bool {
        match self {
            RelOp::Lt => a < b,
            RelOp::Le => a <= b,
            RelOp::Eq => a == b,
            RelOp::Ge => a >= b,
            RelOp::Gt => a > b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub lhs: Expr,
    pub op: RelOp,
    pub rhs: Expr,
}

/// A parsed identity `lhs == rhs for params [indet ...] [where ...]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityAst {
    pub lhs: Expr,
    pub rhs: Expr,
    pub params: Vec<String>,
    pub indeterminates: Vec<String>,
    pub constraints: Vec<Constraint>,
}
