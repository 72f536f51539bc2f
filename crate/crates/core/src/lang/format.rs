//! Canonical printing. Parentheses appear exactly where the grammar needs them
//! to reproduce the tree; no algebraic rewriting happens here.

use std::fmt::Write;

use super::ast::{Expr, ExprKind, IdentityAst};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Level {
    Expr,
    Term,
    Unary,
    Atom,
}

fn level_of(e: &Expr) -> Level {
    match &e.kind {
        ExprKind::Add(..) | ExprKind::Sub(..) => Level::Expr,
        ExprKind::Mul(..) => Level::Term,
        // `factor` and `unary` share a slot: both may stand as a `*` operand,
        // neither may stand as a `^` operand.
        ExprKind::Neg(_) | ExprKind::Pow(..) => Level::Unary,
        _ => Level::Atom,
    }
}

fn write_at(out: &mut String, e: &Expr, needed: Level) {
    if level_of(e) < needed {
        out.push('(');
        write_expr(out, e);
        out.push(')');
    } else {
        write_expr(out, e);
    }
}

fn write_expr(out: &mut String, e: &Expr) {
    match &e.kind {
        ExprKind::Int(n) => write!(out, "{n}").expect("string write"),
        ExprKind::Var(name) => out.push_str(name),
        ExprKind::Neg(inner) => {
            out.push('-');
            // unary := "-" factor, so the operand must be a power or an atom.
            if matches!(inner.kind, ExprKind::Pow(..)) {
                write_expr(out, inner);
            } else {
                write_at(out, inner, Level::Atom);
            }
        }
        ExprKind::Add(a, b) => {
            write_at(out, a, Level::Expr);
            out.push_str(" + ");
            write_at(out, b, Level::Term);
        }
        ExprKind::Sub(a, b) => {
            write_at(out, a, Level::Expr);
            out.push_str(" - ");
            write_at(out, b, Level::Term);
        }
        ExprKind::Mul(a, b) => {
            write_at(out, a, Level::Term);
            out.push_str(" * ");
            write_at(out, b, Level::Unary);
        }
        ExprKind::Pow(a, b) => {
            write_at(out, a, Level::Atom);
            out.push('^');
            write_at(out, b, Level::Atom);
        }
        ExprKind::Binom(n, k) => {
            out.push_str("C(");
            write_expr(out, n);
            out.push_str(", ");
            write_expr(out, k);
            out.push(')');
        }
        ExprKind::Fib(i) => {
            out.push_str("fib(");
            write_expr(out, i);
            out.push(')');
        }
        ExprKind::Sum { var, lo, hi, body } => {
            write!(out, "sum({var}=").expect("string write");
            write_expr(out, lo);
            out.push_str("..");
            write_expr(out, hi);
            out.push_str(", ");
            write_expr(out, body);
            out.push(')');
        }
    }
}

pub fn format_expr(e: &Expr) -> String {
    let mut out = String::new();
    write_expr(&mut out, e);
    out
}

pub fn format_identity(ast: &IdentityAst) -> String {
    let mut out = String::new();
    write_expr(&mut out, &ast.lhs);
    out.push_str(" == ");
    write_expr(&mut out, &ast.rhs);
    out.push_str(" for ");
    out.push_str(&ast.params.join(", "));
    if !ast.indeterminates.is_empty() {
        out.push_str(" indet ");
        out.push_str(&ast.indeterminates.join(", "));
    }
    for (i, c) in ast.constraints.iter().enumerate() {
        out.push_str(if i == 0 { " where " } else { ", " });
        write_expr(&mut out, &c.lhs);
        write!(out, " {} ", c.op.symbol()).expect("string write");
        write_expr(&mut out, &c.rhs);
    }
    out
}
