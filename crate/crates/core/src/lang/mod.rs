//! The identity language: lexer, parser, AST, printer and exact evaluator.

mod ast;
mod eval;
mod format;
mod lexer;
mod parser;

use thiserror::Error;

pub use ast::{Constraint, Expr, ExprKind, IdentityAst, RelOp, Span};
pub use eval::{
    check_instance, check_instance_with, constraints_hold, eval_expr, eval_expr_with, eval_integer, Bindings,
    EvalError, EvalOptions, FibConvention, InstanceOutcome,
};
pub use format::{format_expr, format_identity};
pub use parser::{parse_expr, parse_identity, parse_identity_with_lints, parse_range, Lint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LangError {
    #[error("{line}:{column}: {message}{}", expected_suffix(.expected))]
    Syntax {
        line: usize,
        column: usize,
        message: String,
        expected: Vec<String>,
    },
    #[error("{line}:{column}: unbound variable `{name}`")]
    Unbound { name: String, line: usize, column: usize },
    #[error("{0}")]
    Scope(String),
}

fn expected_suffix(expected: &[String]) -> String {
    if expected.is_empty() {
        String::new()
    } else {
        let list: Vec<String> = expected.iter().map(|e| format!("`{e}`")).collect();
        format!("; expected one of {}", list.join(", "))
    }
}

impl LangError {
    pub(crate) fn at(src: &str, offset: usize, message: String, expected: Vec<String>) -> Self {
        let (line, column) = line_col(src, offset);
        LangError::Syntax {
            line,
            column,
            message,
            expected,
        }
    }
}

/// 1-based line and column (in characters) of a byte offset.
pub(crate) fn line_col(src: &str, offset: usize) -> (usize, usize) {
    let before = &src[..offset.min(src.len())];
    let line = before.matches('\n').count() + 1;
    let line_start = before.rfind('\n').map(|i| i + 1).unwrap_or(0);
    (line, before[line_start..].chars().count() + 1)
}

/// Reads an identity file: one identity per line, `#` starts a comment.
/// Returns the 1-based line number with each parsed identity.
pub fn parse_identity_file(text: &str) -> Result<Vec<(usize, IdentityAst)>, (usize, LangError)> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let ast = parse_identity(line).map_err(|e| (i + 1, e))?;
        out.push((i + 1, ast));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_file_skips_comments() {
        let text = "# row sums\nsum(k=0..n, C(n,k)) == 2^n for n  # Thm\n\n  \nC(n,0) == 1 for n\n";
        let parsed = parse_identity_file(text).unwrap();
        assert_eq!(parsed.len(), 2);
        assert_eq!(parsed[0].0, 2);
        assert_eq!(parsed[1].0, 5);
    }

    #[test]
    fn identity_file_reports_line() {
        let err = parse_identity_file("C(n,0) == 1 for n\nC(n == 1 for n\n").unwrap_err();
        assert_eq!(err.0, 2);
    }

    #[test]
    fn error_display() {
        let err = parse_identity("C(n k) == 1 for n").unwrap_err();
        assert_eq!(err.to_string(), "1:5: unexpected identifier `k`; expected one of `,`");
    }
}
