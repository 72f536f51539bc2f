//! Recursive-descent parser for the identity language.
//!
//! ```text
//! identity := expr "==" expr "for" IDENT ("," IDENT)*
//!             ["indet" IDENT ("," IDENT)*] ["where" cond ("," cond)*]
//! cond     := expr ("<"|"<="|"=="|">="|">") expr
//! expr     := term (("+"|"-") term)*
//! term     := unary ("*" unary)*
//! unary    := ["-"] factor
//! factor   := atom ["^" atom]
//! atom     := UINT | IDENT | "(" expr ")" | "C(" expr "," expr ")"
//!           | "fib(" expr ")" | "sum(" IDENT "=" expr ".." expr "," expr ")"
//! ```

use super::ast::{Constraint, Expr, ExprKind, IdentityAst, RelOp, Span};
use super::lexer::{tokenize, Tok, Token};
use super::LangError;

/// A non-fatal remark about the parsed text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lint {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

struct Parser<'a> {
    src: &'a str,
    tokens: Vec<Token>,
    pos: usize,
    lints: Vec<Lint>,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, LangError> {
        Ok(Parser {
            src,
            tokens: tokenize(src)?,
            pos: 0,
            lints: Vec::new(),
        })
    }

    fn peek(&self) -> &Tok {
        &self.tokens[self.pos].tok
    }

    fn span(&self) -> Span {
        self.tokens[self.pos].span
    }

    fn prev_span(&self) -> Span {
        self.tokens[self.pos.saturating_sub(1)].span
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.tok != Tok::Eof {
            self.pos += 1;
        }
        t
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == tok {
            self.bump();
            true
        } else {
            false
        }
    }

    fn unexpected(&self, expected: &[&str]) -> LangError {
        let found = self.peek().describe();
        LangError::at(
            self.src,
            self.span().start,
            format!("unexpected {found}"),
            expected.iter().map(|s| s.to_string()).collect(),
        )
    }

    fn expect(&mut self, tok: Tok) -> Result<Span, LangError> {
        if self.peek() == &tok {
            Ok(self.bump().span)
        } else {
            Err(self.unexpected(&[tok.text()]))
        }
    }

    fn ident(&mut self) -> Result<(String, Span), LangError> {
        match self.peek().clone() {
            Tok::Ident(name) => {
                let span = self.bump().span;
                Ok((name, span))
            }
            _ => Err(self.unexpected(&["identifier"])),
        }
    }

    fn expect_end(&self) -> Result<(), LangError> {
        if self.peek() == &Tok::Eof {
            Ok(())
        } else {
            Err(self.unexpected(&["end of input"]))
        }
    }

    fn identity(&mut self) -> Result<IdentityAst, LangError> {
        let lhs = self.expr()?;
        if self.peek() != &Tok::EqEq {
            return Err(self.unexpected(&["+", "-", "*", "^", "=="]));
        }
        self.bump();
        let rhs = self.expr()?;
        if self.peek() != &Tok::For {
            return Err(self.unexpected(&["+", "-", "*", "^", "for"]));
        }
        self.bump();
        let params = self.name_list()?;
        let indeterminates = if self.eat(&Tok::Indet) {
            self.name_list()?
        } else {
            Vec::new()
        };
        let mut constraints = Vec::new();
        if self.eat(&Tok::Where) {
            loop {
                constraints.push(self.constraint()?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        if self.peek() != &Tok::Eof {
            return Err(self.unexpected(&[",", "indet", "where", "end of input"]));
        }
        Ok(IdentityAst {
            lhs,
            rhs,
            params: params.into_iter().map(|(n, _)| n).collect(),
            indeterminates: indeterminates.into_iter().map(|(n, _)| n).collect(),
            constraints,
        })
    }

    fn name_list(&mut self) -> Result<Vec<(String, Span)>, LangError> {
        let mut names = vec![self.ident()?];
        while self.peek() == &Tok::Comma && matches!(self.tokens[self.pos + 1].tok, Tok::Ident(_)) {
            self.bump();
            names.push(self.ident()?);
        }
        Ok(names)
    }

    fn constraint(&mut self) -> Result<Constraint, LangError> {
        let lhs = self.expr()?;
        let op = match self.peek() {
            Tok::Lt => RelOp::Lt,
            Tok::Le => RelOp::Le,
            Tok::EqEq => RelOp::Eq,
            Tok::Ge => RelOp::Ge,
            Tok::Gt => RelOp::Gt,
            _ => return Err(self.unexpected(&["<", "<=", "==", ">=", ">"])),
        };
        self.bump();
        let rhs = self.expr()?;
        Ok(Constraint { lhs, op, rhs })
    }

    fn expr(&mut self) -> Result<Expr, LangError> {
        let mut acc = self.term()?;
        loop {
            let kind: fn(Box<Expr>, Box<Expr>) -> ExprKind = match self.peek() {
                Tok::Plus => ExprKind::Add,
                Tok::Minus => ExprKind::Sub,
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            let span = acc.span.join(rhs.span);
            acc = Expr::new(kind(Box::new(acc), Box::new(rhs)), span);
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Expr, LangError> {
        let mut acc = self.unary()?;
        while self.eat(&Tok::Star) {
            let rhs = self.unary()?;
            let span = acc.span.join(rhs.span);
            acc = Expr::new(ExprKind::Mul(Box::new(acc), Box::new(rhs)), span);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Expr, LangError> {
        if self.peek() == &Tok::Minus {
            let start = self.bump().span;
            let inner = self.factor()?;
            if let ExprKind::Pow(base, _) = &inner.kind {
                if matches!(base.kind, ExprKind::Int(_)) {
                    let (line, column) = super::line_col(self.src, start.start);
                    self.lints.push(Lint {
                        line,
                        column,
                        message: "`-c^e` parses as -(c^e); write `(-c)^e` for a signed base".to_string(),
                    });
                }
            }
            let span = start.join(inner.span);
            return Ok(Expr::new(ExprKind::Neg(Box::new(inner)), span));
        }
        self.factor()
    }

    fn factor(&mut self) -> Result<Expr, LangError> {
        let base = self.atom()?;
        if self.eat(&Tok::Caret) {
            let exp = self.atom()?;
            let span = base.span.join(exp.span);
            return Ok(Expr::new(ExprKind::Pow(Box::new(base), Box::new(exp)), span));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, LangError> {
        let start = self.span();
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(Expr::new(ExprKind::Int(n), start))
            }
            Tok::Ident(name) => {
                self.bump();
                Ok(Expr::new(ExprKind::Var(name), start))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if self.peek() != &Tok::RParen {
                    return Err(self.unexpected(&["+", "-", "*", "^", ")"]));
                }
                self.bump();
                let mut inner = inner;
                inner.span = start.join(self.prev_span());
                Ok(inner)
            }
            Tok::Binom => {
                self.bump();
                self.expect(Tok::LParen)?;
                let n = self.expr()?;
                self.expect(Tok::Comma)?;
                let k = self.expr()?;
                let end = self.expect(Tok::RParen)?;
                Ok(Expr::new(ExprKind::Binom(Box::new(n), Box::new(k)), start.join(end)))
            }
            Tok::Fib => {
                self.bump();
                self.expect(Tok::LParen)?;
                let i = self.expr()?;
                let end = self.expect(Tok::RParen)?;
                Ok(Expr::new(ExprKind::Fib(Box::new(i)), start.join(end)))
            }
            Tok::Sum => {
                self.bump();
                self.expect(Tok::LParen)?;
                let (var, _) = self.ident()?;
                self.expect(Tok::Assign)?;
                let lo = self.expr()?;
                self.expect(Tok::DotDot)?;
                let hi = self.expr()?;
                self.expect(Tok::Comma)?;
                let body = self.expr()?;
                let end = self.expect(Tok::RParen)?;
                Ok(Expr::new(
                    ExprKind::Sum {
                        var,
                        lo: Box::new(lo),
                        hi: Box::new(hi),
                        body: Box::new(body),
                    },
                    start.join(end),
                ))
            }
            _ => Err(self.unexpected(&["integer", "identifier", "(", "C", "fib", "sum"])),
        }
    }
}

/// Parses an identity, returning the AST together with any lints.
pub fn parse_identity_with_lints(src: &str) -> Result<(IdentityAst, Vec<Lint>), LangError> {
    let mut p = Parser::new(src)?;
    let ast = p.identity()?;
    check_scopes(src, &ast)?;
    Ok((ast, p.lints))
}

pub fn parse_identity(src: &str) -> Result<IdentityAst, LangError> {
    parse_identity_with_lints(src).map(|(ast, _)| ast)
}

/// Parses a bare expression (no scope checking).
pub fn parse_expr(src: &str) -> Result<Expr, LangError> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    p.expect_end()?;
    Ok(e)
}

/// Parses a sweep range `name=lo..hi`.
pub fn parse_range(src: &str) -> Result<(String, Expr, Expr), LangError> {
    let mut p = Parser::new(src)?;
    let (name, _) = p.ident()?;
    p.expect(Tok::Assign)?;
    let lo = p.expr()?;
    p.expect(Tok::DotDot)?;
    let hi = p.expr()?;
    p.expect_end()?;
    Ok((name, lo, hi))
}

fn check_scopes(src: &str, ast: &IdentityAst) -> Result<(), LangError> {
    let mut seen: Vec<&str> = Vec::new();
    for name in ast.params.iter().chain(&ast.indeterminates) {
        if seen.contains(&name.as_str()) {
            return Err(LangError::Scope(format!("`{name}` is declared twice")));
        }
        seen.push(name);
    }
    for side in [&ast.lhs, &ast.rhs] {
        check_expr(src, side, &seen, &mut Vec::new())?;
    }
    for c in &ast.constraints {
        for e in [&c.lhs, &c.rhs] {
            for v in e.free_vars() {
                if !ast.params.contains(&v) {
                    return Err(LangError::Scope(format!(
                        "constraint refers to `{v}`, which is not a parameter"
                    )));
                }
            }
            check_expr(src, e, &seen, &mut Vec::new())?;
        }
    }
    Ok(())
}

fn check_expr<'e>(src: &str, e: &'e Expr, globals: &[&str], bound: &mut Vec<&'e str>) -> Result<(), LangError> {
    match &e.kind {
        ExprKind::Int(_) => Ok(()),
        ExprKind::Var(name) => {
            if bound.contains(&name.as_str()) || globals.contains(&name.as_str()) {
                Ok(())
            } else {
                let (line, column) = super::line_col(src, e.span.start);
                Err(LangError::Unbound {
                    name: name.clone(),
                    line,
                    column,
                })
            }
        }
        ExprKind::Neg(a) | ExprKind::Fib(a) => check_expr(src, a, globals, bound),
        ExprKind::Add(a, b)
        | ExprKind::Sub(a, b)
        | ExprKind::Mul(a, b)
        | ExprKind::Pow(a, b)
        | ExprKind::Binom(a, b) => {
            check_expr(src, a, globals, bound)?;
            check_expr(src, b, globals, bound)
        }
        ExprKind::Sum { var, lo, hi, body } => {
            check_expr(src, lo, globals, bound)?;
            check_expr(src, hi, globals, bound)?;
            if globals.contains(&var.as_str()) || bound.contains(&var.as_str()) {
                return Err(LangError::Scope(format!(
                    "summation variable `{var}` shadows an enclosing name"
                )));
            }
            bound.push(var);
            let r = check_expr(src, body, globals, bound);
            bound.pop();
            r
        }
    }
}
