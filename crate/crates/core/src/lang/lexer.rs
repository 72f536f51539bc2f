use num_bigint::BigInt;

use super::ast::Span;
use super::LangError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Int(BigInt),
    Ident(String),
    // keywords
    For,
    Indet,
    Where,
    Sum,
    Fib,
    Binom,
    // punctuation
    LParen,
    RParen,
    Comma,
    Assign,
    DotDot,
    Plus,
    Minus,
    Star,
    Caret,
    EqEq,
    Lt,
    Le,
    Gt,
    Ge,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer `{n}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Eof => "end of input".to_string(),
            other => format!("`{}`", other.text()),
        }
    }

    pub fn text(&self) -> &'static str {
        match self {
            Tok::Int(_) => "integer",
            Tok::Ident(_) => "identifier",
            Tok::For => "for",
            Tok::Indet => "indet",
            Tok::Where => "where",
            Tok::Sum => "sum",
            Tok::Fib => "fib",
            Tok::Binom => "C",
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::Comma => ",",
            Tok::Assign => "=",
            Tok::DotDot => "..",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Caret => "^",
            Tok::EqEq => "==",
            Tok::Lt => "<",
            Tok::Le => "<=",
            Tok::Gt => ">",
            Tok::Ge => ">=",
            Tok::Eof => "end of input",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

pub fn tokenize(src: &str) -> Result<Vec<Token>, LangError> {
    let bytes = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        if b.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let tok = if b.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            Tok::Int(src[start..i].parse().expect("ascii digits"))
        } else if b.is_ascii_alphabetic() || b == b'_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            match &src[start..i] {
                "for" => Tok::For,
                "indet" => Tok::Indet,
                "where" => Tok::Where,
                "sum" => Tok::Sum,
                "fib" => Tok::Fib,
                "C" => Tok::Binom,
                word => Tok::Ident(word.to_string()),
            }
        } else {
            let next = bytes.get(i + 1).copied();
            let (tok, len) = match (b, next) {
                (b'.', Some(b'.')) => (Tok::DotDot, 2),
                (b'=', Some(b'=')) => (Tok::EqEq, 2),
                (b'<', Some(b'=')) => (Tok::Le, 2),
                (b'>', Some(b'=')) => (Tok::Ge, 2),
                (b'=', _) => (Tok::Assign, 1),
                (b'<', _) => (Tok::Lt, 1),
                (b'>', _) => (Tok::Gt, 1),
                (b'(', _) => (Tok::LParen, 1),
                (b')', _) => (Tok::RParen, 1),
                (b',', _) => (Tok::Comma, 1),
                (b'+', _) => (Tok::Plus, 1),
                (b'-', _) => (Tok::Minus, 1),
                (b'*', _) => (Tok::Star, 1),
                (b'^', _) => (Tok::Caret, 1),
                _ => {
                    let ch = src[start..].chars().next().expect("nonempty");
                    return Err(LangError::at(
                        src,
                        start,
                        format!("unexpected character `{ch}`"),
                        Vec::new(),
                    ));
                }
            };
            i += len;
            tok
        };
        out.push(Token {
            tok,
            span: Span::new(start, i),
        });
    }
    out.push(Token {
        tok: Tok::Eof,
        span: Span::new(src.len(), src.len()),
    });
    Ok(out)
}
