//! Canonical text form of weights.
//!
//! ```text
//! weight := term (("+"|"-") term)*
//! term   := rat ["*" mono] | mono
//! mono   := IDENT ["^" UINT] ("*" IDENT ["^" UINT])*
//! rat    := ["-"] UINT ["/" UINT]
//! ```
//!
//! Formatting emits terms in canonical monomial order with no whitespace, so
//! equal weights always print to the same bytes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{ExactError, Monomial, Weight};

pub(super) fn format_weight(w: &Weight) -> String {
    if w.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (i, (m, c)) in w.terms().enumerate() {
        if i == 0 {
            if m.is_one() {
                out.push_str(&format_rational(c));
            } else if c.is_one() {
                out.push_str(&m.to_string());
            } else {
                out.push_str(&format_rational(c));
                out.push('*');
                out.push_str(&m.to_string());
            }
            continue;
        }
        out.push(if c.is_negative() { '-' } else { '+' });
        let mag = c.abs();
        if m.is_one() {
            out.push_str(&format_rational(&mag));
        } else if mag.is_one() {
            out.push_str(&m.to_string());
        } else {
            out.push_str(&format_rational(&mag));
            out.push('*');
            out.push_str(&m.to_string());
        }
    }
    out
}

fn format_rational(c: &BigRational) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Parses the canonical weight grammar. Spaces between tokens are tolerated.
pub fn parse_weight(text: &str) -> Result<Weight, ExactError> {
    let mut p = WeightParser {
        src: text.as_bytes(),
        pos: 0,
    };
    let w = p.weight()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(w)
}

struct WeightParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl WeightParser<'_> {
    fn error(&self, message: &str) -> ExactError {
        ExactError::Parse {
            offset: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn weight(&mut self) -> Result<Weight, ExactError> {
        let mut acc = self.term()?;
        while let Some(op @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            if op == b'+' {
                acc += &t;
            } else {
                acc -= &t;
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Weight, ExactError> {
        match self.peek() {
            Some(b'-' | b'0'..=b'9') => {
                let c = self.rational()?;
                if self.peek() == Some(b'*') {
                    self.pos += 1;
                    let m = self.monomial()?;
                    Ok(Weight::from_terms([(m, c)]))
                } else {
                    Ok(Weight::constant(c))
                }
            }
            Some(b) if is_ident_start(b) => {
                let m = self.monomial()?;
                Ok(Weight::from_terms([(m, BigRational::one())]))
            }
            Some(_) => Err(self.error("expected a number or an indeterminate")),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn rational(&mut self) -> Result<BigRational, ExactError> {
        let negative = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let numer = self.uint()?;
        let denom = if self.peek() == Some(b'/') {
            self.pos += 1;
            let start = self.pos;
            let d = self.uint()?;
            if d.is_zero() {
                self.pos = start;
                return Err(self.error("zero denominator"));
            }
            d
        } else {
            BigInt::one()
        };
        let r = BigRational::new(numer, denom);
        Ok(if negative { -r } else { r })
    }

    fn uint(&mut self) -> Result<BigInt, ExactError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an unsigned integer"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(digits.parse().expect("digits parse as BigInt"))
    }

    fn monomial(&mut self) -> Result<Monomial, ExactError> {
        let mut factors = Vec::new();
        loop {
            let name = self.ident()?;
            let exp = if self.peek() == Some(b'^') {
                self.pos += 1;
                let start = self.pos;
                let e = self.uint()?;
                u32::try_from(e).map_err(|_| {
                    self.pos = start;
                    self.error("exponent too large")
                })?
            } else {
                1
            };
            factors.push((name, exp));
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(Monomial::from_factors(factors))
    }

    fn ident(&mut self) -> Result<String, ExactError> {
        match self.peek() {
            Some(b) if is_ident_start(b) => {
                let start = self.pos;
                while self.pos < self.src.len() && is_ident_continue(self.src[self.pos]) {
                    self.pos += 1;
                }
                Ok(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
            }
            _ => Err(self.error("expected an indeterminate name")),
        }
    }
}

fn is_ident_start(b: u8) -> bool {
    b.is_ascii_alphabetic() || b == b'_'
}

fn is_ident_continue(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_'
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negative_integer() {
        assert_eq!(Weight::integer(-35).to_string(), "-35");
        assert_eq!(parse_weight("-35").unwrap(), Weight::integer(-35));
    }

    #[test]
    fn rational_round_trip() {
        let w = Weight::ratio(3, 4);
        assert_eq!(w.to_string(), "3/4");
        assert_eq!(parse_weight("3/4").unwrap(), w);
    }

    #[test]
    fn canonical_monomial_text() {
        let w = Weight::from_terms([(
            Monomial::from_factors([("b", 1), ("a", 2)]),
            BigRational::new(1.into(), 2.into()),
        )]);
        assert_eq!(w.to_string(), "1/2*a^2*b");
    }

    #[test]
    fn signs_after_first_term() {
        let w = parse_weight("b - a + 1/3 - 2*a*b").unwrap();
        assert_eq!(w.to_string(), "-2*a*b-a+b+1/3");
        let w = parse_weight("-1*a").unwrap();
        assert_eq!(w.to_string(), "-1*a");
    }

    #[test]
    fn zero_prints_as_zero() {
        assert_eq!(Weight::zero().to_string(), "0");
        assert!(parse_weight("0").unwrap().is_zero());
        assert!(parse_weight("a-a").unwrap().is_zero());
    }

    #[test]
    fn big_integer_survives() {
        let big = Weight::integer(2).pow(200);
        let text = big.to_string();
        assert_eq!(text.len(), 61);
        assert_eq!(parse_weight(&text).unwrap(), big);
    }

    #[test]
    fn errors_carry_byte_offsets() {
        match parse_weight("3/") {
            Err(ExactError::Parse { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("unexpected {other:?}"),
        }
        match parse_weight("a+*b") {
            Err(ExactError::Parse { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("unexpected {other:?}"),
        }
        match parse_weight("1/0") {
            Err(ExactError::Parse { offset, message }) => {
                assert_eq!(offset, 2);
                assert_eq!(message, "zero denominator");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_weight("2 3"), Err(ExactError::Parse { offset: 2, .. })));
    }
}
