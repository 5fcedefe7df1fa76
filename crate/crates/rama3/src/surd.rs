//! Exact surd expressions: the catalog's value language.
//!
//! Grammar (documented bit-exact in `docs/catalog-format.md`):
//!
//! ```text
//! expr   := term  (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' signed-integer)?
//! atom   := integer | 'sqrt' '(' expr ')' | 'cbrt' '(' expr ')' | '(' expr ')'
//! ```
//!
//! Rationals are written with `/`; square roots nest arbitrarily. Values
//! are stored symbolically and evaluated on demand at any precision — a
//! tabulated constant is never frozen at a fixed number of digits.

use std::fmt;

use rug::Integer;

use crate::error::{Error, Result};
use crate::real::BigReal;

/// A symbolic expression over integers closed under +, -, *, /, integer
/// powers, square roots, and cube roots.
#[derive(Clone, Debug, PartialEq)]
pub enum SurdExpr {
    Int(Integer),
    Neg(Box<SurdExpr>),
    Add(Box<SurdExpr>, Box<SurdExpr>),
    Sub(Box<SurdExpr>, Box<SurdExpr>),
    Mul(Box<SurdExpr>, Box<SurdExpr>),
    Div(Box<SurdExpr>, Box<SurdExpr>),
    Pow(Box<SurdExpr>, i32),
    Sqrt(Box<SurdExpr>),
    Cbrt(Box<SurdExpr>),
}

impl SurdExpr {
    pub fn from_i64(v: i64) -> Self {
        SurdExpr::Int(Integer::from(v))
    }

    /// Evaluate at the requested precision (with internal guard bits).
    pub fn eval(&self, prec: u32) -> Result<BigReal> {
        let v = self.eval_inner(prec + 64)?;
        Ok(v.rounded_to(prec))
    }

    fn eval_inner(&self, work: u32) -> Result<BigReal> {
        match self {
            SurdExpr::Int(i) => Ok(BigReal::from_integer(i, work)),
            SurdExpr::Neg(e) => Ok(-e.eval_inner(work)?),
            SurdExpr::Add(a, b) => Ok(a.eval_inner(work)? + b.eval_inner(work)?),
            SurdExpr::Sub(a, b) => Ok(a.eval_inner(work)? - b.eval_inner(work)?),
            SurdExpr::Mul(a, b) => Ok(a.eval_inner(work)? * b.eval_inner(work)?),
            SurdExpr::Div(a, b) => {
                let d = b.eval_inner(work)?;
                if d.is_zero() {
                    return Err(Error::domain("surd expression divides by zero"));
                }
                Ok(a.eval_inner(work)? / d)
            }
            SurdExpr::Pow(a, e) => a.eval_inner(work)?.powi(*e),
            SurdExpr::Sqrt(a) => a.eval_inner(work)?.sqrt(),
            SurdExpr::Cbrt(a) => Ok(a.eval_inner(work)?.cbrt()),
        }
    }

    /// Parse the grammar above.
    pub fn parse(text: &str) -> Result<Self> {
        let tokens = tokenize(text)?;
        let mut p = Parser { tokens, pos: 0 };
        let e = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(parse_err(format!(
                "unexpected trailing input at token {}",
                p.pos + 1
            )));
        }
        Ok(e)
    }

    fn precedence(&self) -> u8 {
        match self {
            SurdExpr::Add(..) | SurdExpr::Sub(..) => 0,
            SurdExpr::Mul(..) | SurdExpr::Div(..) => 1,
            SurdExpr::Neg(..) => 2,
            SurdExpr::Pow(..) => 3,
            SurdExpr::Int(..) | SurdExpr::Sqrt(..) | SurdExpr::Cbrt(..) => 4,
        }
    }

    fn fmt_child(&self, child: &SurdExpr, f: &mut fmt::Formatter<'_>, tight: bool) -> fmt::Result {
        let need = child.precedence() < self.precedence()
            || (tight && child.precedence() == self.precedence());
        if need {
            write!(f, "({child})")
        } else {
            write!(f, "{child}")
        }
    }
}

impl fmt::Display for SurdExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurdExpr::Int(i) => write!(f, "{i}"),
            SurdExpr::Neg(e) => {
                write!(f, "-")?;
                self.fmt_child(e, f, true)
            }
            SurdExpr::Add(a, b) => {
                self.fmt_child(a, f, false)?;
                write!(f, " + ")?;
                self.fmt_child(b, f, false)
            }
            SurdExpr::Sub(a, b) => {
                self.fmt_child(a, f, false)?;
                write!(f, " - ")?;
                self.fmt_child(b, f, true)
            }
            SurdExpr::Mul(a, b) => {
                self.fmt_child(a, f, false)?;
                write!(f, "*")?;
                self.fmt_child(b, f, false)
            }
            SurdExpr::Div(a, b) => {
                self.fmt_child(a, f, false)?;
                write!(f, "/")?;
                self.fmt_child(b, f, true)
            }
            SurdExpr::Pow(a, e) => {
                self.fmt_child(a, f, true)?;
                if *e < 0 {
                    write!(f, "^({e})")
                } else {
                    write!(f, "^{e}")
                }
            }
            SurdExpr::Sqrt(a) => write!(f, "sqrt({a})"),
            SurdExpr::Cbrt(a) => write!(f, "cbrt({a})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Int(Integer),
    Name(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse {
        line: 0,
        msg: msg.into(),
    }
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let bytes = text.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        match c {
            ' ' | '\t' | '\r' | '\n' => i += 1,
            '+' => {
                out.push(Token::Plus);
                i += 1;
            }
            '-' => {
                out.push(Token::Minus);
                i += 1;
            }
            '*' => {
                out.push(Token::Star);
                i += 1;
            }
            '/' => {
                out.push(Token::Slash);
                i += 1;
            }
            '^' => {
                out.push(Token::Caret);
                i += 1;
            }
            '(' => {
                out.push(Token::LParen);
                i += 1;
            }
            ')' => {
                out.push(Token::RParen);
                i += 1;
            }
            '0'..='9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let s = &text[start..i];
                out.push(Token::Int(s.parse::<Integer>().map_err(|e| {
                    parse_err(format!("bad integer `{s}`: {e}"))
                })?));
            }
            'a'..='z' | 'A'..='Z' => {
                let start = i;
                while i < bytes.len() && (bytes[i] as char).is_ascii_alphanumeric() {
                    i += 1;
                }
                out.push(Token::Name(text[start..i].to_string()));
            }
            other => {
                return Err(parse_err(format!(
                    "unexpected character `{other}` at byte {i}"
                )))
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, t: Token, what: &str) -> Result<()> {
        match self.next() {
            Some(got) if got == t => Ok(()),
            Some(got) => Err(parse_err(format!("expected {what}, found {got:?}"))),
            None => Err(parse_err(format!("expected {what}, found end of input"))),
        }
    }

    fn expr(&mut self) -> Result<SurdExpr> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.pos += 1;
                    acc = SurdExpr::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(Token::Minus) => {
                    self.pos += 1;
                    acc = SurdExpr::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<SurdExpr> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    acc = SurdExpr::Mul(Box::new(acc), Box::new(self.unary()?));
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    acc = SurdExpr::Div(Box::new(acc), Box::new(self.unary()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<SurdExpr> {
        if matches!(self.peek(), Some(Token::Minus)) {
            self.pos += 1;
            return Ok(SurdExpr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<SurdExpr> {
        let base = self.atom()?;
        if matches!(self.peek(), Some(Token::Caret)) {
            self.pos += 1;
            let e = self.exponent()?;
            return Ok(SurdExpr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn exponent(&mut self) -> Result<i32> {
        // Either `n`, `-n`, or `(-n)`.
        let parenthesized = matches!(self.peek(), Some(Token::LParen));
        if parenthesized {
            self.pos += 1;
        }
        let negative = matches!(self.peek(), Some(Token::Minus));
        if negative {
            self.pos += 1;
        }
        let val = match self.next() {
            Some(Token::Int(i)) => i
                .to_i32()
                .ok_or_else(|| parse_err("exponent out of range"))?,
            other => return Err(parse_err(format!("expected integer exponent, found {other:?}"))),
        };
        if parenthesized {
            self.expect(Token::RParen, "`)` after exponent")?;
        }
        Ok(if negative { -val } else { val })
    }

    fn atom(&mut self) -> Result<SurdExpr> {
        match self.next() {
            Some(Token::Int(i)) => Ok(SurdExpr::Int(i)),
            Some(Token::Name(n)) => {
                let ctor = match n.as_str() {
                    "sqrt" => SurdExpr::Sqrt as fn(Box<SurdExpr>) -> SurdExpr,
                    "cbrt" => SurdExpr::Cbrt as fn(Box<SurdExpr>) -> SurdExpr,
                    other => return Err(parse_err(format!("unknown function `{other}`"))),
                };
                self.expect(Token::LParen, "`(`")?;
                let inner = self.expr()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(ctor(Box::new(inner)))
            }
            Some(Token::LParen) => {
                let inner = self.expr()?;
                self.expect(Token::RParen, "`)`")?;
                Ok(inner)
            }
            other => Err(parse_err(format!("expected value, found {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval_f64(s: &str) -> f64 {
        SurdExpr::parse(s).unwrap().eval(128).unwrap().to_f64()
    }

    #[test]
    fn simple_values() {
        assert_eq!(eval_f64("sqrt(2)/2"), 0.7071067811865476);
        assert_eq!(eval_f64("-9/16"), -0.5625);
        assert_eq!(eval_f64("cbrt(27)"), 3.0);
        assert_eq!(eval_f64("2^10"), 1024.0);
        assert_eq!(eval_f64("2^(-2)"), 0.25);
        let cube = eval_f64("(sqrt(3) - 1)^3");
        assert!((cube - (3f64.sqrt() - 1.0).powi(3)).abs() < 1e-15);
    }

    #[test]
    fn known_series_coefficient() {
        // (5719 + 13 sqrt(19)) / 2250
        let v = eval_f64("(5719 + 13*sqrt(19))/2250");
        let want = (5719.0 + 13.0 * 19f64.sqrt()) / 2250.0;
        assert!((v - want).abs() < 1e-14);
    }

    #[test]
    fn nested_sqrt() {
        let v = eval_f64("sqrt((2*sqrt(19) + 5*sqrt(3))/2)");
        let want = ((2.0 * 19f64.sqrt() + 5.0 * 3f64.sqrt()) / 2.0).sqrt();
        assert!((v - want).abs() < 1e-14);
    }

    #[test]
    fn eval_is_precision_parametric() {
        let e = SurdExpr::parse("sqrt(19)").unwrap();
        let lo = e.eval(128).unwrap();
        let hi = e.eval(1024).unwrap();
        assert_eq!(lo.prec(), 128);
        assert_eq!(hi.prec(), 1024);
        assert!(lo.agrees_within_pow2(&hi.rounded_to(128), -120));
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "(5719 + 13*sqrt(19))/2250",
            "sqrt((2*sqrt(19) + 5*sqrt(3))/2)",
            "-(194/1331) - 225*sqrt(3)/2662",
            "((sqrt(31) - 3*sqrt(3))/2)^3",
            "cbrt(38 - 6*sqrt(33))",
            "2^(-12)",
        ] {
            let e = SurdExpr::parse(s).unwrap();
            let rendered = e.to_string();
            let re = SurdExpr::parse(&rendered).unwrap();
            let a = e.eval(192).unwrap();
            let b = re.eval(192).unwrap();
            assert!(a.agrees_within_pow2(&b, -180), "{s} vs {rendered}");
        }
    }

    #[test]
    fn parse_errors() {
        assert!(SurdExpr::parse("(1 +").is_err());
        assert!(SurdExpr::parse("sqrt 2").is_err());
        assert!(SurdExpr::parse("foo(2)").is_err());
        assert!(SurdExpr::parse("1 2").is_err());
        assert!(SurdExpr::parse("2^x").is_err());
    }

    #[test]
    fn eval_errors() {
        assert!(SurdExpr::parse("sqrt(1 - 2)").unwrap().eval(128).is_err());
        assert!(SurdExpr::parse("1/(2 - 2)").unwrap().eval(128).is_err());
        assert!(SurdExpr::parse("0^(-1)").unwrap().eval(128).is_err());
    }
}
