//! Text syntax for series: integers, the variable `t`, `+ - * / ^` and parentheses.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' ['-'] integer)?
//! primary := integer | 't' | '(' expr ')'
//! ```
//!
//! Exponents are integer literals. A negative exponent is accepted only on a
//! bare `t` that is a factor of the outermost product (`t^-2*(1+t)/(1-t)`).
//! Implicit multiplication such as `2t` is rejected.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::Error;
use crate::poly::IntPolynomial;
use crate::series::LaurentSeries;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SeriesExpr {
    Int(BigInt),
    Var,
    Neg(Box<SeriesExpr>),
    Add(Box<SeriesExpr>, Box<SeriesExpr>),
    Sub(Box<SeriesExpr>, Box<SeriesExpr>),
    Mul(Box<SeriesExpr>, Box<SeriesExpr>),
    Div(Box<SeriesExpr>, Box<SeriesExpr>),
    Pow(Box<SeriesExpr>, i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset of the offending input.
    pub offset: usize,
    /// Tokens that would have been accepted at `offset`.
    pub expected: Vec<String>,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.offset, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected one of: {})", self.expected.join(" "))?;
        }
        Ok(())
    }
}

impl core::error::Error for ParseError {}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    expected_at: usize,
    expected: Vec<&'static str>,
    negative_exponents: Vec<usize>,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn note(&mut self, what: &'static str) {
        if self.pos != self.expected_at {
            self.expected_at = self.pos;
            self.expected.clear();
        }
        if !self.expected.contains(&what) {
            self.expected.push(what);
        }
    }

    /// Consumes `c` if it is next; otherwise records it as expected here.
    fn eat(&mut self, c: u8, name: &'static str) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            self.note(name);
            false
        }
    }

    fn fail(&mut self, message: impl Into<String>) -> ParseError {
        self.skip_ws();
        let expected = if self.expected_at == self.pos {
            let mut e: Vec<String> = self.expected.iter().map(|s| s.to_string()).collect();
            e.sort();
            e
        } else {
            Vec::new()
        };
        ParseError {
            offset: self.pos,
            expected,
            message: message.into(),
        }
    }

    fn found(&mut self) -> String {
        match self.peek() {
            None => "end of input".to_string(),
            Some(c) => alloc::format!("unexpected `{}`", c as char),
        }
    }

    fn expr(&mut self) -> Result<SeriesExpr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+', "+") {
                let rhs = self.term()?;
                lhs = SeriesExpr::Add(Box::new(lhs), Box::new(rhs));
            } else if self.eat(b'-', "-") {
                let rhs = self.term()?;
                lhs = SeriesExpr::Sub(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<SeriesExpr, ParseError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*', "*") {
                let rhs = self.unary()?;
                lhs = SeriesExpr::Mul(Box::new(lhs), Box::new(rhs));
            } else if self.eat(b'/', "/") {
                let rhs = self.unary()?;
                lhs = SeriesExpr::Div(Box::new(lhs), Box::new(rhs));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<SeriesExpr, ParseError> {
        if self.eat(b'-', "-") {
            return Ok(SeriesExpr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<SeriesExpr, ParseError> {
        let base = self.primary()?;
        if !self.eat(b'^', "^") {
            return Ok(base);
        }
        let sign_at = {
            self.skip_ws();
            self.pos
        };
        let negative = self.eat(b'-', "-");
        let digits = match self.peek() {
            Some(c) if c.is_ascii_digit() => self.integer(),
            _ => {
                self.note("integer");
                let msg = self.found();
                return Err(self.fail(alloc::format!("{msg} in exponent")));
            }
        };
        let e: i64 = match i64::try_from(&digits) {
            Ok(e) if e <= u32::MAX as i64 => e,
            _ => {
                return Err(ParseError {
                    offset: sign_at,
                    expected: Vec::new(),
                    message: "exponent too large".to_string(),
                })
            }
        };
        if negative {
            if base != SeriesExpr::Var {
                return Err(ParseError {
                    offset: sign_at,
                    expected: Vec::new(),
                    message: "negative exponents apply only to `t`".to_string(),
                });
            }
            self.negative_exponents.push(sign_at);
            return Ok(SeriesExpr::Pow(Box::new(base), -e));
        }
        Ok(SeriesExpr::Pow(Box::new(base), e))
    }

    fn integer(&mut self) -> BigInt {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = core::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        text.parse().expect("nonempty digit run")
    }

    fn primary(&mut self) -> Result<SeriesExpr, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => Ok(SeriesExpr::Int(self.integer())),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                if &self.src[start..self.pos] == b"t" {
                    return Ok(SeriesExpr::Var);
                }
                let name = String::from_utf8_lossy(&self.src[start..self.pos]).into_owned();
                self.pos = start;
                self.note("t");
                Err(self.fail(alloc::format!("unknown identifier `{name}`")))
            }
            _ => {
                if self.eat(b'(', "(") {
                    let inner = self.expr()?;
                    if !self.eat(b')', ")") {
                        let msg = self.found();
                        return Err(self.fail(msg));
                    }
                    return Ok(inner);
                }
                self.note("integer");
                self.note("t");
                self.note("-");
                let msg = self.found();
                Err(self.fail(msg))
            }
        }
    }
}

/// Parses an expression into its syntax tree.
pub fn parse(text: &str) -> Result<SeriesExpr, ParseError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        expected_at: usize::MAX,
        expected: Vec::new(),
        negative_exponents: Vec::new(),
    };
    let expr = p.expr()?;
    if p.peek().is_some() {
        let msg = p.found();
        return Err(p.fail(msg));
    }
    let mut seen = 0usize;
    check_negative_exponents(&expr, true, &mut seen).map_err(|i| ParseError {
        offset: p.negative_exponents[i],
        expected: Vec::new(),
        message: "negative exponent allowed only on a factor of the outermost product".to_string(),
    })?;
    Ok(expr)
}

/// Walks left to right; negative powers are numbered in source order.
fn check_negative_exponents(e: &SeriesExpr, top: bool, seen: &mut usize) -> Result<(), usize> {
    match e {
        SeriesExpr::Int(_) | SeriesExpr::Var => Ok(()),
        SeriesExpr::Pow(base, k) => {
            if *k < 0 {
                let idx = *seen;
                *seen += 1;
                if !top {
                    return Err(idx);
                }
                Ok(())
            } else {
                check_negative_exponents(base, false, seen)
            }
        }
        SeriesExpr::Mul(a, b) => {
            check_negative_exponents(a, top, seen)?;
            check_negative_exponents(b, top, seen)
        }
        SeriesExpr::Div(a, b) => {
            check_negative_exponents(a, top, seen)?;
            check_negative_exponents(b, false, seen)
        }
        SeriesExpr::Neg(a) => check_negative_exponents(a, false, seen),
        SeriesExpr::Add(a, b) | SeriesExpr::Sub(a, b) => {
            check_negative_exponents(a, false, seen)?;
            check_negative_exponents(b, false, seen)
        }
    }
}

/// Evaluates a syntax tree to a canonical series.
pub fn eval(expr: &SeriesExpr) -> Result<LaurentSeries, Error> {
    Ok(match expr {
        SeriesExpr::Int(n) => LaurentSeries::constant(n.clone()),
        SeriesExpr::Var => LaurentSeries::monomial(1),
        SeriesExpr::Neg(a) => -&eval(a)?,
        SeriesExpr::Add(a, b) => &eval(a)? + &eval(b)?,
        SeriesExpr::Sub(a, b) => &eval(a)? - &eval(b)?,
        SeriesExpr::Mul(a, b) => &eval(a)? * &eval(b)?,
        SeriesExpr::Div(a, b) => eval(a)?.checked_div(&eval(b)?)?,
        SeriesExpr::Pow(a, k) if *k < 0 => {
            debug_assert_eq!(**a, SeriesExpr::Var);
            LaurentSeries::monomial(*k)
        }
        SeriesExpr::Pow(a, k) => eval(a)?.pow(*k as u32),
    })
}

/// `parse` followed by `eval`.
pub fn parse_series(text: &str) -> Result<LaurentSeries, Error> {
    eval(&parse(text)?)
}

/// Canonical text for a series.
///
/// Spelling: `[t^d*]num[/den]` where `num` and `den` are written in ascending
/// powers as `c`, `c*t`, `c*t^k` with explicit coefficients, and each is
/// parenthesized when it has more than one term (the numerator also when a
/// shift prefix is present). Examples: `1/(1-2*t)`, `1+2*t`, `t^-1*1/(1-1*t)`,
/// `t^2*(3+1*t)`. The zero series is `0`.
pub fn render(a: &LaurentSeries) -> String {
    if a.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    if a.shift() != 0 {
        out.push_str(&alloc::format!("t^{}*", a.shift()));
    }
    let num = a.numerator();
    let den = a.denominator();
    let num_text = render_poly(num);
    if num.num_terms() > 1 && (a.shift() != 0 || !den.is_one()) {
        out.push('(');
        out.push_str(&num_text);
        out.push(')');
    } else {
        out.push_str(&num_text);
    }
    if !den.is_one() {
        out.push('/');
        if den.num_terms() > 1 {
            out.push('(');
            out.push_str(&render_poly(den));
            out.push(')');
        } else {
            out.push_str(&render_poly(den));
        }
    }
    out
}

fn render_poly(p: &IntPolynomial) -> String {
    let mut out = String::new();
    for (k, c) in p.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if out.is_empty() {
            if c.is_negative() {
                out.push('-');
            }
        } else if c.is_negative() {
            out.push('-');
        } else {
            out.push('+');
        }
        out.push_str(&c.abs().to_string());
        match k {
            0 => {}
            1 => out.push_str("*t"),
            _ => out.push_str(&alloc::format!("*t^{k}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}
