//! Text input for polynomials: either a coefficient list `a0,a1,...,an` or an
//! arithmetic expression in `X` built from integers, `+ - * / ^` and
//! parentheses.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use crate::error::ParseError;
use crate::poly::Polynomial;

const MAX_EXPONENT: u32 = 10_000;

pub fn parse_polynomial(text: &str) -> Result<Polynomial, ParseError> {
    if text.trim().is_empty() {
        return Err(ParseError::Empty);
    }
    if text.contains(',') {
        return parse_coeff_list(text);
    }
    let tokens = tokenize(text)?;
    let mut parser = Parser { tokens, pos: 0, end: text.len() };
    let poly = parser.expr()?;
    if let Some(tok) = parser.peek() {
        return Err(ParseError::Syntax {
            pos: tok.pos,
            msg: format!("unexpected {}", tok.kind.describe()),
        });
    }
    Ok(poly)
}

fn parse_coeff_list(text: &str) -> Result<Polynomial, ParseError> {
    let mut coeffs = Vec::new();
    let mut offset = 0;
    for item in text.split(',') {
        let trimmed = item.trim();
        let lead = item.len() - item.trim_start().len();
        let digits = trimmed.strip_prefix('+').unwrap_or(trimmed);
        let value: BigInt = digits.parse().map_err(|_| ParseError::Syntax {
            pos: offset + lead,
            msg: format!("expected an integer coefficient, found {trimmed:?}"),
        })?;
        coeffs.push(value);
        offset += item.len() + 1;
    }
    Ok(Polynomial::new(coeffs))
}

#[derive(Clone, Debug, PartialEq)]
enum Kind {
    Int(BigInt),
    Var,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

impl Kind {
    fn describe(&self) -> String {
        match self {
            Kind::Int(v) => format!("number {v}"),
            Kind::Var => "variable X".into(),
            Kind::Plus => "'+'".into(),
            Kind::Minus => "'-'".into(),
            Kind::Star => "'*'".into(),
            Kind::Slash => "'/'".into(),
            Kind::Caret => "'^'".into(),
            Kind::LParen => "'('".into(),
            Kind::RParen => "')'".into(),
        }
    }
}

#[derive(Clone, Debug)]
struct Token {
    kind: Kind,
    pos: usize,
}

fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let kind = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                let value: BigInt = text[start..i].parse().expect("ascii digits");
                out.push(Token { kind: Kind::Int(value), pos: start });
                continue;
            }
            b'X' | b'x' => Kind::Var,
            b'+' => Kind::Plus,
            b'-' => Kind::Minus,
            b'*' => Kind::Star,
            b'/' => Kind::Slash,
            b'^' => Kind::Caret,
            b'(' => Kind::LParen,
            b')' => Kind::RParen,
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(ParseError::Syntax { pos: i, msg: format!("unexpected character {ch:?}") });
            }
        };
        out.push(Token { kind, pos: i });
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.end, |t| t.pos)
    }

    fn eat(&mut self, kind: &Kind) -> bool {
        if self.peek().is_some_and(|t| &t.kind == kind) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(&Kind::Plus) {
                acc = &acc + &self.term()?;
            } else if self.eat(&Kind::Minus) {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(&Kind::Star) {
                acc = &acc * &self.unary()?;
            } else if self.peek().is_some_and(|t| t.kind == Kind::Slash) {
                let pos = self.here();
                self.pos += 1;
                let divisor = self.unary()?;
                acc = divide_exact(&acc, &divisor, pos)?;
            } else if self
                .peek()
                .is_some_and(|t| matches!(t.kind, Kind::Var | Kind::LParen))
            {
                // implicit multiplication: 3X, 2(X+1), (X+1)(X-1)
                acc = &acc * &self.unary()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Polynomial, ParseError> {
        if self.eat(&Kind::Minus) {
            return Ok(-&self.unary()?);
        }
        if self.eat(&Kind::Plus) {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Polynomial, ParseError> {
        let base = self.primary()?;
        if !self.eat(&Kind::Caret) {
            return Ok(base);
        }
        let pos = self.here();
        let exponent = self.unary()?;
        let e = constant_value(&exponent).ok_or_else(|| ParseError::NonPolynomial {
            pos,
            msg: "exponent must be a constant".into(),
        })?;
        if e < BigInt::zero() {
            return Err(ParseError::NonPolynomial { pos, msg: format!("negative exponent {e}") });
        }
        let e = e
            .to_u32()
            .filter(|&e| e <= MAX_EXPONENT)
            .ok_or_else(|| ParseError::NonPolynomial { pos, msg: format!("exponent {e} too large") })?;
        if e as usize * base.degree() > MAX_EXPONENT as usize {
            return Err(ParseError::NonPolynomial { pos, msg: "resulting degree too large".into() });
        }
        let mut out = Polynomial::constant(BigInt::from(1));
        for _ in 0..e {
            out = &out * &base;
        }
        Ok(out)
    }

    fn primary(&mut self) -> Result<Polynomial, ParseError> {
        let pos = self.here();
        let Some(tok) = self.peek().cloned() else {
            return Err(ParseError::Syntax { pos, msg: "unexpected end of input".into() });
        };
        self.pos += 1;
        match tok.kind {
            Kind::Int(v) => Ok(Polynomial::constant(v)),
            Kind::Var => Ok(Polynomial::monomial(BigInt::from(1), 1)),
            Kind::LParen => {
                let inner = self.expr()?;
                if !self.eat(&Kind::RParen) {
                    return Err(ParseError::Syntax { pos: self.here(), msg: "expected ')'".into() });
                }
                Ok(inner)
            }
            other => Err(ParseError::Syntax { pos, msg: format!("unexpected {}", other.describe()) }),
        }
    }
}

fn constant_value(p: &Polynomial) -> Option<BigInt> {
    (p.degree() == 0).then(|| p.constant_term())
}

fn divide_exact(num: &Polynomial, den: &Polynomial, pos: usize) -> Result<Polynomial, ParseError> {
    let d = constant_value(den).ok_or_else(|| ParseError::NonPolynomial {
        pos,
        msg: "division by a non-constant".into(),
    })?;
    if d.is_zero() {
        return Err(ParseError::NonPolynomial { pos, msg: "division by zero".into() });
    }
    let mut out = Vec::with_capacity(num.coeffs().len());
    for c in num.coeffs() {
        let (quot, rem) = c.div_rem(&d);
        if !rem.is_zero() {
            return Err(ParseError::NonPolynomial {
                pos,
                msg: format!("{d} does not divide coefficient {c}"),
            });
        }
        out.push(quot);
    }
    Ok(Polynomial::new(out))
}
