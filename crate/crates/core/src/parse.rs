//! Map input: rational expressions in `z`, or explicit coefficient lists.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::arith::{parse_rational, Rational};
use crate::error::{Error, Result};
use crate::form::QForm;
use crate::map::RationalMapModel;
use crate::poly::{format_terms, PolyQ};

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Num(BigInt),
    Z,
    P,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => {}
            '0'..='9' => {
                let start = i;
                while i + 1 < chars.len() && chars[i + 1].is_ascii_digit() {
                    i += 1;
                }
                let digits: String = chars[start..=i].iter().collect();
                out.push(Token::Num(digits.parse().expect("ascii digits")));
            }
            'z' | 'Z' => out.push(Token::Z),
            'p' => out.push(Token::P),
            '+' => out.push(Token::Plus),
            '-' | '\u{2212}' => out.push(Token::Minus),
            '*' => out.push(Token::Star),
            '/' => out.push(Token::Slash),
            '^' => out.push(Token::Caret),
            '(' => out.push(Token::LParen),
            ')' => out.push(Token::RParen),
            other => return Err(Error::input(format!("unexpected character '{other}'"))),
        }
        i += 1;
    }
    Ok(out)
}

/// A quotient of polynomials kept without cancellation.
#[derive(Debug, Clone)]
struct Frac {
    num: PolyQ,
    den: PolyQ,
}

impl Frac {
    fn poly(num: PolyQ) -> Frac {
        Frac {
            num,
            den: PolyQ::one(),
        }
    }

    fn add(self, other: Frac) -> Frac {
        let g = self.den.gcd(&other.den);
        let a = self.den.div_rem(&g).0;
        let b = other.den.div_rem(&g).0;
        Frac {
            num: &(&self.num * &b) + &(&other.num * &a),
            den: &(&a * &b) * &g,
        }
    }

    fn neg(self) -> Frac {
        Frac {
            num: -&self.num,
            den: self.den,
        }
    }

    fn mul(self, other: Frac) -> Frac {
        Frac {
            num: &self.num * &other.num,
            den: &self.den * &other.den,
        }
    }

    fn div(self, other: Frac) -> Result<Frac> {
        if other.num.is_zero() {
            return Err(Error::input("division by zero"));
        }
        Ok(Frac {
            num: &self.num * &other.den,
            den: &self.den * &other.num,
        })
    }

    fn pow(self, e: i64) -> Result<Frac> {
        let k = e.unsigned_abs() as usize;
        let f = Frac {
            num: self.num.pow(k),
            den: self.den.pow(k),
        };
        if e < 0 {
            Frac::poly(PolyQ::one()).div(f)
        } else {
            Ok(f)
        }
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    p: Option<u64>,
}

const MAX_EXPONENT: i64 = 4096;

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.tokens.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Token) -> Result<()> {
        match self.next() {
            Some(ref got) if *got == t => Ok(()),
            got => Err(Error::input(format!("expected {t:?}, found {got:?}"))),
        }
    }

    // expr := term (('+' | '-') term)*
    fn expr(&mut self) -> Result<Frac> {
        let mut acc = self.term()?;
        while let Some(t @ (Token::Plus | Token::Minus)) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if t == Token::Plus {
                acc.add(rhs)
            } else {
                acc.add(rhs.neg())
            };
        }
        Ok(acc)
    }

    // term := unary (('*' | '/' | implicit) unary)*
    fn term(&mut self) -> Result<Frac> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Token::Star) => {
                    self.pos += 1;
                    acc = acc.mul(self.unary()?);
                }
                Some(Token::Slash) => {
                    self.pos += 1;
                    acc = acc.div(self.unary()?)?;
                }
                Some(Token::Num(_) | Token::Z | Token::P | Token::LParen) => {
                    acc = acc.mul(self.power()?);
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Frac> {
        match self.peek() {
            Some(Token::Minus) => {
                self.pos += 1;
                Ok(self.unary()?.neg())
            }
            Some(Token::Plus) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    // power := atom ('^' exponent)?
    fn power(&mut self) -> Result<Frac> {
        let base = self.atom()?;
        if self.peek() != Some(&Token::Caret) {
            return Ok(base);
        }
        self.pos += 1;
        let neg = if self.peek() == Some(&Token::Minus) {
            self.pos += 1;
            true
        } else {
            false
        };
        let e = match self.next() {
            Some(Token::Num(n)) => i64::try_from(n)
                .ok()
                .filter(|&e| e <= MAX_EXPONENT)
                .ok_or_else(|| Error::input("exponent too large"))?,
            Some(Token::LParen) => {
                let inner = self.expr()?;
                self.expect(Token::RParen)?;
                constant_integer(&inner)?
            }
            got => return Err(Error::input(format!("expected exponent, found {got:?}"))),
        };
        base.pow(if neg { -e } else { e })
    }

    fn atom(&mut self) -> Result<Frac> {
        match self.next() {
            Some(Token::Num(n)) => Ok(Frac::poly(PolyQ::constant(Rational::from_integer(n)))),
            Some(Token::Z) => Ok(Frac::poly(PolyQ::x())),
            Some(Token::P) => match self.p {
                Some(p) => Ok(Frac::poly(PolyQ::constant(Rational::from_integer(
                    p.into(),
                )))),
                None => Err(Error::input("expression uses p but no prime was given")),
            },
            Some(Token::LParen) => {
                let e = self.expr()?;
                self.expect(Token::RParen)?;
                Ok(e)
            }
            got => Err(Error::input(format!("unexpected token {got:?}"))),
        }
    }
}

fn constant_integer(f: &Frac) -> Result<i64> {
    let v = constant_value(f)?;
    if !v.is_integer() {
        return Err(Error::input("exponent must be an integer"));
    }
    i64::try_from(v.to_integer())
        .ok()
        .filter(|e| e.abs() <= MAX_EXPONENT)
        .ok_or_else(|| Error::input("exponent too large"))
}

fn constant_value(f: &Frac) -> Result<Rational> {
    if f.num.degree().unwrap_or(0) > 0 || f.den.degree().unwrap_or(0) > 0 {
        return Err(Error::input("expected a constant"));
    }
    Ok(f.num.coeff(0) / f.den.coeff(0))
}

fn parse_frac(text: &str, p: Option<u64>) -> Result<Frac> {
    let tokens = tokenize(text)?;
    if tokens.is_empty() {
        return Err(Error::input("empty expression"));
    }
    let mut parser = Parser { tokens, pos: 0, p };
    let f = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(Error::input(format!(
            "trailing input at token {}",
            parser.pos
        )));
    }
    Ok(f)
}

/// Parses a constant expression (digits, `p`, operators) to a rational.
pub fn parse_constant(text: &str, p: Option<u64>) -> Result<Rational> {
    if let Ok(r) = parse_rational(text) {
        return Ok(r);
    }
    constant_value(&parse_frac(text, p)?)
}

/// Parses a map given as a rational function of `z` (with `p` standing for the
/// configured prime) or as `[a_d, ..., a_0]:[b_d, ..., b_0]`.
pub fn parse_map(text: &str, p: Option<u64>) -> Result<RationalMapModel> {
    let t = text.trim();
    if t.starts_with('[') {
        return parse_coefficient_lists(t, p);
    }
    let f = parse_frac(t, p)?;
    let common = f.num.gcd(&f.den);
    if common.degree().unwrap_or(0) > 0 {
        return Err(Error::input(format!(
            "numerator and denominator share the factor {}",
            format_terms(common.coeffs(), "z")
        )));
    }
    let d = f.num.degree().unwrap_or(0).max(f.den.degree().unwrap_or(0));
    if d == 0 {
        return Err(Error::input("degree 0 map"));
    }
    RationalMapModel::new(QForm::new(d, f.num), QForm::new(d, f.den))
}

fn parse_coefficient_lists(text: &str, p: Option<u64>) -> Result<RationalMapModel> {
    let (lhs, rhs) = text
        .split_once(':')
        .ok_or_else(|| Error::input("coefficient input must look like [..]:[..]"))?;
    let list = |s: &str| -> Result<Vec<Rational>> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::input("coefficient list must be bracketed"))?;
        inner
            .split(',')
            .map(|c| parse_constant(c.trim(), p))
            .collect()
    };
    let f = list(lhs)?;
    let g = list(rhs)?;
    if f.iter().chain(&g).all(Zero::is_zero) {
        return Err(Error::input("both forms are zero"));
    }
    RationalMapModel::from_high_coeffs(&f, &g)
}
