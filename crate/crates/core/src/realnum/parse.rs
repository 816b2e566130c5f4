//! Recursive-descent parser for real expressions and integer polynomials.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary | unary)*      juxtaposition multiplies
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' ['-'] integer)?
//! atom   := number | 'x' | 'sqrt' '(' expr ')'
//!         | 'root' '(' expr ',' '[' expr ',' expr ']' ')' | '(' expr ')'
//! ```
//!
//! `x` is only meaningful inside the first argument of `root`.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::ToString;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Pow, Zero};

use super::Real;
use crate::error::{Error, Result};
use crate::poly::Poly;

#[derive(Debug)]
enum Ast {
    Num(BigRational),
    X,
    Neg(Box<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Pow(Box<Ast>, i32),
    Sqrt(Box<Ast>),
    Root(Box<Ast>, Box<Ast>, Box<Ast>),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: &str) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.to_string() })
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

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(&format!("expected '{}'", c as char))
        }
    }

    fn expr(&mut self) -> Result<Ast> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Ast::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = Ast::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Ast> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Ast::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = Ast::Div(Box::new(lhs), Box::new(self.unary()?));
            } else if matches!(self.peek(), Some(c) if c == b'(' || c.is_ascii_alphabetic()) {
                lhs = Ast::Mul(Box::new(lhs), Box::new(self.power()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Ast> {
        if self.eat(b'-') {
            return Ok(Ast::Neg(Box::new(self.unary()?)));
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Ast> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let neg = self.eat(b'-');
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let digits = core::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
            let Ok(e) = digits.parse::<i32>() else {
                return self.err("expected an integer exponent");
            };
            return Ok(Ast::Pow(Box::new(base), if neg { -e } else { e }));
        }
        Ok(base)
    }

    fn ident(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        core::str::from_utf8(&self.src[start..self.pos]).unwrap_or("")
    }

    fn atom(&mut self) -> Result<Ast> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                match self.ident() {
                    "x" => Ok(Ast::X),
                    "sqrt" => {
                        self.expect(b'(')?;
                        let e = self.expr()?;
                        self.expect(b')')?;
                        Ok(Ast::Sqrt(Box::new(e)))
                    }
                    "root" => {
                        self.expect(b'(')?;
                        let p = self.expr()?;
                        self.expect(b',')?;
                        self.expect(b'[')?;
                        let lo = self.expr()?;
                        self.expect(b',')?;
                        let hi = self.expr()?;
                        self.expect(b']')?;
                        self.expect(b')')?;
                        Ok(Ast::Root(Box::new(p), Box::new(lo), Box::new(hi)))
                    }
                    other => {
                        self.pos = start;
                        self.err(&format!("unknown identifier '{other}'"))
                    }
                }
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }

    fn number(&mut self) -> Result<Ast> {
        let start = self.pos;
        let mut int = BigInt::zero();
        let mut scale = 0i32;
        let mut seen_digit = false;
        let mut seen_point = false;
        while let Some(&c) = self.src.get(self.pos) {
            if c.is_ascii_digit() {
                int = int * 10 + u32::from(c - b'0');
                if seen_point {
                    scale += 1;
                }
                seen_digit = true;
            } else if c == b'.' && !seen_point {
                seen_point = true;
            } else {
                break;
            }
            self.pos += 1;
        }
        if !seen_digit {
            self.pos = start;
            return self.err("malformed number");
        }
        let mut exp = -scale;
        if matches!(self.src.get(self.pos), Some(b'e' | b'E'))
            && matches!(self.src.get(self.pos + 1), Some(c) if c.is_ascii_digit() || *c == b'-' || *c == b'+')
        {
            self.pos += 1;
            let neg = match self.src.get(self.pos) {
                Some(b'-') => {
                    self.pos += 1;
                    true
                }
                Some(b'+') => {
                    self.pos += 1;
                    false
                }
                _ => false,
            };
            let s = self.pos;
            while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
                self.pos += 1;
            }
            let Ok(e) = core::str::from_utf8(&self.src[s..self.pos]).unwrap_or("").parse::<i32>()
            else {
                return self.err("malformed exponent");
            };
            exp += if neg { -e } else { e };
        }
        let ten = BigInt::from(10);
        let v = if exp >= 0 {
            BigRational::from_integer(int * Pow::pow(&ten, exp.unsigned_abs()))
        } else {
            BigRational::new(int, Pow::pow(&ten, exp.unsigned_abs()))
        };
        Ok(Ast::Num(v))
    }
}

fn parse_ast(text: &str) -> Result<Ast> {
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    let ast = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(ast)
}

pub(crate) fn parse_real(text: &str) -> Result<Real> {
    eval_real(&parse_ast(text)?)
}

/// Parse a polynomial in `x` with rational coefficients.
pub fn parse_poly(text: &str) -> Result<Poly> {
    eval_poly(&parse_ast(text)?)
}

fn rational_of(ast: &Ast) -> Result<BigRational> {
    match eval_real(ast)?.as_rational() {
        Some(q) => Ok(q.clone()),
        None => Err(Error::Parse { pos: 0, msg: "expected a rational value".into() }),
    }
}

fn eval_real(ast: &Ast) -> Result<Real> {
    Ok(match ast {
        Ast::Num(q) => Real::from_rational(q.clone()),
        Ast::X => return Err(Error::Parse { pos: 0, msg: "'x' outside of root(...)".into() }),
        Ast::Neg(a) => -eval_real(a)?,
        Ast::Add(a, b) => eval_real(a)? + eval_real(b)?,
        Ast::Sub(a, b) => eval_real(a)? - eval_real(b)?,
        Ast::Mul(a, b) => eval_real(a)? * eval_real(b)?,
        Ast::Div(a, b) => eval_real(a)?.checked_div(&eval_real(b)?)?,
        Ast::Pow(a, e) => eval_real(a)?.powi(*e)?,
        Ast::Sqrt(a) => {
            let q = rational_of(a).map_err(|_| Error::Parse {
                pos: 0,
                msg: "sqrt(...) takes a rational argument".into(),
            })?;
            Real::sqrt_rational(&q)?
        }
        Ast::Root(p, lo, hi) => Real::root_of(&eval_poly(p)?, &rational_of(lo)?, &rational_of(hi)?)?,
    })
}

fn eval_poly(ast: &Ast) -> Result<Poly> {
    Ok(match ast {
        Ast::Num(q) => Poly::constant(q.clone()),
        Ast::X => Poly::x(),
        Ast::Neg(a) => -eval_poly(a)?,
        Ast::Add(a, b) => &eval_poly(a)? + &eval_poly(b)?,
        Ast::Sub(a, b) => &eval_poly(a)? - &eval_poly(b)?,
        Ast::Mul(a, b) => &eval_poly(a)? * &eval_poly(b)?,
        Ast::Div(a, b) => {
            let d = eval_poly(b)?;
            match d.degree() {
                Some(0) => eval_poly(a)?.scale(&d.coeff(0).recip()),
                _ => {
                    return Err(Error::Parse {
                        pos: 0,
                        msg: "polynomials may only be divided by nonzero constants".into(),
                    })
                }
            }
        }
        Ast::Pow(a, e) => {
            if *e < 0 {
                return Err(Error::Parse { pos: 0, msg: "negative power in polynomial".into() });
            }
            eval_poly(a)?.pow(e.unsigned_abs())
        }
        Ast::Sqrt(_) | Ast::Root(..) => {
            return Err(Error::Parse { pos: 0, msg: "polynomial coefficients must be rational".into() })
        }
    })
}
