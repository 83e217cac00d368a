//! Text grammar for continued fractions, doubly infinite sequences and the small
//! expression language used on the command line.
//!
//! ```text
//! expr    := biseq | term ( '+' term )?
//! term    := cf | '(' inner ')' ( '/' uint )? | '-'? radical
//!          | int ( '/' uint | '.' digits )?
//! inner   := '-'? radical | int ( ('+' | '-') radical )?
//! radical := ( uint '*' )? 'sqrt' '(' uint ')'
//! cf      := '[' int ( ';' items )? ']'     items: uints, optionally ending in '(' uints ')'
//! biseq   := '<' '(' uints ')' '|' core '|' '(' uints ')' '>'   core: uints, one marked '*'
//! ```
//!
//! Whitespace is ignored between tokens.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::bisequence::BiSeq;
use crate::cfrac::{Epcf, FiniteCf, Quotient};
use crate::quadfield::{QuadExt, QuadSum};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at line {line}, column {column} near '{token}': {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub token: String,
    pub message: String,
}

/// A numeric literal term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Finite(FiniteCf),
    Periodic(Epcf),
    Integer(BigInt),
    Ratio {
        num: BigInt,
        den: BigInt,
    },
    Decimal {
        mantissa: BigInt,
        scale: u32,
    },
    /// `(a + b*sqrt(d))/c` exactly as written.
    Surd {
        a: BigInt,
        b: BigInt,
        c: BigInt,
        d: BigInt,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expression {
    Term(Term),
    Sum(Term, Term),
    BiSeq(BiSeq),
}

impl Term {
    pub fn value(&self) -> QuadExt {
        match self {
            Term::Finite(f) => QuadExt::from_rational(&f.value()),
            Term::Periodic(e) => e.value(),
            Term::Integer(n) => QuadExt::from_integer(n.clone()),
            Term::Ratio { num, den } => QuadExt::from_rational(&BigRational::new(num.clone(), den.clone())),
            Term::Decimal { mantissa, scale } => {
                QuadExt::from_rational(&BigRational::new(mantissa.clone(), BigInt::from(10u32).pow(*scale)))
            }
            Term::Surd { a, b, c, d } => QuadExt::normalize(a.clone(), b.clone(), c.clone(), d.clone()),
        }
    }
}

impl Expression {
    /// Exact value of a numeric expression; `None` for a sequence literal.
    pub fn value(&self) -> Option<QuadSum> {
        match self {
            Expression::Term(t) => Some(QuadSum::from_ext(t.value())),
            Expression::Sum(x, y) => Some(QuadSum::new(x.value(), y.value())),
            Expression::BiSeq(_) => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Finite(x) => write!(f, "{x}"),
            Term::Periodic(x) => write!(f, "{x}"),
            Term::Integer(n) => write!(f, "{n}"),
            Term::Ratio { num, den } => write!(f, "{num}/{den}"),
            Term::Decimal { mantissa, scale } => {
                write!(f, "{}", crate::quadfield::format_fixed(mantissa, *scale as usize))
            }
            Term::Surd { a, b, c, d } => {
                let sign = if b.is_negative() { '-' } else { '+' };
                write!(f, "({a}{sign}{}*sqrt({d}))/{c}", b.abs())
            }
        }
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expression::Term(t) => write!(f, "{t}"),
            Expression::Sum(x, y) => write!(f, "{x} + {y}"),
            Expression::BiSeq(s) => write!(f, "{s}"),
        }
    }
}

pub fn parse_expression(text: &str) -> Result<Expression, ParseError> {
    let mut p = Parser::new(text);
    let expr = if p.peek() == Some('<') {
        Expression::BiSeq(p.biseq()?)
    } else {
        let first = p.term()?;
        if p.eat('+') {
            Expression::Sum(first, p.term()?)
        } else {
            Expression::Term(first)
        }
    };
    p.finish()?;
    Ok(expr)
}

pub fn parse_finite_cf(text: &str) -> Result<FiniteCf, ParseError> {
    let mut p = Parser::new(text);
    let start = p.pos;
    match p.cf()? {
        Term::Finite(f) => {
            p.finish()?;
            Ok(f)
        }
        _ => Err(p.error_at(start, "expected a finite continued fraction")),
    }
}

pub fn parse_epcf(text: &str) -> Result<Epcf, ParseError> {
    let mut p = Parser::new(text);
    let start = p.pos;
    match p.cf()? {
        Term::Periodic(e) => {
            p.finish()?;
            Ok(e)
        }
        _ => Err(p.error_at(start, "expected an eventually periodic continued fraction")),
    }
}

pub fn parse_biseq(text: &str) -> Result<BiSeq, ParseError> {
    let mut p = Parser::new(text);
    let s = p.biseq()?;
    p.finish()?;
    Ok(s)
}

/// A comma separated list of positive integers, e.g. `3,1`.
pub fn parse_word(text: &str) -> Result<Vec<Quotient>, ParseError> {
    let mut p = Parser::new(text);
    let w = p.uint_list()?;
    p.finish()?;
    Ok(w)
}

/// A list of parenthesized words, e.g. `(1,3),(3,1)`.
pub fn parse_word_list(text: &str) -> Result<Vec<Vec<Quotient>>, ParseError> {
    let mut p = Parser::new(text);
    let mut out = Vec::new();
    if p.peek().is_some() {
        loop {
            p.expect('(')?;
            out.push(p.uint_list()?);
            p.expect(')')?;
            if !p.eat(',') {
                break;
            }
        }
    }
    p.finish()?;
    Ok(out)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        Parser {
            chars: text.chars().collect(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            let pos = self.pos;
            Err(self.error_at(pos, &format!("expected '{c}'")))
        }
    }

    fn finish(&mut self) -> Result<(), ParseError> {
        if self.peek().is_some() {
            let pos = self.pos;
            Err(self.error_at(pos, "unexpected trailing input"))
        } else {
            Ok(())
        }
    }

    fn error_at(&self, pos: usize, message: &str) -> ParseError {
        let mut line = 1;
        let mut column = 1;
        for &c in &self.chars[..pos.min(self.chars.len())] {
            if c == '\n' {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        }
        let token = match self.chars.get(pos) {
            None => "<end of input>".to_string(),
            Some(c) if c.is_ascii_alphanumeric() => self.chars[pos..]
                .iter()
                .take_while(|c| c.is_ascii_alphanumeric())
                .collect(),
            Some(c) => c.to_string(),
        };
        ParseError {
            line,
            column,
            token,
            message: message.to_string(),
        }
    }

    fn digits(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.error_at(start, "expected an integer"));
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn big_uint(&mut self) -> Result<BigInt, ParseError> {
        let s = self.digits()?;
        Ok(s.parse().expect("ascii digits"))
    }

    fn signed_int(&mut self) -> Result<BigInt, ParseError> {
        let neg = self.eat('-');
        let n = self.big_uint()?;
        Ok(if neg { -n } else { n })
    }

    fn quotient(&mut self) -> Result<Quotient, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let s = self.digits()?;
        match s.parse::<Quotient>() {
            Ok(0) => Err(self.error_at(start, "partial quotients must be positive")),
            Ok(v) => Ok(v),
            Err(_) => Err(self.error_at(start, "partial quotient does not fit in 64 bits")),
        }
    }

    fn uint_list(&mut self) -> Result<Vec<Quotient>, ParseError> {
        let mut out = vec![self.quotient()?];
        while self.eat(',') {
            out.push(self.quotient()?);
        }
        Ok(out)
    }

    fn keyword(&mut self, word: &str) -> Result<(), ParseError> {
        self.skip_ws();
        let end = self.pos + word.len();
        if end <= self.chars.len() && self.chars[self.pos..end].iter().copied().eq(word.chars()) {
            self.pos = end;
            Ok(())
        } else {
            let pos = self.pos;
            Err(self.error_at(pos, &format!("expected '{word}'")))
        }
    }

    /// `sqrt(d)` after an optional coefficient has been consumed.
    fn sqrt_call(&mut self) -> Result<BigInt, ParseError> {
        self.keyword("sqrt")?;
        self.expect('(')?;
        let d = self.big_uint()?;
        self.expect(')')?;
        Ok(d)
    }

    /// `(uint '*')? sqrt(d)`, returning (coefficient, radicand).
    fn radical(&mut self) -> Result<(BigInt, BigInt), ParseError> {
        if self.peek() == Some('s') {
            return Ok((BigInt::one(), self.sqrt_call()?));
        }
        let coeff = self.big_uint()?;
        self.expect('*')?;
        Ok((coeff, self.sqrt_call()?))
    }

    fn cf(&mut self) -> Result<Term, ParseError> {
        self.expect('[')?;
        let a0 = self.signed_int()?;
        let mut tail = Vec::new();
        let mut period: Option<Vec<Quotient>> = None;
        if self.eat(';') {
            loop {
                if self.eat('(') {
                    period = Some(self.uint_list()?);
                    self.expect(')')?;
                    if self.peek() != Some(']') {
                        let pos = self.pos;
                        return Err(self.error_at(pos, "the period must close the continued fraction"));
                    }
                    break;
                }
                tail.push(self.quotient()?);
                if !self.eat(',') {
                    break;
                }
            }
        }
        self.expect(']')?;
        Ok(match period {
            Some(period) => Term::Periodic(Epcf {
                a0,
                preperiod: tail,
                period,
            }),
            None => Term::Finite(FiniteCf { a0, tail }),
        })
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some('[') => self.cf(),
            Some('(') => self.paren_surd(),
            _ => self.atom(),
        }
    }

    fn paren_surd(&mut self) -> Result<Term, ParseError> {
        self.expect('(')?;
        let (a, b, d) = match self.peek() {
            Some('s') => {
                let (b, d) = self.radical()?;
                (BigInt::zero(), b, d)
            }
            Some('-') if self.starts_radical_after_minus() => {
                self.eat('-');
                let (b, d) = self.radical()?;
                (BigInt::zero(), -b, d)
            }
            _ => {
                let a = self.signed_int()?;
                if self.eat('+') {
                    let (b, d) = self.radical()?;
                    (a, b, d)
                } else if self.eat('-') {
                    let (b, d) = self.radical()?;
                    (a, -b, d)
                } else {
                    (a, BigInt::zero(), BigInt::one())
                }
            }
        };
        self.expect(')')?;
        let c = if self.eat('/') {
            self.positive_int()?
        } else {
            BigInt::one()
        };
        Ok(Term::Surd { a, b, c, d })
    }

    fn starts_radical_after_minus(&mut self) -> bool {
        let save = self.pos;
        self.eat('-');
        let ok = self.peek() == Some('s') || {
            let before = self.pos;
            let r = self.digits().is_ok() && self.peek() == Some('*');
            self.pos = before;
            r
        };
        self.pos = save;
        ok
    }

    fn positive_int(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        let n = self.big_uint()?;
        if n.is_zero() {
            return Err(self.error_at(start, "denominator must be positive"));
        }
        Ok(n)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        self.skip_ws();
        let neg = self.eat('-');
        if self.peek() == Some('s') {
            let d = self.sqrt_call()?;
            let b = if neg { -BigInt::one() } else { BigInt::one() };
            return Ok(Term::Surd {
                a: BigInt::zero(),
                b,
                c: BigInt::one(),
                d,
            });
        }
        let n = self.big_uint()?;
        let sign = |v: BigInt| if neg { -v } else { v };
        if self.eat('*') {
            let d = self.sqrt_call()?;
            return Ok(Term::Surd {
                a: BigInt::zero(),
                b: sign(n),
                c: BigInt::one(),
                d,
            });
        }
        if self.eat('/') {
            let den = self.positive_int()?;
            return Ok(Term::Ratio { num: sign(n), den });
        }
        if self.chars.get(self.pos) == Some(&'.') {
            self.pos += 1;
            let frac = self.digits()?;
            let mantissa: BigInt = format!("{n}{frac}").parse().expect("digits");
            return Ok(Term::Decimal {
                mantissa: sign(mantissa),
                scale: frac.len() as u32,
            });
        }
        Ok(Term::Integer(sign(n)))
    }

    fn biseq(&mut self) -> Result<BiSeq, ParseError> {
        self.expect('<')?;
        self.expect('(')?;
        let left = self.uint_list()?;
        self.expect(')')?;
        self.expect('|')?;
        let mut core = Vec::new();
        let mut origin = None;
        loop {
            core.push(self.quotient()?);
            if self.eat('*') {
                if origin.is_some() {
                    let pos = self.pos - 1;
                    return Err(self.error_at(pos, "exactly one origin marker is allowed"));
                }
                origin = Some(core.len() - 1);
            }
            if !self.eat(',') {
                break;
            }
        }
        let Some(origin) = origin else {
            let pos = self.pos;
            return Err(self.error_at(pos, "the core needs one element marked with '*'"));
        };
        self.expect('|')?;
        self.expect('(')?;
        let right = self.uint_list()?;
        self.expect(')')?;
        self.expect('>')?;
        Ok(BiSeq::from_display(left, core, origin, right).expect("validated by the grammar"))
    }
}
