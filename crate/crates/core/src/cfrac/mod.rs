//! Finite and eventually periodic simple continued fractions.
//!
//! Words are plain `u64` slices. Where a word includes the integer part, index 0
//! holds `a0`; "CF index `k`" always means the position counted that way.

mod expand;

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::quadfield::QuadExt;
use crate::syntax::{self, ParseError};

pub use expand::{cf_expand, Expansion};

/// Partial quotient type for every position after `a0`.
pub type Quotient = u64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CfError {
    #[error("no repeated state within {0} terms; raise max_terms")]
    PeriodNotFound(usize),
    #[error("partial quotient {0} does not fit in 64 bits")]
    QuotientOverflow(BigInt),
    #[error("one word is a prefix of the other; the parity rule does not apply")]
    OneIsPrefixOfOther,
    #[error("partial quotients after a0 must be positive")]
    NonPositiveQuotient,
    #[error("period must be nonempty")]
    EmptyPeriod,
}

/// `[a0; a1, ..., an]` with every `ai >= 1`. Trailing 1s are kept as written.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteCf {
    pub a0: BigInt,
    pub tail: Vec<Quotient>,
}

/// `[a0; pre..., (period)]` where the period repeats forever.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Epcf {
    pub a0: BigInt,
    pub preperiod: Vec<Quotient>,
    pub period: Vec<Quotient>,
}

/// `eps_n = 2^-(n-1)` and `delta_n = 5^-2(n+2)`: upper and lower bounds on the
/// distance between two bounded-quotient continued fractions that agree on
/// exactly `a0..an`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpsDelta {
    pub n: usize,
    pub eps: BigRational,
    pub delta: BigRational,
}

impl FiniteCf {
    pub fn new(a0: impl Into<BigInt>, tail: Vec<Quotient>) -> Result<Self, CfError> {
        if tail.contains(&0) {
            return Err(CfError::NonPositiveQuotient);
        }
        Ok(FiniteCf { a0: a0.into(), tail })
    }

    /// `[0; word]`.
    pub fn fraction(word: &[Quotient]) -> Self {
        debug_assert!(!word.contains(&0));
        FiniteCf {
            a0: BigInt::zero(),
            tail: word.to_vec(),
        }
    }

    /// Number of partial quotients after `a0`.
    pub fn len(&self) -> usize {
        self.tail.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tail.is_empty()
    }

    pub fn convergents(&self) -> Vec<(BigInt, BigInt)> {
        cf_convergents(self)
    }

    pub fn value(&self) -> BigRational {
        cf_eval_finite(self)
    }

    pub fn cylinder(&self) -> (BigRational, BigRational) {
        cylinder_interval(self)
    }
}

impl Epcf {
    pub fn new(a0: impl Into<BigInt>, preperiod: Vec<Quotient>, period: Vec<Quotient>) -> Result<Self, CfError> {
        if period.is_empty() {
            return Err(CfError::EmptyPeriod);
        }
        if preperiod.contains(&0) || period.contains(&0) {
            return Err(CfError::NonPositiveQuotient);
        }
        Ok(Epcf {
            a0: a0.into(),
            preperiod,
            period,
        })
    }

    /// `[0; pre..., (period)]`.
    pub fn fraction(preperiod: &[Quotient], period: &[Quotient]) -> Self {
        Epcf {
            a0: BigInt::zero(),
            preperiod: preperiod.to_vec(),
            period: period.to_vec(),
        }
    }

    /// Partial quotient at CF index `k >= 1`.
    pub fn quotient(&self, k: usize) -> Quotient {
        assert!(k >= 1, "index 0 is the integer part");
        let i = k - 1;
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    /// The first `n` quotients after `a0` as a finite continued fraction.
    pub fn truncate(&self, n: usize) -> FiniteCf {
        FiniteCf {
            a0: self.a0.clone(),
            tail: (1..=n).map(|k| self.quotient(k)).collect(),
        }
    }

    pub fn value(&self) -> QuadExt {
        cf_eval_periodic(self)
    }
}

/// 2x2 integer matrix acting as `x -> (p x + p') / (q x + q')`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Mobius {
    pub p: BigInt,
    pub p_prev: BigInt,
    pub q: BigInt,
    pub q_prev: BigInt,
}

impl Mobius {
    pub fn identity() -> Self {
        Mobius {
            p: BigInt::one(),
            p_prev: BigInt::zero(),
            q: BigInt::zero(),
            q_prev: BigInt::one(),
        }
    }

    /// Right-multiplies by `[[a, 1], [1, 0]]`, i.e. appends quotient `a`.
    pub fn push(&mut self, a: &BigInt) {
        let p = a * &self.p + &self.p_prev;
        let q = a * &self.q + &self.q_prev;
        self.p_prev = std::mem::replace(&mut self.p, p);
        self.q_prev = std::mem::replace(&mut self.q, q);
    }

    pub fn from_word(a0: &BigInt, tail: &[Quotient]) -> Self {
        let mut m = Mobius::identity();
        m.push(a0);
        for &a in tail {
            m.push(&BigInt::from(a));
        }
        m
    }

    pub fn apply(&self, x: &QuadExt) -> QuadExt {
        let num = x
            .scale(&BigRational::from_integer(self.p.clone()))
            .add_integer(self.p_prev.clone());
        let den = x
            .scale(&BigRational::from_integer(self.q.clone()))
            .add_integer(self.q_prev.clone());
        num.checked_div(&den)
            .expect("same radicand and nonzero denominator for positive tails")
    }
}

/// Convergents `(p_k, q_k)` for `k = 0..=n`.
pub fn cf_convergents(w: &FiniteCf) -> Vec<(BigInt, BigInt)> {
    let mut m = Mobius::identity();
    let mut out = Vec::with_capacity(w.tail.len() + 1);
    m.push(&w.a0);
    out.push((m.p.clone(), m.q.clone()));
    for &a in &w.tail {
        m.push(&BigInt::from(a));
        out.push((m.p.clone(), m.q.clone()));
    }
    out
}

pub fn cf_eval_finite(w: &FiniteCf) -> BigRational {
    let m = Mobius::from_word(&w.a0, &w.tail);
    BigRational::new(m.p, m.q)
}

/// Value of a purely periodic `[p1; p2, ..., pm, p1, ...]`, which is > 1.
pub fn purely_periodic_value(period: &[Quotient]) -> QuadExt {
    assert!(!period.is_empty(), "empty period");
    assert!(period[0] >= 1, "purely periodic tails need positive quotients");
    let mut m = Mobius::identity();
    for &a in period {
        m.push(&BigInt::from(a));
    }
    // x = (P x + P') / (Q x + Q')  <=>  Q x^2 + (Q' - P) x - P' = 0
    let b = &m.q_prev - &m.p;
    let disc = &b * &b + BigInt::from(4) * &m.q * &m.p_prev;
    assert!(
        !(m.q.is_zero() && b.is_zero()),
        "degenerate period map for positive quotients"
    );
    // The period map's quadratic is a multiple of the minimal polynomial; dividing the
    // content out keeps the radicand small enough to reduce by trial division.
    let g = m.q.gcd(&b).gcd(&m.p_prev);
    let reduced = disc / (&g * &g);
    // positive root: (-b + g sqrt(reduced)) / (2Q)
    QuadExt::normalize(-b, g, BigInt::from(2) * &m.q, reduced)
}

/// Exact value of an eventually periodic continued fraction.
pub fn cf_eval_periodic(w: &Epcf) -> QuadExt {
    let tail = purely_periodic_value(&w.period);
    Mobius::from_word(&w.a0, &w.preperiod).apply(&tail)
}

/// Compares infinite continued fractions whose words start with `x` and `y`.
///
/// Returns the ordering of the values together with the first CF index at which
/// the words differ. A larger quotient at an even index gives a larger value, at
/// an odd index a smaller one. Identical words compare `Equal` with index
/// `x.len()`.
pub fn cf_cmp_prefix(x: &[Quotient], y: &[Quotient]) -> Result<(Ordering, usize), CfError> {
    match x.iter().zip(y).position(|(a, b)| a != b) {
        Some(k) => {
            let by_quotient = x[k].cmp(&y[k]);
            let ord = if k % 2 == 0 { by_quotient } else { by_quotient.reverse() };
            Ok((ord, k))
        }
        None if x.len() == y.len() => Ok((Ordering::Equal, x.len())),
        None => Err(CfError::OneIsPrefixOfOther),
    }
}

pub fn cf_distance_bounds(n: usize) -> EpsDelta {
    let two = BigInt::from(2);
    let eps = if n == 0 {
        BigRational::from_integer(two)
    } else {
        BigRational::new(BigInt::one(), two.pow((n - 1) as u32))
    };
    let delta = BigRational::new(BigInt::one(), BigInt::from(5).pow(2 * (n as u32 + 2)));
    EpsDelta { n, eps, delta }
}

/// Open interval `(lo, hi)` containing every infinite extension of `w`.
///
/// The endpoints are `p_n/q_n` and `(p_n + p_{n-1})/(q_n + q_{n-1})`; which one is
/// lower depends on the parity of `n`.
pub fn cylinder_interval(w: &FiniteCf) -> (BigRational, BigRational) {
    let m = Mobius::from_word(&w.a0, &w.tail);
    cylinder_from_mobius(&m)
}

pub(crate) fn cylinder_from_mobius(m: &Mobius) -> (BigRational, BigRational) {
    let conv = BigRational::new(m.p.clone(), m.q.clone());
    let mediant = BigRational::new(&m.p + &m.p_prev, &m.q + &m.q_prev);
    if conv < mediant {
        (conv, mediant)
    } else {
        (mediant, conv)
    }
}

fn write_word(f: &mut fmt::Formatter<'_>, word: &[Quotient]) -> fmt::Result {
    for (i, a) in word.iter().enumerate() {
        if i > 0 {
            write!(f, ",")?;
        }
        write!(f, "{a}")?;
    }
    Ok(())
}

impl fmt::Display for FiniteCf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.a0)?;
        if !self.tail.is_empty() {
            write!(f, ";")?;
            write_word(f, &self.tail)?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for Epcf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{};", self.a0)?;
        write_word(f, &self.preperiod)?;
        if !self.preperiod.is_empty() {
            write!(f, ",")?;
        }
        write!(f, "(")?;
        write_word(f, &self.period)?;
        write!(f, ")]")
    }
}

impl FromStr for FiniteCf {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        syntax::parse_finite_cf(s)
    }
}

impl FromStr for Epcf {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        syntax::parse_epcf(s)
    }
}
