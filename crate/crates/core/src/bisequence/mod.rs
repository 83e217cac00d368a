//! Doubly infinite eventually periodic sequences and their `lambda_i` values.
//!
//! `lambda_i(A) = [a_i; a_{i-1}, a_{i-2}, ...] + [0; a_{i+1}, a_{i+2}, ...]`.
//!
//! `sup_lambda` inspects a finite window exactly and bounds every index outside it
//! by splitting the tail into residue classes modulo twice the period. Inside one
//! class the sign of `lambda_i - L_phase` is fixed (it is decided by the first
//! disagreement with the periodic extension and the parity of its CF index), and
//! the class is squeezed into a cylinder that shrinks as the window grows.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use thiserror::Error;

use crate::cfrac::{Epcf, FiniteCf, Quotient};
use crate::quadfield::{QuadExt, QuadSum};
use crate::syntax::{self, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BiSeqError {
    #[error("periods must be nonempty")]
    EmptyPeriod,
    #[error("core must be nonempty")]
    EmptyCore,
    #[error("all elements must be positive")]
    NonPositive,
    #[error("origin {0} lies outside the core")]
    OriginOutOfRange(usize),
}

/// `... L L | core | R R ...` with a marked origin inside the core.
///
/// The left period is stored read outward: `a_{s-1}, a_{s-2}, ...` cycle through
/// `left_out`. The text form shows it in reading order, i.e. reversed.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BiSeq {
    left_out: Vec<Quotient>,
    core: Vec<Quotient>,
    origin: usize,
    right: Vec<Quotient>,
}

impl BiSeq {
    pub fn new(
        left_out: Vec<Quotient>,
        core: Vec<Quotient>,
        origin: usize,
        right: Vec<Quotient>,
    ) -> Result<Self, BiSeqError> {
        if left_out.is_empty() || right.is_empty() {
            return Err(BiSeqError::EmptyPeriod);
        }
        if core.is_empty() {
            return Err(BiSeqError::EmptyCore);
        }
        if origin >= core.len() {
            return Err(BiSeqError::OriginOutOfRange(origin));
        }
        if [&left_out, &core, &right].iter().any(|w| w.contains(&0)) {
            return Err(BiSeqError::NonPositive);
        }
        Ok(BiSeq {
            left_out,
            core,
            origin,
            right,
        })
    }

    /// Left period given in reading order, as in `<(2,1) | ... | (1,2)>`.
    pub fn from_display(
        left: Vec<Quotient>,
        core: Vec<Quotient>,
        origin: usize,
        right: Vec<Quotient>,
    ) -> Result<Self, BiSeqError> {
        let mut left_out = left;
        left_out.reverse();
        Self::new(left_out, core, origin, right)
    }

    /// `... w w w ...` with `a_0 = w[0]`.
    pub fn periodic(period: &[Quotient]) -> Result<Self, BiSeqError> {
        let mut left_out = period.to_vec();
        left_out.reverse();
        Self::new(left_out, period.to_vec(), 0, period.to_vec())
    }

    pub fn left_period_outward(&self) -> &[Quotient] {
        &self.left_out
    }

    pub fn core(&self) -> &[Quotient] {
        &self.core
    }

    pub fn origin(&self) -> usize {
        self.origin
    }

    pub fn right_period(&self) -> &[Quotient] {
        &self.right
    }

    /// First core index.
    pub fn s(&self) -> i64 {
        -(self.origin as i64)
    }

    /// Last core index.
    pub fn t(&self) -> i64 {
        (self.core.len() - 1 - self.origin) as i64
    }

    pub fn a(&self, i: i64) -> Quotient {
        let (s, t) = (self.s(), self.t());
        if i < s {
            self.left_out[((s - 1 - i) as usize) % self.left_out.len()]
        } else if i > t {
            self.right[((i - t - 1) as usize) % self.right.len()]
        } else {
            self.core[(i - s) as usize]
        }
    }

    /// The same sequence read right to left: `a'_i = a_{-i}`.
    pub fn reflect(&self) -> BiSeq {
        let mut core = self.core.clone();
        core.reverse();
        BiSeq {
            left_out: self.right.clone(),
            origin: self.core.len() - 1 - self.origin,
            core,
            right: self.left_out.clone(),
        }
    }

    /// Moves the origin marker `k` places to the right inside the core.
    pub fn shift_origin(&self, k: i64) -> Option<BiSeq> {
        let origin = self.origin as i64 + k;
        (0..self.core.len() as i64).contains(&origin).then(|| BiSeq {
            origin: origin as usize,
            ..self.clone()
        })
    }

    fn left_tail(&self, i: i64) -> Epcf {
        let s = self.s();
        let a0 = BigInt::from(self.a(i));
        if i > s {
            let preperiod = (s..i).rev().map(|j| self.a(j)).collect();
            Epcf {
                a0,
                preperiod,
                period: self.left_out.clone(),
            }
        } else {
            let off = ((s - i) as usize) % self.left_out.len();
            Epcf {
                a0,
                preperiod: Vec::new(),
                period: rotate(&self.left_out, off),
            }
        }
    }

    fn right_tail(&self, i: i64) -> Epcf {
        let t = self.t();
        if i < t {
            let preperiod: Vec<Quotient> = (i + 1..=t).map(|j| self.a(j)).collect();
            Epcf::fraction(&preperiod, &self.right)
        } else {
            let off = ((i - t) as usize) % self.right.len();
            Epcf::fraction(&[], &rotate(&self.right, off))
        }
    }

    /// Limit of `lambda_i` along indices `i > t` with `(i - t - 1) mod |R| = phase`.
    pub fn phase_limit(&self, phase: usize) -> QuadSum {
        let r = &self.right;
        let n = r.len();
        let backward: Vec<Quotient> = (1..=n).map(|m| r[(phase + n * m - m) % n]).collect();
        let left = Epcf {
            a0: BigInt::from(r[phase]),
            preperiod: Vec::new(),
            period: backward,
        };
        QuadSum::new(left.value(), self.right_phase_value(phase))
    }

    fn right_phase_value(&self, phase: usize) -> QuadExt {
        let n = self.right.len();
        Epcf::fraction(&[], &rotate(&self.right, (phase + 1) % n)).value()
    }
}

fn rotate(w: &[Quotient], k: usize) -> Vec<Quotient> {
    let mut v = w.to_vec();
    v.rotate_left(k % w.len());
    v
}

fn write_word(f: &mut fmt::Formatter<'_>, w: impl Iterator<Item = String>) -> fmt::Result {
    let parts: Vec<String> = w.collect();
    write!(f, "{}", parts.join(","))
}

impl fmt::Display for BiSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<(")?;
        write_word(f, self.left_out.iter().rev().map(|a| a.to_string()))?;
        write!(f, ") | ")?;
        write_word(
            f,
            self.core.iter().enumerate().map(|(k, a)| {
                if k == self.origin {
                    format!("{a}*")
                } else {
                    a.to_string()
                }
            }),
        )?;
        write!(f, " | (")?;
        write_word(f, self.right.iter().map(|a| a.to_string()))?;
        write!(f, ")>")
    }
}

impl FromStr for BiSeq {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        syntax::parse_biseq(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LambdaValue {
    pub index: i64,
    pub value: QuadSum,
    /// `[a_i; a_{i-1}, ...]`
    pub left_tail: Epcf,
    /// `[0; a_{i+1}, ...]`
    pub right_tail: Epcf,
}

pub fn lambda_at(seq: &BiSeq, i: i64) -> LambdaValue {
    let left_tail = seq.left_tail(i);
    let right_tail = seq.right_tail(i);
    let value = QuadSum::new(left_tail.value(), right_tail.value());
    LambdaValue {
        index: i,
        value,
        left_tail,
        right_tail,
    }
}

/// `L(A) = limsup_{i -> +inf} lambda_i(A)`: the largest right phase limit.
pub fn limsup_lambda(seq: &BiSeq) -> QuadSum {
    (0..seq.right.len())
        .map(|p| seq.phase_limit(p))
        .max()
        .expect("nonempty period")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailKind {
    /// Every index of the class equals its phase limit.
    Exact,
    /// Every index lies strictly below the phase limit.
    Below,
    /// Every index lies strictly above the phase limit and below `bound`.
    Above,
}

/// Bound on `lambda_i` for `i = first, first + 2|P|, first + 4|P|, ...` on one side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TailClass {
    pub first: i64,
    pub kind: TailKind,
    pub limit: QuadSum,
    pub bound: QuadSum,
}

impl TailClass {
    /// Every member is `<= x`; strictly unless the class is `Exact` at `x`.
    fn below(&self, x: &QuadSum) -> bool {
        self.bound <= *x
    }
}

/// Classes covering all `i > last` (requires `last >= t`).
fn right_tail_classes(seq: &BiSeq, last: i64) -> Vec<TailClass> {
    let (s, t) = (seq.s(), seq.t());
    let pr = seq.right.len();
    let pl = seq.left_out.len();
    let ext = |j: i64| seq.right[(j - t - 1).rem_euclid(pr as i64) as usize];
    let stop = s - (pl * pr) as i64;
    let diverge = (stop..=t).rev().find(|&j| seq.a(j) != ext(j));

    (last + 1..=last + 2 * pr as i64)
        .map(|first| {
            let phase = ((first - t - 1) as usize) % pr;
            let limit = seq.phase_limit(phase);
            let Some(j) = diverge else {
                return TailClass {
                    first,
                    kind: TailKind::Exact,
                    bound: limit.clone(),
                    limit,
                };
            };
            let k = first - j;
            let bigger = seq.a(j) > ext(j);
            if bigger != (k % 2 == 0) {
                return TailClass {
                    first,
                    kind: TailKind::Below,
                    bound: limit.clone(),
                    limit,
                };
            }
            let prefix = FiniteCf {
                a0: BigInt::from(seq.a(first)),
                tail: (j + 1..first).rev().map(|m| seq.a(m)).collect(),
            };
            let (_, hi) = prefix.cylinder();
            let bound = QuadSum::new(QuadExt::from_rational(&hi), seq.right_phase_value(phase));
            TailClass {
                first,
                kind: TailKind::Above,
                limit,
                bound,
            }
        })
        .collect()
}

/// Classes for both sides of the window `[lo, hi]`, with indices in `seq`'s frame.
pub fn tail_classes(seq: &BiSeq, lo: i64, hi: i64) -> Vec<TailClass> {
    let mut out = right_tail_classes(seq, hi);
    out.extend(
        right_tail_classes(&seq.reflect(), -lo)
            .into_iter()
            .map(|c| TailClass { first: -c.first, ..c }),
    );
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SupStatus {
    Certified,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupCertificate {
    /// The supremum when certified; an upper bound for it otherwise.
    pub sup: QuadSum,
    pub attained: bool,
    /// Window indices where `lambda_i = sup`, ascending.
    pub attaining_indices: Vec<i64>,
    /// Also attained at infinitely many indices outside the window (periodic tails).
    pub attained_beyond_window: bool,
    pub window: (i64, i64),
    /// Rational gap between `sup` and everything it was separated from, when positive.
    pub margin: Option<BigRational>,
    /// Largest bound over all indices outside the window.
    pub envelope: QuadSum,
    pub status: SupStatus,
}

/// Exact `lambda_i` for `lo <= i <= hi`, computed in parallel, in index order.
pub fn lambda_window(seq: &BiSeq, lo: i64, hi: i64) -> Vec<QuadSum> {
    (lo..=hi).into_par_iter().map(|i| lambda_at(seq, i).value).collect()
}

/// `M(A) = sup_i lambda_i(A)` with an attainment certificate.
///
/// The window grows as `core ± K` periods for `K = 1, 2, 4, ...` up to
/// `max_window_periods`.
pub fn sup_lambda(seq: &BiSeq, max_window_periods: usize) -> SupCertificate {
    let max_k = max_window_periods.max(1);
    let mut k = 1;
    loop {
        let lo = seq.s() - (k * seq.left_out.len()) as i64;
        let hi = seq.t() + (k * seq.right.len()) as i64;
        let values = lambda_window(seq, lo, hi);
        let w = values.iter().max().expect("nonempty window").clone();
        let attaining: Vec<i64> = values
            .iter()
            .zip(lo..)
            .filter(|(v, _)| **v == w)
            .map(|(_, i)| i)
            .collect();
        let classes = tail_classes(seq, lo, hi);
        let envelope = classes.iter().map(|c| c.bound.clone()).max().expect("classes");
        let l_star = classes.iter().map(|c| c.limit.clone()).max().expect("classes");

        if classes.iter().all(|c| c.below(&w)) {
            let beyond = classes.iter().any(|c| c.kind == TailKind::Exact && c.limit == w);
            let margin = w.minus(&envelope).rational_lower_bound();
            return SupCertificate {
                sup: w,
                attained: true,
                attaining_indices: attaining,
                attained_beyond_window: beyond,
                window: (lo, hi),
                margin,
                envelope,
                status: SupStatus::Certified,
            };
        }

        let limit_attained = classes.iter().any(|c| c.kind == TailKind::Exact && c.limit == l_star);
        if w < l_star && !limit_attained && classes.iter().all(|c| c.bound <= l_star) {
            let margin = l_star.minus(&w).rational_lower_bound();
            return SupCertificate {
                sup: l_star,
                attained: false,
                attaining_indices: Vec::new(),
                attained_beyond_window: false,
                window: (lo, hi),
                margin,
                envelope,
                status: SupStatus::Certified,
            };
        }

        if k >= max_k {
            let sup = if w.cmp(&envelope) == Ordering::Less {
                envelope.clone()
            } else {
                w
            };
            return SupCertificate {
                sup,
                attained: false,
                attaining_indices: Vec::new(),
                attained_beyond_window: false,
                window: (lo, hi),
                margin: None,
                envelope,
                status: SupStatus::Inconclusive,
            };
        }
        k = (k * 2).min(max_k);
    }
}
