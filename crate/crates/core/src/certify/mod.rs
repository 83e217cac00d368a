//! Certified bounds on `lambda` values over all sequences that avoid a set of
//! forbidden factors.
//!
//! Everything here is driven by cylinder intervals: the set of continued fractions
//! starting with a fixed word is an interval with convergent and mediant endpoints,
//! so min/max over admissible continuations to a given depth bound every infinite
//! continuation exactly.

mod audit;
mod bounds;
mod necessity;

use std::collections::BTreeSet;
use std::fmt;

use num_rational::BigRational;
use thiserror::Error;

use crate::cfrac::Quotient;

pub use audit::{audit_not_attained, audit_not_attained_with, one_sided_lambda_bracket, AuditReport, AUDIT_MAX_WIDTH};
pub use bounds::{certify_forbidden, side_extreme, site_lambda_bounds, Goal};
pub use necessity::{certify_pattern_necessity, window_upper_bound, NecessityException, NecessityReport, MAIN_PATTERN};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("invalid constraints: {0}")]
    InvalidConstraints(String),
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),
    #[error("pattern {0:?} itself violates the constraints")]
    PatternViolates(Vec<Quotient>),
    #[error("no admissible continuation of depth {0} exists on one side of the pattern")]
    NoAdmissibleExtension(usize),
    #[error("bounds [{}, {}] do not separate the pattern from the threshold at depth {}", .0.lower, .0.upper, .0.depth)]
    NotSeparated(Box<BoundCertificate>),
    #[error("window length must be at least 7, got {0}")]
    WindowTooShort(usize),
    #[error("prefix of length {len} is too short for start index {start}")]
    PrefixTooShort { len: usize, start: usize },
}

/// Alphabet `1..=alphabet_max` with forbidden contiguous factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Constraints {
    pub alphabet_max: Quotient,
    pub forbidden: BTreeSet<Vec<Quotient>>,
}

impl Constraints {
    pub fn new(
        alphabet_max: Quotient,
        forbidden: impl IntoIterator<Item = Vec<Quotient>>,
    ) -> Result<Self, CertifyError> {
        if alphabet_max == 0 {
            return Err(CertifyError::InvalidConstraints("alphabet_max must be >= 1".into()));
        }
        let forbidden: BTreeSet<Vec<Quotient>> = forbidden.into_iter().collect();
        for f in &forbidden {
            if f.is_empty() || f.iter().any(|&a| a == 0 || a > alphabet_max) {
                return Err(CertifyError::InvalidConstraints(format!(
                    "forbidden pattern {f:?} is not a nonempty word over 1..={alphabet_max}"
                )));
            }
        }
        Ok(Constraints {
            alphabet_max,
            forbidden,
        })
    }

    pub fn unconstrained(alphabet_max: Quotient) -> Self {
        Self::new(alphabet_max, []).expect("valid alphabet")
    }

    /// Alphabet `{1,2,3}` without (1,3), (3,1), (2,2,3), (3,2,2), (3,2,3), (1,2,3,2,1).
    pub fn full_ban() -> Self {
        Self::new(3, BAN_LIST.iter().map(|w| w.to_vec())).expect("valid ban list")
    }

    /// The same constraints for the sequence read backwards.
    pub fn reversed(&self) -> Self {
        Constraints {
            alphabet_max: self.alphabet_max,
            forbidden: self
                .forbidden
                .iter()
                .map(|f| f.iter().rev().copied().collect())
                .collect(),
        }
    }

    pub fn max_forbidden_len(&self) -> usize {
        self.forbidden.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// No forbidden factor anywhere in `word`, all letters in the alphabet.
    pub fn admits(&self, word: &[Quotient]) -> bool {
        word.iter().all(|&a| (1..=self.alphabet_max).contains(&a))
            && (1..=word.len()).all(|end| self.admits_suffix(&word[..end]))
    }

    /// No forbidden factor ends at the last letter of `word`.
    pub fn admits_suffix(&self, word: &[Quotient]) -> bool {
        self.forbidden.iter().all(|f| !word.ends_with(f))
    }
}

impl fmt::Display for Constraints {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "max {}, forbidden {{", self.alphabet_max)?;
        let parts: Vec<String> = self.forbidden.iter().map(|w| word_string(w)).collect();
        write!(f, "{}}}", parts.join(", "))
    }
}

pub const BAN_LIST: [&[Quotient]; 6] = [&[1, 3], &[3, 1], &[2, 2, 3], &[3, 2, 2], &[3, 2, 3], &[1, 2, 3, 2, 1]];

/// `(a, b, ...)`
pub fn word_string(w: &[Quotient]) -> String {
    let parts: Vec<String> = w.iter().map(|a| a.to_string()).collect();
    format!("({})", parts.join(","))
}

/// A word with a distinguished site where `lambda` is evaluated.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Pattern {
    pub word: Vec<Quotient>,
    pub site: usize,
}

impl Pattern {
    pub fn new(word: Vec<Quotient>, site: usize) -> Result<Self, CertifyError> {
        if word.is_empty() || word.contains(&0) {
            return Err(CertifyError::InvalidPattern(
                "word must be nonempty and positive".into(),
            ));
        }
        if site >= word.len() {
            return Err(CertifyError::InvalidPattern(format!(
                "site {site} outside word of length {}",
                word.len()
            )));
        }
        Ok(Pattern { word, site })
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at site {}", word_string(&self.word), self.site)
    }
}

/// The six exclusions in the order they are argued, each with the factors already
/// excluded at that point.
pub fn ban_cases() -> Vec<(Pattern, Constraints)> {
    let none = Constraints::unconstrained(3);
    let ones_threes = Constraints::new(3, [vec![1, 3], vec![3, 1]]).expect("valid");
    let p = |w: &[Quotient], s| Pattern::new(w.to_vec(), s).expect("valid pattern");
    vec![
        (p(&[3, 1], 0), none.clone()),
        (p(&[1, 3], 1), none),
        (p(&[3, 2, 2], 0), ones_threes.clone()),
        (p(&[2, 2, 3], 2), ones_threes.clone()),
        (p(&[3, 2, 3], 0), ones_threes.clone()),
        (p(&[1, 2, 3, 2, 1], 2), ones_threes),
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    SiteLowerBound,
    CylinderUpperBound,
}

/// `lower < lambda_site < upper` for every admissible bi-infinite sequence that
/// contains `pattern.word` with the site at the evaluated position.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundCertificate {
    pub pattern: Pattern,
    pub constraints: Constraints,
    pub depth: usize,
    pub lower: BigRational,
    pub upper: BigRational,
    pub kind: BoundKind,
}

/// Depth-first, lexicographic enumeration of admissible words `prefix ++ ext` with
/// `|ext| = depth`. Yields nothing if `prefix` is itself inadmissible.
pub fn admissible_extensions<'a>(prefix: &[Quotient], c: &'a Constraints, depth: usize) -> Extensions<'a> {
    Extensions {
        c,
        word: prefix.to_vec(),
        base: prefix.len(),
        depth,
        started: false,
        done: false,
    }
}

pub struct Extensions<'a> {
    c: &'a Constraints,
    word: Vec<Quotient>,
    base: usize,
    depth: usize,
    started: bool,
    done: bool,
}

impl Extensions<'_> {
    fn first_from(&mut self, from: Quotient) -> Option<Quotient> {
        for x in from..=self.c.alphabet_max {
            self.word.push(x);
            let ok = self.c.admits_suffix(&self.word);
            self.word.pop();
            if ok {
                return Some(x);
            }
        }
        None
    }

    /// Advances to the next sibling, backtracking as needed.
    fn bump(&mut self) -> bool {
        while self.word.len() > self.base {
            let last = self.word.pop().expect("nonempty");
            if let Some(x) = self.first_from(last + 1) {
                self.word.push(x);
                return true;
            }
        }
        false
    }
}

impl Iterator for Extensions<'_> {
    type Item = Vec<Quotient>;

    fn next(&mut self) -> Option<Vec<Quotient>> {
        if self.done {
            return None;
        }
        if self.started {
            if !self.bump() {
                self.done = true;
                return None;
            }
        } else {
            self.started = true;
            if !self.c.admits(&self.word) {
                self.done = true;
                return None;
            }
        }
        loop {
            if self.word.len() == self.base + self.depth {
                return Some(self.word.clone());
            }
            match self.first_from(1) {
                Some(x) => self.word.push(x),
                None => {
                    if !self.bump() {
                        self.done = true;
                        return None;
                    }
                }
            }
        }
    }
}
