use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{QuadExt, RadicalSum};

/// `x + y` with `x`, `y` possibly in different quadratic fields.
///
/// Canonical form: when the total has at most one irrational radicand everything
/// is merged into `x` and `y` is zero. Otherwise `x` carries the rational part and
/// the smaller radicand, and `y` is a pure radical over the larger one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadSum {
    x: QuadExt,
    y: QuadExt,
}

impl QuadSum {
    pub fn new(x: QuadExt, y: QuadExt) -> Self {
        let merged = x.to_radical_sum() + y.to_radical_sum();
        Self::from_radical_sum(&merged).expect("two quadratic terms span at most two radicands")
    }

    pub fn from_ext(x: QuadExt) -> Self {
        QuadSum { x, y: QuadExt::zero() }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Self::from_ext(QuadExt::from_rational(r))
    }

    /// Canonical sum for a radical sum with at most two irrational radicands.
    pub fn from_radical_sum(s: &RadicalSum) -> Option<Self> {
        let rational = s.rational_part();
        let radicals: Vec<(BigInt, BigRational)> = s
            .terms()
            .filter(|(d, _)| !d.is_one())
            .map(|(d, c)| (d.clone(), c.clone()))
            .collect();
        let zero = BigRational::zero();
        match radicals.as_slice() {
            [] => Some(Self::from_rational(&rational)),
            [(d, c)] => Some(Self::from_ext(QuadExt::from_coords(&rational, c, d))),
            [(d1, c1), (d2, c2)] => Some(QuadSum {
                x: QuadExt::from_coords(&rational, c1, d1),
                y: QuadExt::from_coords(&zero, c2, d2),
            }),
            _ => None,
        }
    }

    pub fn x(&self) -> &QuadExt {
        &self.x
    }

    pub fn y(&self) -> &QuadExt {
        &self.y
    }

    /// The value as a single field element, when `y` vanished in canonicalization.
    pub fn as_ext(&self) -> Option<&QuadExt> {
        self.y.is_zero().then_some(&self.x)
    }

    pub fn to_radical_sum(&self) -> RadicalSum {
        self.x.to_radical_sum() + self.y.to_radical_sum()
    }

    /// Exact difference as a general radical sum (may span up to four radicands).
    pub fn minus(&self, other: &QuadSum) -> RadicalSum {
        self.to_radical_sum() - other.to_radical_sum()
    }

    /// Sum of two values, if the result still spans at most two radicands.
    pub fn checked_add(&self, other: &QuadSum) -> Option<QuadSum> {
        Self::from_radical_sum(&(self.to_radical_sum() + other.to_radical_sum()))
    }

    pub fn cmp_rational(&self, r: &BigRational) -> Ordering {
        (self.to_radical_sum() - RadicalSum::from_rational(r.clone())).sign()
    }

    pub fn sign(&self) -> Ordering {
        self.to_radical_sum().sign()
    }

    pub fn floor(&self) -> BigInt {
        self.to_radical_sum().floor()
    }

    pub fn approx(&self, digits: usize) -> String {
        self.to_radical_sum().approx(digits)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_radical_sum().to_f64()
    }
}

impl From<QuadExt> for QuadSum {
    fn from(x: QuadExt) -> Self {
        QuadSum::from_ext(x)
    }
}

impl PartialOrd for QuadSum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadSum {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            Ordering::Equal
        } else {
            self.minus(other).sign()
        }
    }
}

impl fmt::Display for QuadSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() {
            write!(f, "{}", self.x)
        } else {
            write!(f, "{} + {}", self.x, self.y)
        }
    }
}
