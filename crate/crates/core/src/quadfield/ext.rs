use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::util::{floor_scaled_sqrt, squarefree_split};
use super::{QuadError, RadicalSum};

/// `(a + b*sqrt(d)) / c` in canonical form.
///
/// Canonical means `c > 0`, `gcd(a, b, c) = 1`, `d` squarefree, and `d = 1`
/// exactly when `b = 0`. Under these rules two values are equal iff their
/// fields are equal, so `PartialEq` is structural.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadExt {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl QuadExt {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Result<Self, QuadError> {
        let (a, b, c, d) = (a.into(), b.into(), c.into(), d.into());
        if c.is_zero() {
            return Err(QuadError::ZeroDenominator);
        }
        if d.is_negative() {
            return Err(QuadError::NegativeRadicand(d));
        }
        Ok(Self::normalize(a, b, c, d))
    }

    /// Builds a canonical element; panics on `c == 0` or `d < 0`.
    pub(crate) fn normalize(mut a: BigInt, mut b: BigInt, mut c: BigInt, d: BigInt) -> Self {
        assert!(!c.is_zero(), "zero denominator");
        assert!(!d.is_negative(), "negative radicand");
        let mut d = if d.is_zero() {
            b = BigInt::zero();
            BigInt::one()
        } else {
            let (k, core) = squarefree_split(&d);
            b *= k;
            core
        };
        if d.is_one() {
            a += &b;
            b = BigInt::zero();
        }
        if b.is_zero() {
            d = BigInt::one();
        }
        if c.is_negative() {
            a = -a;
            b = -b;
            c = -c;
        }
        let g = a.gcd(&b).gcd(&c);
        if !g.is_one() {
            a /= &g;
            b /= &g;
            c /= &g;
        }
        QuadExt { a, b, c, d }
    }

    pub fn zero() -> Self {
        Self::from_integer(0)
    }

    pub fn one() -> Self {
        Self::from_integer(1)
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        QuadExt {
            a: n.into(),
            b: BigInt::zero(),
            c: BigInt::one(),
            d: BigInt::one(),
        }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        QuadExt {
            a: r.numer().clone(),
            b: BigInt::zero(),
            c: r.denom().clone(),
            d: BigInt::one(),
        }
    }

    /// `sqrt(n)` for `n >= 0`.
    pub fn sqrt(n: impl Into<BigInt>) -> Result<Self, QuadError> {
        Self::new(0, 1, 1, n)
    }

    /// `p + q*sqrt(d)` from rational coordinates.
    pub fn from_coords(p: &BigRational, q: &BigRational, d: &BigInt) -> Self {
        let den = p.denom().lcm(q.denom());
        let a = p.numer() * (&den / p.denom());
        let b = q.numer() * (&den / q.denom());
        Self::normalize(a, b, den, d.clone())
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn c(&self) -> &BigInt {
        &self.c
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    /// Rational part `a/c`.
    pub fn rational_part(&self) -> BigRational {
        BigRational::new(self.a.clone(), self.c.clone())
    }

    /// Coefficient of `sqrt(d)`, i.e. `b/c`.
    pub fn radical_coeff(&self) -> BigRational {
        BigRational::new(self.b.clone(), self.c.clone())
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.rational_part())
    }

    fn common_radicand(&self, other: &Self) -> Result<BigInt, QuadError> {
        match (self.is_rational(), other.is_rational()) {
            (true, _) => Ok(other.d.clone()),
            (_, true) => Ok(self.d.clone()),
            _ if self.d == other.d => Ok(self.d.clone()),
            _ => Err(QuadError::MixedRadicand(self.d.clone(), other.d.clone())),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, QuadError> {
        let d = self.common_radicand(other)?;
        Ok(Self::normalize(
            &self.a * &other.c + &other.a * &self.c,
            &self.b * &other.c + &other.b * &self.c,
            &self.c * &other.c,
            d,
        ))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, QuadError> {
        self.checked_add(&other.neg())
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, QuadError> {
        let d = self.common_radicand(other)?;
        Ok(Self::normalize(
            &self.a * &other.a + &self.b * &other.b * &d,
            &self.a * &other.b + &self.b * &other.a,
            &self.c * &other.c,
            d,
        ))
    }

    pub fn checked_div(&self, other: &Self) -> Result<Self, QuadError> {
        self.common_radicand(other)?;
        self.checked_mul(&other.recip()?)
    }

    pub fn recip(&self) -> Result<Self, QuadError> {
        if self.is_zero() {
            return Err(QuadError::DivisionByZero);
        }
        // c / (a + b sqrt d) = c (a - b sqrt d) / (a^2 - b^2 d); the norm is nonzero
        // because sqrt(d) is irrational whenever b != 0.
        let norm = &self.a * &self.a - &self.b * &self.b * &self.d;
        Ok(Self::normalize(
            &self.c * &self.a,
            -(&self.c * &self.b),
            norm,
            self.d.clone(),
        ))
    }

    pub fn neg(&self) -> Self {
        QuadExt {
            a: -&self.a,
            b: -&self.b,
            c: self.c.clone(),
            d: self.d.clone(),
        }
    }

    pub fn add_integer(&self, n: impl Into<BigInt>) -> Self {
        Self::normalize(
            &self.a + n.into() * &self.c,
            self.b.clone(),
            self.c.clone(),
            self.d.clone(),
        )
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        Self::normalize(
            &self.a * r.numer(),
            &self.b * r.numer(),
            &self.c * r.denom(),
            self.d.clone(),
        )
    }

    /// Algebraic conjugate `(a - b*sqrt(d))/c`.
    pub fn conjugate(&self) -> Self {
        QuadExt {
            a: self.a.clone(),
            b: -&self.b,
            c: self.c.clone(),
            d: self.d.clone(),
        }
    }

    pub fn signum(&self) -> Ordering {
        // sign of a + b sqrt(d), c > 0
        let sa = self.a.sign();
        let sb = self.b.sign();
        use num_bigint::Sign::*;
        match (sa, sb) {
            (NoSign, NoSign) => Ordering::Equal,
            (Plus, Plus) | (Plus, NoSign) | (NoSign, Plus) => Ordering::Greater,
            (Minus, Minus) | (Minus, NoSign) | (NoSign, Minus) => Ordering::Less,
            (Plus, Minus) => (&self.a * &self.a).cmp(&(&self.b * &self.b * &self.d)),
            (Minus, Plus) => (&self.b * &self.b * &self.d).cmp(&(&self.a * &self.a)),
        }
    }

    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.a.div_floor(&self.c);
        }
        // a + b sqrt(d) lies strictly between the consecutive integers m and m+1,
        // and floor(x/c) = floor(m/c) for any such x.
        let m = &self.a + floor_scaled_sqrt(&self.b, &self.d, &BigInt::one());
        m.div_floor(&self.c)
    }

    pub fn to_radical_sum(&self) -> RadicalSum {
        RadicalSum::from_rational(self.rational_part()) + RadicalSum::term(self.radical_coeff(), self.d.clone())
    }

    /// Decimal rendering, half-even rounded.
    pub fn approx(&self, digits: usize) -> String {
        self.to_radical_sum().approx(digits)
    }

    pub fn to_f64(&self) -> f64 {
        self.to_radical_sum().to_f64()
    }
}

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadExt {
    fn cmp(&self, other: &Self) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        match self.checked_sub(other) {
            Ok(diff) => diff.signum(),
            Err(_) => (self.to_radical_sum() - other.to_radical_sum()).sign(),
        }
    }
}

impl From<i64> for QuadExt {
    fn from(n: i64) -> Self {
        QuadExt::from_integer(n)
    }
}

impl From<BigRational> for QuadExt {
    fn from(r: BigRational) -> Self {
        QuadExt::from_rational(&r)
    }
}

impl fmt::Display for QuadExt {
    /// `a`, `a/c`, `b*sqrt(d)`, `a+b*sqrt(d)` or `(a+b*sqrt(d))/c`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return if self.c.is_one() {
                write!(f, "{}", self.a)
            } else {
                write!(f, "{}/{}", self.a, self.c)
            };
        }
        let mag = self.b.abs();
        let radical = if mag.is_one() {
            format!("sqrt({})", self.d)
        } else {
            format!("{}*sqrt({})", mag, self.d)
        };
        let sign = if self.b.is_negative() { "-" } else { "+" };
        let numer = if self.a.is_zero() {
            if self.b.is_negative() {
                format!("-{radical}")
            } else {
                radical
            }
        } else {
            format!("{}{}{}", self.a, sign, radical)
        };
        if self.c.is_one() {
            write!(f, "{numer}")
        } else {
            write!(f, "({numer})/{}", self.c)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64, c: i64, d: i64) -> QuadExt {
        QuadExt::new(a, b, c, d).unwrap()
    }

    #[test]
    fn radicand_reduced_to_squarefree() {
        let x = q(0, 1, 1, 12);
        assert_eq!((x.a(), x.b(), x.d()), (&0.into(), &2.into(), &3.into()));
        // sqrt(49) is rational
        assert_eq!(q(1, 1, 2, 49), QuadExt::from_integer(4));
        assert_eq!(q(2, 4, -6, 5), q(-1, -2, 3, 5));
    }

    #[test]
    fn conjugate_sum_and_square() {
        let s = q(1, 1, 2, 3).checked_add(&q(1, -1, 2, 3)).unwrap();
        assert_eq!(s, QuadExt::one());
        let r3 = q(0, 1, 1, 3);
        assert_eq!(r3.checked_mul(&r3).unwrap(), QuadExt::from_integer(3));
    }

    #[test]
    fn mixed_radicands_rejected() {
        let err = q(0, 1, 1, 2).checked_add(&q(0, 1, 1, 3)).unwrap_err();
        assert!(matches!(err, QuadError::MixedRadicand(..)));
        // a rational operand adopts the other radicand
        assert!(QuadExt::from_integer(3).checked_mul(&q(0, 1, 1, 3)).is_ok());
        assert_eq!(QuadExt::zero().recip().unwrap_err(), QuadError::DivisionByZero);
    }

    #[test]
    fn division_inverts_multiplication() {
        let u = q(62976, -1498, 16357, 3);
        let v = q(246, 1, 69, 3);
        let w = u.checked_mul(&v).unwrap().checked_div(&v).unwrap();
        assert_eq!(w, u);
    }

    #[test]
    fn floor_examples() {
        assert_eq!(q(0, 1, 1, 3).floor(), 1.into());
        assert_eq!(q(62976, -1498, 16357, 3).floor(), 3.into());
        assert_eq!(q(-3, 1, 2, 21).floor(), 0.into());
        assert_eq!(q(-3, -1, 2, 21).floor(), (-4).into());
        assert_eq!(q(-7, 0, 2, 1).floor(), (-4).into());
    }

    #[test]
    fn display_forms() {
        assert_eq!(q(62976, -1498, 16357, 3).to_string(), "(62976-1498*sqrt(3))/16357");
        assert_eq!(q(246, 1, 69, 3).to_string(), "(246+sqrt(3))/69");
        assert_eq!(q(-1, 1, 1, 21).to_string(), "-1+sqrt(21)");
        assert_eq!(q(0, -2, 1, 3).to_string(), "-2*sqrt(3)");
        assert_eq!(q(3, 0, 4, 1).to_string(), "3/4");
    }

    #[test]
    fn ordering_within_and_across_fields() {
        assert!(q(0, 1, 1, 2) < q(0, 1, 1, 3));
        assert!(q(3, 1, 1, 2) > q(4, 0, 1, 1));
        assert!(q(1, -1, 1, 2) < QuadExt::zero());
    }
}
