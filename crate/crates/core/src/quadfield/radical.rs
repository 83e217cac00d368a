use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::util::{floor_scaled_sqrt, squarefree_split};

/// A finite sum `sum_k r_k * sqrt(d_k)` with rational `r_k` and distinct squarefree `d_k`.
///
/// The rational part is stored under radicand 1. Because square roots of distinct
/// squarefree integers are linearly independent over Q, the map representation is
/// unique and structural equality is value equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RadicalSum {
    terms: BTreeMap<BigInt, BigRational>,
}

impl RadicalSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_rational(r: BigRational) -> Self {
        Self::term(r, BigInt::one())
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self::from_rational(BigRational::from_integer(n.into()))
    }

    /// `coeff * sqrt(radicand)`; the radicand is reduced to its squarefree part.
    pub fn term(coeff: BigRational, radicand: BigInt) -> Self {
        assert!(!radicand.is_negative(), "negative radicand");
        let mut out = Self::zero();
        if coeff.is_zero() || radicand.is_zero() {
            return out;
        }
        let (k, core) = squarefree_split(&radicand);
        out.terms.insert(core, coeff * BigRational::from_integer(k));
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BigInt, &BigRational)> {
        self.terms.iter()
    }

    /// Radicands other than 1 that occur with a nonzero coefficient.
    pub fn radicands(&self) -> Vec<BigInt> {
        self.terms.keys().filter(|d| !d.is_one()).cloned().collect()
    }

    pub fn rational_part(&self) -> BigRational {
        self.terms
            .get(&BigInt::one())
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    fn accumulate(&mut self, d: BigInt, r: BigRational) {
        if r.is_zero() {
            return;
        }
        match self.terms.entry(d) {
            Entry::Occupied(mut e) => {
                *e.get_mut() += r;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            Entry::Vacant(e) => {
                e.insert(r);
            }
        }
    }

    pub fn scale(&self, r: &BigRational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        RadicalSum {
            terms: self.terms.iter().map(|(d, c)| (d.clone(), c * r)).collect(),
        }
    }

    /// Exact sign, reported as the ordering of the value against zero.
    ///
    /// Picks an element `g` of a coprime base of the radicands and writes the sum as
    /// `A + B*sqrt(g)` where neither `A` nor `B` involves `g`. When the signs of `A`
    /// and `B` disagree the answer is the sign of `A^2 - g*B^2` adjusted by the sign
    /// of `A`. Every recursion step removes one base element, so it terminates.
    pub fn sign(&self) -> Ordering {
        let mut signs = self.terms.values().map(|c| c.signum());
        let Some(first) = signs.next() else {
            return Ordering::Equal;
        };
        if signs.all(|s| s == first) {
            return if first.is_positive() {
                Ordering::Greater
            } else {
                Ordering::Less
            };
        }
        let base = coprime_base(self.radicands());
        let g = base.into_iter().max().expect("mixed signs imply an irrational term");
        let mut a = RadicalSum::zero();
        let mut b = RadicalSum::zero();
        for (d, c) in &self.terms {
            if (d % &g).is_zero() {
                b.accumulate(d / &g, c.clone());
            } else {
                a.accumulate(d.clone(), c.clone());
            }
        }
        let sa = a.sign();
        let sb = b.sign();
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            _ => {
                let g_rat = BigRational::from_integer(g);
                let diff = &(&a * &a) - &(&b * &b).scale(&g_rat);
                match sa {
                    Ordering::Greater => diff.sign(),
                    _ => diff.sign().reverse(),
                }
            }
        }
    }

    /// Greatest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        let mut lower = BigInt::zero();
        for (d, c) in &self.terms {
            lower += if d.is_one() {
                c.floor().to_integer()
            } else {
                floor_scaled_sqrt(c.numer(), d, c.denom())
            };
        }
        // Each term's fractional part is in [0, 1), so the true floor is at most
        // (#terms - 1) above the sum of floors.
        loop {
            let next = &lower + 1u32;
            let gap = self - &RadicalSum::from_integer(next.clone());
            if gap.sign() == Ordering::Less {
                return lower;
            }
            lower = next;
        }
    }

    /// Decimal rendering with `digits` places, rounded half to even.
    pub fn approx(&self, digits: usize) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = self.scale(&BigRational::from_integer(scale));
        let n = scaled.floor();
        let half = BigRational::new(n.clone() * 2 + 1, BigInt::from(2));
        let rounded = match (&scaled - &RadicalSum::from_rational(half)).sign() {
            Ordering::Less => n,
            Ordering::Greater => n + 1,
            Ordering::Equal if n.is_even() => n,
            Ordering::Equal => n + 1,
        };
        format_fixed(&rounded, digits)
    }

    /// A rational `r` with `0 < r <= self` when the value is positive.
    pub fn rational_lower_bound(&self) -> Option<BigRational> {
        if self.sign() != Ordering::Greater {
            return None;
        }
        let mut scale = BigInt::from(10u32);
        loop {
            let n = self.scale(&BigRational::from_integer(scale.clone())).floor();
            if n.is_positive() {
                return Some(BigRational::new(n, scale));
            }
            scale *= 10u32;
        }
    }

    /// Rational `(lo, hi)` with `lo <= value < hi` and `hi - lo = 10^-digits`.
    pub fn bracket(&self, digits: u32) -> (BigRational, BigRational) {
        let scale = BigInt::from(10u32).pow(digits);
        let n = self.scale(&BigRational::from_integer(scale.clone())).floor();
        (
            BigRational::new(n.clone(), scale.clone()),
            BigRational::new(n + 1, scale),
        )
    }

    pub fn to_f64(&self) -> f64 {
        let (lo, _) = self.bracket(20);
        lo.numer().to_f64().unwrap_or(f64::NAN) / lo.denom().to_f64().unwrap_or(f64::NAN)
    }
}

/// Renders the integer `m` as `m / 10^digits`.
pub(crate) fn format_fixed(m: &BigInt, digits: usize) -> String {
    let negative = m.is_negative();
    let mut body = m.abs().to_string();
    if digits > 0 {
        if body.len() <= digits {
            body = "0".repeat(digits + 1 - body.len()) + &body;
        }
        body.insert(body.len() - digits, '.');
    }
    if negative {
        format!("-{body}")
    } else {
        body
    }
}

/// Pairwise coprime integers whose products generate every input.
fn coprime_base(mut items: Vec<BigInt>) -> Vec<BigInt> {
    items.retain(|x| !x.is_one());
    items.sort();
    items.dedup();
    'outer: loop {
        for i in 0..items.len() {
            for j in (i + 1)..items.len() {
                let g = items[i].gcd(&items[j]);
                if !g.is_one() {
                    let x = &items[i] / &g;
                    let y = &items[j] / &g;
                    items.swap_remove(j);
                    items.swap_remove(i);
                    items.extend([g, x, y].into_iter().filter(|v| !v.is_one()));
                    items.sort();
                    items.dedup();
                    continue 'outer;
                }
            }
        }
        return items;
    }
}

impl Add<&RadicalSum> for &RadicalSum {
    type Output = RadicalSum;
    fn add(self, rhs: &RadicalSum) -> RadicalSum {
        let mut out = self.clone();
        for (d, c) in &rhs.terms {
            out.accumulate(d.clone(), c.clone());
        }
        out
    }
}

impl Add for RadicalSum {
    type Output = RadicalSum;
    fn add(self, rhs: RadicalSum) -> RadicalSum {
        &self + &rhs
    }
}

impl Sub<&RadicalSum> for &RadicalSum {
    type Output = RadicalSum;
    fn sub(self, rhs: &RadicalSum) -> RadicalSum {
        self + &(-rhs)
    }
}

impl Sub for RadicalSum {
    type Output = RadicalSum;
    fn sub(self, rhs: RadicalSum) -> RadicalSum {
        &self - &rhs
    }
}

impl Neg for &RadicalSum {
    type Output = RadicalSum;
    fn neg(self) -> RadicalSum {
        RadicalSum {
            terms: self.terms.iter().map(|(d, c)| (d.clone(), -c)).collect(),
        }
    }
}

impl Neg for RadicalSum {
    type Output = RadicalSum;
    fn neg(self) -> RadicalSum {
        -&self
    }
}

impl Mul<&RadicalSum> for &RadicalSum {
    type Output = RadicalSum;
    fn mul(self, rhs: &RadicalSum) -> RadicalSum {
        let mut out = RadicalSum::zero();
        for (d1, c1) in &self.terms {
            for (d2, c2) in &rhs.terms {
                // sqrt(g x) sqrt(g y) = g sqrt(x y) with x y squarefree
                let g = d1.gcd(d2);
                let radicand = (d1 / &g) * (d2 / &g);
                out.accumulate(radicand, c1 * c2 * BigRational::from_integer(g));
            }
        }
        out
    }
}

impl Mul for RadicalSum {
    type Output = RadicalSum;
    fn mul(self, rhs: RadicalSum) -> RadicalSum {
        &self * &rhs
    }
}

impl PartialOrd for RadicalSum {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RadicalSum {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).sign()
    }
}

impl fmt::Display for RadicalSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (d, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if d.is_one() {
                write!(f, "{c}")?;
            } else {
                write!(f, "({c})*sqrt({d})")?;
            }
        }
        Ok(())
    }
}
