use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{CfError, Epcf, FiniteCf, Quotient};
use crate::quadfield::QuadExt;

/// Result of expanding a quadratic-field element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expansion {
    Finite(FiniteCf),
    Periodic(Epcf),
}

fn to_quotient(n: BigInt) -> Result<Quotient, CfError> {
    n.to_u64().ok_or(CfError::QuotientOverflow(n))
}

fn expand_rational(mut num: BigInt, mut den: BigInt) -> Result<FiniteCf, CfError> {
    let (a0, r) = num.div_mod_floor(&den);
    let mut tail = Vec::new();
    num = std::mem::replace(&mut den, r);
    while !den.is_zero() {
        let (q, r) = num.div_mod_floor(&den);
        tail.push(to_quotient(q)?);
        num = std::mem::replace(&mut den, r);
    }
    Ok(FiniteCf { a0, tail })
}

/// Expands `u` into a continued fraction.
///
/// Rationals give their (Euclidean) finite expansion. Irrationals are written as
/// `(P + sqrt(D))/Q` with `Q | D - P^2` and stepped through the complete-quotient
/// recurrence; the first repeated `(P, Q)` state fixes the preperiod and period.
pub fn cf_expand(u: &QuadExt, max_terms: usize) -> Result<Expansion, CfError> {
    if u.is_rational() {
        return expand_rational(u.a().clone(), u.c().clone()).map(Expansion::Finite);
    }
    let bb = u.b() * u.b();
    let mut disc = &bb * u.d();
    let (mut p, mut q) = if u.b().is_positive() {
        (u.a().clone(), u.c().clone())
    } else {
        (-u.a(), -u.c())
    };
    if !((&disc - &p * &p) % &q).is_zero() {
        let scale = q.abs();
        p *= &scale;
        disc *= &q * &q;
        q *= scale;
    }
    let root = disc.sqrt();
    let floor_step = |p: &BigInt, q: &BigInt| -> BigInt {
        if q.is_positive() {
            (p + &root).div_floor(q)
        } else {
            (p + &root + 1u32).div_floor(q)
        }
    };

    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut terms: Vec<BigInt> = Vec::new();
    loop {
        let k = terms.len();
        if let Some(&i) = seen.get(&(p.clone(), q.clone())) {
            let a0 = terms[0].clone();
            let rest = if i == 0 {
                // the repeat starts at a0 itself: rotate so the period begins at index 1
                terms.push(a0.clone());
                &terms[1..]
            } else {
                &terms[1..]
            };
            let start = if i == 0 { 0 } else { i - 1 };
            let words: Vec<Quotient> = rest.iter().cloned().map(to_quotient).collect::<Result<_, _>>()?;
            let (preperiod, period) = words.split_at(start);
            return Ok(Expansion::Periodic(Epcf {
                a0,
                preperiod: preperiod.to_vec(),
                period: period.to_vec(),
            }));
        }
        if k >= max_terms {
            return Err(CfError::PeriodNotFound(max_terms));
        }
        seen.insert((p.clone(), q.clone()), k);
        let a = floor_step(&p, &q);
        let next_p = &a * &q - &p;
        let next_q = (&disc - &next_p * &next_p) / &q;
        terms.push(a);
        p = next_p;
        q = next_q;
    }
}
