//! Explicit sequences and transformations: `A_0`, the `C^n` blocks of `alpha_0`,
//! same-parity repeats, block surgery, and attainable numbers built from periods.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use thiserror::Error;

use crate::bisequence::BiSeq;
use crate::certify::one_sided_lambda_bracket;
use crate::cfrac::{cf_cmp_prefix, purely_periodic_value, Epcf, FiniteCf, Quotient};
use crate::quadfield::{QuadExt, QuadSum};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("block index must be at least 1")]
    ZeroBlock,
    #[error("letters must lie in 1..={max}, found {found}")]
    AlphabetOutOfRange { max: Quotient, found: Quotient },
    #[error("no same-parity repeat of length {len} in a word of length {word_len}")]
    NoRepeat { len: usize, word_len: usize },
    #[error("need 1 <= n1 < n2 <= |w| with n1 = n2 mod 2, got n1 = {n1}, n2 = {n2}, |w| = {len}")]
    BadIndices { n1: usize, n2: usize, len: usize },
    #[error("the word is periodic with period n2 - n1 from n1 on; extend it")]
    PeriodicWithinWord,
    #[error("period must be nonempty and positive")]
    BadPeriod,
    #[error("R does not satisfy the strict reversed-tail inequality at site j = {j}")]
    BadR { j: usize },
    #[error("{periods} periods but {reps} repetition counts")]
    LengthMismatch { periods: usize, reps: usize },
}

/// `(..., 2,1, 2,1, 1,2,3,3*,3,2,1, 1,2, 1,2, ...)`
pub fn build_a0() -> BiSeq {
    BiSeq::from_display(vec![2, 1], vec![1, 2, 3, 3, 3, 2, 1], 3, vec![1, 2]).expect("valid")
}

/// `C^n = ((2,1) x n, 1,2,3,3,3,2,1, (1,2) x n)`, of length `4n + 7`.
pub fn block(n: usize) -> Result<Vec<Quotient>, ConstructionError> {
    if n == 0 {
        return Err(ConstructionError::ZeroBlock);
    }
    let mut w = Vec::with_capacity(4 * n + 7);
    for _ in 0..n {
        w.extend([2, 1]);
    }
    w.extend([1, 2, 3, 3, 3, 2, 1]);
    for _ in 0..n {
        w.extend([1, 2]);
    }
    Ok(w)
}

/// `[0; C^1, C^2, ..., C^m]`.
pub fn build_alpha0_prefix(m: usize) -> Result<FiniteCf, ConstructionError> {
    if m == 0 {
        return Err(ConstructionError::ZeroBlock);
    }
    let mut tail = Vec::new();
    for n in 1..=m {
        tail.extend(block(n)?);
    }
    Ok(FiniteCf::fraction(&tail))
}

/// 1-based index in `alpha_0` of the last 3 of `C^n`.
pub fn alpha0_peak_index(n: usize) -> usize {
    let before: usize = (1..n).map(|k| 4 * k + 7).sum();
    before + 2 * n + 5
}

/// Exact brackets `(i_n, lo, hi)` on `lambda_{i_n}(alpha_0)` for `n = 1..=m`, using
/// the prefix through `C^{m+1}` so every peak has a full block to its right.
pub fn alpha0_peak_brackets(m: usize) -> Vec<(usize, BigRational, BigRational)> {
    let prefix = build_alpha0_prefix(m + 1).expect("m + 1 >= 1");
    (1..=m)
        .into_par_iter()
        .map(|n| {
            let i = alpha0_peak_index(n);
            let (lo, hi, _) = one_sided_lambda_bracket(&prefix.tail, i);
            (i, lo, hi)
        })
        .collect()
}

/// `N(n) = (2n+1)(4^(2n+1) + 1)`: a word over `1..=4` of this length always has a
/// same-parity repeat of length `2n+1`.
pub fn dirichlet_length(n: usize) -> BigInt {
    let e = 2 * n as u32 + 1;
    BigInt::from(e) * (BigInt::from(4).pow(e) + 1)
}

/// Earliest `(n1, n2)` (1-based, lexicographic) with `n1 < n2`, `n1 = n2 mod 2` and
/// `w[n1+i] = w[n2+i]` for `0 <= i <= 2n`.
pub fn dirichlet_repeat(w: &[Quotient], n: usize) -> Result<(usize, usize), ConstructionError> {
    if let Some(&bad) = w.iter().find(|&&a| !(1..=4).contains(&a)) {
        return Err(ConstructionError::AlphabetOutOfRange { max: 4, found: bad });
    }
    let len = 2 * n + 1;
    let last_start = w.len().checked_sub(len).map(|s| s + 1).unwrap_or(0);
    for n1 in 1..=last_start {
        for n2 in (n1 + 2..=last_start).step_by(2) {
            if w[n1 - 1..n1 - 1 + len] == w[n2 - 1..n2 - 1 + len] {
                return Ok((n1, n2));
            }
        }
    }
    Err(ConstructionError::NoRepeat { len, word_len: w.len() })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    /// The block `w[n1..n2-1]` deleted.
    First,
    /// The block duplicated.
    Second,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurgeryResult {
    pub c1: Vec<Quotient>,
    pub c2: Vec<Quotient>,
    pub chosen: Variant,
    /// Smallest `r >= 0` with `w[n1+r] != w[n2+r]` (1-based letters).
    pub witness_index: usize,
}

impl SurgeryResult {
    pub fn chosen_word(&self) -> &[Quotient] {
        match self.chosen {
            Variant::First => &self.c1,
            Variant::Second => &self.c2,
        }
    }
}

/// Deletes or duplicates the block between two same-parity positions and keeps the
/// variant whose value (with any common continuation) exceeds that of `w`.
pub fn surgery(w: &[Quotient], n1: usize, n2: usize) -> Result<SurgeryResult, ConstructionError> {
    if !(1 <= n1 && n1 < n2 && n2 <= w.len() && (n2 - n1) % 2 == 0) {
        return Err(ConstructionError::BadIndices { n1, n2, len: w.len() });
    }
    let r = (0..=w.len() - n2)
        .find(|&r| w[n1 - 1 + r] != w[n2 - 1 + r])
        .ok_or(ConstructionError::PeriodicWithinWord)?;
    let head = &w[..n1 - 1];
    let middle = &w[n1 - 1..n2 - 1];
    let rest = &w[n2 - 1..];
    let c1: Vec<Quotient> = head.iter().chain(rest).copied().collect();
    let c2: Vec<Quotient> = head.iter().chain(middle).chain(middle).chain(rest).copied().collect();

    let framed = |v: &[Quotient]| -> Vec<Quotient> { std::iter::once(0).chain(v.iter().copied()).collect() };
    let (ord1, _) = cf_cmp_prefix(&framed(&c1), &framed(w)).expect("differs at n1 + r");
    let chosen = if ord1 == Ordering::Greater {
        Variant::First
    } else {
        let (ord2, _) = cf_cmp_prefix(&framed(&c2), &framed(w)).expect("differs at n2 + r");
        debug_assert_eq!(ord2, Ordering::Greater, "same parity forces one variant up");
        Variant::Second
    };
    Ok(SurgeryResult {
        c1,
        c2,
        chosen,
        witness_index: r,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttainCheck {
    pub m: usize,
    /// 1-based index `j + 2mn + l` in `gamma'`.
    pub index: usize,
    pub lambda: QuadSum,
    pub exceeds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttainReport {
    /// 1-based phase of `P` at which the periodic `lambda` is largest (smallest on ties).
    pub j: usize,
    /// `mu([0; (P)])`, the largest periodic `lambda`.
    pub mu: QuadSum,
    pub checks: Vec<AttainCheck>,
}

impl AttainReport {
    pub fn all_exceed(&self) -> bool {
        self.checks.iter().all(|c| c.exceeds)
    }
}

/// Limit of `lambda` at phase `j` (1-based) of `[0; (P)]`.
fn periodic_phase_lambda(p: &[Quotient], j: usize) -> QuadSum {
    let n = p.len();
    let mut right = p.to_vec();
    right.rotate_left(j % n);
    let mut left: Vec<Quotient> = p.iter().rev().copied().collect();
    // reading leftward from c_j: c_{j-1}, ..., c_1, c_n, ...
    left.rotate_left((n - j + 1) % n);
    let left = Epcf {
        a0: BigInt::from(p[j - 1]),
        preperiod: Vec::new(),
        period: left,
    };
    QuadSum::new(left.value(), Epcf::fraction(&[], &right).value())
}

/// Builds `gamma' = [0; R, (P)]` and checks `lambda_{j+2mn+l}(gamma') > mu([0;(P)])`
/// exactly for `m = 1..=check_m`.
///
/// `R` must satisfy `[0; c_{j-1}, ..., c_1, reverse(R)] > [0; c_{j-1}, ..., c_1, (reverse P)]`,
/// where the right side is the leftward periodic tail of `[0; (P)]` at phase `j`.
pub fn attainable_from_periodic(
    p: &[Quotient],
    r: &[Quotient],
    check_m: usize,
) -> Result<(Epcf, AttainReport), ConstructionError> {
    if p.is_empty() || p.contains(&0) || r.contains(&0) {
        return Err(ConstructionError::BadPeriod);
    }
    let n = p.len();
    let l = r.len();
    let (j, mu) = (1..=n)
        .map(|j| (j, periodic_phase_lambda(p, j)))
        .fold(None::<(usize, QuadSum)>, |best, (j, v)| match best {
            Some((bj, bv)) if bv >= v => Some((bj, bv)),
            _ => Some((j, v)),
        })
        .expect("nonempty period");

    let head: Vec<Quotient> = p[..j - 1].iter().rev().copied().collect();
    let r_rev: Vec<Quotient> = r.iter().rev().copied().collect();
    let with_r = FiniteCf::fraction(&[head.clone(), r_rev.clone()].concat()).value();
    // the leftward periodic tail c_{j-1}, ..., c_1, c_n, ... already starts with `head`
    let mut back: Vec<Quotient> = p.iter().rev().copied().collect();
    back.rotate_left((n - j + 1) % n);
    let periodic_tail = Epcf::fraction(&[], &back).value();
    if QuadExt::from_rational(&with_r) <= periodic_tail {
        return Err(ConstructionError::BadR { j });
    }

    let gamma = Epcf::fraction(r, p);
    let right = {
        let mut w = p.to_vec();
        w.rotate_left(j % n);
        Epcf::fraction(&[], &w).value()
    };
    let rev_p: Vec<Quotient> = p.iter().rev().copied().collect();
    let checks = (1..=check_m)
        .into_par_iter()
        .map(|m| {
            let mut left_word = head.clone();
            for _ in 0..2 * m {
                left_word.extend(&rev_p);
            }
            left_word.extend(&r_rev);
            let left = FiniteCf {
                a0: BigInt::from(p[j - 1]),
                tail: left_word,
            }
            .value();
            let lambda = QuadSum::new(QuadExt::from_rational(&left), right.clone());
            let exceeds = lambda > mu;
            AttainCheck {
                m,
                index: j + 2 * m * n + l,
                lambda,
                exceeds,
            }
        })
        .collect();
    Ok((gamma, AttainReport { j, mu, checks }))
}

/// Each period repeated `2 * reps[i] + 1` times, concatenated.
pub fn th2_blocks(periods: &[Vec<Quotient>], reps: &[usize]) -> Result<Vec<Quotient>, ConstructionError> {
    if periods.len() != reps.len() {
        return Err(ConstructionError::LengthMismatch {
            periods: periods.len(),
            reps: reps.len(),
        });
    }
    if periods.iter().any(|p| p.is_empty() || p.contains(&0)) {
        return Err(ConstructionError::BadPeriod);
    }
    Ok(periods
        .iter()
        .zip(reps)
        .flat_map(|(p, &k)| p.iter().copied().cycle().take(p.len() * (2 * k + 1)))
        .collect())
}

/// `mu([0; (P)])`: the largest periodic `lambda` over the phases of `P`.
pub fn periodic_mu(p: &[Quotient]) -> QuadSum {
    (1..=p.len())
        .map(|j| periodic_phase_lambda(p, j))
        .max()
        .expect("nonempty period")
}

/// Value of the purely periodic `[0; (P)]`.
pub fn periodic_fraction(p: &[Quotient]) -> QuadExt {
    purely_periodic_value(p).recip().expect("nonzero")
}
