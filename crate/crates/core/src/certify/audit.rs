use std::sync::LazyLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use super::CertifyError;
use crate::cfrac::{cylinder_from_mobius, FiniteCf, Mobius, Quotient};
use crate::quadfield::QuadSum;

/// Indices whose right-tail cylinder is wider than this are left to the guard.
pub static AUDIT_MAX_WIDTH: LazyLock<BigRational> =
    LazyLock::new(|| BigRational::new(BigInt::from(1), BigInt::from(10).pow(20)));

/// Bracket on the one-sided `lambda_n = [a_n; a_{n-1}, ..., a_1] + [0; a_{n+1}, ...]`
/// for `alpha = [0; word, ...]`, `1 <= n <= |word|`.
///
/// The left part is exact; the right part ranges over the cylinder of the known
/// letters `a_{n+1}..a_len`. Returns `(lo, hi, width)`.
pub fn one_sided_lambda_bracket(word: &[Quotient], n: usize) -> (BigRational, BigRational, BigRational) {
    assert!((1..=word.len()).contains(&n), "index {n} outside 1..={}", word.len());
    let left: Vec<Quotient> = word[..n - 1].iter().rev().copied().collect();
    let left = FiniteCf {
        a0: BigInt::from(word[n - 1]),
        tail: left,
    }
    .value();
    let (lo, hi) = cylinder_from_mobius(&Mobius::from_word(&BigInt::from(0), &word[n..]));
    let width = &hi - &lo;
    (&left + lo, left + hi, width)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuditReport {
    /// Inspected 1-based indices, inclusive.
    pub range: (usize, usize),
    /// Trailing indices skipped because too few letters follow them.
    pub guard: usize,
    /// Indices in `range` whose upper bracket is not below the target.
    pub flags: Vec<usize>,
    /// Largest upper bracket over `range`, and where it occurs.
    pub max_upper: BigRational,
    pub max_upper_index: usize,
    /// Always true: only a finite prefix was examined.
    pub truncated: bool,
}

/// Checks `lambda_n(alpha) < target` for `n` from `start` up to the guard, using
/// exact brackets from the known prefix of `alpha`.
pub fn audit_not_attained(
    alpha_prefix: &FiniteCf,
    target: &QuadSum,
    start: usize,
) -> Result<AuditReport, CertifyError> {
    audit_not_attained_with(alpha_prefix, target, start, &AUDIT_MAX_WIDTH)
}

/// As [`audit_not_attained`], with an explicit right-tail width for the guard.
pub fn audit_not_attained_with(
    alpha_prefix: &FiniteCf,
    target: &QuadSum,
    start: usize,
    max_width: &BigRational,
) -> Result<AuditReport, CertifyError> {
    let word = &alpha_prefix.tail;
    let len = word.len();
    if start == 0 || start > len {
        return Err(CertifyError::PrefixTooShort { len, start });
    }
    let brackets: Vec<(BigRational, BigRational, BigRational)> = (start..=len)
        .into_par_iter()
        .map(|n| one_sided_lambda_bracket(word, n))
        .collect();
    // cylinder widths shrink as more letters follow, so the wide ones form a suffix
    let end = (start..=len)
        .zip(&brackets)
        .filter(|(_, (_, _, w))| w < max_width)
        .map(|(n, _)| n)
        .max();
    let Some(end) = end else {
        return Err(CertifyError::PrefixTooShort { len, start });
    };
    let mut flags = Vec::new();
    let mut max_upper = brackets[0].1.clone();
    let mut max_upper_index = start;
    for (n, (_, hi, _)) in (start..=end).zip(&brackets) {
        if target.cmp_rational(hi).is_le() {
            flags.push(n);
        }
        if *hi > max_upper {
            max_upper = hi.clone();
            max_upper_index = n;
        }
    }
    Ok(AuditReport {
        range: (start, end),
        guard: len - end,
        flags,
        max_upper,
        max_upper_index,
        truncated: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadfield::QuadExt;

    fn lambda0() -> QuadSum {
        QuadSum::from_ext(QuadExt::new(62976, -1498, 16357, 3).unwrap())
    }

    #[test]
    fn bracket_contains_exact_value() {
        // alpha = [0; (1,2)]: lambda_n tends to 2 sqrt 3 on the 2s
        let word: Vec<Quotient> = (0..60).map(|k| if k % 2 == 0 { 1 } else { 2 }).collect();
        let (lo, hi, _) = one_sided_lambda_bracket(&word, 20);
        let left = FiniteCf {
            a0: BigInt::from(2),
            tail: word[..19].iter().rev().copied().collect(),
        }
        .value();
        let exact = QuadSum::new(QuadExt::from_rational(&left), QuadExt::new(-1, 1, 1, 3).unwrap());
        assert!(exact.cmp_rational(&lo).is_gt() && exact.cmp_rational(&hi).is_lt());
    }

    #[test]
    fn periodic_prefix_passes() {
        let word: Vec<Quotient> = (0..80).map(|k| if k % 2 == 0 { 1 } else { 2 }).collect();
        let report = audit_not_attained(&FiniteCf::fraction(&word), &lambda0(), 10).unwrap();
        assert!(report.flags.is_empty());
        assert!(report.guard > 0 && report.range.1 + report.guard == 80);
        assert!(report.max_upper < BigRational::new(347.into(), 100.into()));
    }

    #[test]
    fn three_one_is_flagged() {
        let mut word: Vec<Quotient> = (0..80).map(|k| if k % 2 == 0 { 1 } else { 2 }).collect();
        word[30] = 3;
        word[31] = 1;
        let report = audit_not_attained(&FiniteCf::fraction(&word), &lambda0(), 10).unwrap();
        assert_eq!(report.flags, vec![31]);
    }

    #[test]
    fn start_beyond_prefix() {
        let w = FiniteCf::fraction(&[1, 2, 1]);
        assert_eq!(
            audit_not_attained(&w, &lambda0(), 5),
            Err(CertifyError::PrefixTooShort { len: 3, start: 5 })
        );
    }
}
