use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use super::{admissible_extensions, side_extreme, CertifyError, Constraints, Goal};
use crate::cfrac::Quotient;

/// Large values of `lambda` under the full ban list sit on an outer 3 of this word.
pub const MAIN_PATTERN: [Quotient; 7] = [1, 2, 3, 3, 3, 2, 1];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NecessityException {
    pub window: Vec<Quotient>,
    pub upper: BigRational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NecessityReport {
    pub threshold: BigRational,
    pub constraints: Constraints,
    pub window_len: usize,
    pub center: usize,
    pub depth: usize,
    pub windows: usize,
    /// Certified `lambda_center < threshold`.
    pub bounded: usize,
    /// Center is an outer 3 of the main pattern.
    pub on_pattern: usize,
    /// Windows with no admissible continuation to the requested depth.
    pub dead: usize,
    pub exceptions: Vec<NecessityException>,
}

/// Which side of the center a half bound describes, with its constraint-relevant
/// context: the fixed letters plus the tail of the window that new factors can touch.
type HalfKey = (Vec<Quotient>, Vec<Quotient>);

fn half_key(window_dir: &[Quotient], fixed_len: usize, span: usize) -> HalfKey {
    let n = window_dir.len();
    let fixed = window_dir[n - fixed_len..].to_vec();
    let tail = window_dir[n.saturating_sub(span)..].to_vec();
    (fixed, tail)
}

fn half_upper(key: &HalfKey, c: &Constraints, depth: usize) -> Option<BigRational> {
    let (fixed, tail) = key;
    let context = if tail.len() >= fixed.len() { tail } else { fixed };
    side_extreme(context, fixed, c, depth, Goal::Max)
}

/// Upper bound on `lambda` at `center` for every admissible sequence containing
/// `window` there; `None` if the window has no admissible continuation of `depth`.
pub fn window_upper_bound(window: &[Quotient], center: usize, c: &Constraints, depth: usize) -> Option<BigRational> {
    let rc = c.reversed();
    let rev: Vec<Quotient> = window.iter().rev().copied().collect();
    let right = side_extreme(window, &window[center + 1..], c, depth, Goal::Max)?;
    let left = side_extreme(&rev, &rev[window.len() - center..], &rc, depth, Goal::Max)?;
    Some(BigRational::from_integer(BigInt::from(window[center])) + left + right)
}

fn on_outer_three(window: &[Quotient], center: usize) -> bool {
    [2usize, 4].iter().any(|&offset| {
        center >= offset
            && window[center - offset..]
                .get(..MAIN_PATTERN.len())
                .is_some_and(|w| w == MAIN_PATTERN)
    })
}

/// Sweeps every admissible window of `window_len` letters centered at
/// `window_len / 2`. Each window is either bounded below `threshold`, sits on an
/// outer 3 of [`MAIN_PATTERN`], or is reported as an exception.
pub fn certify_pattern_necessity(
    threshold: &BigRational,
    c: &Constraints,
    window_len: usize,
    depth: usize,
) -> Result<NecessityReport, CertifyError> {
    if window_len < 7 {
        return Err(CertifyError::WindowTooShort(window_len));
    }
    let center = window_len / 2;
    let span = c.max_forbidden_len().saturating_sub(1);
    let rc = c.reversed();
    let windows: Vec<Vec<Quotient>> = admissible_extensions(&[], c, window_len).collect();

    let mut keys_r: BTreeSet<HalfKey> = BTreeSet::new();
    let mut keys_l: BTreeSet<HalfKey> = BTreeSet::new();
    let mut pending = Vec::new();
    let mut on_pattern = 0;
    for w in &windows {
        if on_outer_three(w, center) {
            on_pattern += 1;
            continue;
        }
        let rev: Vec<Quotient> = w.iter().rev().copied().collect();
        let kr = half_key(w, window_len - center - 1, span);
        let kl = half_key(&rev, center, span);
        keys_r.insert(kr.clone());
        keys_l.insert(kl.clone());
        pending.push((w, kl, kr));
    }

    let solve = |keys: BTreeSet<HalfKey>, c: &Constraints| -> BTreeMap<HalfKey, Option<BigRational>> {
        let keys: Vec<HalfKey> = keys.into_iter().collect();
        let vals: Vec<Option<BigRational>> = keys.par_iter().map(|k| half_upper(k, c, depth)).collect();
        keys.into_iter().zip(vals).collect()
    };
    let right = solve(keys_r, c);
    let left = solve(keys_l, &rc);

    let mut bounded = 0;
    let mut dead = 0;
    let mut exceptions = Vec::new();
    for (w, kl, kr) in pending {
        match (&left[&kl], &right[&kr]) {
            (Some(l), Some(r)) => {
                let upper = BigRational::from_integer(BigInt::from(w[center])) + l + r;
                if &upper < threshold {
                    bounded += 1;
                } else {
                    exceptions.push(NecessityException {
                        window: w.clone(),
                        upper,
                    });
                }
            }
            _ => dead += 1,
        }
    }
    Ok(NecessityReport {
        threshold: threshold.clone(),
        constraints: c.clone(),
        window_len,
        center,
        depth,
        windows: windows.len(),
        bounded,
        on_pattern,
        dead,
        exceptions,
    })
}
