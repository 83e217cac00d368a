use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use super::{BoundCertificate, BoundKind, CertifyError, Constraints, Pattern};
use crate::cfrac::{cylinder_from_mobius, Mobius, Quotient};
use crate::quadfield::QuadSum;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Goal {
    /// Smallest lower cylinder endpoint.
    Min,
    /// Largest upper cylinder endpoint.
    Max,
}

struct Search<'a> {
    c: &'a Constraints,
    depth: usize,
    goal: Goal,
}

impl Search<'_> {
    fn endpoint(&self, m: &Mobius) -> BigRational {
        let (lo, hi) = cylinder_from_mobius(m);
        match self.goal {
            Goal::Min => lo,
            Goal::Max => hi,
        }
    }

    fn improves(&self, x: &BigRational, best: &Option<BigRational>) -> bool {
        match (best, self.goal) {
            (None, _) => true,
            (Some(b), Goal::Min) => x < b,
            (Some(b), Goal::Max) => x > b,
        }
    }

    /// Letters in the order most likely to reach the extreme first. `k` is the CF
    /// index the letter will occupy: at even indices larger letters give larger values.
    fn order(&self, k: usize) -> Vec<Quotient> {
        let ascending = (k % 2 == 0) == (self.goal == Goal::Min);
        let mut v: Vec<Quotient> = (1..=self.c.alphabet_max).collect();
        if !ascending {
            v.reverse();
        }
        v
    }

    fn dfs(&self, ctx: &mut Vec<Quotient>, m: &Mobius, level: usize, k: usize, best: &mut Option<BigRational>) {
        let here = self.endpoint(m);
        if !self.improves(&here, best) {
            // every leaf below lies inside this cylinder
            return;
        }
        if level == self.depth {
            *best = Some(here);
            return;
        }
        for x in self.order(k) {
            ctx.push(x);
            if self.c.admits_suffix(ctx) {
                let mut next = m.clone();
                next.push(&BigInt::from(x));
                self.dfs(ctx, &next, level + 1, k + 1, best);
            }
            ctx.pop();
        }
    }
}

/// Extreme cylinder endpoint of `[0; fixed, ext]` over admissible `ext` of length
/// `depth`, where `ext` continues `context` (which ends with `fixed`).
///
/// `None` when no admissible continuation of that depth exists. The search splits
/// on the first letter in parallel and merges exactly, so the result is independent
/// of scheduling.
pub fn side_extreme(
    context: &[Quotient],
    fixed: &[Quotient],
    c: &Constraints,
    depth: usize,
    goal: Goal,
) -> Option<BigRational> {
    debug_assert!(context.ends_with(fixed));
    let search = Search { c, depth, goal };
    let root = Mobius::from_word(&BigInt::from(0), fixed);
    let k = fixed.len() + 1;
    if depth == 0 {
        return Some(search.endpoint(&root));
    }
    let results: Vec<Option<BigRational>> = search
        .order(k)
        .into_par_iter()
        .map(|x| {
            let mut ctx = context.to_vec();
            ctx.push(x);
            if !c.admits_suffix(&ctx) {
                return None;
            }
            let mut m = root.clone();
            m.push(&BigInt::from(x));
            let mut best = None;
            search.dfs(&mut ctx, &m, 1, k + 1, &mut best);
            best
        })
        .collect();
    results.into_iter().flatten().reduce(|a, b| match goal {
        Goal::Min => a.min(b),
        Goal::Max => a.max(b),
    })
}

/// Rational bounds on `lambda_site` over admissible bi-infinite sequences that
/// contain the pattern word at the site.
///
/// The two sides are bounded independently (each checked against the whole word),
/// which ranges over a superset of the admissible sequences and so stays sound.
pub fn site_lambda_bounds(p: &Pattern, c: &Constraints, depth: usize) -> Result<BoundCertificate, CertifyError> {
    if !c.admits(&p.word) {
        return Err(CertifyError::PatternViolates(p.word.clone()));
    }
    let right_fixed = &p.word[p.site + 1..];
    let rev: Vec<Quotient> = p.word.iter().rev().copied().collect();
    let left_fixed = &rev[p.word.len() - p.site..];
    let rc = c.reversed();

    let ((min_r, max_r), (min_l, max_l)) = rayon::join(
        || {
            rayon::join(
                || side_extreme(&p.word, right_fixed, c, depth, Goal::Min),
                || side_extreme(&p.word, right_fixed, c, depth, Goal::Max),
            )
        },
        || {
            rayon::join(
                || side_extreme(&rev, left_fixed, &rc, depth, Goal::Min),
                || side_extreme(&rev, left_fixed, &rc, depth, Goal::Max),
            )
        },
    );
    let missing = || CertifyError::NoAdmissibleExtension(depth);
    let a = BigRational::from_integer(BigInt::from(p.word[p.site]));
    let lower = &a + min_l.ok_or_else(missing)? + min_r.ok_or_else(missing)?;
    let upper = &a + max_l.ok_or_else(missing)? + max_r.ok_or_else(missing)?;
    Ok(BoundCertificate {
        pattern: p.clone(),
        constraints: c.clone(),
        depth,
        lower,
        upper,
        kind: BoundKind::SiteLowerBound,
    })
}

/// Succeeds iff the certified lower bound exceeds `threshold`, so that a sequence
/// with `limsup lambda <= threshold` can contain the pattern only finitely often.
pub fn certify_forbidden(
    p: &Pattern,
    threshold: &QuadSum,
    c: &Constraints,
    depth: usize,
) -> Result<BoundCertificate, CertifyError> {
    let cert = site_lambda_bounds(p, c, depth)?;
    if threshold.cmp_rational(&cert.lower).is_lt() {
        Ok(cert)
    } else {
        Err(CertifyError::NotSeparated(Box::new(cert)))
    }
}
