use std::sync::OnceLock;

use lagrange::bisequence::{lambda_at, BiSeq};
use lagrange::certify::{ban_cases, site_lambda_bounds, window_upper_bound, BoundCertificate, Constraints, Pattern};
use lagrange::cfrac::{cf_distance_bounds, Epcf, Quotient};
use lagrange::quadfield::{QuadExt, QuadSum};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn certificates() -> &'static [(Pattern, Constraints, BoundCertificate)] {
    static CERTS: OnceLock<Vec<(Pattern, Constraints, BoundCertificate)>> = OnceLock::new();
    CERTS.get_or_init(|| {
        ban_cases()
            .into_iter()
            .map(|(p, c)| {
                let cert = site_lambda_bounds(&p, &c, 20).unwrap();
                (p, c, cert)
            })
            .collect()
    })
}

fn q(a: i64, b: i64, c: i64, d: i64) -> QuadExt {
    QuadExt::new(a, b, c, d).unwrap()
}

/// `[a0; pre, (period)]` with `a0 = 0` for `[0; ...]` terms.
fn cf(a0: i64, pre: &[Quotient], period: &[Quotient]) -> QuadExt {
    Epcf::new(a0, pre.to_vec(), period.to_vec()).unwrap().value()
}

fn sum(x: QuadExt, y: QuadExt) -> QuadSum {
    QuadSum::new(x, y)
}

/// `|bound - exact| < 2 eps_25`.
fn close(bound: &BigRational, exact: &QuadSum) -> bool {
    let tol = cf_distance_bounds(25).eps * BigInt::from(2);
    exact.cmp_rational(&(bound - &tol)).is_gt() && exact.cmp_rational(&(bound + &tol)).is_lt()
}

/// Extends `pattern` greedily through admissible letters chosen by `picks`, and
/// keeps the result only if it is admissible as a cyclic word.
fn cyclic_completion(pattern: &[Quotient], c: &Constraints, picks: &[usize]) -> Option<Vec<Quotient>> {
    let mut w = pattern.to_vec();
    for &pick in picks {
        let options: Vec<Quotient> = (1..=c.alphabet_max)
            .filter(|&x| {
                w.push(x);
                let ok = c.admits_suffix(&w);
                w.pop();
                ok
            })
            .collect();
        if options.is_empty() {
            return None;
        }
        w.push(options[pick % options.len()]);
    }
    let span = c.max_forbidden_len().max(1);
    let wrapped: Vec<Quotient> = w.iter().chain(w.iter().cycle().take(w.len() * span)).copied().collect();
    c.admits(&wrapped).then_some(w)
}

#[test]
fn bounds_tighten_with_depth() {
    for (p, c) in ban_cases() {
        let certs: Vec<BoundCertificate> = [5, 10, 15, 20]
            .iter()
            .map(|&d| site_lambda_bounds(&p, &c, d).unwrap())
            .collect();
        for pair in certs.windows(2) {
            assert!(pair[0].lower <= pair[1].lower, "{p}: lower loosened");
            assert!(pair[0].upper >= pair[1].upper, "{p}: upper loosened");
        }
    }
}

#[test]
fn deep_lower_bounds_reach_closed_forms() {
    let d = QuadSum::from_ext(q(39, 4, 15, 21));
    let e = QuadSum::from_ext(q(39, 10, 21, 15));
    let f = QuadSum::from_ext(q(2, 1, 1, 3));
    // (3,2,3): both sides at their smallest, 3 + [0; (3,2)] + [0; 2,3,(3,2)]
    let g = sum(cf(3, &[], &[3, 2]), cf(0, &[2, 3], &[3, 2]));
    let expected = [&d, &d, &e, &e, &g, &f];
    for ((p, c), exact) in ban_cases().into_iter().zip(expected) {
        let cert = site_lambda_bounds(&p, &c, 30).unwrap();
        assert!(exact.cmp_rational(&cert.lower).is_gt(), "{p}: bound above infimum");
        assert!(close(&cert.lower, exact), "{p}: {} vs {}", cert.lower, exact.approx(10));
    }
}

#[test]
fn deep_upper_bounds_reach_closed_forms() {
    let partial = Constraints::new(3, [vec![1, 3], vec![3, 1]]).unwrap();
    let full = Constraints::full_ban();
    let cases: [(&[Quotient], usize, &Constraints, QuadSum); 4] = [
        (&[2], 0, &partial, QuadSum::from_ext(q(0, 2, 1, 3))),
        (&[3, 3, 3], 1, &partial, QuadSum::from_ext(q(33, -2, 7, 15))),
        (
            &[1, 2, 3, 3, 2, 1],
            3,
            &partial,
            sum(cf(3, &[3, 2, 1], &[2, 1]), cf(0, &[2, 1], &[1, 2])),
        ),
        (
            &[3, 3, 3, 3, 2, 1],
            3,
            &full,
            QuadSum::from_ext(q(681609, -16103, 177122, 3)),
        ),
    ];
    for (window, center, c, exact) in cases {
        let upper = window_upper_bound(window, center, c, 30).unwrap();
        assert!(exact.cmp_rational(&upper).is_lt(), "{window:?}: bound below supremum");
        assert!(close(&upper, &exact), "{window:?}: {} vs {}", upper, exact.approx(10));
    }
    // the (2,3,3,2,1) case in closed form
    assert_eq!(
        sum(cf(3, &[3, 2, 1], &[2, 1]), cf(0, &[2, 1], &[1, 2])),
        QuadSum::from_ext(q(44, -2, 11, 3))
    );
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn periodic_completions_respect_bounds(case in 0usize..6, picks in prop::collection::vec(0usize..6, 1..12)) {
        let (p, c, cert) = &certificates()[case];
        let word = cyclic_completion(&p.word, c, &picks);
        prop_assume!(word.is_some());
        let mut period = word.unwrap();
        period.rotate_left(p.site);
        let seq = BiSeq::periodic(&period).unwrap();
        let value = lambda_at(&seq, 0).value;
        prop_assert!(value.cmp_rational(&cert.lower).is_gt(), "{} below lower bound for {:?}", value.approx(10), period);
        prop_assert!(value.cmp_rational(&cert.upper).is_lt(), "{} above upper bound for {:?}", value.approx(10), period);
    }
}
