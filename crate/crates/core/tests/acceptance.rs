use std::cmp::Ordering;
use std::process::ExitCode;
use std::time::Instant;

use lagrange::bisequence::{lambda_at, limsup_lambda, sup_lambda, SupStatus};
use lagrange::certify::{
    audit_not_attained, ban_cases, certify_forbidden, certify_pattern_necessity, one_sided_lambda_bracket, Constraints,
};
use lagrange::cfrac::{
    cf_cmp_prefix, cf_distance_bounds, cf_eval_periodic, cf_expand, cylinder_interval, Epcf, Expansion, FiniteCf,
    Quotient,
};
use lagrange::constructions::{
    alpha0_peak_brackets, alpha0_peak_index, attainable_from_periodic, build_a0, build_alpha0_prefix, dirichlet_length,
    dirichlet_repeat, surgery, Variant,
};
use lagrange::quadfield::{QuadExt, QuadSum};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Decimal agreement with printed constants.
const DECIMAL_TOL: (i64, i64) = (1, 100_000);
/// Proximity of the eighth `alpha_0` peak to `lambda_0`, frozen from the oracle run
/// (the observed gap is about 2e-10).
const PEAK_PROXIMITY: (i64, i64) = (1, 1_000);
/// Bound for `lambda` away from the outer 3s of each core.
const OFF_CORE_BOUND: (i64, i64) = (36, 10);
const NECESSITY_THRESHOLD: (i64, i64) = (3691, 1000);
const RANDOM_CASES: usize = 250;
const SEED: u64 = 0x1a9_2a4e;

type Outcome = Result<String, String>;

fn rat((n, d): (i64, i64)) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn decimal(s: &str) -> BigRational {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits: BigInt = format!("{int}{frac}").parse().expect("decimal literal");
    BigRational::new(digits, BigInt::from(10).pow(frac.len() as u32))
}

fn q(a: i64, b: i64, c: i64, d: i64) -> QuadExt {
    QuadExt::new(a, b, c, d).unwrap()
}

fn cf(a0: i64, pre: &[Quotient], period: &[Quotient]) -> QuadExt {
    Epcf::new(a0, pre.to_vec(), period.to_vec()).unwrap().value()
}

fn lambda0() -> QuadSum {
    QuadSum::from_ext(q(62976, -1498, 16357, 3))
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Exact equality with the closed form, and the 5-decimal rendering within
/// tolerance of the printed value.
fn constant(value: QuadSum, closed: Option<QuadSum>, printed: &str) -> Outcome {
    if let Some(closed) = &closed {
        ensure(value == *closed, || {
            format!("{} != {}", value.approx(12), closed.approx(12))
        })?;
    }
    let shown = value.approx(5);
    let err = decimal(&shown) - decimal(printed);
    let err = if err < BigRational::from_integer(0.into()) {
        -err
    } else {
        err
    };
    ensure(err <= rat(DECIMAL_TOL), || {
        format!("rendered {shown}, printed {printed}")
    })?;
    Ok(format!("{shown} (printed {printed})"))
}

fn constants() -> Vec<(&'static str, Outcome)> {
    let two = |x: QuadExt| x.scale(&rat((2, 1)));
    let mut v = vec![
        (
            "1a [3;3,3,2,1,(1,2)] + [0;2,1,(1,2)] = (62976-1498√3)/16357",
            constant(
                QuadSum::new(cf(3, &[3, 3, 2, 1], &[1, 2]), cf(0, &[2, 1], &[1, 2])),
                Some(lambda0()),
                "3.69147",
            ),
        ),
        (
            "1b 3 + 2[0;3,2,1,(1,2)] = (246+√3)/69",
            constant(
                QuadSum::from_ext(two(cf(0, &[3, 2, 1], &[1, 2])).add_integer(3)),
                Some(QuadSum::from_ext(q(246, 1, 69, 3))),
                "3.59032",
            ),
        ),
    ];
    let c = QuadSum::from_ext(two(cf(0, &[], &[1, 3])).add_integer(2));
    let c_outcome = ensure(c == QuadSum::from_ext(q(-1, 1, 1, 21)), || {
        format!("{} != √21-1", c.approx(12))
    })
    .and_then(|_| {
        ensure(c.cmp_rational(&rat(OFF_CORE_BOUND)).is_lt(), || "not below 3.6".into())?;
        Ok(format!("{} < 3.6", c.approx(5)))
    });
    v.push(("1c 2 + 2[0;(1,3)] = √21-1 < 3.6", c_outcome));
    v.extend([
        (
            "1d [3;1,(1,3)] + [0;(3,1)] = (39+4√21)/15",
            constant(
                QuadSum::new(cf(3, &[1], &[1, 3]), cf(0, &[], &[3, 1])),
                Some(QuadSum::from_ext(q(39, 4, 15, 21))),
                "3.82202",
            ),
        ),
        (
            "1e [3;2,2,(3,2)] + [0;(3,2)] = (39+10√15)/21",
            constant(
                QuadSum::new(cf(3, &[2, 2], &[3, 2]), cf(0, &[], &[3, 2])),
                Some(QuadSum::from_ext(q(39, 10, 21, 15))),
                "3.70142",
            ),
        ),
        (
            "1f [3;2,1,(2,1)] + [0;(2,1)] = 2+√3",
            constant(
                QuadSum::new(cf(3, &[2, 1], &[2, 1]), cf(0, &[], &[2, 1])),
                Some(QuadSum::from_ext(q(2, 1, 1, 3))),
                "3.73205",
            ),
        ),
        (
            "1g 2 + 2[0;(1,2)] = 2√3",
            constant(
                QuadSum::from_ext(two(cf(0, &[], &[1, 2])).add_integer(2)),
                Some(QuadSum::from_ext(q(0, 2, 1, 3))),
                "3.46410",
            ),
        ),
        (
            "1h 3 + 2[0;3,(3,2)] = (33-2√15)/7",
            constant(
                QuadSum::from_ext(two(cf(0, &[3], &[3, 2])).add_integer(3)),
                Some(QuadSum::from_ext(q(33, -2, 7, 15))),
                "3.60772",
            ),
        ),
        (
            "1i [3;3,2,1,(2,1)] + [0;2,1,(1,2)] = 4 - 2√3/11",
            constant(
                QuadSum::new(cf(3, &[3, 2, 1], &[2, 1]), cf(0, &[2, 1], &[1, 2])),
                Some(QuadSum::from_ext(q(44, -2, 11, 3))),
                "3.68508",
            ),
        ),
        (
            "1j [3;3,3,3,3,2,1,(1,2)] + [0;2,1,(1,2)] = (681609-16103√3)/177122",
            constant(
                QuadSum::new(cf(3, &[3, 3, 3, 3, 2, 1], &[1, 2]), cf(0, &[2, 1], &[1, 2])),
                Some(QuadSum::from_ext(q(681609, -16103, 177122, 3))),
                "3.69078",
            ),
        ),
        (
            "1k 4 + [0;3,2,1,1,(3,1,3,1,2,1)] + [0;4,3,2,2,(3,1,3,1,2,1)]",
            constant(
                QuadSum::new(
                    cf(4, &[3, 2, 1, 1], &[3, 1, 3, 1, 2, 1]),
                    cf(0, &[4, 3, 2, 2], &[3, 1, 3, 1, 2, 1]),
                ),
                None,
                "4.52783",
            ),
        ),
    ]);
    v
}

fn a0_certificate() -> Outcome {
    let a0 = build_a0();
    let cert = sup_lambda(&a0, 8);
    let l0 = lambda0();
    ensure(cert.status == SupStatus::Certified, || "sup not certified".into())?;
    ensure(cert.sup == l0, || format!("sup {} != lambda_0", cert.sup.approx(12)))?;
    ensure(
        cert.attained && cert.attaining_indices == [-1, 1] && !cert.attained_beyond_window,
        || format!("attained at {:?}", cert.attaining_indices),
    )?;
    let at_origin = lambda_at(&a0, 0).value;
    ensure(
        at_origin == QuadSum::from_ext(q(246, 1, 69, 3)) && at_origin < l0,
        || format!("lambda_0(A_0) = {}", at_origin.approx(12)),
    )?;
    let reflected = a0.reflect();
    let phases: Vec<QuadSum> = (0..a0.right_period().len())
        .map(|p| a0.phase_limit(p))
        .chain((0..reflected.right_period().len()).map(|p| reflected.phase_limit(p)))
        .collect();
    let top = phases.iter().max().unwrap();
    ensure(*top < l0, || format!("phase limit {} reaches lambda_0", top.approx(12)))?;
    ensure(limsup_lambda(&a0) < l0 && limsup_lambda(&reflected) < l0, || {
        "limsup reaches lambda_0".into()
    })?;
    Ok(format!(
        "sup {} at {:?}, lambda_0(A_0) {}, largest phase limit {}",
        cert.sup.approx(7),
        cert.attaining_indices,
        at_origin.approx(5),
        top.approx(5)
    ))
}

fn alpha0_peaks() -> Outcome {
    let l0 = lambda0();
    let brackets = alpha0_peak_brackets(8);
    for pair in brackets.windows(2) {
        let ((i, _, hi), (j, lo, _)) = (&pair[0], &pair[1]);
        ensure(hi < lo, || format!("peak at {i} not below peak at {j}"))?;
    }
    for (i, _, hi) in &brackets {
        ensure(l0.cmp_rational(hi).is_gt(), || format!("peak at {i} reaches lambda_0"))?;
    }
    let (i8, lo8, _) = brackets.last().unwrap();
    ensure(l0.cmp_rational(&(lo8 + rat(PEAK_PROXIMITY))).is_lt(), || {
        format!("peak at {i8} not within 1e-3 of lambda_0")
    })?;

    // every index of C^1..C^9, with C^10 supplying the right tail
    let prefix = build_alpha0_prefix(10).map_err(|e| e.to_string())?;
    let checked_len = build_alpha0_prefix(9).unwrap().len();
    let outer_threes: Vec<usize> = (1..=9)
        .flat_map(|n| [alpha0_peak_index(n) - 2, alpha0_peak_index(n)])
        .collect();
    let bound = rat(OFF_CORE_BOUND);
    let mut top = (rat((0, 1)), 0);
    for n in (1..=checked_len).filter(|n| !outer_threes.contains(n)) {
        let (_, hi, _) = one_sided_lambda_bracket(&prefix.tail, n);
        ensure(hi < bound, || format!("index {n} not bracketed below 3.6"))?;
        if hi > top.0 {
            top = (hi, n);
        }
    }
    Ok(format!(
        "peaks {} < ... < {} < lambda_0, gap below 1e-3; off-core max {} at {} of {} indices (truncated)",
        QuadExt::from_rational(&brackets[0].2).approx(7),
        QuadExt::from_rational(&brackets[7].2).approx(10),
        QuadExt::from_rational(&top.0).approx(5),
        top.1,
        checked_len - outer_threes.len()
    ))
}

fn audit() -> Outcome {
    let prefix = build_alpha0_prefix(8).map_err(|e| e.to_string())?;
    let report = audit_not_attained(&prefix, &lambda0(), 1).map_err(|e| e.to_string())?;
    ensure(report.flags.is_empty(), || format!("flagged {:?}", report.flags))?;
    Ok(format!(
        "indices {}..={} below lambda_0, max {} at {} (truncated)",
        report.range.0,
        report.range.1,
        QuadExt::from_rational(&report.max_upper).approx(7),
        report.max_upper_index
    ))
}

fn forbidden() -> Outcome {
    let l0 = lambda0();
    let mut lines = Vec::new();
    for (p, c) in ban_cases() {
        let cert = certify_forbidden(&p, &l0, &c, 25).map_err(|e| format!("{p}: {e}"))?;
        lines.push(format!(
            "{} > {}",
            p.word.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(""),
            QuadExt::from_rational(&cert.lower).approx(5)
        ));
    }
    Ok(lines.join(", "))
}

fn necessity() -> Outcome {
    let report = certify_pattern_necessity(&rat(NECESSITY_THRESHOLD), &Constraints::full_ban(), 15, 25)
        .map_err(|e| e.to_string())?;
    ensure(report.exceptions.is_empty(), || {
        format!("{} exceptions", report.exceptions.len())
    })?;
    Ok(format!(
        "{} windows: {} bounded, {} on pattern, {} dead (truncated)",
        report.windows, report.bounded, report.on_pattern, report.dead
    ))
}

fn letters(rng: &mut ChaCha8Rng, len: usize) -> Vec<Quotient> {
    (0..len).map(|_| rng.random_range(1..=4)).collect()
}

fn period(rng: &mut ChaCha8Rng) -> Vec<Quotient> {
    let n = rng.random_range(1..=4);
    letters(rng, n)
}

/// Words agreeing on exactly `min_prefix..` CF indices, index 0 being `a0`.
fn diverging(
    rng: &mut ChaCha8Rng,
    min_prefix: usize,
    max_prefix: usize,
    max_rest: usize,
) -> (Vec<Quotient>, Vec<Quotient>) {
    let n = rng.random_range(min_prefix..=max_prefix);
    let prefix = letters(rng, n);
    let a: Quotient = rng.random_range(1..=4);
    let b = (a - 1 + rng.random_range(1..=3)) % 4 + 1;
    let mut x = prefix.clone();
    x.push(a);
    let rest = rng.random_range(0..=max_rest);
    x.extend(letters(rng, rest));
    let mut y = prefix;
    y.push(b);
    let rest = rng.random_range(0..=max_rest);
    y.extend(letters(rng, rest));
    (x, y)
}

fn epcf_of(word: &[Quotient], period: &[Quotient]) -> QuadExt {
    Epcf::new(word[0], word[1..].to_vec(), period.to_vec()).unwrap().value()
}

fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(SEED);
    r.set_stream(stream);
    r
}

fn prop_cmp_prefix() -> Outcome {
    let mut rng = rng(1);
    for _ in 0..RANDOM_CASES {
        let (x, y) = diverging(&mut rng, 0, 10, 9);
        let p = period(&mut rng);
        let (ord, _) = cf_cmp_prefix(&x, &y).map_err(|e| e.to_string())?;
        let exact = epcf_of(&x, &p).cmp(&epcf_of(&y, &p));
        ensure(ord == exact, || format!("{x:?} vs {y:?}"))?;
    }
    Ok(format!("{RANDOM_CASES} cases"))
}

fn prop_sandwich() -> Outcome {
    let mut rng = rng(2);
    for _ in 0..RANDOM_CASES {
        let (x, y) = diverging(&mut rng, 1, 13, 6);
        let (px, py) = (period(&mut rng), period(&mut rng));
        let n = x.iter().zip(&y).position(|(a, b)| a != b).unwrap() - 1;
        let mut diff = QuadSum::new(epcf_of(&x, &px), epcf_of(&y, &py).neg());
        if diff.sign() == Ordering::Less {
            diff = QuadSum::new(diff.x().neg(), diff.y().neg());
        }
        let b = cf_distance_bounds(n);
        ensure(
            diff.cmp_rational(&b.delta).is_gt() && diff.cmp_rational(&b.eps).is_lt(),
            || format!("{x:?}({px:?}) vs {y:?}({py:?})"),
        )?;
    }
    Ok(format!("{RANDOM_CASES} cases"))
}

fn prop_cylinders() -> Outcome {
    let mut rng = rng(3);
    for _ in 0..RANDOM_CASES {
        let a0: i64 = rng.random_range(-5..=5);
        let n = rng.random_range(0..=15);
        let w = letters(&mut rng, n);
        let cyl = cylinder_interval(&FiniteCf::new(a0, w.clone()).unwrap());

        let mut pre = w.clone();
        let n = rng.random_range(0..=6);
        pre.extend(letters(&mut rng, n));
        let value = Epcf::new(a0, pre, period(&mut rng)).unwrap().value();
        ensure(
            value > QuadExt::from_rational(&cyl.0) && value < QuadExt::from_rational(&cyl.1),
            || format!("extension escapes cylinder of {a0};{w:?}"),
        )?;

        let x: Quotient = rng.random_range(1..=50);
        let mut longer = w.clone();
        longer.push(x);
        let (lo, hi) = cylinder_interval(&FiniteCf::new(a0, longer).unwrap());
        let proper = cyl.0 <= lo && hi <= cyl.1 && (cyl.0 < lo || hi < cyl.1);
        let interior = cyl.0 < lo && hi < cyl.1;
        ensure(proper && (x == 1 || interior), || {
            format!("{a0};{w:?} + {x} does not nest")
        })?;
    }
    Ok(format!("{RANDOM_CASES} cases"))
}

fn prop_round_trip() -> Outcome {
    let mut rng = rng(4);
    let fields = [2i64, 3, 5, 7, 13, 15, 21];
    for _ in 0..RANDOM_CASES {
        let u = q(
            rng.random_range(-50..=50),
            rng.random_range(-50..=50),
            rng.random_range(1..=50),
            fields[rng.random_range(0..fields.len())],
        );
        let back = match cf_expand(&u, 10_000).map_err(|e| e.to_string())? {
            Expansion::Finite(w) => QuadExt::from_rational(&w.value()),
            Expansion::Periodic(e) => cf_eval_periodic(&e),
        };
        ensure(back == u, || format!("{} did not round-trip", u.approx(10)))?;
    }
    Ok(format!("{RANDOM_CASES} cases"))
}

fn prop_surgery() -> Outcome {
    let mut rng = rng(5);
    let mut done = 0;
    let mut tries = 0;
    while done < RANDOM_CASES {
        tries += 1;
        ensure(tries < 20 * RANDOM_CASES, || format!("only {done} usable cases"))?;
        let len = rng.random_range(6..=40);
        let w = letters(&mut rng, len);
        let n1 = rng.random_range(1..=len - 2);
        let n2 = n1 + 2 * rng.random_range(1..=(len - n1) / 2);
        let Ok(res) = surgery(&w, n1, n2) else { continue };
        let tail = period(&mut rng);
        let value = |word: &[Quotient]| Epcf::fraction(word, &tail).value();
        let gamma = value(&w);
        let above = [value(&res.c1) > gamma, value(&res.c2) > gamma];
        let expected = if above[0] { Variant::First } else { Variant::Second };
        ensure(above[0] != above[1] && res.chosen == expected, || {
            format!("{w:?} at ({n1}, {n2})")
        })?;
        let excess = QuadSum::new(value(res.chosen_word()), gamma.neg());
        let delta = cf_distance_bounds(len + res.witness_index).delta;
        ensure(excess.cmp_rational(&delta).is_gt(), || {
            format!("{w:?}: excess below delta")
        })?;
        done += 1;
    }
    Ok(format!("{done} cases"))
}

fn prop_dirichlet() -> Outcome {
    let mut rng = rng(6);
    let len = dirichlet_length(1).to_usize().unwrap();
    ensure(len == 195, || format!("N(1) = {len}"))?;
    for _ in 0..RANDOM_CASES {
        let w = letters(&mut rng, len);
        let (n1, n2) = dirichlet_repeat(&w, 1).map_err(|e| e.to_string())?;
        ensure(
            n1 < n2 && (n2 - n1) % 2 == 0 && w[n1 - 1..n1 + 2] == w[n2 - 1..n2 + 2],
            || format!("bad repeat ({n1}, {n2})"),
        )?;
    }
    Ok(format!("{RANDOM_CASES} words of length {len}"))
}

fn attainable() -> Outcome {
    let (gamma, report) = attainable_from_periodic(&[2, 2], &[2, 1], 5).map_err(|e| e.to_string())?;
    ensure(report.checks.len() == 5 && report.all_exceed(), || {
        "some check failed".into()
    })?;
    let least = report.checks.iter().map(|c| &c.lambda).min().unwrap();
    Ok(format!(
        "gamma' = [0;{},({})], mu = {}, smallest checked lambda {}",
        gamma
            .preperiod
            .iter()
            .map(|a| a.to_string())
            .collect::<Vec<_>>()
            .join(","),
        gamma.period.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(","),
        report.mu.approx(7),
        least.approx(7)
    ))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let mut results = constants();
    let staged: Vec<(&str, fn() -> Outcome)> = vec![
        ("2 A_0 attains lambda_0 exactly at -1 and +1", a0_certificate),
        (
            "3 alpha_0 peaks increase to lambda_0, other indices below 3.6",
            alpha0_peaks,
        ),
        ("4 alpha_0 prefix through C^8 stays below lambda_0", audit),
        ("5 six banned patterns separated from lambda_0 at depth 25", forbidden),
        ("6 necessity sweep at 3.691, window 15, depth 25", necessity),
        ("7a prefix comparison agrees with exact order", prop_cmp_prefix),
        ("7b delta_n < |alpha - beta| < eps_n", prop_sandwich),
        ("7c cylinder containment and nesting", prop_cylinders),
        ("7d expand/evaluate round trip", prop_round_trip),
        ("7e surgery raises value by more than delta_(N+r)", prop_surgery),
        ("7f same-parity repeat within length 195", prop_dirichlet),
        ("8 attainable number from P = (2,2), R = (2,1)", attainable),
    ];
    results.extend(staged.into_iter().map(|(name, f)| (name, f())));

    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    println!(
        "{} passed, {failed} failed in {:.1}s",
        results.len() - failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
