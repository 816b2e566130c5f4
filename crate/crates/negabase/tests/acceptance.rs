//! Acceptance suite. Runs every criterion in order, prints one PASS/FAIL line
//! per criterion and exits non-zero if any of them failed.
//!
//! All comparisons below are exact unless a tolerance constant says
//! otherwise; the constants are pinned here so a run is reproducible.

use std::cmp::Ordering;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use negabase_core::confluent::{detect_confluent, frougny_normalize};
use negabase_core::expand::{dstar_one, entry_time, expand, is_admissible, Source};
use negabase_core::numsys::lex_compare;
use negabase_core::optimality::{
    certify_optimality, counterexample_interval, optimal_candidate, sample_point, verify_sample, CaseLabel, CaseParams,
    Status, NODE_BUDGET,
};
use negabase_core::transforms::{
    ambiguity_window, branch_map, classify_regime, discontinuity_set, feasible_digits, one_sided_limits, step_optimal,
    RegimeTag,
};
use negabase_core::{Digit, DigitString, NumerationSystem, Real};
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

const SEED: u64 = 20_241_017;

const C1_SAMPLES: usize = 200;
const C1_DEPTH: usize = 20;
const C1_TIME_LIMIT: Duration = Duration::from_secs(30);

const C2_SAMPLES: usize = 200;
const C2_DEPTH: usize = 25;
const C2_TIME_LIMIT: Duration = Duration::from_secs(300);

const C3_SAMPLES: usize = 200;

const C56_POINTS: usize = 100_000;
/// Offsets from each discontinuity probed on both sides: 10^-9 and 10^-12.
const NEAR_CUT_OFFSETS: [(i64, i64); 2] = [(1, 1_000_000_000), (1, 1_000_000_000_000)];

const C7_EXPANSIONS: usize = 10_000;
/// Property (b) is checked for every prefix length up to this.
const C7_BOUND_DEPTH: usize = 30;
/// Long enough that two points `2^-32` apart always get different digits.
const C7_LEX_DEPTH: usize = 64;

const C8_STRINGS: usize = 10_000;
const C8_MAX_LEN: usize = 24;

const C9_STARTS: usize = 1000;
const C9_MAX_STEPS: usize = 500;
const C9_MIN_RATE: f64 = 0.99;

const C10_SCAN_SAMPLES: &str = "40";
const C10_GRID: &str = "1000";

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("negative golden mean: interval and refutation at depth 2", criterion_1),
        ("confluent bases: greedy is optimal to depth 25", criterion_2),
        ("base 9/5: non-confluent interval, refutation at depth 4", criterion_3),
        ("regime classification", criterion_4),
        ("feasible digit sets and ambiguity windows", criterion_5),
        ("optimal map closure and branch agreement", criterion_6),
        ("Parry admissibility, prefix bound, lexicographic order", criterion_7),
        ("Frougny normalization", criterion_8),
        ("orbits of -tau enter the counterexample interval", criterion_9),
        ("CLI determinism and plot jump", criterion_10),
    ];
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panicked".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS criterion {:2}: {title} ({detail}; {secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {:2}: {title} ({why}; {secs:.1}s)", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

fn sys(base: &str) -> NumerationSystem {
    NumerationSystem::parse_canonical(base).expect("valid base")
}

fn real(text: &str) -> Real {
    Real::parse(text).expect("valid number")
}

fn eq(a: &Real, b: &Real) -> bool {
    a.compare(b).expect("decidable comparison") == Ordering::Equal
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// `lo + (hi - lo)·u/2^32`, a point of `[lo, hi)`.
fn uniform(lo: &Real, hi: &Real, u: u32) -> Real {
    lo + &((hi - lo) * Real::ratio(i64::from(u), 1 << 32))
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn time_limit(start: Instant, limit: Duration) -> Result<(), String> {
    let took = start.elapsed();
    check(took < limit, || format!("took {took:?}, limit {limit:?}"))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let s = sys("-(1+sqrt(5))/2");
    let tau = real("(1+sqrt(5))/2");
    let ci = counterexample_interval(&s).map_err(|e| e.to_string())?;
    check(ci.case_label == CaseLabel::NegCase1, || format!("case {:?}", ci.case_label))?;
    let two = Real::from_integer(2);
    let lo = -(Real::one().checked_div(&(&two * &tau)).unwrap());
    let hi = -((&tau - &Real::one()).checked_div(&(&two * &tau * tau.clone())).unwrap());
    check(ci.lo.as_quadratic().is_some() && ci.hi.as_quadratic().is_some(), || "endpoints not in Q(sqrt5)".into())?;
    check(eq(&ci.lo, &lo) && eq(&ci.hi, &hi), || "endpoints differ".into())?;

    let reports: Vec<_> = (0..C1_SAMPLES)
        .into_par_iter()
        .map(|i| {
            let x = sample_point(&ci.lo, &ci.hi, SEED, i as u64).unwrap();
            let cand = optimal_candidate(&s, &x, C1_DEPTH).unwrap();
            let rep = verify_sample(&s, &ci, &x, C1_DEPTH, NODE_BUDGET).unwrap();
            (cand.expansion.digits == rep.candidate, rep)
        })
        .collect();
    let refuted2 = reports.iter().filter(|(_, r)| r.verdict.refuted_at() == Some(2)).count();
    let checks_ok = reports.iter().all(|(same, r)| *same && r.failed_checks.is_empty());
    check(refuted2 == C1_SAMPLES, || format!("{refuted2}/{C1_SAMPLES} refuted at depth 2"))?;
    check(checks_ok, || "structural checks failed on some sample".into())?;
    time_limit(start, C1_TIME_LIMIT)?;
    Ok(format!("{refuted2}/{C1_SAMPLES} RefutedAt(2)"))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut detail = Vec::new();
    for (k, base) in ["(1+sqrt(5))/2", "1+sqrt(2)"].iter().enumerate() {
        let s = sys(base);
        check(detect_confluent(s.beta()).unwrap().is_some(), || format!("{base} not confluent"))?;
        let optimal = (0..C2_SAMPLES)
            .into_par_iter()
            .filter(|&i| {
                let x = uniform(&Real::zero(), &Real::one(), rng(SEED + k as u64, i as u64).next_u32());
                let g = expand(&s, &x, C2_DEPTH, Source::Greedy).unwrap();
                let v = certify_optimality(&s, &x, &g.digits, C2_DEPTH, NODE_BUDGET).unwrap();
                v.status == Status::OptimalToDepth(C2_DEPTH)
            })
            .count();
        check(optimal == C2_SAMPLES, || format!("{base}: {optimal}/{C2_SAMPLES} optimal"))?;
        detail.push(format!("{base}: {optimal}/{C2_SAMPLES}"));
    }
    time_limit(start, C2_TIME_LIMIT)?;
    Ok(detail.join(", "))
}

fn criterion_3() -> Outcome {
    let s = sys("9/5");
    check(detect_confluent(s.beta()).unwrap().is_none(), || "9/5 reported confluent".into())?;
    let ci = counterexample_interval(&s).map_err(|e| e.to_string())?;
    let CaseParams::Positive { i, k, l, r, .. } = &ci.params else {
        return Err("not a positive-base interval".into());
    };
    check((*i, *k) == (3, 1), || format!("i={i}, k={k}"))?;
    let l_q = l.as_rational().ok_or("L is not rational")?;
    check(l_q.numer() > l_q.denom(), || "L <= 1".into())?;
    check(eq(l, &real("755/729")) && eq(r, &real("854/729")), || "L or R differs".into())?;
    check(eq(&ci.lo, &real("3775/6561")) && eq(&ci.hi, &real("4270/6561")), || "interval differs".into())?;

    let reports: Vec<_> = (0..C3_SAMPLES)
        .into_par_iter()
        .map(|n| {
            let x = sample_point(&ci.lo, &ci.hi, SEED, n as u64).unwrap();
            verify_sample(&s, &ci, &x, 25, NODE_BUDGET).unwrap()
        })
        .collect();
    let at4 = reports.iter().filter(|r| r.verdict.refuted_at() == Some(4)).count();
    check(at4 == C3_SAMPLES, || format!("{at4}/{C3_SAMPLES} refuted at depth 4"))?;
    check(reports.iter().all(|r| r.failed_checks.is_empty()), || "greedy digit pattern failed".into())?;
    Ok(format!("I=(3775/6561, 4270/6561), {at4}/{C3_SAMPLES} RefutedAt(4)"))
}

fn criterion_4() -> Outcome {
    let bases = [
        ("1.2", true),
        ("1.5", true),
        ("sqrt(3)", true),
        ("1.75", false),
        ("2.2", true),
        ("sqrt(5)", true),
        ("2.4", false),
        ("(1+sqrt(5))/2", true),
        ("(3+sqrt(5))/2", false),
        ("2.5", false),
        ("3.9", false),
    ];
    for (b, midpoint) in bases {
        let reg = classify_regime(&real(b)).map_err(|e| e.to_string())?;
        check((reg.tag == RegimeTag::Midpoint) == midpoint, || format!("{b} classified {:?}", reg.tag))?;
    }
    for b in ["sqrt(3)", "sqrt(5)"] {
        let reg = classify_regime(&real(b)).unwrap();
        check(reg.r_vs_half == Ordering::Equal && eq(&reg.r, &Real::ratio(1, 2)), || format!("{b}: r != 1/2"))?;
    }
    Ok(format!("{} bases, r = 1/2 exactly at sqrt3 and sqrt5", bases.len()))
}

const NEGATIVE_BASES: [&str; 4] = ["-(1+sqrt(5))/2", "-(3+sqrt(5))/2", "-2.5", "-3.9"];

/// Digits `b` with `γy - b ∈ J`, straight from the definition.
fn brute_feasible(s: &NumerationSystem, y: &Real) -> Vec<Digit> {
    let gy = s.gamma() * y;
    s.alphabet()
        .iter()
        .copied()
        .filter(|&b| s.in_j(&(&gy - &Real::from_integer(b))).unwrap())
        .collect()
}

fn criterion_5() -> Outcome {
    let mut two = 0usize;
    for (bi, base) in NEGATIVE_BASES.iter().enumerate() {
        let s = sys(base);
        let windows: Vec<(Digit, Real, Real)> = s.alphabet()[..s.alphabet().len() - 1]
            .iter()
            .map(|&a| {
                let (lo, hi) = ambiguity_window(&s, a).unwrap();
                (a, lo, hi)
            })
            .collect();
        let results: Vec<Result<bool, String>> = (0..C56_POINTS)
            .into_par_iter()
            .map(|n| {
                let y = uniform(s.l(), s.r(), rng(SEED + 100 + bi as u64, n as u64).next_u32());
                let fd = feasible_digits(&s, &y).unwrap();
                let brute = brute_feasible(&s, &y);
                if fd != brute {
                    return Err(format!("{base}: feasible set {fd:?} vs {brute:?}"));
                }
                if fd.is_empty() || fd.len() > 2 || (fd.len() == 2 && fd[1] != fd[0] + 1) {
                    return Err(format!("{base}: feasible set {fd:?}"));
                }
                let gy = s.gamma() * &y;
                for (a, lo, hi) in &windows {
                    let inside = s.compare(lo, &gy).unwrap() != Ordering::Greater
                        && s.compare(&gy, hi).unwrap() != Ordering::Greater;
                    let pair = fd.len() == 2 && fd[0] == *a;
                    if inside != pair {
                        return Err(format!("{base}: window of {a} disagrees with {fd:?}"));
                    }
                }
                Ok(fd.len() == 2)
            })
            .collect();
        for r in results {
            two += usize::from(r?);
        }
    }
    Ok(format!("{} points, {two} with two digits", NEGATIVE_BASES.len() * C56_POINTS))
}

/// The digit rule from its defining conditions: feasible, and closest to
/// `γx` among feasible digits, ties to the smaller digit.
fn brute_digit(s: &NumerationSystem, x: &Real) -> Digit {
    let gx = s.gamma() * x;
    let mut best: Option<(Digit, Real)> = None;
    for b in brute_feasible(s, x) {
        let dist = (&gx - &Real::from_integer(b)).abs().unwrap();
        if best.as_ref().is_none_or(|(_, d)| dist.compare(d).unwrap() == Ordering::Less) {
            best = Some((b, dist));
        }
    }
    best.expect("J is covered").0
}

fn criterion_6() -> Outcome {
    let mut probes = 0usize;
    for (bi, base) in NEGATIVE_BASES.iter().enumerate() {
        let s = sys(base);
        let map = branch_map(&s).unwrap();
        let cuts = discontinuity_set(&s).unwrap();

        let mut points: Vec<Real> = Vec::new();
        for c in &cuts {
            points.push(c.clone());
            for (num, den) in NEAR_CUT_OFFSETS {
                let eps = Real::ratio(num, den);
                points.push(c - &eps);
                points.push(c + &eps);
            }
            let (left, right) = one_sided_limits(&s, c).unwrap();
            let eps = Real::ratio(NEAR_CUT_OFFSETS[1].0, NEAR_CUT_OFFSETS[1].1);
            let gc = s.gamma() * c;
            let left_expected = &gc - &Real::from_integer(map.digit_at(&s, &(c - &eps)).unwrap());
            let right_expected = &gc - &Real::from_integer(map.digit_at(&s, &(c + &eps)).unwrap());
            check(eq(&left, &left_expected) && eq(&right, &right_expected), || format!("{base}: limits"))?;
            let (el, er) = match map.regime.tag {
                RegimeTag::Standard => (&map.regime.r - &Real::one(), map.regime.r.clone()),
                RegimeTag::Midpoint => (Real::ratio(-1, 2), Real::ratio(1, 2)),
            };
            check(eq(&left, &el) && eq(&right, &er), || format!("{base}: limits differ from regime values"))?;
        }
        let n_random = C56_POINTS;
        points.extend((0..n_random).map(|n| uniform(s.l(), s.r(), rng(SEED + 200 + bi as u64, n as u64).next_u32())));
        points.push(s.r().clone());
        probes += points.len();

        let bad = points
            .par_iter()
            .find_map_any(|x| {
                let (d, y) = step_optimal(&s, x).unwrap();
                let brute = brute_digit(&s, x);
                let branch = map.digit_at(&s, x).unwrap();
                let image = map.apply(&s, x).unwrap();
                let ok = s.in_j(&y).unwrap() && d == brute && branch == brute && eq(&image, &y);
                (!ok).then(|| format!("{base}: x≈{} digit {d}, branch {branch}, brute {brute}", x.to_f64()))
            });
        if let Some(msg) = bad {
            return Err(msg);
        }
    }
    Ok(format!("{probes} points incl. cuts ±1e-9, ±1e-12"))
}

fn criterion_7() -> Outcome {
    let mut detail = Vec::new();
    for (bi, base) in ["(1+sqrt(5))/2", "1+sqrt(2)", "9/5"].iter().enumerate() {
        let s = sys(base);
        let dstar = dstar_one(s.beta(), C7_LEX_DEPTH).unwrap();
        let inv = s.beta().recip().unwrap();
        let xs: Vec<Real> = (0..C7_EXPANSIONS)
            .map(|n| uniform(&Real::zero(), &Real::one(), rng(SEED + 300 + bi as u64, n as u64).next_u32()))
            .collect();
        let expansions: Vec<Result<DigitString, String>> = xs
            .par_iter()
            .map(|x| {
                let e = expand(&s, x, C7_LEX_DEPTH, Source::Greedy).unwrap();
                if !is_admissible(&e.string, &dstar).unwrap() {
                    return Err(format!("{base}: greedy string {} not admissible", e.string));
                }
                let mut prefix = Real::zero();
                let mut scale = Real::one();
                for n in 1..=C7_BOUND_DEPTH {
                    scale = &scale * &inv;
                    prefix = &prefix + &(&scale * Real::from_integer(e.digits[n - 1]));
                    let gap = x - &prefix;
                    let ok = gap.sign().unwrap() != Ordering::Less && gap.compare(&scale).unwrap() == Ordering::Less;
                    if !ok {
                        return Err(format!("{base}: prefix bound fails at n={n}"));
                    }
                }
                Ok(e.string)
            })
            .collect();
        let strings = expansions.into_iter().collect::<Result<Vec<_>, _>>()?;
        let mut agree = 0;
        for n in 0..C7_EXPANSIONS {
            let m = (n + 1) % C7_EXPANSIONS;
            let numeric = xs[n].compare(&xs[m]).unwrap();
            let lex = lex_compare(&strings[n], &strings[m]);
            check(lex == Some(numeric), || format!("{base}: lex {lex:?} vs numeric {numeric:?}"))?;
            agree += 1;
        }
        detail.push(format!("{base}: {agree} pairs"));
    }
    Ok(detail.join(", "))
}

fn criterion_8() -> Outcome {
    let mut rewritten = 0usize;
    for (bi, base) in ["(1+sqrt(5))/2", "1+sqrt(2)"].iter().enumerate() {
        let s = sys(base);
        let params = detect_confluent(s.beta()).unwrap().ok_or("not confluent")?;
        let dstar = params.dstar();
        let results: Vec<Result<bool, String>> = (0..C8_STRINGS)
            .into_par_iter()
            .map(|n| {
                let mut g = rng(SEED + 400 + bi as u64, n as u64);
                let len = 1 + (g.next_u32() as usize % C8_MAX_LEN);
                // A leading zero keeps the value inside [0, 1), where the
                // normal form is a greedy expansion.
                let mut digits: Vec<Digit> = vec![0];
                digits.extend((0..len).map(|_| (g.next_u32() % (params.m as u32 + 1)) as Digit));
                let out = frougny_normalize(&digits, &params).map_err(|e| e.to_string())?;
                let same = eq(&s.prefix_value(&out).unwrap(), &s.prefix_value(&digits).unwrap());
                let admissible = is_admissible(&DigitString::finite(out.clone()), &dstar).unwrap();
                let fixed = frougny_normalize(&out, &params).unwrap() == out;
                let short = out.len() <= digits.len() || out[digits.len()..].iter().all(|&d| d == 0);
                if !(same && admissible && fixed && short) {
                    return Err(format!(
                        "{base}: {digits:?} -> {out:?} (value {same}, admissible {admissible}, idempotent {fixed}, length {short})"
                    ));
                }
                Ok(out != digits)
            })
            .collect();
        for r in results {
            rewritten += usize::from(r?);
        }
    }
    Ok(format!("{} strings, {rewritten} rewritten", 2 * C8_STRINGS))
}

fn criterion_9() -> Outcome {
    let s = sys("-(1+sqrt(5))/2");
    let ci = counterexample_interval(&s).unwrap();
    let times: Vec<Option<usize>> = (0..C9_STARTS)
        .into_par_iter()
        .map(|n| {
            let x = uniform(s.l(), s.r(), rng(SEED + 500, n as u64).next_u32());
            entry_time(&s, &x, &ci.lo, &ci.hi, C9_MAX_STEPS).unwrap()
        })
        .collect();
    let entered = times.iter().flatten().count();
    let longest = times.iter().flatten().max().copied().unwrap_or(0);
    let rate = entered as f64 / C9_STARTS as f64;
    check(rate >= C9_MIN_RATE, || format!("{entered}/{C9_STARTS} entered"))?;
    Ok(format!("{entered}/{C9_STARTS} entered, longest wait {longest} steps"))
}

fn cli(args: &[&str]) -> (i32, Vec<u8>) {
    let out = Command::new(env!("CARGO_BIN_EXE_negabase")).args(args).output().expect("binary runs");
    (out.status.code().unwrap_or(-1), out.stdout)
}

fn criterion_10() -> Outcome {
    let base = "-(1+sqrt(5))/2";
    let runs: [&[&str]; 4] = [
        &["scan", "--base", base, "--samples", C10_SCAN_SAMPLES, "--seed", "11", "--format", "json"],
        &["scan", "--base", "9/5", "--samples", C10_SCAN_SAMPLES, "--seed", "11", "--format", "csv"],
        &["certify", "--base", base, "--x", "-1/5", "--format", "json"],
        &["scan", "--base", base, "--grid", C10_GRID],
    ];
    for args in runs {
        let (c1, a) = cli(args);
        let (c2, b) = cli(args);
        check(a == b && c1 == c2 && !a.is_empty(), || format!("output differs for {args:?}"))?;
    }

    // Written output matches standard output byte for byte.
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("scan.json");
    let (code, _) = cli(&[runs[0], &["--out", path.to_str().unwrap()]].concat());
    check(code == 0, || format!("--out run exited {code}"))?;
    check(std::fs::read(&path).unwrap() == cli(runs[0]).1, || "--out differs from stdout".into())?;

    let (_, plot) = cli(runs[3]);
    let plot = String::from_utf8(plot).unwrap();
    check(plot.lines().next() == Some("x,To_x,branch_digit"), || "plot header".into())?;
    let delta = -1.0 / (1.0 + 5f64.sqrt());
    let at_delta: Vec<(f64, &str)> = plot
        .lines()
        .skip(1)
        .filter_map(|l| {
            let mut f = l.split(',');
            let x: f64 = f.next()?.parse().ok()?;
            let y = f.next()?;
            ((x - delta).abs() < 1e-15).then_some((x, y))
        })
        .collect();
    let values: Vec<&str> = at_delta.iter().map(|p| p.1).collect();
    check(values == ["-0.5", "0.5"], || format!("rows at -1/(2tau): {at_delta:?}"))?;
    Ok("4 commands byte-identical, jump -0.5 -> 0.5 at x=-0.309017".into())
}
