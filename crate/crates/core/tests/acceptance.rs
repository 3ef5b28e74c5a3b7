//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::collections::HashMap;
use std::process::ExitCode;
use std::time::Instant;

use common::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use rand::seq::index::sample;
use rand::Rng;
use symfq_core::census::{count_infinity, count_points, verify_estimate, Ineq};
use symfq_core::factpat::{
    correspondence_check, enumerate_patterns, family_census, pattern_constants,
    verify_pattern_bounds, LinearFamily,
};
use symfq_core::symsys::{hypothesis_check, vandermonde_factorization_check};
use symfq_core::valueset::{
    average_value_set_direct, average_value_set_via_chi, build_h_table, chi,
    verify_value_set_bounds,
};
use symfq_core::{BoundCheck, ChiMethod, CoeffWindow, Elem, Field, Limits, SymSystem};

struct Outcome {
    pass: bool,
    detail: String,
}

fn ok(detail: String) -> Outcome {
    Outcome { pass: true, detail }
}

fn fail(detail: String) -> Outcome {
    Outcome {
        pass: false,
        detail,
    }
}

fn limits() -> Limits {
    let n = std::thread::available_parallelism()
        .map(|n| n.get())
        .unwrap_or(1);
    Limits::default().with_workers(n.min(8))
}

/// Windows `a` for `(q, s)`: every window when there are at most 20,
/// otherwise 20 distinct ones drawn with a fixed seed.
fn windows(f: &Field, s: usize, seed: u64) -> Vec<Vec<Elem>> {
    let q = f.order() as u64;
    let total = q.pow(s as u32);
    let decode = |mut c: u64| -> Vec<Elem> {
        (0..s)
            .map(|_| {
                let d = (c % q) as u32;
                c /= q;
                f.elem(d)
            })
            .collect()
    };
    if total <= 20 || q == 3 {
        (0..total).map(decode).collect()
    } else {
        let mut g = rng(seed);
        sample(&mut g, total as usize, 20)
            .into_iter()
            .map(|c| decode(c as u64))
            .collect()
    }
}

fn chi_grid() -> Vec<(u64, usize, usize)> {
    let mut out = Vec::new();
    for q in [3u64, 5, 7] {
        for n in 4..=6 {
            for s in 1..=n - 2 {
                out.push((q, n, s));
            }
        }
    }
    out
}

fn criterion_1() -> Outcome {
    let limits = limits();
    let (mut windows_seen, mut comparisons, mut mismatches) = (0, 0, Vec::new());
    for (q, n, s) in chi_grid() {
        if 2 * (s + 1) > n {
            continue;
        }
        let f = Field::prime(q).unwrap();
        for a in windows(&f, s, q * 100 + n as u64 * 10 + s as u64) {
            let win = CoeffWindow::new(n, a).unwrap();
            windows_seen += 1;
            for r in n - s + 1..=n {
                let x = chi(&f, &win, r, ChiMethod::Subsets, &limits).unwrap();
                let y = chi(&f, &win, r, ChiMethod::Pointcount, &limits).unwrap();
                comparisons += 1;
                if x != y {
                    mismatches.push(format!("q={q} {} r={r}: {x} vs {y}", win.describe()));
                }
            }
        }
    }
    let detail = format!(
        "{windows_seen} windows, {comparisons} (window, r) comparisons, {} mismatches",
        mismatches.len()
    );
    if mismatches.is_empty() {
        ok(detail)
    } else {
        fail(format!("{detail}; first: {}", mismatches[0]))
    }
}

fn criterion_2() -> Outcome {
    let limits = limits();
    let mut bad = Vec::new();
    let mut runs = 0;
    for (q, n, s) in chi_grid() {
        let f = Field::prime(q).unwrap();
        let methods: &[ChiMethod] = if 2 * (s + 1) <= n {
            &[ChiMethod::Subsets, ChiMethod::Pointcount]
        } else {
            &[ChiMethod::Subsets]
        };
        for a in windows(&f, s, q * 1000 + n as u64 * 10 + s as u64) {
            let win = CoeffWindow::new(n, a).unwrap();
            let direct = average_value_set_direct(&f, &win, &limits).unwrap();
            for &m in methods {
                runs += 1;
                let via = average_value_set_via_chi(&f, &win, m, &limits)
                    .unwrap()
                    .value;
                if via != direct {
                    bad.push(format!("q={q} {} {m:?}: {direct} vs {via}", win.describe()));
                }
            }
        }
    }
    let f = Field::prime(5).unwrap();
    let win = CoeffWindow::new(3, vec![f.zero()]).unwrap();
    let want = BigRational::new(BigInt::from(17), BigInt::from(5));
    let direct = average_value_set_direct(&f, &win, &limits).unwrap();
    let subsets = average_value_set_via_chi(&f, &win, ChiMethod::Subsets, &limits)
        .unwrap()
        .value;
    if direct != want || subsets != want {
        bad.push(format!(
            "q=5 n=3 s=1 a=(0): direct {direct}, via chi {subsets}, expected 17/5"
        ));
    }
    let detail = format!("{runs} comparisons plus q=5 n=3 s=1 a=(0) = {direct} both ways");
    if bad.is_empty() {
        ok(detail)
    } else {
        fail(format!("{} mismatches; first: {}", bad.len(), bad[0]))
    }
}

fn criterion_3() -> Outcome {
    let mut g = rng(3);
    let mut tables = HashMap::new();
    let mut mismatches = 0;
    let trials = 10_000;
    for _ in 0..trials {
        let q = [3u64, 5, 7, 11, 13][g.gen_range(0..5)];
        let n = g.gen_range(1..=8);
        let r = g.gen_range(1..=n);
        let f = Field::prime(q).unwrap();
        let h = tables
            .entry((q, r, n))
            .or_insert_with(|| build_h_table(&f, r, n));
        let x = random_point(&f, r, &mut g);
        let xs: Vec<u64> = x.iter().map(|e| e.index() as u64).collect();
        let pi = pi_naive(&f, &x, r);
        let modulus = from_roots(&xs, q);
        let j = g.gen_range(r..=n);
        let mut tj = vec![0u64; j + 1];
        tj[j] = 1;
        let (_, rem) = pdivrem(&tj, &modulus, q);
        let got: Vec<u64> = (0..r)
            .map(|i| h[j - r][i].eval(&f, &pi).index() as u64)
            .collect();
        if trim(got) != rem {
            mismatches += 1;
        }
    }
    let detail = format!("{trials} random instances, {mismatches} mismatches");
    if mismatches == 0 {
        ok(detail)
    } else {
        fail(detail)
    }
}

fn criterion_4() -> Outcome {
    let limits = limits();
    let cases: &[(u64, usize, &[&str])] = &[
        (5, 3, &["1 | 0", "1 2 | 1", "0 1 | 3"]),
        (7, 1, &["1 | 0", "1 | 3"]),
        (7, 2, &["1 | 0", "1 | 2", "1 1 | 1"]),
        (7, 3, &["1 | 0", "1 2 | 1", "0 1 | 3"]),
    ];
    let (mut runs, mut members) = (0, 0u64);
    let mut bad = Vec::new();
    for &(q, n, fams) in cases {
        let f = Field::prime(q).unwrap();
        for text in fams {
            let fam = LinearFamily::parse(&f, n, text).unwrap();
            for lambda in enumerate_patterns(n) {
                let rep = correspondence_check(&fam, &lambda, &limits).unwrap();
                runs += 1;
                members += rep.squarefree_members;
                if !rep.pass {
                    bad.push(format!("q={q} n={n} [{text}] λ={lambda}: {rep:?}"));
                }
            }
        }
    }
    let detail = format!("{runs} (family, λ) scans, {members} squarefree members matched");
    if bad.is_empty() {
        ok(detail)
    } else {
        fail(format!("{} failing scans; first: {}", bad.len(), bad[0]))
    }
}

fn census_runs() -> Vec<(u64, usize, &'static str)> {
    vec![
        (3, 2, "1 | 0"),
        (3, 2, "1 | 1"),
        (5, 3, "1 | 0"),
        (5, 3, "1 2 | 1"),
        (5, 4, "1 | 0"),
        (5, 4, "0 1 | 2"),
        (7, 4, "1 | 0"),
        (7, 4, "1 0 | 1\n0 1 | 1"),
        (7, 5, "1 | 0"),
        (7, 5, "1 3 | 2"),
        (11, 4, "1 | 0"),
        (11, 5, "1 0 | 0"),
    ]
}

fn criterion_5() -> Outcome {
    let limits = limits();
    let mut bad = Vec::new();
    for (q, n, text) in census_runs() {
        let f = Field::prime(q).unwrap();
        let fam = LinearFamily::parse(&f, n, text).unwrap();
        let census = family_census(&fam, &limits).unwrap();
        let expect = (q as u128).pow((n - fam.m()) as u32);
        if census.members() != expect {
            bad.push(format!(
                "q={q} n={n} [{text}]: {} members, expected {expect}",
                census.members()
            ));
        }
        let t: BigRational = enumerate_patterns(n)
            .iter()
            .map(|l| pattern_constants(l).1)
            .sum();
        if !t.is_one() {
            bad.push(format!("n={n}: Σ T = {t}"));
        }
        let checks = verify_pattern_bounds(&census).unwrap();
        for c in checks
            .iter()
            .filter(|c| c.kind == "discriminant_locus" && !c.pass)
        {
            bad.push(format!("q={q} n={n} [{text}]: {}", c.summary()));
        }
    }
    for n in 1..=12 {
        let t: BigRational = enumerate_patterns(n)
            .iter()
            .map(|l| pattern_constants(l).1)
            .sum();
        if !t.is_one() {
            bad.push(format!("n={n}: Σ T = {t}"));
        }
    }
    let detail = format!(
        "{} censuses closed, Σ T = 1 for n ≤ 12",
        census_runs().len()
    );
    if bad.is_empty() {
        ok(detail)
    } else {
        fail(format!("{}; first: {}", bad.len(), bad[0]))
    }
}

struct Tally {
    checked: usize,
    vacuous: usize,
    outside: usize,
    failures: Vec<String>,
}

impl Tally {
    fn new() -> Self {
        Tally {
            checked: 0,
            vacuous: 0,
            outside: 0,
            failures: Vec::new(),
        }
    }

    fn add(&mut self, checks: &[BoundCheck], context: &str) {
        for c in checks {
            if !c.hypotheses_met {
                self.outside += 1;
                continue;
            }
            self.checked += 1;
            self.vacuous += c.vacuous as usize;
            if !c.pass {
                self.failures.push(format!("{context}: {}", c.summary()));
            }
        }
    }
}

fn criterion_6() -> Outcome {
    let limits = limits();
    let mut tally = Tally::new();
    let mut skipped_systems = 0;

    let systems: &[(usize, &str)] = &[
        (1, "Y1"),
        (1, "Y1 - 1"),
        (2, "Y2 - 1"),
        (2, "Y1^2 + Y2"),
        (2, "Y1^2 + Y2 + 1"),
        (3, "Y3 + Y1*Y2"),
        (3, "Y1\nY3 - 2"),
    ];
    for q in [5u64, 7, 11] {
        let f = Field::prime(q).unwrap();
        for &(s, text) in systems {
            for r in 3..=6 {
                let Ok(sys) = SymSystem::parse(&f, s, r, text) else {
                    continue;
                };
                if !sys.satisfies_standing_assumption() {
                    continue;
                }
                if !hypothesis_check(&f, &sys, 1, &limits).unwrap().pass {
                    skipped_systems += 1;
                    continue;
                }
                let mut rep = count_points(&f, &sys, &Ineq::AllPairs, &limits).unwrap();
                rep.infinity_count = Some(count_infinity(&f, &sys, &limits).unwrap());
                tally.add(
                    &verify_estimate(&rep, &sys).unwrap(),
                    &format!("q={q} r={r} {}", sys.describe()),
                );
            }
        }
    }
    for (q, n, text) in census_runs() {
        let f = Field::prime(q).unwrap();
        let fam = LinearFamily::parse(&f, n, text).unwrap();
        let census = family_census(&fam, &limits).unwrap();
        tally.add(
            &verify_pattern_bounds(&census).unwrap(),
            &format!("q={q} n={n} [{}]", fam.describe()),
        );
    }
    for (q, n, s) in [
        (5u64, 4, 1),
        (7, 4, 1),
        (7, 5, 1),
        (11, 4, 1),
        (11, 6, 1),
        (7, 6, 2),
    ] {
        let f = Field::prime(q).unwrap();
        for a in windows(&f, s, 6).into_iter().take(10) {
            let win = CoeffWindow::new(n, a).unwrap();
            tally.add(
                &verify_value_set_bounds(&f, &win, &limits).unwrap(),
                &format!("q={q} {}", win.describe()),
            );
        }
    }
    let detail = format!(
        "{} checks within hypotheses, {} vacuous, {} outside hypotheses reported only, {} systems skipped for failing the rank hypothesis",
        tally.checked, tally.vacuous, tally.outside, skipped_systems
    );
    if tally.failures.is_empty() {
        ok(detail)
    } else {
        fail(format!(
            "{detail}; {} failures, first: {}",
            tally.failures.len(),
            tally.failures[0]
        ))
    }
}

fn criterion_7() -> Outcome {
    let single = Limits::default();
    let many = Limits::default().with_workers(4);
    let mut runs = 0;
    let mut bad = Vec::new();
    for q in [2u64, 3, 4, 5] {
        let f = if q == 4 {
            Field::new(2, 2).unwrap()
        } else {
            Field::prime(q).unwrap()
        };
        for &(s, text) in CORPUS {
            for r in s..=4 {
                let sys = SymSystem::parse(&f, s, r, text).unwrap();
                let a = count_points(&f, &sys, &Ineq::AllPairs, &single).unwrap();
                let b = count_points(&f, &sys, &Ineq::AllPairs, &many).unwrap();
                let naive = naive_count(&f, &sys, &all_pairs(r));
                runs += 1;
                if (a.affine_count, a.distinct_count) != naive {
                    bad.push(format!(
                        "q={q} r={r} {text}: {:?} vs naive {naive:?}",
                        (a.affine_count, a.distinct_count)
                    ));
                }
                if serde_json::to_string(&a).unwrap() != serde_json::to_string(&b).unwrap() {
                    bad.push(format!(
                        "q={q} r={r} {text}: reports differ between 1 and 4 workers"
                    ));
                }
            }
        }
    }
    let detail = format!("{runs} (q, r, system) instances against the naive scan, 1 vs 4 workers");
    if bad.is_empty() {
        ok(detail)
    } else {
        fail(format!("{}; first: {}", bad.len(), bad[0]))
    }
}

fn criterion_8() -> Outcome {
    let mut g = rng(8);
    let (mut trials, mut repeated, mut failures) = (0, 0, 0);
    for _ in 0..10_000 {
        let q = [3u64, 5, 7, 11][g.gen_range(0..4)];
        let f = Field::prime(q).unwrap();
        let r = g.gen_range(1..=6);
        let mut x = random_point(&f, r, &mut g);
        if r > 1 && g.gen_bool(0.25) {
            let i = g.gen_range(0..r);
            let j = (i + g.gen_range(1..r)) % r;
            x[j] = x[i];
        }
        if (0..r).any(|i| (i + 1..r).any(|j| x[i] == x[j])) {
            repeated += 1;
        }
        trials += 1;
        if !vandermonde_factorization_check(&f, &x) {
            failures += 1;
        }
    }
    let detail =
        format!("{trials} points, {repeated} with repeated coordinates, {failures} failures");
    if failures == 0 && repeated > 0 {
        ok(detail)
    } else {
        fail(detail)
    }
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("chi subsets = pointcount", criterion_1),
        ("direct average = chi formula", criterion_2),
        ("H-table remainders", criterion_3),
        ("root correspondence", criterion_4),
        ("census closure", criterion_5),
        ("bound suites", criterion_6),
        ("orbit count = naive scan", criterion_7),
        ("Vandermonde factorization", criterion_8),
    ];
    let mut all = true;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        all &= out.pass;
        println!(
            "{} criterion {}: {name} ({}; {:.1}s)",
            if out.pass { "PASS" } else { "FAIL" },
            i + 1,
            out.detail,
            start.elapsed().as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
