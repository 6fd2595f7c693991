//! Acceptance run: every built-in suite under worker pools of 1, 4 and 8
//! threads, summarized as one line per criterion.
//!
//! Two criteria fail on the mathematics itself (see `KNOWN_FAILURES`). The
//! test asserts the verdict table rather than all-pass, so a regression in
//! either direction is caught while the printed lines stay honest. Runs
//! without the libtest harness so the lines always reach the output.

use std::collections::BTreeMap;
use std::time::Duration;

use nonassoc::repro::{run_suites, suite_names, CheckResult, Context, RunReport, Status};

/// Criteria whose checks fail, with the failing check names.
const KNOWN_FAILURES: &[(u32, &[&str])] = &[(8, &["generates-degree-4"]), (10, &["leading-words"])];

/// Wall-clock limits, single-threaded run.
const TIME_LIMITS: &[(&str, u64)] = &[
    ("dimension-degree-3", 1),
    ("dimension-degree-4-multilinear", 1),
    ("dimension-degree-4-sweep", 1),
    ("dimension-degree-5-multilinear", 30),
    ("dimension-degree-6-multilinear", 900),
    ("host-identities", 10),
    ("generates-degree-5", 1200),
];

fn run_with_threads(n: usize) -> RunReport {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .unwrap();
    pool.install(|| {
        let ctx = Context::default();
        run_suites(&ctx, &suite_names()).unwrap()
    })
}

fn over_time(r: &CheckResult) -> Option<String> {
    let (_, secs) = TIME_LIMITS.iter().find(|(n, _)| *n == r.name)?;
    (r.elapsed > Duration::from_secs(*secs)).then(|| {
        format!(
            "{} took {:.1}s, limit {secs}s",
            r.name,
            r.elapsed.as_secs_f64()
        )
    })
}

fn main() {
    println!("running acceptance suites on 1, 4 and 8 threads");
    let single = run_with_threads(1);
    let reports = [
        single.json_lines(),
        run_with_threads(4).json_lines(),
        run_with_threads(8).json_lines(),
    ];

    let mut by_criterion: BTreeMap<u32, Vec<&CheckResult>> = BTreeMap::new();
    for r in &single.results {
        by_criterion.entry(r.criterion).or_default().push(r);
    }

    let mut verdicts = BTreeMap::new();
    for (c, checks) in &by_criterion {
        let failing: Vec<&CheckResult> = checks
            .iter()
            .copied()
            .filter(|r| r.status != Status::Pass)
            .collect();
        let slow: Vec<String> = checks.iter().filter_map(|r| over_time(r)).collect();
        let pass = failing.is_empty() && slow.is_empty();
        let elapsed: f64 = checks.iter().map(|r| r.elapsed.as_secs_f64()).sum();
        println!(
            "criterion {c:2}: {} ({} checks, {elapsed:.1}s)",
            if pass { "PASS" } else { "FAIL" },
            checks.len()
        );
        for r in &failing {
            println!("    {:?} {}: {}", r.status, r.name, r.detail);
        }
        for s in &slow {
            println!("    slow: {s}");
        }
        verdicts.insert(
            *c,
            failing.iter().map(|r| r.name.clone()).collect::<Vec<_>>(),
        );
        assert!(slow.is_empty(), "criterion {c} exceeded its time limit");
    }

    let identical = reports.iter().all(|r| *r == reports[0]);
    println!(
        "criterion 12: {} (machine reports for 1, 4, 8 threads {})",
        if identical { "PASS" } else { "FAIL" },
        if identical {
            "byte-identical"
        } else {
            "differ"
        }
    );

    for c in 1..=11u32 {
        let expected: Vec<String> = KNOWN_FAILURES
            .iter()
            .find(|(k, _)| *k == c)
            .map(|(_, names)| names.iter().map(|s| s.to_string()).collect())
            .unwrap_or_default();
        assert_eq!(
            verdicts.get(&c),
            Some(&expected),
            "criterion {c} verdict changed"
        );
    }
    assert!(identical, "reports depend on the thread count");
    println!("acceptance verdicts match the recorded table");
}
