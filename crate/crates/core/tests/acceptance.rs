//! Acceptance gate: every criterion A1–A14 over the configuration matrix
//! (q = 3 with π ∈ {T, T+1, T²+1} at N = 365, and q = 5 with π = T at
//! N = 130). Prints one PASS/FAIL line per criterion; all comparisons are
//! exact.

use std::time::Instant;

use dmf_core::algebra::FieldSpec;
use dmf_core::verify::{run_suite, CheckResult, SuiteConfig, ALL_CHECKS};

fn matrix() -> Vec<SuiteConfig> {
    let mut out = Vec::new();
    for pi in ["T", "T+1", "T^2+1"] {
        out.push(SuiteConfig { field: FieldSpec::prime(3), pi: pi.into(), prec: 365 });
    }
    out.push(SuiteConfig { field: FieldSpec::prime(5), pi: "T".into(), prec: 130 });
    out
}

fn failure_summary(c: &CheckResult) -> String {
    c.items
        .iter()
        .filter(|i| !i.passed)
        .map(|i| format!("{}: {}", i.label, i.detail))
        .collect::<Vec<_>>()
        .join("; ")
}

#[test]
fn acceptance_criteria() {
    let start = Instant::now();
    let cfgs = matrix();
    let results: Vec<_> = cfgs
        .iter()
        .map(|cfg| {
            let r = run_suite("all", cfg).unwrap_or_else(|e| panic!("p={} π={}: {e}", cfg.field.p, cfg.pi));
            eprintln!("  q={} π={} N={}: {:.2?}", r.q, r.pi, r.prec, r.wall_time);
            r
        })
        .collect();
    let mut failed = Vec::new();
    for id in ALL_CHECKS {
        let mut ok = true;
        let mut notes = Vec::new();
        let mut title = String::new();
        for r in &results {
            let c = r.checks.iter().find(|c| c.id == id).expect("every check ran");
            title = c.title.clone();
            if c.passed {
                notes.push(format!("q={} π={}", r.q, r.pi));
            } else {
                ok = false;
                notes.push(format!("q={} π={} FAILED ({})", r.q, r.pi, failure_summary(c)));
            }
        }
        println!("{} {id:<4} {title} [{}]", if ok { "PASS" } else { "FAIL" }, notes.join("; "));
        if !ok {
            failed.push(id);
        }
    }
    println!("total wall time {:.2?}", start.elapsed());
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
