//! One line per acceptance criterion, with measured runtime against its limit.

use std::io::Write;
use std::process::Command;
use std::time::{Duration, Instant};

use kmx::verify;

const LIMITS: [Option<u64>; 10] = [Some(1), Some(5), Some(30), Some(30), None, Some(300), Some(120), None, Some(60), None];

fn line(id: usize, pass: bool, took: Duration, detail: &str) -> bool {
    let limit = LIMITS[id - 1];
    let in_time = limit.is_none_or(|s| took <= Duration::from_secs(s));
    let ok = pass && in_time;
    let limit = limit.map_or("none".to_string(), |s| format!("{s} s"));
    // straight to the stderr handle so the lines survive output capture
    let _ = writeln!(
        std::io::stderr(),
        "criterion {id}: {} ({:.3} s, limit {limit}) {detail}",
        if ok { "PASS" } else { "FAIL" },
        took.as_secs_f64()
    );
    ok
}

fn verify_bytes() -> Vec<u8> {
    let out = Command::new(env!("CARGO_BIN_EXE_kmx")).arg("verify").output().unwrap();
    assert!(out.status.code().is_some());
    out.stdout
}

#[test]
fn acceptance() {
    let mut all = true;
    for (id, _) in verify::SUITES {
        let t = Instant::now();
        let r = verify::run_suite(id);
        let took = t.elapsed();
        let detail = match &r.first_failure {
            Some(f) => format!("{}: {} checks, {} failures, first: {f}", r.name, r.checks, r.failures),
            None => format!("{}: {} checks, {} skipped", r.name, r.checks, r.skipped),
        };
        all &= line(id as usize, r.pass, took, &detail);
    }

    let t = Instant::now();
    let a = verify_bytes();
    let b = verify_bytes();
    let same = a == b && !a.is_empty();
    let reported: serde_json::Value = serde_json::from_slice(&a).unwrap_or_default();
    all &= line(
        10,
        same,
        t.elapsed(),
        &format!("verify twice: {} bytes, identical {same}, reported pass {}", a.len(), reported["pass"]),
    );
    assert!(all, "some acceptance criteria failed");
}
