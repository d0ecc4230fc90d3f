//! Acceptance criteria, one PASS/FAIL line each. Every criterion is exact.
//!
//! Criteria 1 to 11 are read off the conformance report for seed 42;
//! criterion 12 reruns `check --suite all --seed 42` and compares bytes.
//! The process fails unless every FAIL is a documented discrepancy in the
//! source identities (listed below with the witness that refutes them).

use std::process::ExitCode;

use weylforge::cli::conformance::{catalogue, run_suite, CheckResult};
use weylforge::cli::run_command;

const SEED: u64 = 42;

const CRITERIA: [(u8, &str); 12] = [
    (1, "four PMB expressions agree on 200 random pairs"),
    (2, "ms maps PB onto PMB on 200 random pairs"),
    (3, "PMB structure constants (mk - nl) for all n,m,k,l <= 4"),
    (4, "closed-form Moyal bracket equals the star commutator for all n,m,k,l <= 4"),
    (5, "classical limits of MB and of the pulled-back commutator"),
    (6, "antisymmetry and Jacobi for PB, MB and PMB"),
    (7, "s-ordering core: forms, special orderings, recursion, Hermiticity"),
    (8, "diamond product laws and the monomial law"),
    (9, "ms maps MB onto minus the commutator on 200 random pairs"),
    (10, "Ehrenfest equations, oscillator flow, energy conservation"),
    (11, "subalgebra closure and exact commutator form"),
    (12, "byte-identical reports and parse/render round trip"),
];

/// Checks whose failure reflects an identity that does not hold as stated.
const DOCUMENTED: [(&str, &str); 2] = [
    (
        "subalgebra.sp2",
        "[t_02, t_20]_PMB carries a central 2 i hbar s term absent from the commutator; exact only at s = 0",
    ),
    ("subalgebra.isp2", "contains sp(2); same central term"),
];

fn documented(id: &str) -> Option<&'static str> {
    DOCUMENTED.iter().find(|(d, _)| *d == id).map(|(_, why)| *why)
}

fn short(s: &str) -> String {
    const MAX: usize = 240;
    if s.chars().count() <= MAX {
        s.to_string()
    } else {
        format!("{}...", s.chars().take(MAX).collect::<String>())
    }
}

fn main() -> ExitCode {
    let report = run_suite("all", SEED).expect("suite 'all' exists");
    let mut undocumented = 0usize;

    for (number, title) in CRITERIA {
        let ids: Vec<&str> = catalogue().iter().filter(|c| c.criterion == Some(number)).map(|c| c.id).collect();
        let results: Vec<&CheckResult> = report.checks.iter().filter(|r| ids.contains(&r.id.as_str())).collect();
        assert_eq!(results.len(), ids.len(), "criterion {number} lost checks");
        let mut failures: Vec<String> = Vec::new();
        for r in results.iter().filter(|r| !r.passed) {
            let witness = short(r.witness.as_deref().unwrap_or(""));
            match documented(&r.id) {
                Some(why) => failures.push(format!("{} (documented: {why}) witness: {witness}", r.id)),
                None => {
                    undocumented += 1;
                    failures.push(format!("{} witness: {witness}", r.id));
                }
            }
        }
        if number == 12 {
            let run = || run_command(["weylforge", "check", "--suite", "all", "--seed", "42"]);
            let (a, b) = (run(), run());
            if a.stdout.is_empty() || a.stdout != b.stdout {
                undocumented += 1;
                failures.push("two runs of check --suite all --seed 42 differ".into());
            }
            if a.stdout != report.to_json() {
                undocumented += 1;
                failures.push("CLI report differs from the in-process report".into());
            }
        }
        let status = if failures.is_empty() { "PASS" } else { "FAIL" };
        println!("{status} criterion {number:>2}: {title} [{}]", ids.join(", "));
        for f in failures {
            println!("       {f}");
        }
    }

    if undocumented == 0 {
        println!("acceptance: no undocumented failures");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {undocumented} undocumented failure(s)");
        ExitCode::FAILURE
    }
}
