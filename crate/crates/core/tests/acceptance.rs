//! One line per acceptance criterion, in order. Runs without the libtest
//! harness so the lines are always shown.

use std::process::ExitCode;

use secretpi::suite::run_suite;

fn main() -> ExitCode {
    let results = run_suite(None);
    assert_eq!(results.len(), 12);
    for (i, r) in results.iter().enumerate() {
        let tag = if r.passed { "PASS" } else { "FAIL" };
        println!(
            "{tag} criterion {:>2} [{}] {}: {}",
            i + 1,
            r.id,
            r.title,
            r.detail
        );
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!(
        "acceptance: {} passed, {failed} failed",
        results.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
