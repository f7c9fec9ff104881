//! Runs the invariant suites that back `asymrate verify` and prints each
//! measured slack.
use asymrate::cli::verify::{run_suite, VerifyOptions};

fn main() -> asymrate::Result<()> {
    let report = run_suite("all", VerifyOptions { seed: 11, inject_noncovariant: false })?;
    for inv in &report.invariants {
        println!(
            "{:<4} {:<10} {:<45} measured {:>10.3e}  tolerance {:.0e}",
            if inv.passed { "ok" } else { "FAIL" },
            inv.suite,
            inv.name,
            inv.measured,
            inv.tolerance
        );
    }
    println!("{} invariants, all passed: {}", report.count, report.passed);
    Ok(())
}
