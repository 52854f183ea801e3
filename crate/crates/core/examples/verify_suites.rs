//! The built-in verification suites behind `hrdc verify`.

use hrdc::cli::verify::{run_suite, SUITES};

fn main() {
    for name in SUITES {
        let report = run_suite(name).expect("known suite");
        println!("{name}: {} checks, passed {}", report.checks, report.passed);
        for f in &report.failures {
            println!("  {}: {}", f.check, f.detail);
        }
    }
}
