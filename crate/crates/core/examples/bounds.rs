//! Upper bounds and validation of a code against them.

use hrdc::bounds::{bound_additive, bound_even_d, bound_external, check_code};
use hrdc::constructions::construct_thm41;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for q in [2u64, 3, 4, 5, 7] {
        println!("even-d bound at n = d = 2, q = {q}: {}", bound_even_d(2, 2, q)?.exact);
    }
    println!("additive bound (4,2,2): {}", bound_additive(4, 2, 2)?);
    println!("even-d bound (4,2,2): {}", bound_even_d(4, 2, 2)?.exact);

    let report = bound_external(2, 2, 3)?;
    for e in &report.entries {
        println!("  {:<18} {:>4}  {}", e.name, e.value, e.source);
    }
    for note in &report.notes {
        println!("  note: {note}");
    }

    let check = check_code(&construct_thm41(3, 2, 2)?, 2)?;
    println!("thm41 (3,2,2) passes: {}, inner {:?}", check.passed(), check.inner);
    Ok(())
}
