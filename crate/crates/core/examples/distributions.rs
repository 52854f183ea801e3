//! Inner and dual distributions, design strength and dual codes.

use hrdc::constructions::{construct_thm42, construct_zero_diag};
use hrdc::distributions::{
    design_strength, dual_code, dual_distribution, inner_distribution, min_distance, thm33_distribution,
    DEFAULT_DUAL_CAP,
};
use hrdc::scheme::q_explicit;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let y = construct_thm42(3, 3, 2)?;
    let inner = inner_distribution(&y)?;
    let dual = dual_distribution(&inner, &q_explicit(3, 2)?)?;
    println!("|Y| = {}, inner {inner}, min distance {}", y.len(), min_distance(&inner));
    println!("dual {:?}, design strength {}", dual.to_strings(), design_strength(&dual));
    println!("closed form: {}", thm33_distribution(3, 3, 2, &y.len().into())?);

    let z = construct_zero_diag(2, 2)?;
    let perp = dual_code(&z, DEFAULT_DUAL_CAP)?;
    println!("zero-diagonal code: |Y| = {}, |Y⊥| = {}, inner(Y⊥) = {}", z.len(), perp.len(), inner_distribution(&perp)?);
    Ok(())
}
