//! The code families, including streaming a census without materializing.

use hrdc::constructions::{construct, generator, Family, DEFAULT_CONSTRUCTION_CAP};
use hrdc::distributions::inner_distribution;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (family, n, d, q) in [
        (Family::Thm41, 3, 2, 2),
        (Family::Thm42, 3, 3, 2),
        (Family::ZeroDiag, 3, 2, 2),
        (Family::SymDn, 3, 3, 2),
        (Family::Thm43, 2, 2, 2),
    ] {
        let code = construct(family, n, d, q, DEFAULT_CONSTRUCTION_CAP)?;
        println!(
            "{family:>9} n={n} q={q}: size {:>3}, additive {:>5}, inner {}",
            code.len(),
            code.is_additive(),
            inner_distribution(&code)?
        );
    }

    let g = generator(Family::Thm42, 5, 3, 2, DEFAULT_CONSTRUCTION_CAP)?;
    println!("thm42 (5,3,2): {} members, rank census {:?}", g.size(), g.rank_census(DEFAULT_CONSTRUCTION_CAP)?);
    Ok(())
}
