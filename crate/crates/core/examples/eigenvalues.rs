//! The eigenvalue table Q_k(i) by three routes.

use hrdc::scheme::{count_rank, q_direct, q_explicit, q_recurrence, verify_identities};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let explicit = q_explicit(2, 3)?;
    print!("{}", explicit.to_csv());
    assert_eq!(explicit, q_recurrence(2, 3)?);
    assert_eq!(explicit, q_direct(2, 3, 1 << 10)?);
    println!("closed form, recurrence and character sums agree");

    let big = q_explicit(6, 5)?;
    println!("Q_6(0) for n = 6, q = 5: {}", big.get(6, 0));
    println!("matrices of rank 6 in X(6,5): {}", count_rank(6, 5, 6)?);
    println!("identities hold: {}", verify_identities(&big).passed());
    Ok(())
}
