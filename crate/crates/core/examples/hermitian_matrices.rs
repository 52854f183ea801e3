//! Hermitian matrices over F_{q²}: ranks, the rank census of X(n,q), and
//! the trace pairing.

use hrdc::field::tower_for_q;
use hrdc::hermitian::{pairing, HermitianMatrix, HermitianSpace};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t = tower_for_q(3, 1)?;
    let space = HermitianSpace::new(&t, 2, 1 << 12)?;
    let mut census = [0u64; 3];
    for a in space.iter() {
        census[a.rank(&t)] += 1;
    }
    println!("X(2,3) has {} matrices; by rank: {census:?}", space.len());

    let a = space.get(40);
    let b = HermitianMatrix::identity(2);
    println!("A = {:?}", a.matrix().row_vecs());
    println!("rank A = {}, rank(A − I) = {}", a.rank(&t), a.sub(&b, &t)?.rank(&t));
    println!("<A, I> = {}", pairing(&a, &b, &t)?);
    Ok(())
}
