//! Arithmetic in the tower F_p ⊂ F_q ⊂ F_{q²} ⊂ F_{q^{2n}}.

use hrdc::field::{tower_for_q, Gf};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let t = tower_for_q(4, 3)?;
    println!("p = {}, m = {}, q = {}, n = {}", t.p(), t.m(), t.q(), t.n());
    println!("moduli (F_q, F_q², F_q^2n): {:?}", t.moduli());

    let a = Gf(7);
    let b = Gf(13);
    println!("a·b = {:?}, a + b = {:?}, 1/a = {:?}", t.mul(a, b), t.add(a, b), t.inv(a)?);
    println!("conj(a) = {:?}, norm a·conj(a) = {:?} lies in F_q: {}", t.conj(a), t.mul(a, t.conj(a)), t.is_in_base(t.mul(a, t.conj(a))));

    // relative trace down to F_{q²} and the subfield F_{q^n}
    let x = t.ext_from_index(12345);
    println!("Tr(x) = {:?}", t.relative_trace(&x));
    println!("Frobenius^{} fixes x: {}", 2 * t.n(), t.frobenius_q(&x, 2 * t.n()) == x);
    println!("|F_q^n| inside the top field: {}", t.subfield_fqn().len());
    Ok(())
}
