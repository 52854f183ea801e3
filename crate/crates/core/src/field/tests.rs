use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;

fn random_ext(t: &FieldTower, rng: &mut impl Rng) -> Ext {
    Ext((0..t.n()).map(|_| Gf(rng.gen_range(0..t.quad_size()))).collect())
}

#[test]
fn f4_modulus_and_degrees() {
    let t = build_tower(2, 1, 2).unwrap();
    assert_eq!(t.moduli()[1], vec![1, 1, 1]);
    assert_eq!(t.total_degree(), 4);
    assert_eq!(t.top_size(), Some(16));

    let t = build_tower(3, 1, 1).unwrap();
    assert_eq!(t.quad_size(), 9);
    assert_eq!(t.top_size(), Some(9));
    assert_eq!(t.moduli()[2].len(), 2);

    let t = build_tower(2, 2, 2).unwrap();
    assert_eq!(t.q(), 4);
    assert_eq!(t.total_degree(), 8);
}

#[test]
fn construction_errors() {
    assert_eq!(build_tower(4, 1, 2).unwrap_err(), FieldError::NotPrime(4));
    assert!(matches!(build_tower(2, 1, 33), Err(FieldError::DegreeCap { degree: 66, cap: 64 })));
    let capped = FieldTower::new(2, 1, 3, TowerConfig { degree_cap: 4 });
    assert!(matches!(capped, Err(FieldError::DegreeCap { .. })));
    assert!(prime_power(12).is_err());
    assert_eq!(prime_power(9).unwrap(), (3, 2));
}

#[test]
fn deterministic_construction() {
    let a = build_tower(3, 1, 3).unwrap();
    let b = build_tower(3, 1, 3).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.descriptor(), b.descriptor());
    let c = FieldTower::from_descriptor(&a.descriptor()).unwrap();
    assert_eq!(a, c);
    let mut bad = a.descriptor();
    bad.moduli[2][0] = (bad.moduli[2][0] + 1) % 9;
    assert!(FieldTower::from_descriptor(&bad).is_err());
}

#[test]
fn omega_squared_is_omega_plus_one() {
    let t = build_tower(2, 1, 2).unwrap();
    let omega = Gf(2);
    assert_eq!(t.mul(omega, omega), Gf(3));
    assert_eq!(t.add(omega, Gf::ONE), Gf(3));
}

#[test]
fn inverses_and_errors() {
    let t = build_tower(3, 1, 3).unwrap();
    for a in t.quad_elements().skip(1) {
        assert_eq!(t.mul(a, t.inv(a).unwrap()), Gf::ONE);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..50 {
        let a = random_ext(&t, &mut rng);
        if a.is_zero() {
            continue;
        }
        assert_eq!(t.ext_mul(&a, &t.ext_inv(&a).unwrap()), t.ext_one());
    }
    assert_eq!(t.ext_inv(&t.ext_zero()).unwrap_err(), FieldError::DivisionByZero);
    let r = t.arith(&FieldElement::Quad(Gf(1)), &FieldElement::Top(t.ext_one()), ArithOp::Add);
    assert!(matches!(r, Err(FieldError::LevelMismatch { .. })));
    let r = t.arith(&FieldElement::Quad(Gf(1)), &FieldElement::Quad(Gf(0)), ArithOp::Div);
    assert_eq!(r.unwrap_err(), FieldError::DivisionByZero);
    let r = t.arith(&FieldElement::Base(Gf(5)), &FieldElement::Base(Gf(1)), ArithOp::Add);
    assert!(matches!(r, Err(FieldError::InvalidElement { .. })));
}

#[test]
fn tagged_arith_matches_typed() {
    let t = build_tower(2, 1, 2).unwrap();
    let w = FieldElement::Quad(Gf(2));
    assert_eq!(t.arith(&w, &w, ArithOp::Mul).unwrap(), FieldElement::Quad(Gf(3)));
    let b = FieldElement::Base(Gf(1));
    assert_eq!(t.arith(&b, &b, ArithOp::Add).unwrap(), FieldElement::Base(Gf(0)));
    let x = FieldElement::Top(t.beta());
    let y = t.arith(&x, &x, ArithOp::Div).unwrap();
    assert_eq!(y, FieldElement::Top(t.ext_one()));
}

#[test]
fn char_two_squaring_is_additive() {
    let t = build_tower(2, 1, 2).unwrap();
    for a in t.ext_elements().unwrap() {
        for b in t.ext_elements().unwrap() {
            let s = t.ext_add(&a, &b);
            let lhs = t.ext_mul(&s, &s);
            let rhs = t.ext_add(&t.ext_mul(&a, &a), &t.ext_mul(&b, &b));
            assert_eq!(lhs, rhs);
        }
    }
}

#[test]
fn frobenius_agrees_with_powering() {
    for (p, m, n) in [(2, 1, 2), (2, 1, 3), (3, 1, 2), (2, 2, 2), (5, 1, 2)] {
        let t = build_tower(p, m, n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let q = BigUint::from(t.q());
        for _ in 0..20 {
            let x = random_ext(&t, &mut rng);
            assert_eq!(t.frobenius_q(&x, 0), x);
            let mut expect = x.clone();
            for k in 1..2 * n {
                expect = t.ext_pow(&expect, &q);
                assert_eq!(t.frobenius_q(&x, k), expect, "k = {k}");
                assert_eq!(t.frobenius_iterated(&x, k), expect);
            }
            assert_eq!(t.frobenius_q(&t.frobenius_q(&x, n), n), x);
        }
    }
}

#[test]
fn frobenius_of_generator_in_f16() {
    let t = build_tower(2, 1, 2).unwrap();
    let beta = t.beta();
    let squared = t.ext_mul(&beta, &beta);
    assert_eq!(t.frobenius_q(&beta, 1), squared);
    assert_eq!(t.ext_pow(&beta, &BigUint::from(2u32)), squared);
}

#[test]
fn frobenius_order_divides_2n() {
    for (p, m, n) in [(2, 1, 3), (3, 1, 2), (2, 2, 2), (2, 1, 1)] {
        let t = build_tower(p, m, n).unwrap();
        for b in t.basis() {
            assert_eq!(&t.frobenius_iterated(b, 2 * n), b);
        }
    }
}

#[test]
fn conjugation() {
    let t = build_tower(2, 1, 2).unwrap();
    assert_eq!(t.conjugate(&FieldElement::Quad(Gf::ONE)).unwrap(), FieldElement::Quad(Gf::ONE));
    assert_eq!(t.conj(Gf(2)), t.mul(Gf(2), Gf(2)));
    assert_eq!(t.conj(Gf(2)), Gf(3));
    assert!(t.conjugate(&FieldElement::Top(t.ext_one())).is_err());
    for t in [build_tower(3, 1, 1).unwrap(), build_tower(2, 2, 1).unwrap(), build_tower(5, 1, 1).unwrap()] {
        let fixed: Vec<Gf> = t.quad_elements().filter(|&a| t.conj(a) == a).collect();
        let base: Vec<Gf> = t.base_elements().collect();
        assert_eq!(fixed, base);
        for a in t.quad_elements() {
            assert_eq!(t.conj(t.conj(a)), a);
            assert_eq!(t.conj(a), t.pow(a, t.q() as u64));
        }
    }
}

#[test]
fn relative_trace_values() {
    for (p, m, n) in [(2, 1, 2), (2, 1, 3), (3, 1, 2), (3, 1, 3), (2, 2, 2)] {
        let t = build_tower(p, m, n).unwrap();
        assert_eq!(t.relative_trace(&t.ext_zero()), Gf::ZERO);
        assert_eq!(t.relative_trace(&t.ext_one()), t.from_int(n as i64));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let x = random_ext(&t, &mut rng);
            let direct = t.relative_trace_direct(&x);
            assert_eq!(direct, t.embed_quad(t.relative_trace(&x)));
            // Tr commutes with conjugation
            let lhs = t.conj(t.relative_trace(&x));
            let rhs = t.relative_trace(&t.frobenius_q(&x, 1));
            assert_eq!(lhs, rhs);
            // F_{q²}-linearity
            let c = Gf(rng.gen_range(0..t.quad_size()));
            assert_eq!(t.relative_trace(&t.ext_scale(c, &x)), t.mul(c, t.relative_trace(&x)));
        }
    }
}

#[test]
fn relative_trace_is_balanced() {
    let t = build_tower(2, 1, 2).unwrap();
    let mut counts = [0usize; 4];
    for x in t.ext_elements().unwrap() {
        counts[t.relative_trace(&x).0 as usize] += 1;
    }
    assert_eq!(counts, [4, 4, 4, 4]);
}

#[test]
fn multiplicative_group_order() {
    for (p, m, n) in [(2, 1, 4), (3, 1, 2), (2, 3, 2), (7, 1, 2)] {
        let t = build_tower(p, m, n).unwrap();
        let order = BigUint::from(p).pow(t.total_degree()) - 1u32;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let a = random_ext(&t, &mut rng);
            if a.is_zero() {
                continue;
            }
            assert_eq!(t.ext_pow(&a, &order), t.ext_one());
        }
    }
}

fn fixed_points_by_powering(t: &FieldTower) -> Vec<Ext> {
    let qn = BigUint::from(t.q()).pow(t.n());
    t.ext_elements().unwrap().filter(|x| &t.ext_pow(x, &qn) == x).collect()
}

#[test]
fn subfield_fqn_by_enumeration() {
    for (p, n) in [(2u32, 1u32), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (3, 3), (3, 4)] {
        let t = build_tower(p, 1, n).unwrap();
        let sub = t.subfield_fqn();
        assert_eq!(sub.len() as u64, (p as u64).pow(n));
        if n <= 3 || p == 2 {
            assert_eq!(sub, fixed_points_by_powering(&t));
        }
        let in_quad = sub.iter().filter(|x| x.0[1..].iter().all(|c| c.is_zero())).count();
        let g = if n % 2 == 0 { 2 } else { 1 };
        assert_eq!(in_quad as u64, (p as u64).pow(g), "p = {p}, n = {n}");
        if sub.len() <= 81 {
            for a in &sub {
                for b in &sub {
                    assert!(sub.binary_search(&t.ext_sub(a, b)).is_ok());
                    assert!(sub.binary_search(&t.ext_mul(a, b)).is_ok());
                }
            }
        }
    }
    // n = 1: F_q itself
    let t = build_tower(3, 1, 1).unwrap();
    let sub: Vec<Gf> = t.subfield_fqn().into_iter().map(|x| x.0[0]).collect();
    assert_eq!(sub, t.base_elements().collect::<Vec<_>>());
}

#[test]
fn embedding_is_a_homomorphism() {
    for q in [2u64, 3] {
        for n in 1..=3 {
            let t = tower_for_q(q, n).unwrap();
            assert_eq!(t.embed(&FieldElement::Quad(Gf::ZERO)).unwrap(), t.ext_zero());
            assert_eq!(t.embed(&FieldElement::Quad(Gf::ONE)).unwrap(), t.ext_one());
            for a in t.quad_elements() {
                let ea = t.embed_quad(a);
                assert_eq!(t.embed_quad(t.conj(a)), t.frobenius_q(&ea, 1));
                for b in t.quad_elements() {
                    assert_eq!(t.embed_quad(t.mul(a, b)), t.ext_mul(&ea, &t.embed_quad(b)));
                    assert_eq!(t.embed_quad(t.add(a, b)), t.ext_add(&ea, &t.embed_quad(b)));
                }
            }
        }
    }
    let t = build_tower(2, 1, 2).unwrap();
    assert!(t.embed(&FieldElement::Top(t.ext_one())).is_err());
}
