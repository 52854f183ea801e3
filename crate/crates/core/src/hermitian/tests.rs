use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::field::{build_tower, tower_for_q, Ext};

fn gf(rows: &[&[u32]]) -> Matrix {
    Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&c| Gf(c)).collect()).collect())
}

fn random_nonsingular(n: usize, t: &FieldTower, rng: &mut impl Rng) -> Matrix {
    loop {
        let m = Matrix::from_fn(n, n, |_, _| Gf(rng.gen_range(0..t.quad_size())));
        if m.rank(t) == n {
            return m;
        }
    }
}

fn space(t: &FieldTower, n: usize) -> Vec<HermitianMatrix> {
    HermitianSpace::new(t, n, DEFAULT_ENUMERATION_CAP).unwrap().iter().collect()
}

#[test]
fn conj_transpose_fixed_points() {
    let t = build_tower(2, 1, 2).unwrap();
    assert_eq!(Matrix::zeros(2, 2).conj_transpose(&t), Matrix::zeros(2, 2));
    assert_eq!(Matrix::identity(3).conj_transpose(&t), Matrix::identity(3));
    // [[0, ω], [ω², 1]]
    let a = gf(&[&[0, 2], &[3, 1]]);
    assert_eq!(a.conj_transpose(&t), a);
    assert!(HermitianMatrix::new(a, &t).is_ok());
    let b = gf(&[&[0, 2], &[2, 1]]);
    assert_eq!(b.conj_transpose(&t).conj_transpose(&t), b);
    assert_eq!(HermitianMatrix::new(b, &t).unwrap_err(), HermitianError::NotHermitian(0, 1));
    // ω on the diagonal is not in F_2
    assert!(HermitianMatrix::new(gf(&[&[2]]), &t).is_err());
    assert!(HermitianMatrix::new(Matrix::zeros(1, 2), &t).is_err());
}

#[test]
fn rank_basics() {
    let t = build_tower(3, 1, 2).unwrap();
    assert_eq!(HermitianMatrix::zero(3).rank(&t), 0);
    for n in 1..5 {
        assert_eq!(HermitianMatrix::identity(n).rank(&t), n);
    }
    let c = Gf(5);
    let row = [Gf(1), Gf(7), Gf(0)];
    let scaled: Vec<Gf> = row.iter().map(|&x| t.mul(c, x)).collect();
    let m = Matrix::from_rows(vec![row.to_vec(), scaled, vec![Gf::ZERO; 3]]);
    assert_eq!(m.rank(&t), 1);
}

#[test]
fn rank_census_x22() {
    let t = build_tower(2, 1, 2).unwrap();
    let mut census = [0usize; 3];
    for a in space(&t, 2) {
        census[a.rank(&t)] += 1;
    }
    assert_eq!(census, [1, 5, 10]);
}

#[test]
fn space_is_sorted_and_hermitian() {
    let t = build_tower(3, 1, 2).unwrap();
    let all = space(&t, 2);
    assert_eq!(all.len(), 81);
    assert!(all.windows(2).all(|w| w[0] < w[1]));
    assert!(all.iter().all(|a| a.matrix().is_hermitian(&t)));
    assert!(HermitianSpace::new(&t, 5, DEFAULT_ENUMERATION_CAP).is_err());
    let xs = HermitianSpace::new(&t, 2, DEFAULT_ENUMERATION_CAP).unwrap();
    for (i, a) in all.iter().enumerate() {
        assert_eq!(xs.index_of(a), i as u64);
    }
}

#[test]
fn fp_coordinates_round_trip() {
    let t = build_tower(2, 2, 1).unwrap();
    for a in space(&t, 2).into_iter().step_by(7) {
        let d = a.fp_coordinates(&t);
        assert_eq!(d.len(), 4 * 2);
        assert_eq!(HermitianMatrix::from_fp_coordinates(2, &d, &t), a);
    }
}

#[test]
fn differences_stay_hermitian_and_rank_is_congruence_invariant() {
    let t = build_tower(3, 1, 3).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let xs = HermitianSpace::new(&t, 3, DEFAULT_ENUMERATION_CAP).unwrap();
    for _ in 0..200 {
        let a = xs.get(rng.gen_range(0..xs.len()));
        let b = xs.get(rng.gen_range(0..xs.len()));
        let d = a.sub(&b, &t).unwrap();
        assert!(d.matrix().is_hermitian(&t));
        let r = a.rank(&t);
        assert_eq!(a.matrix().conj_transpose(&t).rank(&t), r);
        let p = random_nonsingular(3, &t, &mut rng);
        let c = a.congruence(&p, &t).unwrap();
        assert!(c.matrix().is_hermitian(&t));
        assert_eq!(c.rank(&t), r);
    }
}

#[test]
fn pairing_values() {
    let t = build_tower(2, 1, 1).unwrap();
    let one = HermitianMatrix::identity(1);
    let zero = HermitianMatrix::zero(1);
    assert_eq!(pairing(&one, &one, &t).unwrap(), 1);
    assert_eq!(pairing(&zero, &one, &t).unwrap(), 0);
    // Σ_A ζ^{⟨A,B⟩} over X(1,2) for B = [1] is 1 + (−1) = 0
    let x = space(&t, 1);
    assert_eq!(char_sum(&x, &one, &t).unwrap().to_integer(), Some(0.into()));
    assert_eq!(char_sum(&x, &zero, &t).unwrap().to_integer(), Some(2.into()));
    let empty: Vec<HermitianMatrix> = Vec::new();
    assert_eq!(char_sum(&empty, &one, &t).unwrap(), CyclotomicInteger::zero(2));
    assert!(pairing(&one, &HermitianMatrix::identity(2), &t).is_err());
}

#[test]
fn pairing_is_a_symmetric_character() {
    for (q, n) in [(2u64, 1usize), (2, 2), (3, 2)] {
        let t = tower_for_q(q, 1).unwrap();
        let x = space(&t, n);
        for a in &x {
            for b in &x {
                let ab = pairing(a, b, &t).unwrap();
                assert_eq!(ab, pairing(b, a, &t).unwrap());
                let zero = pairing(&HermitianMatrix::zero(n), b, &t).unwrap();
                assert_eq!(zero, 0);
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let a = &x[rng.gen_range(0..x.len())];
            let a2 = &x[rng.gen_range(0..x.len())];
            let b = &x[rng.gen_range(0..x.len())];
            let lhs = pairing(&a.add(a2, &t).unwrap(), b, &t).unwrap();
            let rhs = (pairing(a, b, &t).unwrap() + pairing(a2, b, &t).unwrap()) % t.p();
            assert_eq!(lhs, rhs);
        }
        // character completeness: Σ_A ⟨A,B⟩ = 0 for B ≠ 0
        for b in x.iter().skip(1) {
            assert_eq!(char_sum(&x, b, &t).unwrap().to_integer(), Some(0.into()));
        }
    }
}

#[test]
fn rank_one_class_against_rank_two() {
    let t = build_tower(2, 1, 2).unwrap();
    let class: Vec<HermitianMatrix> = space(&t, 2).into_iter().filter(|a| a.rank(&t) == 1).collect();
    let b = HermitianMatrix::diagonal_representative(2, 2);
    let s = char_sum(&class, &b, &t).unwrap();
    assert!(s.is_rational_integer());
    assert_eq!(s.to_integer(), Some(1.into()));
}

#[test]
fn zero_form_and_one_dimensional_trace_form() {
    let t = build_tower(2, 1, 3).unwrap();
    let z = HermitianForm::zero(&t);
    assert!(z.to_matrix().unwrap().is_zero());
    assert_eq!(z.radical_dim(), 3);

    // n = 1, q = 2: H(x,y) = Tr(x y^q) on F_4
    let t1 = build_tower(2, 1, 1).unwrap();
    let mut h = HermitianForm::zero(&t1);
    h.push(t1.ext_one(), 0, 1);
    let expected = h.evaluate(&t1.ext_one(), &t1.ext_one());
    assert_eq!(expected, Gf::ONE);
    let g = h.to_matrix().unwrap();
    assert_eq!(g.get(0, 0), expected);
    assert_eq!(h.radical_dim(), 0);
}

#[test]
fn non_hermitian_form_is_rejected() {
    let t = build_tower(2, 1, 1).unwrap();
    let mut h = HermitianForm::zero(&t);
    h.push(t.embed_quad(Gf(2)), 0, 0); // ω·x·y
    assert!(matches!(h.to_matrix(), Err(HermitianError::FormNotHermitian(0, 0))));
}

#[test]
fn trace_bilinear_pairing_is_nondegenerate() {
    for q in [2u64, 3] {
        for n in 1..=4 {
            let t = tower_for_q(q, n).unwrap();
            let mut h = HermitianForm::zero(&t);
            h.push(t.ext_one(), 0, 0);
            assert_eq!(h.radical_dim(), 0, "q = {q}, n = {n}");
        }
    }
}

#[test]
fn a0_only_forms_are_nondegenerate() {
    // H(x,y) = Tr(a0 x y^{q^3}) with a0 ∈ F_{q^3}*, n = 3, q = 2
    let t = build_tower(2, 1, 3).unwrap();
    for a0 in t.subfield_fqn().into_iter().filter(|a| !a.is_zero()) {
        let mut h = HermitianForm::zero(&t);
        h.push(a0, 0, 3);
        let g = h.to_matrix().unwrap();
        assert_eq!(h.radical_dim(), 0);
        assert_eq!(g.rank(&t), 3);
    }
}

#[test]
fn gram_rank_plus_radical_is_n() {
    let t = build_tower(3, 1, 2).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for _ in 0..50 {
        let a = Ext((0..2).map(|_| Gf(rng.gen_range(0..9))).collect());
        let mut h = HermitianForm::zero(&t);
        h.push(a.clone(), 0, 1);
        h.push(t.frobenius_q(&a, 1), 2, 1);
        let basis = t.basis().to_vec();
        let pairs: Vec<(&Ext, &Ext)> = basis.iter().flat_map(|x| basis.iter().map(move |y| (x, y))).collect();
        assert!(h.is_conjugate_symmetric_on(pairs));
        let g = h.to_matrix().unwrap();
        assert_eq!(g.rank(&t) + h.radical_dim(), 2);
    }
}
