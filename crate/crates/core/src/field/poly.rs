//! Dense univariate polynomials over a coded field, used for modulus
//! selection, irreducibility testing and extended-Euclid inversion.
//!
//! Coefficients are stored in ascending degree order with no trailing zeros;
//! the zero polynomial is the empty vector.

use super::small::CodeField;

pub(crate) type Poly = Vec<u32>;

pub(crate) fn trim(mut a: Poly) -> Poly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn degree(a: &[u32]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub(crate) fn sub<F: CodeField>(f: &F, a: &[u32], b: &[u32]) -> Poly {
    let len = a.len().max(b.len());
    let out = (0..len)
        .map(|i| f.sub(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0)))
        .collect();
    trim(out)
}

pub(crate) fn mul<F: CodeField>(f: &F, a: &[u32], b: &[u32]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    trim(out)
}

/// Quotient and remainder of `a` by nonzero `b`.
pub(crate) fn div_rem<F: CodeField>(f: &F, a: &[u32], b: &[u32]) -> (Poly, Poly) {
    let db = degree(b).expect("division by the zero polynomial");
    let lead_inv = f.inv(b[db]);
    let mut rem = trim(a.to_vec());
    if rem.len() <= db {
        return (Vec::new(), rem);
    }
    let mut quot = vec![0; rem.len() - db];
    while let Some(dr) = degree(&rem) {
        if dr < db {
            break;
        }
        let c = f.mul(rem[dr], lead_inv);
        let shift = dr - db;
        quot[shift] = c;
        for (j, &bj) in b[..=db].iter().enumerate() {
            rem[shift + j] = f.sub(rem[shift + j], f.mul(c, bj));
        }
        rem = trim(rem);
    }
    (trim(quot), rem)
}

pub(crate) fn rem<F: CodeField>(f: &F, a: &[u32], b: &[u32]) -> Poly {
    div_rem(f, a, b).1
}

pub(crate) fn mul_mod<F: CodeField>(f: &F, a: &[u32], b: &[u32], modulus: &[u32]) -> Poly {
    rem(f, &mul(f, a, b), modulus)
}

pub(crate) fn pow_mod<F: CodeField>(f: &F, base: &[u32], mut e: u64, modulus: &[u32]) -> Poly {
    let mut acc = rem(f, &[1], modulus);
    let mut b = rem(f, base, modulus);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(f, &acc, &b, modulus);
        }
        b = mul_mod(f, &b, &b, modulus);
        e >>= 1;
    }
    acc
}

pub(crate) fn gcd<F: CodeField>(f: &F, a: &[u32], b: &[u32]) -> Poly {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(f, &a, &b);
        a = b;
        b = r;
    }
    a
}

/// Inverse of `a` modulo `modulus` by the extended Euclidean algorithm.
/// Returns `None` when `a` and `modulus` are not coprime.
pub(crate) fn inv_mod<F: CodeField>(f: &F, a: &[u32], modulus: &[u32]) -> Option<Poly> {
    let (mut r0, mut r1) = (trim(modulus.to_vec()), rem(f, a, modulus));
    let (mut s0, mut s1): (Poly, Poly) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = div_rem(f, &r0, &r1);
        let s = sub(f, &s0, &mul(f, &q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    if r0.len() != 1 {
        return None;
    }
    let c = f.inv(r0[0]);
    Some(rem(f, &mul(f, &s0, &[c]), modulus))
}

fn eval<F: CodeField>(f: &F, a: &[u32], x: u32) -> u32 {
    a.iter().rev().fold(0, |acc, &c| f.add(f.mul(acc, x), c))
}

/// Irreducibility of a monic polynomial: root search up to degree 3, and
/// gcd(f, x^{Q^i} - x) = 1 for i <= deg/2 above that (Q = field size).
pub(crate) fn is_irreducible<F: CodeField>(f: &F, poly: &[u32]) -> bool {
    let d = match degree(poly) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    if d == 1 {
        return true;
    }
    if d <= 3 {
        return (0..f.size()).all(|x| eval(f, poly, x) != 0);
    }
    let x: Poly = vec![0, 1];
    let mut power = x.clone();
    for _ in 1..=d / 2 {
        power = pow_mod(f, &power, f.size() as u64, poly);
        let g = gcd(f, poly, &sub(f, &power, &x));
        if g.len() != 1 {
            return false;
        }
    }
    true
}

/// The first monic irreducible polynomial of the given degree when candidate
/// coefficient lists `[c0, .., c_{d-1}]` are scanned in lexicographic order.
pub(crate) fn smallest_irreducible<F: CodeField>(f: &F, degree: usize) -> Poly {
    let base = f.size() as u64;
    let mut digits = vec![0u32; degree];
    loop {
        let mut candidate = digits.clone();
        candidate.push(1);
        if is_irreducible(f, &candidate) {
            return candidate;
        }
        // increment with c_{d-1} least significant
        let mut pos = degree;
        loop {
            assert!(pos > 0, "no irreducible polynomial of degree {degree}");
            pos -= 1;
            digits[pos] += 1;
            if (digits[pos] as u64) < base {
                break;
            }
            digits[pos] = 0;
        }
    }
}
