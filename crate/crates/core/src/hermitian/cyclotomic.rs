use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

/// An element Σ c[t]·ζ_p^t of Z[ζ_p], stored as its p-vector of counts.
///
/// The representation is not unique: adding a constant to every coordinate
/// leaves the value unchanged because 1 + ζ + … + ζ^{p−1} = 0. Equality
/// compares values, not vectors.
#[derive(Debug, Clone)]
pub struct CyclotomicInteger {
    coeffs: Vec<BigInt>,
}

impl CyclotomicInteger {
    pub fn zero(p: u32) -> Self {
        CyclotomicInteger { coeffs: vec![BigInt::zero(); p as usize] }
    }

    /// ζ_p^t
    pub fn root(p: u32, t: u32) -> Self {
        let mut z = Self::zero(p);
        z.coeffs[(t % p) as usize] = BigInt::one();
        z
    }

    pub fn from_integer(p: u32, k: BigInt) -> Self {
        let mut z = Self::zero(p);
        z.coeffs[0] = k;
        z
    }

    pub fn from_counts(counts: Vec<BigInt>) -> Self {
        assert!(counts.len() >= 2, "need at least two coordinates");
        CyclotomicInteger { coeffs: counts }
    }

    pub fn order(&self) -> u32 {
        self.coeffs.len() as u32
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// Adds ζ_p^t in place.
    pub fn add_root(&mut self, t: u32) {
        let p = self.coeffs.len() as u32;
        self.coeffs[(t % p) as usize] += 1;
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order());
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        CyclotomicInteger { coeffs }
    }

    pub fn neg(&self) -> Self {
        CyclotomicInteger { coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.order(), other.order());
        let p = self.coeffs.len();
        let mut coeffs = vec![BigInt::zero(); p];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[(i + j) % p] += a * b;
            }
        }
        CyclotomicInteger { coeffs }
    }

    /// Subtracts the minimum coordinate from every coordinate.
    pub fn normalized(&self) -> Self {
        let min = self.coeffs.iter().min().cloned().unwrap_or_default();
        CyclotomicInteger { coeffs: self.coeffs.iter().map(|a| a - &min).collect() }
    }

    /// True iff the value is a rational integer, i.e. c[1] = … = c[p−1].
    pub fn is_rational_integer(&self) -> bool {
        self.coeffs[1..].windows(2).all(|w| w[0] == w[1])
    }

    /// The rational integer c[0] − c[1], when the value is one.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.is_rational_integer().then(|| &self.coeffs[0] - &self.coeffs[1])
    }
}

impl PartialEq for CyclotomicInteger {
    fn eq(&self, other: &Self) -> bool {
        self.order() == other.order() && self.normalized().coeffs == other.normalized().coeffs
    }
}

impl Eq for CyclotomicInteger {}

impl fmt::Display for CyclotomicInteger {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(k) = self.to_integer() {
            return write!(f, "{k}");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(t, c)| format!("{c}·ζ^{t}"))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_invariance_and_normalization() {
        let a = CyclotomicInteger::from_counts(vec![3.into(), 1.into(), 2.into()]);
        let shifted = CyclotomicInteger::from_counts(vec![8.into(), 6.into(), 7.into()]);
        assert_eq!(a, shifted);
        let n = a.normalized();
        assert_eq!(n.normalized().coeffs(), n.coeffs());
        assert_eq!(n.coeffs(), &[2.into(), 0.into(), 1.into()]);
    }

    #[test]
    fn integer_extraction() {
        let z = CyclotomicInteger::from_counts(vec![5.into(), 2.into(), 2.into()]);
        assert_eq!(z.to_integer(), Some(3.into()));
        let w = CyclotomicInteger::root(3, 1);
        assert!(w.to_integer().is_none());
        // 1 + ζ + ζ² = 0
        let s = CyclotomicInteger::root(3, 0).add(&w).add(&CyclotomicInteger::root(3, 2));
        assert_eq!(s.to_integer(), Some(0.into()));
        assert_eq!(CyclotomicInteger::zero(2).to_integer(), Some(0.into()));
    }

    #[test]
    fn multiplication_of_roots() {
        let a = CyclotomicInteger::root(5, 3);
        let b = CyclotomicInteger::root(5, 4);
        assert_eq!(a.mul(&b), CyclotomicInteger::root(5, 2));
        let minus_one = CyclotomicInteger::root(2, 1);
        assert_eq!(minus_one.mul(&minus_one).to_integer(), Some(1.into()));
        assert_eq!(minus_one.neg().to_integer(), Some(1.into()));
    }
}
