//! Codes in X(n,q), their inner and dual inner distributions, and duality
//! for additive codes.

use std::fmt;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::field::{span_fp, FieldTower};
use crate::fp_linalg::{self, EchelonBasis};
use crate::hermitian::{pairing, HermitianError, HermitianMatrix};
use crate::scheme::{neg_q_pow, EigenError, NegQBinom, QTable};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DistError {
    #[error("the code is empty")]
    EmptyCode,
    #[error("matrix {index} has dimension {found}, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, found: usize },
    #[error("distribution has length {found}, table expects {expected}")]
    TableMismatch { expected: usize, found: usize },
    #[error("A'_{k} = {value} is negative")]
    NegativeDual { k: usize, value: String },
    #[error("the code is not additive")]
    NotAdditive,
    #[error("dual code would have {size} elements, above the cap {cap}")]
    DualTooLarge { size: u128, cap: u64 },
    #[error("invalid parameters n = {n}, d = {d}")]
    InvalidParameters { n: u32, d: u32 },
    #[error("closed-form distribution has negative entry A_{index} = {value}")]
    NegativeEntry { index: usize, value: String },
    #[error("closed-form distribution sums to {sum}, expected {size}")]
    SumMismatch { sum: String, size: String },
    #[error(transparent)]
    Hermitian(#[from] HermitianError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

/// Number of random pairs tried before the exact additivity test.
pub const ADDITIVITY_PROBE: usize = 64;

/// A finite set of matrices in X(n,q), sorted and without duplicates.
#[derive(Debug, Clone)]
pub struct CodeSet {
    tower: Arc<FieldTower>,
    n: usize,
    matrices: Vec<HermitianMatrix>,
    additive: OnceLock<bool>,
}

impl PartialEq for CodeSet {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.tower.same_quad_field(&other.tower) && self.matrices == other.matrices
    }
}

impl CodeSet {
    pub fn new(tower: Arc<FieldTower>, n: usize, mut matrices: Vec<HermitianMatrix>) -> Result<Self, DistError> {
        if let Some((index, m)) = matrices.iter().enumerate().find(|(_, m)| m.dim() != n) {
            return Err(DistError::DimensionMismatch { index, expected: n, found: m.dim() });
        }
        matrices.par_sort_unstable();
        matrices.dedup();
        Ok(CodeSet { tower, n, matrices, additive: OnceLock::new() })
    }

    /// For sets already known to be additive, e.g. the output of an F_p-span.
    pub(crate) fn new_additive(tower: Arc<FieldTower>, n: usize, matrices: Vec<HermitianMatrix>) -> Self {
        let code = Self::new(tower, n, matrices).expect("matrices of one dimension");
        let _ = code.additive.set(true);
        code
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn tower_arc(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    pub fn matrices(&self) -> &[HermitianMatrix] {
        &self.matrices
    }

    pub fn contains(&self, m: &HermitianMatrix) -> bool {
        self.matrices.binary_search(m).is_ok()
    }

    /// Closed under subtraction. A cheap random probe first, then the exact
    /// test: Y is a subgroup iff 0 ∈ Y and |Y| = p^r, r the F_p-rank of Y.
    pub fn is_additive(&self) -> bool {
        *self.additive.get_or_init(|| self.compute_additive())
    }

    fn compute_additive(&self) -> bool {
        let t = &*self.tower;
        let len = self.matrices.len();
        if len == 0 || !self.contains(&HermitianMatrix::zero(self.n)) {
            return false;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..ADDITIVITY_PROBE {
            let a = &self.matrices[rng.gen_range(0..len)];
            let b = &self.matrices[rng.gen_range(0..len)];
            if !self.contains(&a.sub(b, t).expect("same dimension")) {
                return false;
            }
        }
        let r = self.fp_basis().len() as u32;
        (t.p() as u128).checked_pow(r) == Some(len as u128)
    }

    /// F_p-coordinate vectors of a maximal independent subset of Y.
    pub fn fp_basis(&self) -> Vec<Vec<u32>> {
        let t = &*self.tower;
        let width = self.n * self.n * t.m() as usize;
        let mut echelon = EchelonBasis::new(t.p(), width);
        let mut out = Vec::new();
        for m in &self.matrices {
            if echelon.rank() == width {
                break;
            }
            let v = m.fp_coordinates(t);
            if echelon.insert(&v) {
                out.push(v);
            }
        }
        out
    }

    /// Histogram of ranks over the elements of Y.
    pub fn rank_census(&self) -> Vec<u64> {
        let t = &*self.tower;
        self.matrices
            .par_iter()
            .fold(
                || vec![0u64; self.n + 1],
                |mut acc, m| {
                    acc[m.rank(t)] += 1;
                    acc
                },
            )
            .reduce(|| vec![0u64; self.n + 1], add_counts)
    }

    /// Histogram of rank(A − B) over all ordered pairs (A, B).
    pub fn pair_rank_census(&self) -> Vec<u64> {
        let t = &*self.tower;
        self.matrices
            .par_iter()
            .enumerate()
            .fold(
                || vec![0u64; self.n + 1],
                |mut acc, (i, a)| {
                    acc[0] += 1;
                    for b in &self.matrices[i + 1..] {
                        // rank(A−B) = rank(B−A), so count each unordered pair twice
                        acc[a.sub(b, t).expect("same dimension").rank(t)] += 2;
                    }
                    acc
                },
            )
            .reduce(|| vec![0u64; self.n + 1], add_counts)
    }
}

fn add_counts(mut a: Vec<u64>, b: Vec<u64>) -> Vec<u64> {
    for (x, y) in a.iter_mut().zip(b) {
        *x += y;
    }
    a
}

fn fmt_rationals(values: &[BigRational], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let cells: Vec<String> = values.iter().map(|v| v.to_string()).collect();
    write!(f, "({})", cells.join(", "))
}

/// (A_0, …, A_n) with A_i the average number of elements of Y at rank
/// distance i from a fixed element of Y.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InnerDistribution(Vec<BigRational>);

impl InnerDistribution {
    pub fn new(values: Vec<BigRational>) -> Self {
        InnerDistribution(values)
    }

    pub fn from_integers<I: Into<BigInt>>(values: impl IntoIterator<Item = I>) -> Self {
        InnerDistribution(values.into_iter().map(|v| BigRational::from_integer(v.into())).collect())
    }

    /// From a histogram of ordered-pair ranks and the code size.
    pub fn from_pair_counts(counts: &[u64], size: usize) -> Self {
        let size = BigInt::from(size);
        InnerDistribution(counts.iter().map(|&c| BigRational::new(c.into(), size.clone())).collect())
    }

    pub fn n(&self) -> usize {
        self.0.len() - 1
    }

    pub fn values(&self) -> &[BigRational] {
        &self.0
    }

    pub fn get(&self, i: usize) -> &BigRational {
        &self.0[i]
    }

    /// Σ A_i, which equals |Y|.
    pub fn total(&self) -> BigRational {
        self.0.iter().sum()
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().all(|v| v.is_integer())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(|v| v.to_string()).collect()
    }
}

impl fmt::Display for InnerDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_rationals(&self.0, f)
    }
}

/// (A′_0, …, A′_n) with A′_k = Σ_i Q_k(i) A_i.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualDistribution(Vec<BigRational>);

impl DualDistribution {
    pub fn values(&self) -> &[BigRational] {
        &self.0
    }

    pub fn get(&self, k: usize) -> &BigRational {
        &self.0[k]
    }

    pub fn n(&self) -> usize {
        self.0.len() - 1
    }

    /// (1/s)·A′, the inner distribution of Y⊥ when Y is additive of size s.
    pub fn scaled(&self, s: &BigInt) -> InnerDistribution {
        let s = BigRational::from_integer(s.clone());
        InnerDistribution(self.0.iter().map(|v| v / &s).collect())
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(|v| v.to_string()).collect()
    }
}

impl fmt::Display for DualDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_rationals(&self.0, f)
    }
}

/// Inner distribution of Y. Additive codes use the rank census of their
/// elements; other codes go through all ordered pairs.
pub fn inner_distribution(y: &CodeSet) -> Result<InnerDistribution, DistError> {
    if y.is_empty() {
        return Err(DistError::EmptyCode);
    }
    if y.is_additive() {
        Ok(InnerDistribution::from_integers(y.rank_census()))
    } else {
        inner_distribution_pairwise(y)
    }
}

/// Inner distribution from all |Y|² ordered pairs, whatever the structure of Y.
pub fn inner_distribution_pairwise(y: &CodeSet) -> Result<InnerDistribution, DistError> {
    if y.is_empty() {
        return Err(DistError::EmptyCode);
    }
    Ok(InnerDistribution::from_pair_counts(&y.pair_rank_census(), y.len()))
}

/// A′_k = Σ_i Q_k(i) A_i. A negative entry is reported as an error since
/// nonnegativity is a theorem.
pub fn dual_distribution(d: &InnerDistribution, table: &QTable) -> Result<DualDistribution, DistError> {
    let size = table.n() as usize + 1;
    if d.0.len() != size {
        return Err(DistError::TableMismatch { expected: size, found: d.0.len() });
    }
    let mut out = Vec::with_capacity(size);
    for k in 0..size {
        let v: BigRational = (0..size).map(|i| BigRational::from_integer(table.get(k, i).clone()) * d.get(i)).sum();
        if v.is_negative() {
            return Err(DistError::NegativeDual { k, value: v.to_string() });
        }
        out.push(v);
    }
    Ok(DualDistribution(out))
}

/// Largest d with A_1 = … = A_{d−1} = 0. A singleton gets n + 1.
pub fn min_distance(d: &InnerDistribution) -> usize {
    let n = d.n();
    (1..=n).find(|&i| !d.get(i).is_zero()).unwrap_or(n + 1)
}

/// Largest t with A′_1 = … = A′_t = 0.
pub fn design_strength(d: &DualDistribution) -> usize {
    let n = d.n();
    (1..=n).find(|&k| !d.get(k).is_zero()).map_or(n, |k| k - 1)
}

/// Default cap on the size of a computed dual code.
pub const DEFAULT_DUAL_CAP: u64 = 1 << 22;

/// Y⊥ = {B : ⟨A,B⟩ = 1 for all A ∈ Y} for additive Y, solved as the kernel
/// of an F_p-linear system on the coordinates of B.
pub fn dual_code(y: &CodeSet, cap: u64) -> Result<CodeSet, DistError> {
    if y.is_empty() {
        return Err(DistError::EmptyCode);
    }
    if !y.is_additive() {
        return Err(DistError::NotAdditive);
    }
    let t = y.tower();
    let n = y.n();
    let width = n * n * t.m() as usize;
    let units: Vec<HermitianMatrix> = (0..width)
        .map(|j| {
            let mut e = vec![0u32; width];
            e[j] = 1;
            HermitianMatrix::from_fp_coordinates(n, &e, t)
        })
        .collect();
    let mut rows = Vec::new();
    for b in y.fp_basis() {
        let a = HermitianMatrix::from_fp_coordinates(n, &b, t);
        let row = units.iter().map(|e| pairing(&a, e, t)).collect::<Result<Vec<u32>, _>>()?;
        rows.push(row);
    }
    let kernel = fp_linalg::kernel(t.p(), &rows, width);
    let size = (t.p() as u128).checked_pow(kernel.len() as u32).unwrap_or(u128::MAX);
    if size > cap as u128 {
        return Err(DistError::DualTooLarge { size, cap });
    }
    let matrices = if kernel.is_empty() {
        vec![HermitianMatrix::zero(n)]
    } else {
        span_fp(t.p(), &kernel).iter().map(|v| HermitianMatrix::from_fp_coordinates(n, v, t)).collect()
    };
    Ok(CodeSet::new_additive(y.tower_arc().clone(), n, matrices))
}

/// Closed-form inner distribution of a d-code of the given size that is also
/// an (n−d)-design:
/// A_{n−i} = Σ_{j=i}^{n−d} (−1)^{j−i} (−q)^{C(j−i,2)} [j,i][n,j] (|Y| (−1)^{(n+1)j} / q^{nj} − 1).
pub fn thm33_distribution(n: u32, d: u32, q: u64, size: &BigInt) -> Result<InnerDistribution, DistError> {
    if d == 0 || d > n {
        return Err(DistError::InvalidParameters { n, d });
    }
    if q < 2 {
        return Err(EigenError::InvalidQ(q).into());
    }
    let mut binom = NegQBinom::new();
    let mut values = vec![BigRational::zero(); n as usize + 1];
    values[0] = BigRational::one();
    let y = BigRational::from_integer(size.clone());
    for i in 0..n {
        let mut acc = BigRational::zero();
        for j in i..=n - d {
            let coeff = neg_q_pow(q, (j - i) * (j - i).saturating_sub(1) / 2) * binom.get(j, i, q) * binom.get(n, j, q);
            let mut inner = &y / BigRational::from_integer(num_traits::pow(BigInt::from(q), (n * j) as usize));
            if ((n + 1) * j) % 2 == 1 {
                inner = -inner;
            }
            let term = BigRational::from_integer(coeff) * (inner - BigRational::one());
            if (j - i) % 2 == 1 {
                acc -= term;
            } else {
                acc += term;
            }
        }
        values[(n - i) as usize] = acc;
    }
    if let Some((index, v)) = values.iter().enumerate().find(|(_, v)| v.is_negative()) {
        return Err(DistError::NegativeEntry { index, value: v.to_string() });
    }
    let dist = InnerDistribution(values);
    let sum = dist.total();
    if sum != y {
        return Err(DistError::SumMismatch { sum: sum.to_string(), size: size.to_string() });
    }
    Ok(dist)
}
