//! Eigenvalues Q_k(i) of the Hermitian matrix scheme in exact arithmetic.
//!
//! Three independent routes produce the same table: the closed form in
//! negative q-binomial coefficients, the two-parameter recurrence in n, and
//! brute-force character sums over X(n,q).

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::field::{tower_for_q, FieldError};
use crate::hermitian::{pairing, CyclotomicInteger, HermitianError, HermitianMatrix, HermitianSpace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EigenError {
    #[error("rank {k} out of range for n = {n}")]
    RankOutOfRange { n: u32, k: u32 },
    #[error("q must be at least 2, got {0}")]
    InvalidQ(u64),
    #[error("n must be at least 1")]
    ZeroDimension,
    #[error("character sum for Q_{k}({i}) is not a rational integer: {value}")]
    NonIntegral { k: usize, i: usize, value: String },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Hermitian(#[from] HermitianError),
}

/// (−q)^e for e >= 0.
pub fn neg_q_pow(q: u64, e: u32) -> BigInt {
    let base = -BigInt::from(q);
    num_traits::pow(base, e as usize)
}

fn choose2(k: u32) -> u32 {
    k * k.saturating_sub(1) / 2
}

/// The negative q-binomial coefficient
/// [m, ℓ] = Π_{i=1}^{ℓ} ((−q)^{m−i+1} − 1)/((−q)^i − 1).
pub fn neg_q_binomial(m: u32, l: u32, q: u64) -> BigInt {
    if l > m {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 1..=l {
        num *= neg_q_pow(q, m - i + 1) - 1;
        den *= neg_q_pow(q, i) - 1;
    }
    let (quot, rem) = num.div_rem(&den);
    assert!(rem.is_zero(), "negative q-binomial [{m},{l}] at q = {q} is not integral");
    quot
}

/// Memoizing wrapper around [`neg_q_binomial`].
#[derive(Debug, Clone, Default)]
pub struct NegQBinom {
    cache: HashMap<(u32, u32, u64), BigInt>,
}

impl NegQBinom {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, m: u32, l: u32, q: u64) -> BigInt {
        if l > m {
            return BigInt::zero();
        }
        self.cache.entry((m, l, q)).or_insert_with(|| neg_q_binomial(m, l, q)).clone()
    }

    /// Seeds the cache, e.g. from a table stored on disk.
    pub fn insert(&mut self, m: u32, l: u32, q: u64, value: BigInt) {
        self.cache.insert((m, l, q), value);
    }

    /// All cached entries ((m, ℓ, q), value), sorted.
    pub fn entries(&self) -> Vec<((u32, u32, u64), BigInt)> {
        let mut out: Vec<_> = self.cache.iter().map(|(k, v)| (*k, v.clone())).collect();
        out.sort();
        out
    }

    pub fn len(&self) -> usize {
        self.cache.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cache.is_empty()
    }
}

/// |X_k| = (−1)^k [n, k] Π_{j<k} ((−q)^n + (−q)^j), the number of rank-k
/// matrices in X(n,q).
pub fn count_rank(n: u32, q: u64, k: u32) -> Result<BigInt, EigenError> {
    if k > n {
        return Err(EigenError::RankOutOfRange { n, k });
    }
    let mut prod = neg_q_binomial(n, k, q);
    for j in 0..k {
        prod *= neg_q_pow(q, n) + neg_q_pow(q, j);
    }
    if k % 2 == 1 {
        prod = -prod;
    }
    Ok(prod)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EigenMethod {
    Explicit,
    Recurrence,
    Direct,
}

impl fmt::Display for EigenMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EigenMethod::Explicit => "explicit",
            EigenMethod::Recurrence => "recurrence",
            EigenMethod::Direct => "direct",
        };
        f.write_str(s)
    }
}

/// The (n+1)×(n+1) eigenvalue table, indexed `[k][i]`.
#[derive(Debug, Clone)]
pub struct QTable {
    n: u32,
    q: u64,
    method: EigenMethod,
    table: Vec<Vec<BigInt>>,
}

impl PartialEq for QTable {
    /// Tables compare by value, ignoring how they were computed.
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.q == other.q && self.table == other.table
    }
}

impl QTable {
    pub fn from_rows(n: u32, q: u64, method: EigenMethod, table: Vec<Vec<BigInt>>) -> Self {
        assert_eq!(table.len(), n as usize + 1);
        assert!(table.iter().all(|r| r.len() == n as usize + 1));
        QTable { n, q, method, table }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn method(&self) -> EigenMethod {
        self.method
    }

    /// Q_k(i)
    pub fn get(&self, k: usize, i: usize) -> &BigInt {
        &self.table[k][i]
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.table
    }

    pub fn set(&mut self, k: usize, i: usize, v: BigInt) {
        self.table[k][i] = v;
    }

    /// Σ_k Q_k(i) = q^{n²}·[i = 0].
    pub fn column_sums_ok(&self) -> bool {
        let total = num_traits::pow(BigInt::from(self.q), (self.n * self.n) as usize);
        (0..=self.n as usize).all(|i| {
            let s: BigInt = self.table.iter().map(|row| &row[i]).sum();
            if i == 0 {
                s == total
            } else {
                s.is_zero()
            }
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("k");
        for i in 0..=self.n {
            out.push_str(&format!(",i={i}"));
        }
        out.push('\n');
        for (k, row) in self.table.iter().enumerate() {
            out.push_str(&k.to_string());
            for v in row {
                out.push(',');
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<Vec<String>> = self.table.iter().map(|r| r.iter().map(|v| v.to_string()).collect()).collect();
        serde_json::json!({
            "n": self.n,
            "q": self.q,
            "method": self.method,
            "table": rows,
        })
    }
}

fn check_params(n: u32, q: u64) -> Result<(), EigenError> {
    if q < 2 {
        return Err(EigenError::InvalidQ(q));
    }
    if n == 0 {
        return Err(EigenError::ZeroDimension);
    }
    Ok(())
}

/// Q_k(i) = (−1)^k Σ_{j≤k} [n−j, n−k][n−i, j] (−q)^{C(k−j,2)+nj}.
pub fn q_explicit(n: u32, q: u64) -> Result<QTable, EigenError> {
    q_explicit_with(n, q, &mut NegQBinom::new())
}

/// [`q_explicit`] drawing binomials from (and adding them to) `binom`.
pub fn q_explicit_with(n: u32, q: u64, binom: &mut NegQBinom) -> Result<QTable, EigenError> {
    check_params(n, q)?;
    let mut table = vec![vec![BigInt::zero(); n as usize + 1]; n as usize + 1];
    for k in 0..=n {
        for i in 0..=n {
            let mut sum = BigInt::zero();
            for j in 0..=k {
                let a = binom.get(n - j, n - k, q);
                let b = binom.get(n - i, j, q);
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                sum += a * b * neg_q_pow(q, choose2(k - j) + n * j);
            }
            table[k as usize][i as usize] = if k % 2 == 1 { -sum } else { sum };
        }
    }
    Ok(QTable { n, q, method: EigenMethod::Explicit, table })
}

/// Tables for every n' <= n from Q_0(i) = 1, Q_k(0) = |X_k| and
/// Q^{(n)}_k(i) = Q^{(n)}_k(i−1) + (−q)^{2n−i} Q^{(n−1)}_{k−1}(i−1).
pub fn q_recurrence(n: u32, q: u64) -> Result<QTable, EigenError> {
    check_params(n, q)?;
    // X(0, q) is the single empty matrix
    let mut prev = vec![vec![BigInt::one()]];
    for dim in 1..=n {
        let size = dim as usize + 1;
        let mut cur = vec![vec![BigInt::zero(); size]; size];
        for i in 0..size {
            cur[0][i] = BigInt::one();
        }
        for k in 1..size {
            cur[k][0] = count_rank(dim, q, k as u32)?;
        }
        for i in 1..size {
            for k in 1..size {
                let step = neg_q_pow(q, 2 * dim - i as u32) * &prev[k - 1][i - 1];
                cur[k][i] = &cur[k][i - 1] + step;
            }
        }
        prev = cur;
    }
    Ok(QTable { n, q, method: EigenMethod::Recurrence, table: prev })
}

/// Exact character sums S[k][r] = Σ_{A ∈ X_k} ⟨A, B_r⟩ for the given
/// representatives B_r.
pub fn direct_sums(
    n: u32,
    q: u64,
    representatives: &[HermitianMatrix],
    cap: u64,
) -> Result<Vec<Vec<CyclotomicInteger>>, EigenError> {
    check_params(n, q)?;
    let tower = tower_for_q(q, 1)?;
    let space = HermitianSpace::new(&tower, n as usize, cap)?;
    let p = tower.p() as usize;
    let size = n as usize + 1;
    let mut counts = vec![vec![vec![0u64; p]; representatives.len()]; size];
    for a in space.iter() {
        let k = a.rank(&tower);
        for (r, b) in representatives.iter().enumerate() {
            counts[k][r][pairing(&a, b, &tower)? as usize] += 1;
        }
    }
    Ok(counts
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|c| CyclotomicInteger::from_counts(c.into_iter().map(BigInt::from).collect()))
                .collect()
        })
        .collect())
}

/// Brute-force eigenvalues: character sums over each rank class against the
/// diagonal representative diag(1, …, 1, 0, …, 0) of rank i.
pub fn q_direct(n: u32, q: u64, cap: u64) -> Result<QTable, EigenError> {
    let reps: Vec<HermitianMatrix> =
        (0..=n as usize).map(|i| HermitianMatrix::diagonal_representative(n as usize, i)).collect();
    let sums = direct_sums(n, q, &reps, cap)?;
    let mut table = Vec::with_capacity(sums.len());
    for (k, row) in sums.into_iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (i, s) in row.into_iter().enumerate() {
            let v = s.to_integer().ok_or_else(|| EigenError::NonIntegral { k, i, value: s.to_string() })?;
            out.push(v);
        }
        table.push(out);
    }
    Ok(QTable { n, q, method: EigenMethod::Direct, table })
}

/// The identities checked by [`verify_identities`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Identity {
    /// Σ_{k≤j} [n−k, n−j] Q_k(i) = (−1)^{(n+1)j} q^{nj} [n−i, j]
    Inversion,
    /// Σ_{j=i}^{k} (−1)^{j−i} (−q)^{C(j−i,2)} [j, i][k, j] = δ_{k,i}
    KroneckerDelta,
    /// Σ_j (−q)^{C(h−j,2)} [h, j] x^j y^{h−j} = Π_{j<h} (x + (−q)^j y)
    QBinomialTheorem,
    /// [n−i+1, j] − (−q)^{n−i−j+1} [n−i, j−1] = [n−i, j]
    Pascal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityFailure {
    pub identity: Identity,
    /// Index names depend on the identity: (i, j), (k, i), (h, x, y) or (i, j).
    pub indices: Vec<i64>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub n: u32,
    pub q: u64,
    pub checks: usize,
    pub failure: Option<IdentityFailure>,
}

impl IdentityReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Runs the four identity families against `table`; stops at the first
/// failure. Only the inversion system involves the table itself.
pub fn verify_identities(table: &QTable) -> IdentityReport {
    let (n, q) = (table.n, table.q);
    let mut binom = NegQBinom::new();
    let mut checks = 0;
    let fail = |identity, indices: Vec<i64>, lhs: BigInt, rhs: BigInt| IdentityFailure {
        identity,
        indices,
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
    };
    let report = |checks, failure| IdentityReport { n, q, checks, failure };

    // (a) inversion system, column by column
    for i in 0..=n {
        for j in 0..=n {
            let lhs: BigInt = (0..=j).map(|k| binom.get(n - k, n - j, q) * table.get(k as usize, i as usize)).sum();
            let sign = if ((n + 1) * j) % 2 == 1 { -BigInt::one() } else { BigInt::one() };
            let rhs = sign * num_traits::pow(BigInt::from(q), (n * j) as usize) * binom.get(n - i, j, q);
            checks += 1;
            if lhs != rhs {
                return report(checks, Some(fail(Identity::Inversion, vec![i as i64, j as i64], lhs, rhs)));
            }
        }
    }

    // (b) Kronecker delta inversion
    for k in 0..=n {
        for i in 0..=k {
            let mut lhs = BigInt::zero();
            for j in i..=k {
                let term = neg_q_pow(q, choose2(j - i)) * binom.get(j, i, q) * binom.get(k, j, q);
                if (j - i) % 2 == 1 {
                    lhs -= term;
                } else {
                    lhs += term;
                }
            }
            let rhs = if k == i { BigInt::one() } else { BigInt::zero() };
            checks += 1;
            if lhs != rhs {
                return report(checks, Some(fail(Identity::KroneckerDelta, vec![k as i64, i as i64], lhs, rhs)));
            }
        }
    }

    // (c) q-binomial theorem at integer points
    for h in 0..=n {
        for x in -3i64..=3 {
            for y in -3i64..=3 {
                let (bx, by) = (BigInt::from(x), BigInt::from(y));
                let lhs: BigInt = (0..=h)
                    .map(|j| {
                        neg_q_pow(q, choose2(h - j))
                            * binom.get(h, j, q)
                            * num_traits::pow(bx.clone(), j as usize)
                            * num_traits::pow(by.clone(), (h - j) as usize)
                    })
                    .sum();
                let rhs: BigInt = (0..h).map(|j| &bx + neg_q_pow(q, j) * &by).product();
                checks += 1;
                if lhs != rhs {
                    return report(checks, Some(fail(Identity::QBinomialTheorem, vec![h as i64, x, y], lhs, rhs)));
                }
            }
        }
    }

    // (d) Pascal identity
    for i in 0..=n {
        let m = n - i;
        for j in 1..=m + 1 {
            let lhs = binom.get(m + 1, j, q) - neg_q_pow(q, m + 1 - j) * binom.get(m, j - 1, q);
            let rhs = binom.get(m, j, q);
            checks += 1;
            if lhs != rhs {
                return report(checks, Some(fail(Identity::Pascal, vec![i as i64, j as i64], lhs, rhs)));
            }
        }
    }
    report(checks, None)
}

/// Identity suite against the closed-form table.
pub fn verify_identities_for(n: u32, q: u64) -> Result<IdentityReport, EigenError> {
    Ok(verify_identities(&q_explicit(n, q)?))
}

/// Sign of a nonzero negative q-binomial, (−1)^{ℓ(m−ℓ)}.
pub fn neg_q_binomial_sign(m: u32, l: u32) -> i32 {
    if (l * (m - l)) % 2 == 1 {
        -1
    } else {
        1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    /// Independent oracle: Pascal recursion [m+1, j] = [m, j] + (−q)^{m+1−j}[m, j−1].
    fn pascal_oracle(m: u32, l: u32, q: u64) -> BigInt {
        let mut rows: Vec<Vec<BigInt>> = vec![vec![BigInt::one()]];
        for mm in 1..=m {
            let prev = &rows[mm as usize - 1];
            let row: Vec<BigInt> = (0..=mm)
                .map(|j| {
                    let keep = prev.get(j as usize).cloned().unwrap_or_default();
                    if j == 0 {
                        keep
                    } else {
                        keep + neg_q_pow(q, mm - j) * &prev[j as usize - 1]
                    }
                })
                .collect();
            rows.push(row);
        }
        rows[m as usize].get(l as usize).cloned().unwrap_or_default()
    }

    #[test]
    fn neg_q_binomial_examples() {
        for m in 0..6 {
            assert_eq!(neg_q_binomial(m, 0, 3), BigInt::one());
        }
        assert_eq!(neg_q_binomial(1, 2, 2), BigInt::zero());
        assert_eq!(neg_q_binomial(0, 3, 5), BigInt::zero());
        assert_eq!(pascal_oracle(2, 1, 2), BigInt::from(-1));
        assert_eq!(neg_q_binomial(2, 1, 2), BigInt::from(-1));
    }

    #[test]
    fn neg_q_binomial_matches_pascal_oracle_and_sign_law() {
        for q in [2u64, 3, 4, 5, 7] {
            for m in 0..=9 {
                for l in 0..=m {
                    let v = neg_q_binomial(m, l, q);
                    assert_eq!(v, pascal_oracle(m, l, q), "[{m},{l}] q={q}");
                    assert!(!v.is_zero());
                    let sign = if v.is_negative() { -1 } else { 1 };
                    assert_eq!(sign, neg_q_binomial_sign(m, l));
                }
            }
        }
    }

    #[test]
    fn binomial_not_divisible_by_characteristic() {
        for (q, p) in [(2u64, 2u64), (3, 3), (4, 2), (5, 5)] {
            for n in 1..=8 {
                for d in 1..=n {
                    let v = neg_q_binomial(n, d - 1, q);
                    assert!(!(v % BigInt::from(p)).is_zero(), "[{n},{}] q={q}", d - 1);
                }
            }
        }
    }

    #[test]
    fn memo_cache_agrees() {
        let mut c = NegQBinom::new();
        assert_eq!(c.get(5, 2, 3), neg_q_binomial(5, 2, 3));
        assert_eq!(c.get(5, 2, 3), neg_q_binomial(5, 2, 3));
        assert_eq!(c.len(), 1);
        assert_eq!(c.get(2, 5, 3), BigInt::zero());
    }

    #[test]
    fn count_rank_values() {
        assert_eq!(count_rank(2, 2, 0).unwrap(), BigInt::one());
        assert_eq!(count_rank(2, 2, 1).unwrap(), BigInt::from(5));
        assert_eq!(count_rank(2, 2, 2).unwrap(), BigInt::from(10));
        assert_eq!(count_rank(3, 2, 3).unwrap(), BigInt::from(280));
        assert!(count_rank(2, 2, 3).is_err());
        for q in [2u64, 3, 4, 5] {
            for n in 1..=6 {
                let total: BigInt = (0..=n).map(|k| count_rank(n, q, k).unwrap()).sum();
                assert_eq!(total, num_traits::pow(BigInt::from(q), (n * n) as usize));
                assert!((0..=n).all(|k| count_rank(n, q, k).unwrap() > BigInt::zero()));
            }
        }
    }

    #[test]
    fn explicit_table_small_values() {
        let t = q_explicit(2, 2).unwrap();
        let v = |k, i| t.get(k, i).clone();
        assert_eq!(v(1, 1), BigInt::from(-3));
        assert_eq!(v(2, 1), BigInt::from(2));
        assert_eq!(v(1, 2), BigInt::from(1));
        assert_eq!(v(2, 2), BigInt::from(-2));
        for n in 1..=5 {
            for q in [2u64, 3] {
                let t = q_explicit(n, q).unwrap();
                for i in 0..=n as usize {
                    assert_eq!(t.get(0, i), &BigInt::one());
                }
                for k in 0..=n {
                    assert_eq!(t.get(k as usize, 0), &count_rank(n, q, k).unwrap());
                }
                assert!(t.column_sums_ok());
            }
        }
    }

    #[test]
    fn recurrence_matches_explicit() {
        for q in [2u64, 3, 5, 7] {
            assert_eq!(q_recurrence(1, q).unwrap().get(1, 1), &BigInt::from(-1));
            for n in 1..=6 {
                assert_eq!(q_recurrence(n, q).unwrap(), q_explicit(n, q).unwrap());
            }
        }
    }

    #[test]
    fn direct_tables() {
        let t = q_direct(1, 2, 1 << 20).unwrap();
        let expect = vec![vec![BigInt::one(), BigInt::one()], vec![BigInt::one(), BigInt::from(-1)]];
        assert_eq!(t.rows(), expect.as_slice());
        for (n, q) in [(1, 3), (2, 2), (2, 3)] {
            assert_eq!(q_direct(n, q, 1 << 20).unwrap(), q_explicit(n, q).unwrap());
        }
        assert!(matches!(q_direct(3, 5, 1 << 20), Err(EigenError::Hermitian(_))));
        assert!(matches!(q_direct(1, 6, 1 << 20), Err(EigenError::Field(_))));
    }

    #[test]
    fn direct_sums_are_integral_before_extraction() {
        let reps: Vec<HermitianMatrix> = (0..=2).map(|i| HermitianMatrix::diagonal_representative(2, i)).collect();
        for s in direct_sums(2, 3, &reps, 1 << 20).unwrap().iter().flatten() {
            assert!(s.is_rational_integer());
        }
    }

    #[test]
    fn direct_sums_independent_of_representative() {
        use crate::field::{tower_for_q, Gf};
        use crate::hermitian::Matrix;
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for q in [2u64, 3] {
            let tower = tower_for_q(q, 1).unwrap();
            let explicit = q_explicit(2, q).unwrap();
            for _ in 0..4 {
                let p = loop {
                    let m = Matrix::from_fn(2, 2, |_, _| Gf(rng.gen_range(0..tower.quad_size())));
                    if m.rank(&tower) == 2 {
                        break m;
                    }
                };
                let reps: Vec<HermitianMatrix> = (0..=2)
                    .map(|i| HermitianMatrix::diagonal_representative(2, i).congruence(&p, &tower).unwrap())
                    .collect();
                let sums = direct_sums(2, q, &reps, 1 << 20).unwrap();
                for k in 0..=2 {
                    for i in 0..=2 {
                        assert_eq!(sums[k][i].to_integer().as_ref(), Some(explicit.get(k, i)));
                    }
                }
            }
        }
    }

    #[test]
    fn identity_suite_passes() {
        for (n, q) in [(1, 2), (6, 4), (3, 3), (5, 5)] {
            let r = verify_identities_for(n, q).unwrap();
            assert!(r.passed(), "{r:?}");
            assert!(r.checks > 0);
        }
    }

    #[test]
    fn tampered_table_fails_inversion_at_that_column() {
        let mut t = q_explicit(3, 2).unwrap();
        let bumped = t.get(2, 1) + 1;
        t.set(2, 1, bumped);
        let r = verify_identities(&t);
        let f = r.failure.expect("tampering must be detected");
        assert_eq!(f.identity, Identity::Inversion);
        assert_eq!(f.indices[0], 1);
        assert!(!t.column_sums_ok());
    }

    #[test]
    fn invalid_parameters() {
        assert_eq!(q_explicit(2, 1).unwrap_err(), EigenError::InvalidQ(1));
        assert_eq!(q_recurrence(0, 2).unwrap_err(), EigenError::ZeroDimension);
    }

    #[test]
    fn csv_and_json_shapes() {
        let t = q_explicit(1, 2).unwrap();
        assert_eq!(t.to_csv(), "k,i=0,i=1\n0,1,1\n1,1,-1\n");
        assert_eq!(t.to_json()["table"][1][1], "-1");
    }
}
