//! Matrices over F_{q²}, Hermitian matrices and forms, and the character
//! pairing ⟨A,B⟩ = χ(tr(A*B)) with χ(x) = ζ_p^{Tr_{F_q/F_p}(x)}.

mod cyclotomic;
mod form;

pub use cyclotomic::CyclotomicInteger;
pub use form::{FormTerm, HermitianForm};

use std::fmt;

use thiserror::Error;

use crate::field::{to_digits, FieldTower, Gf};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HermitianError {
    #[error("dimension mismatch: {0}×{1} vs {2}×{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("matrix is not square ({0}×{1})")]
    NotSquare(usize, usize),
    #[error("matrix is not Hermitian at ({0}, {1})")]
    NotHermitian(usize, usize),
    #[error("form evaluation produced a non-Hermitian Gram matrix at ({0}, {1})")]
    FormNotHermitian(usize, usize),
    #[error("enumeration of X({n},{q}) needs {size} matrices, above the cap {cap}")]
    EnumerationCap { n: usize, q: u32, size: u128, cap: u64 },
}

/// Dense matrix over F_{q²}, row-major.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Gf>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Gf::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Gf::ONE;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Gf>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Gf) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Gf {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Gf) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Gf] {
        &self.data
    }

    pub fn row_vecs(&self) -> Vec<Vec<Gf>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(|r| r.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<(), HermitianError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(HermitianError::DimensionMismatch(self.rows, self.cols, other.rows, other.cols));
        }
        Ok(())
    }

    pub fn add(&self, other: &Matrix, t: &FieldTower) -> Result<Matrix, HermitianError> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| t.add(a, b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn sub(&self, other: &Matrix, t: &FieldTower) -> Result<Matrix, HermitianError> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| t.sub(a, b)).collect();
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn neg(&self, t: &FieldTower) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| t.neg(a)).collect() }
    }

    pub fn mul(&self, other: &Matrix, t: &FieldTower) -> Result<Matrix, HermitianError> {
        if self.cols != other.rows {
            return Err(HermitianError::DimensionMismatch(self.rows, self.cols, other.rows, other.cols));
        }
        Ok(Matrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).fold(Gf::ZERO, |acc, k| t.add(acc, t.mul(self.get(i, k), other.get(k, j))))
        }))
    }

    /// A* : entrywise conjugation followed by transposition.
    pub fn conj_transpose(&self, t: &FieldTower) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| t.conj(self.get(j, i)))
    }

    pub fn is_hermitian(&self, t: &FieldTower) -> bool {
        self.hermitian_violation(t).is_none()
    }

    fn hermitian_violation(&self, t: &FieldTower) -> Option<(usize, usize)> {
        if !self.is_square() {
            return Some((self.rows, self.cols));
        }
        for i in 0..self.rows {
            for j in i..self.cols {
                if self.get(j, i) != t.conj(self.get(i, j)) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Rank over F_{q²} by Gaussian elimination, pivoting on the first
    /// nonzero entry of each column.
    pub fn rank(&self, t: &FieldTower) -> usize {
        let (rows, cols) = (self.rows, self.cols);
        let mut a = self.data.clone();
        let mut rank = 0;
        for col in 0..cols {
            let Some(pivot) = (rank..rows).find(|&r| !a[r * cols + col].is_zero()) else {
                continue;
            };
            if pivot != rank {
                for j in col..cols {
                    a.swap(pivot * cols + j, rank * cols + j);
                }
            }
            let inv = t.inv(a[rank * cols + col]).expect("pivot is nonzero");
            for r in rank + 1..rows {
                let lead = a[r * cols + col];
                if lead.is_zero() {
                    continue;
                }
                let factor = t.mul(lead, inv);
                for j in col..cols {
                    let v = t.mul(factor, a[rank * cols + j]);
                    a[r * cols + j] = t.sub(a[r * cols + j], v);
                }
            }
            rank += 1;
            if rank == rows {
                break;
            }
        }
        rank
    }

    /// Block matrix [[a, b], [c, d]].
    pub fn block(a: &Matrix, b: &Matrix, c: &Matrix, d: &Matrix) -> Matrix {
        assert!(a.rows == b.rows && c.rows == d.rows && a.cols == c.cols && b.cols == d.cols);
        Matrix::from_fn(a.rows + c.rows, a.cols + b.cols, |i, j| match (i < a.rows, j < a.cols) {
            (true, true) => a.get(i, j),
            (true, false) => b.get(i, j - a.cols),
            (false, true) => c.get(i - a.rows, j),
            (false, false) => d.get(i - a.rows, j - a.cols),
        })
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.row_vecs() {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

/// A square matrix with A* = A; element of X(n,q).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HermitianMatrix(Matrix);

impl HermitianMatrix {
    pub fn new(m: Matrix, t: &FieldTower) -> Result<Self, HermitianError> {
        if !m.is_square() {
            return Err(HermitianError::NotSquare(m.rows, m.cols));
        }
        if let Some((i, j)) = m.hermitian_violation(t) {
            return Err(HermitianError::NotHermitian(i, j));
        }
        Ok(HermitianMatrix(m))
    }

    pub(crate) fn new_unchecked(m: Matrix) -> Self {
        HermitianMatrix(m)
    }

    pub fn zero(n: usize) -> Self {
        HermitianMatrix(Matrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        HermitianMatrix(Matrix::identity(n))
    }

    /// diag(1, …, 1, 0, …, 0) with `rank` ones.
    pub fn diagonal_representative(n: usize, rank: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..rank.min(n) {
            m.set(i, i, Gf::ONE);
        }
        HermitianMatrix(m)
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn get(&self, i: usize, j: usize) -> Gf {
        self.0.get(i, j)
    }

    pub fn rank(&self, t: &FieldTower) -> usize {
        self.0.rank(t)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, other: &Self, t: &FieldTower) -> Result<Self, HermitianError> {
        Ok(HermitianMatrix(self.0.add(&other.0, t)?))
    }

    pub fn sub(&self, other: &Self, t: &FieldTower) -> Result<Self, HermitianError> {
        Ok(HermitianMatrix(self.0.sub(&other.0, t)?))
    }

    /// Scaling by an element of F_q keeps the matrix Hermitian.
    pub fn scale_base(&self, c: Gf, t: &FieldTower) -> Self {
        assert!(t.is_in_base(c), "scalar must lie in F_q");
        HermitianMatrix(Matrix { rows: self.0.rows, cols: self.0.cols, data: self.0.data.iter().map(|&x| t.mul(c, x)).collect() })
    }

    /// P·A·P*, the congruence action of GL_n(F_{q²}).
    pub fn congruence(&self, p: &Matrix, t: &FieldTower) -> Result<Self, HermitianError> {
        let pa = p.mul(&self.0, t)?;
        Ok(HermitianMatrix(pa.mul(&p.conj_transpose(t), t)?))
    }

    /// F_p-coordinates: m digits per diagonal entry (which lies in F_q),
    /// 2m digits per strictly upper entry, row-major.
    pub fn fp_coordinates(&self, t: &FieldTower) -> Vec<u32> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * n * t.m() as usize);
        for i in 0..n {
            out.extend(to_digits(self.get(i, i).0, t.p(), t.m()));
            for j in i + 1..n {
                out.extend(t.quad_digits(self.get(i, j)));
            }
        }
        out
    }

    pub fn from_fp_coordinates(n: usize, digits: &[u32], t: &FieldTower) -> Self {
        let (m, p) = (t.m() as usize, t.p());
        let mut mat = Matrix::zeros(n, n);
        let mut pos = 0;
        for i in 0..n {
            mat.set(i, i, Gf(crate::field::from_digits(&digits[pos..pos + m], p)));
            pos += m;
            for j in i + 1..n {
                let v = t.quad_from_digits(&digits[pos..pos + 2 * m]);
                pos += 2 * m;
                mat.set(i, j, v);
                mat.set(j, i, t.conj(v));
            }
        }
        HermitianMatrix(mat)
    }
}

impl fmt::Display for HermitianMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Default cap on |X(n,q)| for exhaustive enumeration.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 20;

/// The space X(n,q) of all n×n Hermitian matrices, indexable in sorted order.
#[derive(Debug, Clone, Copy)]
pub struct HermitianSpace<'t> {
    tower: &'t FieldTower,
    n: usize,
    size: u64,
}

impl<'t> HermitianSpace<'t> {
    pub fn new(tower: &'t FieldTower, n: usize, cap: u64) -> Result<Self, HermitianError> {
        let size = (tower.q() as u128).checked_pow((n * n) as u32).unwrap_or(u128::MAX);
        if size > cap as u128 {
            return Err(HermitianError::EnumerationCap { n, q: tower.q(), size, cap });
        }
        Ok(HermitianSpace { tower, n, size: size as u64 })
    }

    pub fn len(&self) -> u64 {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// The `index`-th matrix in sorted order: the upper triangle read
    /// row-major is a mixed-radix numeral (radix q on the diagonal, q²
    /// elsewhere), last position least significant.
    pub fn get(&self, mut index: u64) -> HermitianMatrix {
        let t = self.tower;
        let n = self.n;
        let mut m = Matrix::zeros(n, n);
        for i in (0..n).rev() {
            for j in (i..n).rev() {
                let radix = if i == j { t.q() } else { t.quad_size() } as u64;
                let v = Gf((index % radix) as u32);
                index /= radix;
                m.set(i, j, v);
                m.set(j, i, t.conj(v));
            }
        }
        HermitianMatrix(m)
    }

    /// Inverse of [`HermitianSpace::get`].
    pub fn index_of(&self, a: &HermitianMatrix) -> u64 {
        let t = self.tower;
        let mut index = 0u64;
        for i in 0..self.n {
            for j in i..self.n {
                let radix = if i == j { t.q() } else { t.quad_size() } as u64;
                index = index * radix + a.get(i, j).0 as u64;
            }
        }
        index
    }

    pub fn iter(&self) -> impl Iterator<Item = HermitianMatrix> + '_ {
        (0..self.size).map(move |i| self.get(i))
    }
}

/// Exponent t ∈ [0, p) with ⟨A,B⟩ = ζ_p^t, t = Tr_{F_q/F_p}(tr(A*B)).
pub fn pairing(a: &HermitianMatrix, b: &HermitianMatrix, t: &FieldTower) -> Result<u32, HermitianError> {
    let n = a.dim();
    if n != b.dim() {
        return Err(HermitianError::DimensionMismatch(n, n, b.dim(), b.dim()));
    }
    // tr(A*B) = Σ_{i,j} conj(A_ji) B_ji
    let mut acc = Gf::ZERO;
    for i in 0..n {
        for j in 0..n {
            acc = t.add(acc, t.mul(t.conj(a.get(j, i)), b.get(j, i)));
        }
    }
    debug_assert!(t.is_in_base(acc));
    Ok(t.abs_trace(acc))
}

/// Σ_{A∈S} ⟨A,B⟩ as an exact element of Z[ζ_p].
pub fn char_sum<'a>(
    set: impl IntoIterator<Item = &'a HermitianMatrix>,
    b: &HermitianMatrix,
    t: &FieldTower,
) -> Result<CyclotomicInteger, HermitianError> {
    let mut counts = vec![0u64; t.p() as usize];
    for a in set {
        counts[pairing(a, b, t)? as usize] += 1;
    }
    Ok(CyclotomicInteger::from_counts(counts.into_iter().map(Into::into).collect()))
}

#[cfg(test)]
mod tests;
