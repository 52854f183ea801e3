//! Code constructions in X(n,q): the two trace-form families for
//! n − d odd and for n, d odd, the zero-diagonal 2-code, the symmetric
//! n-code from the trace bilinear form, field spread sets and the
//! non-additive n-code of size q^n + 1 built from a spread set.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::distributions::{CodeSet, DistError};
use crate::field::{tower_for_q, Ext, FieldError, FieldTower, Gf};
use crate::fp_linalg::EchelonBasis;
use crate::hermitian::{FormTerm, HermitianError, HermitianForm, HermitianMatrix, Matrix};

/// Constructions refuse to produce more matrices than this by default.
pub const DEFAULT_CONSTRUCTION_CAP: u64 = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("{family} needs {rule}; got n = {n}, d = {d}")]
    Parameters { family: Family, rule: &'static str, n: u32, d: u32 },
    #[error("construction would produce {size} matrices, above the cap {cap}")]
    SizeCap { size: u128, cap: u64 },
    #[error("construction produced {found} distinct matrices, expected {expected}")]
    Collision { expected: u128, found: usize },
    #[error("unknown family {0:?}")]
    UnknownFamily(String),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Hermitian(#[from] HermitianError),
    #[error(transparent)]
    Dist(#[from] DistError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Thm41,
    Thm42,
    ZeroDiag,
    SymDn,
    Thm43,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::Thm41, Family::Thm42, Family::ZeroDiag, Family::SymDn, Family::Thm43];

    pub fn name(self) -> &'static str {
        match self {
            Family::Thm41 => "thm41",
            Family::Thm42 => "thm42",
            Family::ZeroDiag => "zero-diag",
            Family::SymDn => "sym-dn",
            Family::Thm43 => "thm43",
        }
    }

    /// Minimum distance the family guarantees for the given n and d.
    pub fn designed_distance(self, n: u32, d: u32) -> u32 {
        match self {
            Family::Thm41 | Family::Thm42 => d,
            Family::ZeroDiag => 2,
            Family::SymDn | Family::Thm43 => n,
        }
    }

    pub fn is_additive(self) -> bool {
        self != Family::Thm43
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = ConstructionError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Family::ALL.into_iter().find(|f| f.name() == s).ok_or_else(|| ConstructionError::UnknownFamily(s.to_string()))
    }
}

/// A code given as the sums Σ_s slots[s][i_s] over all index tuples, plus
/// a few extra matrices. Tuples are enumerated with slot 0 most significant.
///
/// For the trace-form families, `forms[s][i]` holds the terms whose Gram
/// matrix is `slots[s][i]`.
#[derive(Debug, Clone)]
pub struct CodeGenerator {
    tower: Arc<FieldTower>,
    n: usize,
    family: Family,
    slots: Vec<Vec<Matrix>>,
    forms: Option<Vec<Vec<Vec<FormTerm>>>>,
    extra: Vec<HermitianMatrix>,
}

impl CodeGenerator {
    pub fn tower(&self) -> &Arc<FieldTower> {
        &self.tower
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> Family {
        self.family
    }

    fn tuples(&self) -> u128 {
        self.slots.iter().map(|s| s.len() as u128).product()
    }

    /// Number of parameter choices, which equals the code size.
    pub fn size(&self) -> u128 {
        self.tuples() + self.extra.len() as u128
    }

    fn check_cap(&self, cap: u64) -> Result<u64, ConstructionError> {
        let size = self.size();
        if size > cap as u128 {
            return Err(ConstructionError::SizeCap { size, cap });
        }
        Ok(size as u64)
    }

    fn split(&self, mut index: u64) -> Vec<usize> {
        let mut idx = vec![0; self.slots.len()];
        for (s, slot) in self.slots.iter().enumerate().rev() {
            let len = slot.len() as u64;
            idx[s] = (index % len) as usize;
            index /= len;
        }
        idx
    }

    /// The `index`-th member, in parameter order.
    pub fn matrix(&self, index: u64) -> HermitianMatrix {
        let tuples = self.tuples() as u64;
        if index >= tuples {
            return self.extra[(index - tuples) as usize].clone();
        }
        let t = &*self.tower;
        let mut acc = Matrix::zeros(self.n, self.n);
        for (slot, i) in self.slots.iter().zip(self.split(index)) {
            acc = acc.add(&slot[i], t).expect("slot matrices are n×n");
        }
        HermitianMatrix::new_unchecked(acc)
    }

    /// The form behind the `index`-th member, for the trace-form families.
    pub fn form(&self, index: u64) -> Option<HermitianForm<'_>> {
        let forms = self.forms.as_ref()?;
        if index >= self.tuples() as u64 {
            return None;
        }
        let terms = forms.iter().zip(self.split(index)).flat_map(|(slot, i)| slot[i].iter().cloned()).collect();
        Some(HermitianForm::new(&self.tower, terms))
    }

    /// All members as a sorted set; the size must come out exact.
    pub fn materialize(&self, cap: u64) -> Result<CodeSet, ConstructionError> {
        let size = self.check_cap(cap)?;
        let matrices: Vec<HermitianMatrix> = (0..size).into_par_iter().map(|i| self.matrix(i)).collect();
        let code = if self.family.is_additive() {
            CodeSet::new_additive(self.tower.clone(), self.n, matrices)
        } else {
            CodeSet::new(self.tower.clone(), self.n, matrices)?
        };
        if code.len() as u128 != self.size() {
            return Err(ConstructionError::Collision { expected: self.size(), found: code.len() });
        }
        Ok(code)
    }

    /// Rank histogram of the members, without storing them.
    pub fn rank_census(&self, cap: u64) -> Result<Vec<u64>, ConstructionError> {
        let size = self.check_cap(cap)?;
        let t = &*self.tower;
        Ok((0..size)
            .into_par_iter()
            .fold(
                || vec![0u64; self.n + 1],
                |mut acc, i| {
                    acc[self.matrix(i).rank(t)] += 1;
                    acc
                },
            )
            .reduce(
                || vec![0u64; self.n + 1],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            ))
    }
}

/// One parameter slot of a trace-form family: each value of `values`
/// contributes the terms produced by `terms`.
fn form_slot(
    tower: &FieldTower,
    values: Vec<Ext>,
    terms: impl Fn(&Ext) -> Vec<FormTerm> + Sync,
) -> Result<(Vec<Matrix>, Vec<Vec<FormTerm>>), ConstructionError> {
    let built: Vec<Result<(Matrix, Vec<FormTerm>), ConstructionError>> = values
        .par_iter()
        .map(|a| {
            let ts = terms(a);
            let gram = HermitianForm::new(tower, ts.clone()).to_matrix()?;
            Ok((gram.into_matrix(), ts))
        })
        .collect();
    let mut mats = Vec::with_capacity(built.len());
    let mut forms = Vec::with_capacity(built.len());
    for b in built {
        let (m, f) = b?;
        mats.push(m);
        forms.push(f);
    }
    Ok((mats, forms))
}

fn top_elements(tower: &FieldTower, cap: u64) -> Result<Vec<Ext>, ConstructionError> {
    let size = tower.top_size().unwrap_or(u64::MAX);
    if size > cap {
        return Err(ConstructionError::SizeCap { size: size as u128, cap });
    }
    Ok((0..size).map(|i| tower.ext_from_index(i)).collect())
}

fn code_size(q: u64, exp: u32) -> u128 {
    (q as u128).checked_pow(exp).unwrap_or(u128::MAX)
}

fn precheck(q: u64, exp: u32, cap: u64) -> Result<(), ConstructionError> {
    let size = code_size(q, exp);
    if size > cap as u128 {
        return Err(ConstructionError::SizeCap { size, cap });
    }
    Ok(())
}

fn forms_generator(
    tower: Arc<FieldTower>,
    family: Family,
    slots: Vec<(Vec<Matrix>, Vec<Vec<FormTerm>>)>,
) -> CodeGenerator {
    let n = tower.n() as usize;
    let (slots, forms) = slots.into_iter().unzip();
    CodeGenerator { tower, n, family, slots, forms: Some(forms), extra: Vec::new() }
}

/// H(x,y) = Tr(Σ_{j=1}^{(n−d+1)/2} (a_j x y^{q^{2j−1}} + a_j^q x^{q^{2j}} y^q)), a_j ∈ F_{q^{2n}}.
pub fn thm41_generator(n: u32, d: u32, q: u64, cap: u64) -> Result<CodeGenerator, ConstructionError> {
    if d < 1 || d >= n || (n - d) % 2 == 0 {
        return Err(ConstructionError::Parameters { family: Family::Thm41, rule: "1 <= d <= n-1 and n-d odd", n, d });
    }
    precheck(q, n * (n - d + 1), cap)?;
    let tower = Arc::new(tower_for_q(q, n)?);
    let elems = top_elements(&tower, cap)?;
    let mut slots = Vec::new();
    for j in 1..=(n - d + 1) / 2 {
        let t = &*tower;
        slots.push(form_slot(t, elems.clone(), |a| {
            vec![
                FormTerm { coeff: a.clone(), x_exp: 0, y_exp: 2 * j - 1 },
                FormTerm { coeff: t.frobenius_q(a, 1), x_exp: 2 * j, y_exp: 1 },
            ]
        })?);
    }
    Ok(forms_generator(tower, Family::Thm41, slots))
}

/// H(x,y) = Tr(a_0 x y^{q^n} + Σ_{j=1}^{(n−d)/2} (a_j x y^{q^{n−2j}} + a_j^q x^{q^{n−2j+1}} y^q)),
/// a_0 ∈ F_{q^n}, a_j ∈ F_{q^{2n}}.
pub fn thm42_generator(n: u32, d: u32, q: u64, cap: u64) -> Result<CodeGenerator, ConstructionError> {
    if d < 1 || d > n || n % 2 == 0 || d % 2 == 0 {
        return Err(ConstructionError::Parameters { family: Family::Thm42, rule: "n and d odd with 1 <= d <= n", n, d });
    }
    precheck(q, n * (n - d + 1), cap)?;
    let tower = Arc::new(tower_for_q(q, n)?);
    let t = &*tower;
    let mut slots = vec![form_slot(t, t.subfield_fqn(), |a| vec![FormTerm { coeff: a.clone(), x_exp: 0, y_exp: n }])?];
    if d < n {
        let elems = top_elements(t, cap)?;
        for j in 1..=(n - d) / 2 {
            slots.push(form_slot(t, elems.clone(), |a| {
                vec![
                    FormTerm { coeff: a.clone(), x_exp: 0, y_exp: n - 2 * j },
                    FormTerm { coeff: t.frobenius_q(a, 1), x_exp: n - 2 * j + 1, y_exp: 1 },
                ]
            })?);
        }
    }
    Ok(forms_generator(tower, Family::Thm42, slots))
}

/// All Hermitian matrices with zero diagonal.
pub fn zero_diag_generator(n: u32, q: u64, cap: u64) -> Result<CodeGenerator, ConstructionError> {
    if n < 2 {
        return Err(ConstructionError::Parameters { family: Family::ZeroDiag, rule: "n >= 2", n, d: 2 });
    }
    precheck(q, n * (n - 1), cap)?;
    let tower = Arc::new(tower_for_q(q, n)?);
    let nn = n as usize;
    let mut slots = Vec::new();
    for i in 0..nn {
        for j in i + 1..nn {
            let slot = tower
                .quad_elements()
                .map(|c| {
                    let mut m = Matrix::zeros(nn, nn);
                    m.set(i, j, c);
                    m.set(j, i, tower.conj(c));
                    m
                })
                .collect();
            slots.push(slot);
        }
    }
    Ok(CodeGenerator { tower, n: nn, family: Family::ZeroDiag, slots, forms: None, extra: Vec::new() })
}

/// An F_q-basis of F_{q^n} ⊂ F_{q^{2n}}, chosen greedily from the sorted
/// subfield.
pub fn subfield_fq_basis(tower: &FieldTower) -> Vec<Ext> {
    let n = tower.n() as usize;
    let m = tower.m();
    let p = tower.p();
    let fq_units: Vec<Ext> = (0..m).map(|i| tower.embed_quad(Gf(p.pow(i)))).collect();
    let mut span = EchelonBasis::new(p, tower.total_degree() as usize);
    let mut basis = Vec::with_capacity(n);
    for x in tower.subfield_fqn() {
        if basis.len() == n {
            break;
        }
        if x.is_zero() || span.contains(&tower.ext_digits(&x)) {
            continue;
        }
        for u in &fq_units {
            span.insert(&tower.ext_digits(&tower.ext_mul(u, &x)));
        }
        basis.push(x);
    }
    basis
}

/// Tr_{F_{q^n}/F_q}(x) for x ∈ F_{q^n}, as an element of F_q.
fn trace_to_fq(tower: &FieldTower, x: &Ext) -> Gf {
    let s = (0..tower.n()).fold(tower.ext_zero(), |acc, k| tower.ext_add(&acc, &tower.frobenius_q(x, k)));
    debug_assert!(s.0[1..].iter().all(|c| c.is_zero()) && tower.is_in_base(s.0[0]));
    s.0[0]
}

/// Gram matrices of B_a(x,y) = Tr_{F_{q^n}/F_q}(a x y), a ∈ F_{q^n}, in an
/// F_q-basis of F_{q^n}. Symmetric over F_q, hence Hermitian.
pub fn sym_dn_generator(n: u32, q: u64, cap: u64) -> Result<CodeGenerator, ConstructionError> {
    if n < 1 {
        return Err(ConstructionError::Parameters { family: Family::SymDn, rule: "n >= 1", n, d: n });
    }
    precheck(q, n, cap)?;
    let tower = Arc::new(tower_for_q(q, n)?);
    let t = &*tower;
    let basis = subfield_fq_basis(t);
    let nn = n as usize;
    let slot = t
        .subfield_fqn()
        .par_iter()
        .map(|a| Matrix::from_fn(nn, nn, |i, j| trace_to_fq(t, &t.ext_mul(a, &t.ext_mul(&basis[i], &basis[j])))))
        .collect();
    Ok(CodeGenerator { tower, n: nn, family: Family::SymDn, slots: vec![slot], forms: None, extra: Vec::new() })
}

/// M_a with M_a[i][j] the i-th coordinate of a·β^j: the matrix of
/// multiplication by a on F_{q^{2h}} as an F_{q²}-space.
pub fn multiplication_matrix(tower: &FieldTower, a: &Ext) -> Matrix {
    let h = tower.n() as usize;
    let cols: Vec<Ext> = tower.basis().iter().map(|b| tower.ext_mul(a, b)).collect();
    Matrix::from_fn(h, h, |i, j| cols[j].0[i])
}

/// The (q²)^h multiplication matrices of F_{q^{2h}}, in element order.
/// Distinct members differ by a nonsingular matrix.
pub fn construct_spread_set(half_n: u32, q: u64, cap: u64) -> Result<Vec<Matrix>, ConstructionError> {
    precheck(q, 2 * half_n, cap)?;
    let tower = tower_for_q(q, half_n)?;
    let elems = top_elements(&tower, cap)?;
    Ok(elems.par_iter().map(|a| multiplication_matrix(&tower, a)).collect())
}

/// {[[I, A*], [A, AA*]] : A ∈ Z} ∪ {[[O, O], [O, I]]} for the field spread
/// set Z of (n/2)×(n/2) matrices. Not additive.
pub fn thm43_generator(n: u32, q: u64, cap: u64) -> Result<CodeGenerator, ConstructionError> {
    if n == 0 || n % 2 == 1 {
        return Err(ConstructionError::Parameters { family: Family::Thm43, rule: "n even and positive", n, d: n });
    }
    let size = code_size(q, n).saturating_add(1);
    if size > cap as u128 {
        return Err(ConstructionError::SizeCap { size, cap });
    }
    let h = (n / 2) as usize;
    let tower = Arc::new(tower_for_q(q, n)?);
    let t = &*tower;
    let spread = construct_spread_set(n / 2, q, cap)?;
    let id = Matrix::identity(h);
    let zero = Matrix::zeros(h, h);
    let slot = spread
        .par_iter()
        .map(|a| {
            let a_star = a.conj_transpose(t);
            let aa = a.mul(&a_star, t).expect("square blocks");
            Matrix::block(&id, &a_star, a, &aa)
        })
        .collect();
    let last = HermitianMatrix::new(Matrix::block(&zero, &zero, &zero, &id), t)?;
    Ok(CodeGenerator { tower, n: n as usize, family: Family::Thm43, slots: vec![slot], forms: None, extra: vec![last] })
}

/// Generator for any family; `d` is ignored where the family fixes it.
pub fn generator(family: Family, n: u32, d: u32, q: u64, cap: u64) -> Result<CodeGenerator, ConstructionError> {
    match family {
        Family::Thm41 => thm41_generator(n, d, q, cap),
        Family::Thm42 => thm42_generator(n, d, q, cap),
        Family::ZeroDiag => zero_diag_generator(n, q, cap),
        Family::SymDn => sym_dn_generator(n, q, cap),
        Family::Thm43 => thm43_generator(n, q, cap),
    }
}

pub fn construct(family: Family, n: u32, d: u32, q: u64, cap: u64) -> Result<CodeSet, ConstructionError> {
    generator(family, n, d, q, cap)?.materialize(cap)
}

pub fn construct_thm41(n: u32, d: u32, q: u64) -> Result<CodeSet, ConstructionError> {
    construct(Family::Thm41, n, d, q, DEFAULT_CONSTRUCTION_CAP)
}

pub fn construct_thm42(n: u32, d: u32, q: u64) -> Result<CodeSet, ConstructionError> {
    construct(Family::Thm42, n, d, q, DEFAULT_CONSTRUCTION_CAP)
}

pub fn construct_zero_diag(n: u32, q: u64) -> Result<CodeSet, ConstructionError> {
    construct(Family::ZeroDiag, n, 2, q, DEFAULT_CONSTRUCTION_CAP)
}

pub fn construct_symmetric_dn(n: u32, q: u64) -> Result<CodeSet, ConstructionError> {
    construct(Family::SymDn, n, n, q, DEFAULT_CONSTRUCTION_CAP)
}

pub fn construct_thm43(n: u32, q: u64) -> Result<CodeSet, ConstructionError> {
    construct(Family::Thm43, n, n, q, DEFAULT_CONSTRUCTION_CAP)
}

/// A pair (A, B) of members whose difference A − B is not a member.
pub fn closure_counterexample(code: &CodeSet) -> Option<(HermitianMatrix, HermitianMatrix)> {
    let t = code.tower();
    let ms = code.matrices();
    ms.iter().find_map(|a| {
        ms.iter().find_map(|b| {
            let diff = a.sub(b, t).expect("same dimension");
            (!code.contains(&diff)).then(|| (a.clone(), b.clone()))
        })
    })
}
