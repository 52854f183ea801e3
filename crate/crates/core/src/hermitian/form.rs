use crate::field::{Ext, FieldTower, Gf};
use crate::fp_linalg;

use super::{HermitianError, HermitianMatrix, Matrix};

/// One summand c · x^{q^{e1}} · y^{q^{e2}} inside the relative trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormTerm {
    pub coeff: Ext,
    pub x_exp: u32,
    pub y_exp: u32,
}

/// A form H(x, y) = Tr(Σ c · x^{q^{e1}} · y^{q^{e2}}) on F_{q^{2n}}, viewed as
/// an n-dimensional space over F_{q²}.
///
/// Forms built by the constructions have e1 even, so H is F_{q²}-linear in x;
/// only then is the Gram matrix meaningful.
#[derive(Debug, Clone)]
pub struct HermitianForm<'t> {
    tower: &'t FieldTower,
    terms: Vec<FormTerm>,
}

impl<'t> HermitianForm<'t> {
    pub fn new(tower: &'t FieldTower, terms: Vec<FormTerm>) -> Self {
        HermitianForm { tower, terms }
    }

    pub fn zero(tower: &'t FieldTower) -> Self {
        HermitianForm { tower, terms: Vec::new() }
    }

    pub fn terms(&self) -> &[FormTerm] {
        &self.terms
    }

    pub fn tower(&self) -> &'t FieldTower {
        self.tower
    }

    pub fn push(&mut self, coeff: Ext, x_exp: u32, y_exp: u32) {
        self.terms.push(FormTerm { coeff, x_exp, y_exp });
    }

    pub fn evaluate(&self, x: &Ext, y: &Ext) -> Gf {
        let t = self.tower;
        let mut sum = t.ext_zero();
        for term in &self.terms {
            if term.coeff.is_zero() {
                continue;
            }
            let xe = t.frobenius_q(x, term.x_exp);
            let ye = t.frobenius_q(y, term.y_exp);
            sum = t.ext_add(&sum, &t.ext_mul(&term.coeff, &t.ext_mul(&xe, &ye)));
        }
        t.relative_trace(&sum)
    }

    /// Gram matrix (H(ξ_i, ξ_j)) in the polynomial basis ξ_i = β^{i−1}.
    pub fn to_matrix(&self) -> Result<HermitianMatrix, HermitianError> {
        let t = self.tower;
        let basis = t.basis();
        let n = basis.len();
        let gram = Matrix::from_fn(n, n, |i, j| self.evaluate(&basis[i], &basis[j]));
        if let Some((i, j)) = gram.hermitian_violation(t) {
            return Err(HermitianError::FormNotHermitian(i, j));
        }
        Ok(HermitianMatrix::new_unchecked(gram))
    }

    /// dim over F_{q²} of {x : H(x, ξ_j) = 0 for all j}.
    ///
    /// Solved as an F_p-linear system over an F_p-basis of F_{q^{2n}}, so the
    /// result does not go through the Gram matrix.
    pub fn radical_dim(&self) -> usize {
        let t = self.tower;
        let dim = t.total_degree() as usize;
        let basis = t.basis();
        let rows: Vec<Vec<u32>> = (0..dim)
            .map(|k| {
                let mut e = vec![0u32; dim];
                e[k] = 1;
                let x = t.ext_from_digits(&e);
                basis.iter().flat_map(|xi| t.quad_digits(self.evaluate(&x, xi))).collect()
            })
            .collect();
        let kernel = dim - fp_linalg::rank(t.p(), &rows);
        let width = 2 * t.m() as usize;
        debug_assert_eq!(kernel % width, 0, "radical is not an F_q²-subspace");
        kernel / width
    }

    /// Checks H(y,x) = conj(H(x,y)) on the given sample pairs.
    pub fn is_conjugate_symmetric_on<'a>(&self, pairs: impl IntoIterator<Item = (&'a Ext, &'a Ext)>) -> bool {
        let t = self.tower;
        pairs.into_iter().all(|(x, y)| self.evaluate(y, x) == t.conj(self.evaluate(x, y)))
    }
}
