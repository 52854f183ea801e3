//! The field tower F_p ⊂ F_q ⊂ F_{q²} ⊂ F_{q^{2n}}.
//!
//! F_q and F_{q²} are small enough to be handled entirely through tables and
//! share one integer encoding ([`Gf`]): the code of an element is the base-p
//! expansion of its F_p-coordinates, so F_p and F_q are the code prefixes
//! `0..p` and `0..q` of F_{q²}. The top field F_{q^{2n}} is stored as a
//! coefficient vector over F_{q²} in the polynomial basis 1, β, …, β^{n-1}
//! ([`Ext`]), which keeps F_{q²}-linearity structural.

mod poly;
pub(crate) mod small;

use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fp_linalg;
use small::{CodeField, PrimeField, TableField};

/// Default cap on the degree of F_{q^{2n}} over F_p.
pub const DEFAULT_DEGREE_CAP: u32 = 64;

/// F_{q²} must fit in exp/log tables of this many entries.
pub const QUAD_FIELD_LIMIT: u64 = 1 << 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("parameters must be positive (m = {m}, n = {n})")]
    ZeroParameter { m: u32, n: u32 },
    #[error("total degree {degree} over F_p exceeds the cap {cap}")]
    DegreeCap { degree: u64, cap: u32 },
    #[error("F_q² has {0} elements, above the table limit")]
    QuadFieldTooLarge(u64),
    #[error("division by zero")]
    DivisionByZero,
    #[error("level mismatch: expected {expected}, found {found}")]
    LevelMismatch { expected: Level, found: Level },
    #[error("invalid element code {code} at level {level}")]
    InvalidElement { level: Level, code: u32 },
    #[error("tower descriptor does not match the canonical tower: {0}")]
    Descriptor(String),
}

/// Element of F_{q²} (or of one of its subfields F_q, F_p) by integer code.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
pub struct Gf(pub u32);

impl Gf {
    pub const ZERO: Gf = Gf(0);
    pub const ONE: Gf = Gf(1);

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Element of the top field F_{q^{2n}}: coefficients over F_{q²}.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ext(pub Vec<Gf>);

impl Ext {
    pub fn coeffs(&self) -> &[Gf] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| c.is_zero())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Level {
    /// F_p
    Prime,
    /// F_q
    Base,
    /// F_{q²}
    Quad,
    /// F_{q^{2n}}
    Top,
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Level::Prime => "F_p",
            Level::Base => "F_q",
            Level::Quad => "F_q^2",
            Level::Top => "F_q^2n",
        };
        f.write_str(s)
    }
}

/// A field element tagged with its tower level.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Prime(Gf),
    Base(Gf),
    Quad(Gf),
    Top(Ext),
}

impl FieldElement {
    pub fn level(&self) -> Level {
        match self {
            FieldElement::Prime(_) => Level::Prime,
            FieldElement::Base(_) => Level::Base,
            FieldElement::Quad(_) => Level::Quad,
            FieldElement::Top(_) => Level::Top,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Serialized form of a tower: moduli in ascending degree order, each
/// coefficient given by its integer code in the field below.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerDescriptor {
    pub p: u32,
    pub m: u32,
    pub n: u32,
    pub moduli: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TowerConfig {
    pub degree_cap: u32,
}

impl Default for TowerConfig {
    fn default() -> Self {
        TowerConfig { degree_cap: DEFAULT_DEGREE_CAP }
    }
}

/// Immutable arithmetic context for F_p ⊂ F_q ⊂ F_{q²} ⊂ F_{q^{2n}}.
#[derive(Clone)]
pub struct FieldTower {
    p: u32,
    m: u32,
    n: u32,
    q: u32,
    base_modulus: Vec<u32>,
    quad_modulus: Vec<u32>,
    top_modulus: Vec<u32>,
    quad: TableField,
    conj: Vec<u32>,
    abs_trace: Vec<u32>,
    /// frob[k][i] = (β^i)^{q^k} for 0 <= k < 2n
    frob: Vec<Vec<Ext>>,
    /// Tr(β^i)
    trace_basis: Vec<Gf>,
}

impl fmt::Debug for FieldTower {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldTower")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("n", &self.n)
            .field("moduli", &self.moduli())
            .finish()
    }
}

impl PartialEq for FieldTower {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m && self.n == other.n && self.moduli() == other.moduli()
    }
}

impl Eq for FieldTower {}

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits a prime power q = p^m into (p, m).
pub fn prime_power(q: u64) -> Result<(u32, u32), FieldError> {
    if q < 2 {
        return Err(FieldError::NotPrimePower(q));
    }
    let p = (2..=q).find(|d| q % d == 0).unwrap();
    let mut rest = q;
    let mut m = 0;
    while rest % p == 0 {
        rest /= p;
        m += 1;
    }
    if rest != 1 || p > u32::MAX as u64 {
        return Err(FieldError::NotPrimePower(q));
    }
    Ok((p as u32, m))
}

/// Builds the canonical tower for q = p^m and matrix dimension n.
pub fn build_tower(p: u32, m: u32, n: u32) -> Result<FieldTower, FieldError> {
    FieldTower::new(p, m, n, TowerConfig::default())
}

/// Builds the canonical tower for a prime power q.
fn pick_modulus<F: CodeField>(field: &F, degree: usize, given: Option<&Vec<u32>>) -> Result<Vec<u32>, FieldError> {
    let Some(f) = given else {
        return Ok(poly::smallest_irreducible(field, degree));
    };
    let ok = f.len() == degree + 1
        && f[degree] == 1
        && f.iter().all(|&c| c < field.size())
        && poly::is_irreducible(field, f);
    if !ok {
        return Err(FieldError::Descriptor(format!("{f:?} is not a monic irreducible of degree {degree}")));
    }
    Ok(f.clone())
}

pub fn tower_for_q(q: u64, n: u32) -> Result<FieldTower, FieldError> {
    let (p, m) = prime_power(q)?;
    build_tower(p, m, n)
}

impl FieldTower {
    pub fn new(p: u32, m: u32, n: u32, config: TowerConfig) -> Result<Self, FieldError> {
        Self::build(p, m, n, config, None)
    }

    /// Builds the tower on the given moduli (base, quadratic, top) instead
    /// of searching for them; each must be monic and irreducible of the
    /// right degree.
    pub fn with_moduli(p: u32, m: u32, n: u32, moduli: &[Vec<u32>], config: TowerConfig) -> Result<Self, FieldError> {
        if moduli.len() != 3 {
            return Err(FieldError::Descriptor(format!("expected 3 moduli, found {}", moduli.len())));
        }
        Self::build(p, m, n, config, Some(moduli))
    }

    fn build(p: u32, m: u32, n: u32, config: TowerConfig, given: Option<&[Vec<u32>]>) -> Result<Self, FieldError> {
        if !is_prime(p as u64) {
            return Err(FieldError::NotPrime(p));
        }
        if m == 0 || n == 0 {
            return Err(FieldError::ZeroParameter { m, n });
        }
        let degree = 2 * n as u64 * m as u64;
        if degree > config.degree_cap as u64 {
            return Err(FieldError::DegreeCap { degree, cap: config.degree_cap });
        }
        let quad_size = (p as u64).checked_pow(2 * m).unwrap_or(u64::MAX);
        if quad_size > QUAD_FIELD_LIMIT {
            return Err(FieldError::QuadFieldTooLarge(quad_size));
        }
        let q = p.pow(m);

        let prime = PrimeField { p };
        let base_modulus = pick_modulus(&prime, m as usize, given.map(|g| &g[0]))?;
        let base = TableField::build(p, m, |a, b| {
            let pa = to_digits(a, p, m);
            let pb = to_digits(b, p, m);
            from_digits(&poly::mul_mod(&prime, &pa, &pb, &base_modulus), p)
        });

        let quad_modulus = pick_modulus(&base, 2, given.map(|g| &g[1]))?;
        let (g0, g1) = (quad_modulus[0], quad_modulus[1]);
        let quad = TableField::build(p, 2 * m, |a, b| {
            let (a0, a1, b0, b1) = (a % q, a / q, b % q, b / q);
            // (a0 + a1 y)(b0 + b1 y) with y^2 = -g1 y - g0
            let hi = base.mul(a1, b1);
            let c0 = base.sub(base.mul(a0, b0), base.mul(hi, g0));
            let c1 = base.sub(base.add(base.mul(a0, b1), base.mul(a1, b0)), base.mul(hi, g1));
            c0 + q * c1
        });

        let conj: Vec<u32> = (0..q * q).map(|x| quad.pow(x, q as u64)).collect();
        let abs_trace: Vec<u32> = (0..q)
            .map(|x| {
                let mut acc = 0;
                let mut y = x;
                for _ in 0..m {
                    acc = quad.add(acc, y);
                    y = quad.pow(y, p as u64);
                }
                acc
            })
            .collect();

        let top_modulus = pick_modulus(&quad, n as usize, given.map(|g| &g[2]))?;

        let mut tower = FieldTower {
            p,
            m,
            n,
            q,
            base_modulus,
            quad_modulus,
            top_modulus,
            quad,
            conj,
            abs_trace,
            frob: Vec::new(),
            trace_basis: Vec::new(),
        };

        let basis: Vec<Ext> = (0..n as usize).map(|i| tower.basis_element(i)).collect();
        let beta_q = tower.ext_pow_u64(&tower.beta(), q as u64);
        let mut beta_q_pows = Vec::with_capacity(n as usize);
        let mut acc = tower.ext_one();
        for _ in 0..n {
            beta_q_pows.push(acc.clone());
            acc = tower.ext_mul(&acc, &beta_q);
        }
        tower.frob.push(basis);
        tower.frob.push(beta_q_pows);
        for k in 2..2 * n as usize {
            let next: Vec<Ext> = tower.frob[k - 1].iter().map(|x| tower.apply_frob1(x)).collect();
            tower.frob.push(next);
        }
        tower.frob.truncate(2 * n as usize);

        tower.trace_basis = (0..n as usize)
            .map(|i| {
                let mut sum = tower.ext_zero();
                for k in 0..n as usize {
                    sum = tower.ext_add(&sum, &tower.frob[2 * k][i]);
                }
                debug_assert!(sum.0[1..].iter().all(|c| c.is_zero()));
                sum.0[0]
            })
            .collect();
        Ok(tower)
    }

    /// Rebuilds a tower from its descriptor, which must match the canonical
    /// choice of moduli.
    pub fn from_descriptor(desc: &TowerDescriptor) -> Result<Self, FieldError> {
        let tower = build_tower(desc.p, desc.m, desc.n)?;
        if tower.moduli() != desc.moduli {
            return Err(FieldError::Descriptor(format!(
                "expected moduli {:?}, found {:?}",
                tower.moduli(),
                desc.moduli
            )));
        }
        Ok(tower)
    }

    pub fn descriptor(&self) -> TowerDescriptor {
        TowerDescriptor { p: self.p, m: self.m, n: self.n, moduli: self.moduli() }
    }

    pub fn moduli(&self) -> Vec<Vec<u32>> {
        vec![self.base_modulus.clone(), self.quad_modulus.clone(), self.top_modulus.clone()]
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Size of F_{q²}.
    pub fn quad_size(&self) -> u32 {
        self.q * self.q
    }

    /// Number of elements of the top field, when it fits in a u64.
    pub fn top_size(&self) -> Option<u64> {
        (self.quad_size() as u64).checked_pow(self.n)
    }

    /// Degree of F_{q^{2n}} over F_p.
    pub fn total_degree(&self) -> u32 {
        2 * self.n * self.m
    }

    /// Whether two towers share the same F_q² (same p and m).
    pub fn same_quad_field(&self, other: &FieldTower) -> bool {
        self.p == other.p && self.m == other.m
    }

    // ---- F_{q²} arithmetic -------------------------------------------------

    #[inline]
    pub fn add(&self, a: Gf, b: Gf) -> Gf {
        Gf(self.quad.add(a.0, b.0))
    }

    #[inline]
    pub fn sub(&self, a: Gf, b: Gf) -> Gf {
        Gf(self.quad.sub(a.0, b.0))
    }

    #[inline]
    pub fn neg(&self, a: Gf) -> Gf {
        Gf(self.quad.neg(a.0))
    }

    #[inline]
    pub fn mul(&self, a: Gf, b: Gf) -> Gf {
        Gf(self.quad.mul(a.0, b.0))
    }

    pub fn inv(&self, a: Gf) -> Result<Gf, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Gf(self.quad.inv(a.0)))
    }

    pub fn div(&self, a: Gf, b: Gf) -> Result<Gf, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Gf, e: u64) -> Gf {
        Gf(self.quad.pow(a.0, e))
    }

    /// The involution x ↦ x^q of F_{q²}.
    #[inline]
    pub fn conj(&self, a: Gf) -> Gf {
        Gf(self.conj[a.0 as usize])
    }

    pub fn conjugate(&self, x: &FieldElement) -> Result<FieldElement, FieldError> {
        match x {
            FieldElement::Quad(a) => {
                self.check_code(Level::Quad, *a)?;
                Ok(FieldElement::Quad(self.conj(*a)))
            }
            other => Err(FieldError::LevelMismatch { expected: Level::Quad, found: other.level() }),
        }
    }

    pub fn is_in_base(&self, a: Gf) -> bool {
        a.0 < self.q
    }

    /// Absolute trace F_q → F_p; `a` must lie in F_q.
    #[inline]
    pub fn abs_trace(&self, a: Gf) -> u32 {
        self.abs_trace[a.0 as usize]
    }

    /// Embeds an integer into the prime field.
    pub fn from_int(&self, k: i64) -> Gf {
        Gf(k.rem_euclid(self.p as i64) as u32)
    }

    pub fn quad_elements(&self) -> impl Iterator<Item = Gf> {
        (0..self.quad_size()).map(Gf)
    }

    pub fn base_elements(&self) -> impl Iterator<Item = Gf> {
        (0..self.q).map(Gf)
    }

    /// F_p-coordinates of an F_{q²} element.
    pub fn quad_digits(&self, a: Gf) -> Vec<u32> {
        to_digits(a.0, self.p, 2 * self.m)
    }

    pub fn quad_from_digits(&self, digits: &[u32]) -> Gf {
        Gf(from_digits(digits, self.p))
    }

    // ---- top field arithmetic ----------------------------------------------

    pub fn ext_zero(&self) -> Ext {
        Ext(vec![Gf::ZERO; self.n as usize])
    }

    pub fn ext_one(&self) -> Ext {
        self.embed_quad(Gf::ONE)
    }

    fn basis_element(&self, i: usize) -> Ext {
        let mut x = self.ext_zero();
        if self.n == 1 {
            x.0[0] = Gf::ONE;
            return x;
        }
        x.0[i] = Gf::ONE;
        x
    }

    /// The adjoined generator β of F_{q^{2n}} over F_{q²}.
    pub fn beta(&self) -> Ext {
        if self.n == 1 {
            // the top modulus is y - c0
            return self.embed_quad(self.neg(Gf(self.top_modulus[0])));
        }
        self.basis_element(1)
    }

    /// The polynomial basis 1, β, …, β^{n-1}.
    pub fn basis(&self) -> &[Ext] {
        &self.frob[0]
    }

    pub fn embed_quad(&self, a: Gf) -> Ext {
        let mut x = self.ext_zero();
        x.0[0] = a;
        x
    }

    /// Ring embedding of a lower-level element into the top field.
    pub fn embed(&self, x: &FieldElement) -> Result<Ext, FieldError> {
        match x {
            FieldElement::Prime(a) | FieldElement::Base(a) | FieldElement::Quad(a) => {
                self.check_code(x.level(), *a)?;
                Ok(self.embed_quad(*a))
            }
            FieldElement::Top(_) => Err(FieldError::LevelMismatch { expected: Level::Quad, found: Level::Top }),
        }
    }

    pub fn ext_add(&self, a: &Ext, b: &Ext) -> Ext {
        Ext(a.0.iter().zip(&b.0).map(|(&x, &y)| self.add(x, y)).collect())
    }

    pub fn ext_sub(&self, a: &Ext, b: &Ext) -> Ext {
        Ext(a.0.iter().zip(&b.0).map(|(&x, &y)| self.sub(x, y)).collect())
    }

    pub fn ext_scale(&self, c: Gf, a: &Ext) -> Ext {
        Ext(a.0.iter().map(|&x| self.mul(c, x)).collect())
    }

    pub fn ext_mul(&self, a: &Ext, b: &Ext) -> Ext {
        let n = self.n as usize;
        let mut prod = vec![0u32; 2 * n - 1];
        for (i, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                prod[i + j] = self.quad.add(prod[i + j], self.quad.mul(x.0, y.0));
            }
        }
        let h = &self.top_modulus;
        for deg in (n..2 * n - 1).rev() {
            let c = prod[deg];
            if c == 0 {
                continue;
            }
            for j in 0..n {
                prod[deg - n + j] = self.quad.sub(prod[deg - n + j], self.quad.mul(c, h[j]));
            }
        }
        Ext(prod[..n].iter().map(|&c| Gf(c)).collect())
    }

    pub fn ext_inv(&self, a: &Ext) -> Result<Ext, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let raw: Vec<u32> = a.0.iter().map(|c| c.0).collect();
        let inv = poly::inv_mod(&self.quad, &raw, &self.top_modulus).expect("top modulus is irreducible");
        Ok(self.ext_from_poly(&inv))
    }

    pub fn ext_div(&self, a: &Ext, b: &Ext) -> Result<Ext, FieldError> {
        Ok(self.ext_mul(a, &self.ext_inv(b)?))
    }

    fn ext_from_poly(&self, raw: &[u32]) -> Ext {
        let mut x = self.ext_zero();
        for (slot, &c) in x.0.iter_mut().zip(raw) {
            *slot = Gf(c);
        }
        x
    }

    fn ext_pow_u64(&self, a: &Ext, mut e: u64) -> Ext {
        let mut acc = self.ext_one();
        let mut base = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.ext_mul(&acc, &base);
            }
            base = self.ext_mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// `a^e` by square-and-multiply.
    pub fn ext_pow(&self, a: &Ext, e: &BigUint) -> Ext {
        let mut acc = self.ext_one();
        for bit in (0..e.bits()).rev() {
            acc = self.ext_mul(&acc, &acc);
            if e.bit(bit) {
                acc = self.ext_mul(&acc, a);
            }
        }
        acc
    }

    fn apply_frob1(&self, x: &Ext) -> Ext {
        let table = &self.frob[1];
        let mut out = self.ext_zero();
        for (c, img) in x.0.iter().zip(table) {
            let c = self.conj(*c);
            if c.is_zero() {
                continue;
            }
            out = self.ext_add(&out, &self.ext_scale(c, img));
        }
        out
    }

    /// x ↦ x^{q^k}; `k` is taken modulo 2n.
    pub fn frobenius_q(&self, x: &Ext, k: u32) -> Ext {
        let k = (k % (2 * self.n)) as usize;
        if k == 0 {
            return x.clone();
        }
        let table = &self.frob[k];
        let mut out = vec![0u32; self.n as usize];
        for (c, img) in x.0.iter().zip(table) {
            let c = if k % 2 == 1 { self.conj(*c) } else { *c };
            if c.is_zero() {
                continue;
            }
            for (o, y) in out.iter_mut().zip(&img.0) {
                *o = self.quad.add(*o, self.quad.mul(c.0, y.0));
            }
        }
        Ext(out.into_iter().map(Gf).collect())
    }

    /// x^{q^k} by repeated application of the single-step Frobenius table.
    pub fn frobenius_iterated(&self, x: &Ext, k: u32) -> Ext {
        (0..k).fold(x.clone(), |acc, _| self.apply_frob1(&acc))
    }

    /// Relative trace Tr: F_{q^{2n}} → F_{q²}, x ↦ Σ_{k<n} x^{q^{2k}}.
    #[inline]
    pub fn relative_trace(&self, x: &Ext) -> Gf {
        let mut acc = 0u32;
        for (c, t) in x.0.iter().zip(&self.trace_basis) {
            acc = self.quad.add(acc, self.quad.mul(c.0, t.0));
        }
        Gf(acc)
    }

    /// Relative trace by direct summation of Frobenius images.
    pub fn relative_trace_direct(&self, x: &Ext) -> Ext {
        (0..self.n).fold(self.ext_zero(), |acc, k| self.ext_add(&acc, &self.frobenius_q(x, 2 * k)))
    }

    /// The `index`-th top field element in code order.
    pub fn ext_from_index(&self, mut index: u64) -> Ext {
        let base = self.quad_size() as u64;
        let mut x = self.ext_zero();
        // coefficient 0 most significant, matching the derived ordering
        for slot in x.0.iter_mut().rev() {
            *slot = Gf((index % base) as u32);
            index /= base;
        }
        x
    }

    /// All top field elements in code order (None when there are too many
    /// to address).
    pub fn ext_elements(&self) -> Option<impl Iterator<Item = Ext> + '_> {
        let size = self.top_size()?;
        Some((0..size).map(move |i| self.ext_from_index(i)))
    }

    /// F_p-coordinates of a top field element.
    pub fn ext_digits(&self, x: &Ext) -> Vec<u32> {
        x.0.iter().flat_map(|c| self.quad_digits(*c)).collect()
    }

    pub fn ext_from_digits(&self, digits: &[u32]) -> Ext {
        let w = 2 * self.m as usize;
        Ext(digits.chunks(w).map(|d| self.quad_from_digits(d)).collect())
    }

    /// The subfield F_{q^n} ⊂ F_{q^{2n}}, as the F_p-kernel of x ↦ x^{q^n} − x,
    /// sorted.
    pub fn subfield_fqn(&self) -> Vec<Ext> {
        let dim = self.total_degree() as usize;
        let cols: Vec<Vec<u32>> = (0..dim)
            .map(|t| {
                let mut e = vec![0u32; dim];
                e[t] = 1;
                let x = self.ext_from_digits(&e);
                let y = self.ext_sub(&self.frobenius_q(&x, self.n), &x);
                self.ext_digits(&y)
            })
            .collect();
        // rows of the matrix whose columns are the images
        let rows: Vec<Vec<u32>> = (0..dim).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
        let kernel = fp_linalg::kernel(self.p, &rows, dim);
        let mut elements = span_fp(self.p, &kernel)
            .into_iter()
            .map(|d| self.ext_from_digits(&d))
            .collect::<Vec<_>>();
        elements.sort();
        elements
    }

    // ---- level-tagged API ---------------------------------------------------

    fn check_code(&self, level: Level, a: Gf) -> Result<(), FieldError> {
        let limit = match level {
            Level::Prime => self.p,
            Level::Base => self.q,
            Level::Quad | Level::Top => self.quad_size(),
        };
        if a.0 >= limit {
            return Err(FieldError::InvalidElement { level, code: a.0 });
        }
        Ok(())
    }

    fn check_ext(&self, x: &Ext) -> Result<(), FieldError> {
        if x.0.len() != self.n as usize {
            return Err(FieldError::InvalidElement { level: Level::Top, code: x.0.len() as u32 });
        }
        x.0.iter().try_for_each(|c| self.check_code(Level::Quad, *c))
    }

    /// Field arithmetic on two elements of the same level.
    pub fn arith(&self, a: &FieldElement, b: &FieldElement, op: ArithOp) -> Result<FieldElement, FieldError> {
        use FieldElement::*;
        if a.level() != b.level() {
            return Err(FieldError::LevelMismatch { expected: a.level(), found: b.level() });
        }
        match (a, b) {
            (Top(x), Top(y)) => {
                self.check_ext(x)?;
                self.check_ext(y)?;
                let z = match op {
                    ArithOp::Add => self.ext_add(x, y),
                    ArithOp::Sub => self.ext_sub(x, y),
                    ArithOp::Mul => self.ext_mul(x, y),
                    ArithOp::Div => self.ext_div(x, y)?,
                };
                Ok(Top(z))
            }
            (Prime(x), Prime(y)) | (Base(x), Base(y)) | (Quad(x), Quad(y)) => {
                self.check_code(a.level(), *x)?;
                self.check_code(a.level(), *y)?;
                let z = match op {
                    ArithOp::Add => self.add(*x, *y),
                    ArithOp::Sub => self.sub(*x, *y),
                    ArithOp::Mul => self.mul(*x, *y),
                    ArithOp::Div => self.div(*x, *y)?,
                };
                Ok(match a.level() {
                    Level::Prime => Prime(z),
                    Level::Base => Base(z),
                    _ => Quad(z),
                })
            }
            _ => unreachable!("levels already compared"),
        }
    }
}

/// All F_p-linear combinations of the given vectors, in lexicographic order
/// of the coefficient tuples.
pub fn span_fp(p: u32, basis: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let len = basis.first().map_or(0, |b| b.len());
    let mut out = vec![vec![0u32; len]];
    for b in basis {
        let mut next = Vec::with_capacity(out.len() * p as usize);
        for v in &out {
            for c in 0..p {
                next.push(v.iter().zip(b).map(|(&x, &y)| (x + c * y) % p).collect());
            }
        }
        out = next;
    }
    out
}

pub fn to_digits(mut code: u32, p: u32, len: u32) -> Vec<u32> {
    (0..len)
        .map(|_| {
            let d = code % p;
            code /= p;
            d
        })
        .collect()
}

pub(crate) fn from_digits(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

#[cfg(test)]
mod tests;
