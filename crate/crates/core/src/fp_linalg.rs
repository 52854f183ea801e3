//! Row reduction over a prime field F_p, used wherever an object is viewed
//! as an F_p-vector space (subfield kernels, radicals, additive spans).

/// Incrementally maintained reduced row-echelon basis over F_p.
#[derive(Debug, Clone)]
pub(crate) struct EchelonBasis {
    p: u32,
    len: usize,
    /// (pivot column, normalized row with 1 at the pivot)
    rows: Vec<(usize, Vec<u32>)>,
}

impl EchelonBasis {
    pub fn new(p: u32, len: usize) -> Self {
        EchelonBasis { p, len, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &mut [u32]) {
        let p = self.p as u64;
        for (pivot, row) in &self.rows {
            let c = v[*pivot] as u64;
            if c == 0 {
                continue;
            }
            for (x, &r) in v.iter_mut().zip(row) {
                *x = ((*x as u64 + (p - c) * r as u64) % p) as u32;
            }
        }
    }

    /// Adds `v` to the span; returns true when it was independent.
    pub fn insert(&mut self, v: &[u32]) -> bool {
        assert_eq!(v.len(), self.len);
        let mut v = v.to_vec();
        self.reduce(&mut v);
        let Some(pivot) = v.iter().position(|&x| x != 0) else {
            return false;
        };
        let p = self.p as u64;
        let inv = inv_mod(v[pivot], self.p) as u64;
        for x in v.iter_mut() {
            *x = (*x as u64 * inv % p) as u32;
        }
        // keep existing rows reduced at the new pivot
        for (_, row) in self.rows.iter_mut() {
            let c = row[pivot] as u64;
            if c != 0 {
                for (x, &r) in row.iter_mut().zip(&v) {
                    *x = ((*x as u64 + (p - c) * r as u64) % p) as u32;
                }
            }
        }
        self.rows.push((pivot, v));
        true
    }

    pub fn contains(&self, v: &[u32]) -> bool {
        let mut v = v.to_vec();
        self.reduce(&mut v);
        v.iter().all(|&x| x == 0)
    }
}

pub(crate) fn inv_mod(a: u32, p: u32) -> u32 {
    let p64 = p as u64;
    let mut base = a as u64 % p64;
    let mut e = p64 - 2;
    let mut acc = 1u64;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p64;
        }
        base = base * base % p64;
        e >>= 1;
    }
    acc as u32
}

/// Rank over F_p of a list of row vectors.
pub(crate) fn rank(p: u32, rows: &[Vec<u32>]) -> usize {
    let Some(first) = rows.first() else { return 0 };
    let mut basis = EchelonBasis::new(p, first.len());
    for r in rows {
        basis.insert(r);
    }
    basis.rank()
}

/// Basis of the right kernel {x : M x = 0} of an r×c matrix given by rows.
pub(crate) fn kernel(p: u32, rows: &[Vec<u32>], cols: usize) -> Vec<Vec<u32>> {
    let mut basis = EchelonBasis::new(p, cols);
    for r in rows {
        basis.insert(r);
    }
    let pivots: Vec<usize> = basis.rows.iter().map(|(c, _)| *c).collect();
    let p64 = p as u64;
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut x = vec![0u32; cols];
            x[free] = 1;
            for (pivot, row) in &basis.rows {
                x[*pivot] = ((p64 - row[free] as u64) % p64) as u32;
            }
            x
        })
        .collect()
}
