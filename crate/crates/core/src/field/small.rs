//! Table-driven arithmetic for the small fields F_p, F_q and F_{q²}.
//!
//! Elements are encoded as integer codes: the base-p digit expansion of the
//! coefficient vector over F_p. With this encoding a subfield occupies a
//! prefix of the code range (F_p = codes < p, F_q = codes < q inside F_{q²}).

/// Arithmetic on integer-coded elements of a finite field.
pub(crate) trait CodeField {
    fn size(&self) -> u32;
    fn add(&self, a: u32, b: u32) -> u32;
    fn sub(&self, a: u32, b: u32) -> u32;
    fn mul(&self, a: u32, b: u32) -> u32;
    /// Multiplicative inverse; `a` must be nonzero.
    fn inv(&self, a: u32) -> u32;

    fn neg(&self, a: u32) -> u32 {
        self.sub(0, a)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct PrimeField {
    pub p: u32,
}

impl CodeField for PrimeField {
    fn size(&self) -> u32 {
        self.p
    }
    fn add(&self, a: u32, b: u32) -> u32 {
        (a + b) % self.p
    }
    fn sub(&self, a: u32, b: u32) -> u32 {
        (a + self.p - b) % self.p
    }
    fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }
    fn inv(&self, a: u32) -> u32 {
        debug_assert!(a != 0);
        // a^(p-2)
        let p = self.p as u64;
        let mut base = a as u64 % p;
        let mut e = p - 2;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc as u32
    }
}

/// Largest field size for which the add table is materialized.
const ADD_TABLE_LIMIT: u32 = 1 << 10;

/// A field of size p^digits with exp/log multiplication tables.
#[derive(Debug, Clone)]
pub(crate) struct TableField {
    p: u32,
    digits: u32,
    size: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u32>>,
    neg_table: Vec<u32>,
}

impl TableField {
    /// Builds the tables from a reference multiplication on codes.
    pub fn build(p: u32, digits: u32, mul: impl Fn(u32, u32) -> u32) -> Self {
        let size = p.pow(digits);
        let order = size - 1;
        let mut exp = vec![0u32; order as usize];
        let mut log = vec![0u32; size as usize];
        let mut found = false;
        'search: for g in 1..size {
            let mut x = 1u32;
            for k in 0..order {
                if k > 0 && x == 1 {
                    continue 'search;
                }
                exp[k as usize] = x;
                x = mul(x, g);
            }
            if x == 1 {
                found = true;
                break;
            }
        }
        assert!(found, "no primitive element: multiplication does not define a field");
        for (k, &x) in exp.iter().enumerate() {
            log[x as usize] = k as u32;
        }
        let neg_table = (0..size).map(|a| digitwise(p, digits, 0, a, |x, y| (x + p - y) % p)).collect();
        let add_table = (size <= ADD_TABLE_LIMIT).then(|| {
            let mut t = Vec::with_capacity((size * size) as usize);
            for a in 0..size {
                for b in 0..size {
                    t.push(digitwise(p, digits, a, b, |x, y| (x + y) % p));
                }
            }
            t
        });
        TableField { p, digits, size, exp, log, add_table, neg_table }
    }

    /// `a^e` for a nonnegative exponent.
    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = (self.size - 1) as u64;
        let k = (self.log[a as usize] as u64 * (e % order)) % order;
        self.exp[k as usize]
    }
}

fn digitwise(p: u32, digits: u32, a: u32, b: u32, op: impl Fn(u32, u32) -> u32) -> u32 {
    let (mut a, mut b) = (a, b);
    let mut out = 0;
    let mut scale = 1;
    for _ in 0..digits {
        out += op(a % p, b % p) * scale;
        a /= p;
        b /= p;
        scale *= p;
    }
    out
}

impl CodeField for TableField {
    fn size(&self) -> u32 {
        self.size
    }

    #[inline]
    fn add(&self, a: u32, b: u32) -> u32 {
        if self.p == 2 {
            return a ^ b;
        }
        match &self.add_table {
            Some(t) => t[(a * self.size + b) as usize],
            None => digitwise(self.p, self.digits, a, b, |x, y| (x + y) % self.p),
        }
    }

    #[inline]
    fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg_table[b as usize])
    }

    #[inline]
    fn neg(&self, a: u32) -> u32 {
        self.neg_table[a as usize]
    }

    #[inline]
    fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let order = self.size - 1;
        let k = self.log[a as usize] + self.log[b as usize];
        self.exp[(if k >= order { k - order } else { k }) as usize]
    }

    fn inv(&self, a: u32) -> u32 {
        assert!(a != 0, "inverse of zero");
        let order = self.size - 1;
        let k = self.log[a as usize];
        self.exp[((order - k) % order) as usize]
    }
}
