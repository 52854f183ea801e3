//! JSON encodings of field elements and matrices, JSON-lines code files,
//! and the on-disk cache selected by `HRDC_CACHE_DIR`.
//!
//! A code file starts with a header line
//! `{"tower": {p, m, n, moduli}, "n": N, "size": S}` followed by one matrix
//! per line. A matrix is an n×n array of F_{q²} entries; an entry is its
//! pair of F_q coefficients `[c0, c1]` (value c0 + c1·y), each an array of m
//! F_p digits, lowest degree first.

use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::distributions::{CodeSet, DistError};
use crate::field::{build_tower, prime_power, to_digits, FieldError, FieldTower, Gf, TowerConfig, TowerDescriptor};
use crate::hermitian::{HermitianError, HermitianMatrix, Matrix};
use crate::scheme::{q_explicit_with, EigenError, NegQBinom, QTable};

/// Environment variable naming the cache directory.
pub const CACHE_ENV: &str = "HRDC_CACHE_DIR";

#[derive(Debug, Error)]
pub enum IoError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Hermitian(#[from] HermitianError),
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error(transparent)]
    Eigen(#[from] EigenError),
}

fn format_err(line: usize, msg: impl Into<String>) -> IoError {
    IoError::Format { line, msg: msg.into() }
}

/// `[c0 digits, c1 digits]`
pub fn entry_to_json(t: &FieldTower, a: Gf) -> Value {
    let q = t.q();
    let (p, m) = (t.p(), t.m());
    Value::from(vec![to_digits(a.0 % q, p, m), to_digits(a.0 / q, p, m)])
}

pub fn entry_from_json(t: &FieldTower, v: &Value) -> Option<Gf> {
    let pair = v.as_array().filter(|a| a.len() == 2)?;
    let (p, m) = (t.p() as u64, t.m() as usize);
    let mut codes = [0u32; 2];
    for (slot, coeff) in codes.iter_mut().zip(pair) {
        let digits = coeff.as_array().filter(|d| d.len() == m)?;
        let mut code = 0u64;
        for d in digits.iter().rev() {
            let d = d.as_u64().filter(|&d| d < p)?;
            code = code * p + d;
        }
        *slot = code as u32;
    }
    Some(Gf(codes[0] + t.q() * codes[1]))
}

pub fn matrix_to_json(t: &FieldTower, a: &Matrix) -> Value {
    Value::from(
        a.row_vecs().into_iter().map(|row| Value::from(row.into_iter().map(|x| entry_to_json(t, x)).collect::<Vec<_>>())).collect::<Vec<_>>(),
    )
}

pub fn matrix_from_json(t: &FieldTower, v: &Value) -> Option<Matrix> {
    let rows = v.as_array()?;
    let n = rows.len();
    let mut out = Vec::with_capacity(n);
    for row in rows {
        let row = row.as_array().filter(|r| r.len() == n)?;
        out.push(row.iter().map(|e| entry_from_json(t, e)).collect::<Option<Vec<Gf>>>()?);
    }
    Some(Matrix::from_rows(out))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeHeader {
    pub tower: TowerDescriptor,
    pub n: usize,
    pub size: usize,
}

/// Writes the header and one line per matrix, in the set's sorted order.
pub fn write_code(code: &CodeSet, mut w: impl Write) -> Result<(), IoError> {
    let t = code.tower();
    let header = CodeHeader { tower: t.descriptor(), n: code.n(), size: code.len() };
    writeln!(w, "{}", serde_json::to_string(&header).expect("header serializes"))?;
    for m in code.matrices() {
        writeln!(w, "{}", matrix_to_json(t, m.matrix()))?;
    }
    Ok(())
}

pub fn write_code_file(code: &CodeSet, path: &Path) -> Result<(), IoError> {
    let mut buf = Vec::new();
    write_code(code, &mut buf)?;
    fs::write(path, buf)?;
    Ok(())
}

/// Reads a code file; every matrix is checked to be Hermitian over the
/// header's tower.
pub fn read_code(r: impl BufRead) -> Result<CodeSet, IoError> {
    let mut lines = r.lines();
    let first = lines.next().ok_or_else(|| format_err(1, "missing header line"))??;
    let header: CodeHeader = serde_json::from_str(&first).map_err(|e| format_err(1, e.to_string()))?;
    let tower = Arc::new(cached_tower_from_descriptor(&header.tower)?);
    let mut matrices = Vec::with_capacity(header.size);
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let v: Value = serde_json::from_str(&line).map_err(|e| format_err(lineno, e.to_string()))?;
        let m = matrix_from_json(&tower, &v).ok_or_else(|| format_err(lineno, "malformed matrix"))?;
        if m.rows() != header.n {
            return Err(format_err(lineno, format!("expected a {0}×{0} matrix", header.n)));
        }
        matrices.push(HermitianMatrix::new(m, &tower).map_err(|e| format_err(lineno, e.to_string()))?);
    }
    if matrices.len() != header.size {
        return Err(format_err(0, format!("header says {} matrices, file has {}", header.size, matrices.len())));
    }
    Ok(CodeSet::new(tower, header.n, matrices)?)
}

pub fn read_code_file(path: &Path) -> Result<CodeSet, IoError> {
    read_code(std::io::BufReader::new(fs::File::open(path)?))
}

/// The cache directory from `HRDC_CACHE_DIR`, if set and non-empty.
pub fn cache_dir() -> Option<PathBuf> {
    std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()).map(PathBuf::from)
}

fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension(format!("tmp{}", std::process::id()));
    fs::write(&tmp, bytes)?;
    fs::rename(tmp, path)
}

fn tower_cache_path(dir: &Path, p: u32, m: u32, n: u32) -> PathBuf {
    dir.join(format!("tower-p{p}-m{m}-n{n}.json"))
}

/// Like [`crate::field::tower_for_q`], but reuses moduli stored in the
/// cache directory and stores newly found ones. Unreadable or invalid
/// cache entries are rebuilt.
pub fn cached_tower(q: u64, n: u32) -> Result<FieldTower, FieldError> {
    let (p, m) = prime_power(q)?;
    let Some(dir) = cache_dir() else {
        return build_tower(p, m, n);
    };
    let path = tower_cache_path(&dir, p, m, n);
    if let Some(desc) = fs::read(&path).ok().and_then(|b| serde_json::from_slice::<TowerDescriptor>(&b).ok()) {
        if desc.p == p && desc.m == m && desc.n == n {
            if let Ok(t) = FieldTower::with_moduli(p, m, n, &desc.moduli, TowerConfig::default()) {
                return Ok(t);
            }
        }
    }
    let t = build_tower(p, m, n)?;
    // a failed cache write only costs a rebuild next time
    let _ = write_atomic(&path, serde_json::to_string(&t.descriptor()).expect("descriptor serializes").as_bytes());
    Ok(t)
}

/// Tower for a file header. The moduli must be the canonical ones.
fn cached_tower_from_descriptor(desc: &TowerDescriptor) -> Result<FieldTower, FieldError> {
    let q = (desc.p as u64).pow(desc.m);
    let t = cached_tower(q, desc.n)?;
    if t.moduli() != desc.moduli {
        return FieldTower::from_descriptor(desc);
    }
    Ok(t)
}

#[derive(Serialize, Deserialize)]
struct BinomFile {
    q: u64,
    /// (m, ℓ, value as decimal string)
    entries: Vec<(u32, u32, String)>,
}

fn binom_cache_path(dir: &Path, q: u64) -> PathBuf {
    dir.join(format!("negqbinom-q{q}.json"))
}

/// Negative q-binomials for `q` stored in the cache directory.
pub fn load_binomials(q: u64) -> NegQBinom {
    let mut cache = NegQBinom::new();
    let Some(dir) = cache_dir() else {
        return cache;
    };
    let Some(file) =
        fs::read(binom_cache_path(&dir, q)).ok().and_then(|b| serde_json::from_slice::<BinomFile>(&b).ok())
    else {
        return cache;
    };
    if file.q != q {
        return cache;
    }
    for (m, l, v) in file.entries {
        if let Ok(v) = v.parse::<BigInt>() {
            cache.insert(m, l, q, v);
        }
    }
    cache
}

pub fn store_binomials(q: u64, cache: &NegQBinom) {
    let Some(dir) = cache_dir() else {
        return;
    };
    let entries =
        cache.entries().into_iter().filter(|((_, _, qq), _)| *qq == q).map(|((m, l, _), v)| (m, l, v.to_string())).collect();
    let file = BinomFile { q, entries };
    let _ = write_atomic(&binom_cache_path(&dir, q), serde_json::to_string(&file).expect("serializes").as_bytes());
}

/// Closed-form eigenvalue table using the binomial cache when enabled.
pub fn cached_q_explicit(n: u32, q: u64) -> Result<QTable, EigenError> {
    let mut binom = load_binomials(q);
    let before = binom.len();
    let table = q_explicit_with(n, q, &mut binom)?;
    if binom.len() != before {
        store_binomials(q, &binom);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{construct_thm41, construct_thm43};
    use crate::field::tower_for_q;

    #[test]
    fn entry_round_trip() {
        for q in [2u64, 3, 4, 9] {
            let t = tower_for_q(q, 1).unwrap();
            for a in t.quad_elements() {
                let v = entry_to_json(&t, a);
                assert_eq!(entry_from_json(&t, &v), Some(a));
            }
        }
        let t = tower_for_q(2, 1).unwrap();
        assert_eq!(entry_to_json(&t, Gf(2)).to_string(), "[[0],[1]]");
        assert_eq!(entry_from_json(&t, &serde_json::json!([[2], [0]])), None);
        assert_eq!(entry_from_json(&t, &serde_json::json!([[1]])), None);
    }

    #[test]
    fn code_round_trip_is_byte_stable() {
        for code in [construct_thm41(3, 2, 2).unwrap(), construct_thm43(2, 3).unwrap()] {
            let mut a = Vec::new();
            write_code(&code, &mut a).unwrap();
            let back = read_code(&a[..]).unwrap();
            assert_eq!(back, code);
            let mut b = Vec::new();
            write_code(&back, &mut b).unwrap();
            assert_eq!(a, b);
            assert_eq!(String::from_utf8(a).unwrap().lines().count(), code.len() + 1);
        }
    }

    #[test]
    fn rejects_malformed_files() {
        let code = construct_thm43(2, 2).unwrap();
        let mut buf = Vec::new();
        write_code(&code, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines: Vec<&str> = text.lines().collect();
        // a non-Hermitian matrix
        lines[1] = "[[[[1],[0]],[[0],[1]]],[[[0],[1]],[[0],[0]]]]";
        let err = read_code(lines.join("\n").as_bytes()).unwrap_err();
        assert!(matches!(err, IoError::Format { line: 2, .. }), "{err}");
        let short: Vec<&str> = text.lines().take(3).collect();
        assert!(read_code(short.join("\n").as_bytes()).is_err());
        assert!(read_code("not json\n".as_bytes()).is_err());
        assert!(read_code("".as_bytes()).is_err());
    }
}
