//! Built-in verification suites run by `hrdc verify`.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;

use crate::constructions::{generator, Family, DEFAULT_CONSTRUCTION_CAP};
use crate::distributions::{
    dual_code, dual_distribution, inner_distribution, inner_distribution_pairwise, min_distance, thm33_distribution,
    CodeSet, InnerDistribution, DEFAULT_DUAL_CAP,
};
use crate::scheme::{count_rank, q_explicit, q_recurrence, verify_identities};

pub const SUITES: [&str; 3] = ["identities", "constructions", "distributions"];

#[derive(Debug, Clone, Serialize)]
pub struct SuiteFailure {
    pub check: String,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: usize,
    pub passed: bool,
    pub failures: Vec<SuiteFailure>,
}

struct Recorder {
    checks: usize,
    failures: Vec<SuiteFailure>,
}

impl Recorder {
    fn new() -> Self {
        Recorder { checks: 0, failures: Vec::new() }
    }

    fn check(&mut self, name: impl Into<String>, ok: bool, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(SuiteFailure { check: name.into(), detail: detail() });
        }
    }

    fn error(&mut self, name: impl Into<String>, e: impl std::fmt::Display) {
        self.check(name, false, || e.to_string());
    }

    fn finish(self, suite: &str) -> SuiteReport {
        SuiteReport { suite: suite.into(), checks: self.checks, passed: self.failures.is_empty(), failures: self.failures }
    }
}

/// Runs a suite by name; `None` for an unknown name.
pub fn run_suite(name: &str) -> Option<SuiteReport> {
    match name {
        "identities" => Some(identities()),
        "constructions" => Some(constructions()),
        "distributions" => Some(distributions()),
        _ => None,
    }
}

/// Eigenvalue identities, agreement of the two closed routes, and the
/// rank-class counts, for n ≤ 6 and q ∈ {2, 3, 4, 5}.
pub fn identities() -> SuiteReport {
    let mut r = Recorder::new();
    for q in [2u64, 3, 4, 5] {
        for n in 1..=6u32 {
            let tag = format!("n={n} q={q}");
            let (explicit, recurrence) = match (q_explicit(n, q), q_recurrence(n, q)) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) | (_, Err(e)) => {
                    r.error(format!("tables {tag}"), e);
                    continue;
                }
            };
            r.check(format!("explicit = recurrence {tag}"), explicit == recurrence, || "tables differ".into());
            let report = verify_identities(&explicit);
            r.check(format!("identities {tag}"), report.passed(), || format!("{:?}", report.failure));
            let counts: Vec<BigInt> = (0..=n).map(|k| count_rank(n, q, k).expect("k in range")).collect();
            let row0_ok = counts.iter().enumerate().all(|(k, c)| explicit.get(k, 0) == c);
            r.check(format!("Q_k(0) = |rank k| {tag}"), row0_ok, || "first column differs from count_rank".into());
            let total: BigInt = counts.iter().sum();
            let expected = num_traits::pow(BigInt::from(q), (n * n) as usize);
            r.check(format!("rank classes partition X {tag}"), total == expected, || format!("{total} != {expected}"));
        }
    }
    r.finish("identities")
}

/// The possible inner distributions of a thm41 code in X(3,2).
pub const X32_DISTRIBUTIONS: [[i64; 4]; 4] = [[1, 0, 21, 42], [1, 0, 29, 34], [1, 0, 37, 26], [1, 0, 45, 18]];

/// (family, n, d, q) for the construction suite.
pub const CONSTRUCTION_MATRIX: [(Family, u32, u32, u64); 14] = [
    (Family::Thm41, 2, 1, 2),
    (Family::Thm41, 3, 2, 2),
    (Family::Thm41, 4, 3, 2),
    (Family::Thm41, 2, 1, 3),
    (Family::Thm42, 1, 1, 3),
    (Family::Thm42, 3, 3, 2),
    (Family::Thm42, 3, 1, 2),
    (Family::Thm42, 5, 3, 2),
    (Family::ZeroDiag, 2, 2, 2),
    (Family::ZeroDiag, 3, 2, 2),
    (Family::SymDn, 3, 3, 2),
    (Family::SymDn, 4, 4, 2),
    (Family::Thm43, 2, 2, 2),
    (Family::Thm43, 4, 4, 2),
];

/// Size a family is meant to reach: q^{n(n−d+1)}, or q^n + 1 for thm43.
pub fn expected_size(family: Family, n: u32, d: u32, q: u64) -> BigInt {
    let d = family.designed_distance(n, d);
    match family {
        Family::Thm43 => num_traits::pow(BigInt::from(q), n as usize) + 1,
        _ => num_traits::pow(BigInt::from(q), (n * (n - d + 1)) as usize),
    }
}

/// Minimum distance of a code: from the element ranks when additive,
/// otherwise from all pairs.
pub fn code_min_distance(code: &CodeSet) -> Result<usize, crate::distributions::DistError> {
    if code.is_additive() {
        let census = code.rank_census();
        Ok(census.iter().enumerate().skip(1).find(|(_, &c)| c > 0).map_or(code.n() + 1, |(i, _)| i))
    } else {
        Ok(min_distance(&inner_distribution_pairwise(code)?))
    }
}

/// Sizes, additivity and distances over [`CONSTRUCTION_MATRIX`], plus the
/// known inner distributions.
pub fn constructions() -> SuiteReport {
    let mut r = Recorder::new();
    for (family, n, d, q) in CONSTRUCTION_MATRIX {
        let tag = format!("{family} n={n} d={d} q={q}");
        let code = match generator(family, n, d, q, DEFAULT_CONSTRUCTION_CAP).and_then(|g| g.materialize(DEFAULT_CONSTRUCTION_CAP)) {
            Ok(c) => c,
            Err(e) => {
                r.error(format!("construct {tag}"), e);
                continue;
            }
        };
        let expected = expected_size(family, n, d, q);
        r.check(format!("size {tag}"), BigInt::from(code.len()) == expected, || format!("{} != {expected}", code.len()));
        r.check(format!("additivity {tag}"), code.is_additive() == family.is_additive(), || {
            format!("additive = {}, expected {}", code.is_additive(), family.is_additive())
        });
        let designed = family.designed_distance(n, d) as usize;
        match code_min_distance(&code) {
            Ok(md) => r.check(format!("min distance {tag}"), md >= designed, || format!("{md} < {designed}")),
            Err(e) => r.error(format!("min distance {tag}"), e),
        }
        if family == Family::Thm41 && (n, d, q) == (3, 2, 2) {
            match inner_distribution(&code) {
                Ok(inner) => {
                    let listed = X32_DISTRIBUTIONS.iter().any(|v| inner == InnerDistribution::from_integers(v.iter().copied()));
                    r.check(format!("listed X(3,2) distribution {tag}"), listed, || format!("{inner} is not listed"));
                }
                Err(e) => r.error(format!("inner {tag}"), e),
            }
        }
        if family == Family::Thm42 && d % 2 == 1 && code.len() <= 1 << 12 {
            let got = inner_distribution(&code);
            let want = thm33_distribution(n, d, q, &BigInt::from(code.len()));
            match (got, want) {
                (Ok(a), Ok(b)) => r.check(format!("closed form {tag}"), a == b, || format!("{a} != {b}")),
                (Err(e), _) | (_, Err(e)) => r.error(format!("closed form {tag}"), e),
            }
        }
    }
    r.finish("constructions")
}

/// Census versus pairwise distributions, nonnegativity and divisibility of
/// dual distributions, and duality for small additive codes.
pub fn distributions() -> SuiteReport {
    let mut r = Recorder::new();
    let cases: [(Family, u32, u32, u64); 7] = [
        (Family::Thm41, 3, 2, 2),
        (Family::Thm41, 2, 1, 3),
        (Family::Thm42, 3, 3, 2),
        (Family::ZeroDiag, 2, 2, 2),
        (Family::ZeroDiag, 2, 2, 3),
        (Family::SymDn, 3, 3, 2),
        (Family::Thm43, 2, 2, 2),
    ];
    for (family, n, d, q) in cases {
        let tag = format!("{family} n={n} d={d} q={q}");
        let code = match generator(family, n, d, q, DEFAULT_CONSTRUCTION_CAP).and_then(|g| g.materialize(DEFAULT_CONSTRUCTION_CAP)) {
            Ok(c) => c,
            Err(e) => {
                r.error(format!("construct {tag}"), e);
                continue;
            }
        };
        let (inner, pairwise) = match (inner_distribution(&code), inner_distribution_pairwise(&code)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                r.error(format!("inner {tag}"), e);
                continue;
            }
        };
        r.check(format!("census = pairwise {tag}"), inner == pairwise, || format!("{inner} != {pairwise}"));
        let table = q_explicit(n, q).expect("valid parameters");
        let dual = match dual_distribution(&inner, &table) {
            Ok(d) => d,
            Err(e) => {
                r.error(format!("dual distribution {tag}"), e);
                continue;
            }
        };
        let size = BigRational::from_integer(code.len().into());
        let total = num_traits::pow(BigRational::from_integer(q.into()), (n * n) as usize);
        r.check(format!("A'_0 = |Y| {tag}"), *dual.get(0) == size, || format!("A'_0 = {}", dual.get(0)));
        r.check(format!("sum A' = |X| {tag}"), dual.values().iter().sum::<BigRational>() == total, || {
            "dual distribution does not sum to |X|".into()
        });
        if !code.is_additive() {
            continue;
        }
        let divisible = dual.values().iter().all(|v| (v / &size).is_integer());
        r.check(format!("|Y| divides A' {tag}"), divisible, || format!("dual {:?}", dual.to_strings()));
        match dual_code(&code, DEFAULT_DUAL_CAP) {
            Ok(perp) => {
                let prod = BigRational::from_integer((code.len() * perp.len()).into());
                r.check(format!("|Y||Y⊥| = |X| {tag}"), prod == total, || format!("{} · {}", code.len(), perp.len()));
                match inner_distribution(&perp) {
                    Ok(perp_inner) => {
                        let scaled: Vec<BigRational> = dual.values().iter().map(|v| v / &size).collect();
                        r.check(format!("inner(Y⊥) = A'/|Y| {tag}"), perp_inner.values() == scaled.as_slice(), || {
                            format!("{perp_inner}")
                        });
                    }
                    Err(e) => r.error(format!("inner(Y⊥) {tag}"), e),
                }
            }
            Err(e) => r.error(format!("dual code {tag}"), e),
        }
    }
    r.finish("distributions")
}
