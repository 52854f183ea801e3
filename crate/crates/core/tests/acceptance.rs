//! Acceptance criteria, run without the libtest harness so that every
//! criterion prints one PASS/FAIL line even under plain `cargo test`. The
//! process exits nonzero if any criterion fails. All comparisons are exact;
//! runtime budgets are the only tolerances.
//!
//! `--ignored` or `--include-ignored` also runs the slow extended search
//! check, which expects a 2-code of size 16 in X(2,3). The search proves 15,
//! so that check fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_rational::BigRational;

use hrdc::bounds::{bound_additive, bound_even_d, max_code_search, SearchLimits};
use hrdc::constructions::{
    construct_symmetric_dn, construct_thm41, construct_thm42, construct_thm43, construct_zero_diag,
};
use hrdc::distributions::{
    design_strength, dual_code, dual_distribution, inner_distribution, inner_distribution_pairwise, min_distance,
    thm33_distribution, CodeSet, InnerDistribution, DEFAULT_DUAL_CAP,
};
use hrdc::field::tower_for_q;
use hrdc::hermitian::HermitianSpace;
use hrdc::scheme::{count_rank, q_direct, q_explicit, q_recurrence, verify_identities_for};

/// Runtime budgets per criterion.
const BUDGET_1: Duration = Duration::from_secs(10);
const BUDGET_2: Duration = Duration::from_secs(10);
const BUDGET_3: Duration = Duration::from_secs(5);
const BUDGET_4: Duration = Duration::from_secs(120);
const BUDGET_5: Duration = Duration::from_secs(5);
const BUDGET_6: Duration = Duration::from_secs(1);
const BUDGET_7: Duration = Duration::from_secs(5);
const BUDGET_8: Duration = Duration::from_secs(1);
const BUDGET_8_EXTENDED: Duration = Duration::from_secs(600);
const BUDGET_9: Duration = Duration::from_secs(1);
const BUDGET_10: Duration = Duration::from_secs(1);

fn ints(v: &[i64]) -> InnerDistribution {
    InnerDistribution::from_integers(v.iter().copied())
}

fn big(v: u64) -> BigInt {
    BigInt::from(v)
}

fn min_rank(code: &CodeSet) -> usize {
    if code.is_additive() {
        let census = code.rank_census();
        census.iter().enumerate().skip(1).find(|(_, &c)| c > 0).map_or(code.n() + 1, |(i, _)| i)
    } else {
        min_distance(&inner_distribution_pairwise(code).unwrap())
    }
}

fn criterion_1() {
    for q in [2u64, 3, 4, 5] {
        for n in 1..=6 {
            assert_eq!(q_explicit(n, q).unwrap(), q_recurrence(n, q).unwrap(), "n={n} q={q}");
        }
    }
    for (n, q) in [(1, 2), (1, 3), (2, 2), (2, 3)] {
        let direct = q_direct(n, q, 1 << 20).unwrap();
        assert_eq!(direct, q_explicit(n, q).unwrap(), "direct n={n} q={q}");
        assert_eq!(direct, q_recurrence(n, q).unwrap(), "direct n={n} q={q}");
    }
}

fn criterion_2() {
    for q in [2u64, 3, 4, 5] {
        for n in 1..=6 {
            let report = verify_identities_for(n, q).unwrap();
            assert!(report.passed(), "n={n} q={q}: {:?}", report.failure);
        }
    }
}

fn criterion_3() {
    for (n, q) in [(1u32, 2u64), (2, 2), (2, 3), (3, 2)] {
        let t = tower_for_q(q, 1).unwrap();
        let space = HermitianSpace::new(&t, n as usize, 1 << 12).unwrap();
        let mut census = vec![0u64; n as usize + 1];
        for a in space.iter() {
            census[a.rank(&t)] += 1;
        }
        for k in 0..=n {
            assert_eq!(count_rank(n, q, k).unwrap(), big(census[k as usize]), "n={n} q={q} k={k}");
        }
        if (n, q) == (2, 2) {
            assert_eq!(census, vec![1, 5, 10]);
        }
        if (n, q) == (3, 2) {
            assert_eq!(census.iter().sum::<u64>(), 512);
        }
    }
}

fn criterion_4() {
    let codes = [
        ("thm41 (3,2,2)", construct_thm41(3, 2, 2).unwrap(), 3, 2, 2),
        ("thm41 (4,3,2)", construct_thm41(4, 3, 2).unwrap(), 4, 3, 2),
        ("thm42 (3,3,2)", construct_thm42(3, 3, 2).unwrap(), 3, 3, 2),
        ("thm42 (5,3,2)", construct_thm42(5, 3, 2).unwrap(), 5, 3, 2),
        ("zero-diag (3,2)", construct_zero_diag(3, 2).unwrap(), 3, 2, 2),
        ("sym-dn (4,2)", construct_symmetric_dn(4, 2).unwrap(), 4, 4, 2),
    ];
    for (name, code, n, d, q) in codes {
        assert_eq!(big(code.len() as u64), bound_additive(n, d, q).unwrap(), "{name} size");
        assert!(code.is_additive(), "{name} additive");
        assert!(min_rank(&code) >= d as usize, "{name} min distance");
    }
}

fn criterion_5() {
    let inner = inner_distribution(&construct_thm41(3, 2, 2).unwrap()).unwrap();
    let listed = [[1, 0, 21, 42], [1, 0, 29, 34], [1, 0, 37, 26], [1, 0, 45, 18]];
    assert!(listed.iter().any(|v| inner == ints(v)), "{inner} is not one of the listed distributions");
}

fn criterion_6() {
    let code = construct_thm42(3, 3, 2).unwrap();
    assert_eq!(big(code.len() as u64), bound_additive(3, 3, 2).unwrap());
    assert_eq!(code.len(), 8);
    let inner = inner_distribution(&code).unwrap();
    let dual = dual_distribution(&inner, &q_explicit(3, 2).unwrap()).unwrap();
    assert!(design_strength(&dual) >= 1);
    assert_eq!(inner, ints(&[1, 0, 0, 7]));
    assert_eq!(inner, thm33_distribution(3, 3, 2, &big(8)).unwrap());
}

fn criterion_7() {
    let five = construct_thm43(2, 2).unwrap();
    assert_eq!(five.len(), 5);
    let t = five.tower();
    for (i, a) in five.matrices().iter().enumerate() {
        for b in &five.matrices()[i + 1..] {
            assert_eq!(a.sub(b, t).unwrap().rank(t), 2);
        }
    }
    assert_eq!(bound_additive(2, 2, 2).unwrap(), big(4));
    assert!(big(5) > bound_additive(2, 2, 2).unwrap());
    assert!(!five.is_additive());

    let seventeen = construct_thm43(4, 2).unwrap();
    assert_eq!(seventeen.len(), 17);
    assert_eq!(min_distance(&inner_distribution_pairwise(&seventeen).unwrap()), 4);
    assert!(big(17) > bound_additive(4, 4, 2).unwrap());
}

fn criterion_8() {
    let r = max_code_search(2, 2, 2, SearchLimits::default()).unwrap();
    assert!(r.optimal);
    assert_eq!(r.size, 5);
    assert_eq!(min_distance(&inner_distribution(&r.witness).unwrap()), 2);
}

fn criterion_9() {
    for q in [2u64, 3, 4, 5, 7] {
        let b = bound_even_d(2, 2, q).unwrap();
        let expected = big(q * q * q - q * q + q);
        assert_eq!(b.exact, BigRational::from_integer(expected.clone()), "q={q}");
        assert_eq!(b.floor, expected);
    }
}

fn criterion_10() {
    let y = construct_zero_diag(2, 2).unwrap();
    let perp = dual_code(&y, DEFAULT_DUAL_CAP).unwrap();
    assert_eq!(y.len() * perp.len(), 16);
    let dual = dual_distribution(&inner_distribution(&y).unwrap(), &q_explicit(2, 2).unwrap()).unwrap();
    let size = BigRational::from_integer(big(y.len() as u64));
    let scaled: Vec<BigRational> = dual.values().iter().map(|v| v / &size).collect();
    assert_eq!(inner_distribution(&perp).unwrap().values(), scaled.as_slice());
}

type Criterion = (&'static str, &'static str, Duration, fn());

fn run(id: &str, name: &str, budget: Duration, f: fn()) -> bool {
    let start = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(f));
    let elapsed = start.elapsed();
    let (ok, why) = match outcome {
        Ok(()) if elapsed <= budget => (true, String::new()),
        Ok(()) => (false, format!(" (over budget {budget:?})")),
        Err(e) => {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            (false, format!(" ({})", msg.replace('\n', "; ")))
        }
    };
    println!("criterion {id}: {} {name} [{elapsed:.2?}]{why}", if ok { "PASS" } else { "FAIL" });
    ok
}

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let extended = args.iter().any(|a| a == "--ignored" || a == "--include-ignored");
    let only_extended = args.iter().any(|a| a == "--ignored");
    let criteria: [Criterion; 10] = [
        ("1", "eigenvalue routes agree", BUDGET_1, criterion_1),
        ("2", "identity suite", BUDGET_2, criterion_2),
        ("3", "rank-class counts", BUDGET_3, criterion_3),
        ("4", "construction sizes and distances", BUDGET_4, criterion_4),
        ("5", "X(3,2) distribution is listed", BUDGET_5, criterion_5),
        ("6", "odd-d rigidity at (3,3,2)", BUDGET_6, criterion_6),
        ("7", "non-additive codes above the additive bound", BUDGET_7, criterion_7),
        ("8", "maximum 2-code in X(2,2)", BUDGET_8, criterion_8),
        ("9", "even-d bound closed form", BUDGET_9, criterion_9),
        ("10", "duality for the zero-diagonal code", BUDGET_10, criterion_10),
    ];
    // keep panic messages in the result lines only
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = Vec::new();
    if !only_extended {
        for (id, name, budget, f) in criteria {
            if !run(id, name, budget, f) {
                failed.push(id);
            }
        }
    }
    if extended && !run("8-extended", "maximum 2-code in X(2,3) is 16", BUDGET_8_EXTENDED, criterion_8_extended) {
        failed.push("8-extended");
    }
    if failed.is_empty() {
        println!("acceptance: all criteria passed");
    } else {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
}

fn criterion_8_extended() {
    let r = max_code_search(2, 3, 2, SearchLimits::default()).unwrap();
    assert!(r.optimal, "search did not finish");
    assert_eq!(r.size, 16);
}
