//! Maximum d-codes in X(n,q) as maximum cliques in the graph on X(n,q)
//! with A ~ B iff rank(A − B) >= d.
//!
//! Relations are translation invariant, so some maximum code contains 0 and
//! the search only looks at cliques through 0.

use std::sync::Arc;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::distributions::CodeSet;
use crate::field::{tower_for_q, FieldError};
use crate::hermitian::{HermitianError, HermitianMatrix, HermitianSpace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SearchError {
    #[error("d = {d} out of range 1..={n}")]
    DistanceOutOfRange { n: u32, d: u32 },
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Hermitian(#[from] HermitianError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    /// Largest |X(n,q)| accepted.
    pub vertex_cap: u64,
    pub node_cap: Option<u64>,
    pub time_cap: Option<Duration>,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits { vertex_cap: 1 << 10, node_cap: None, time_cap: None }
    }
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub size: usize,
    pub witness: CodeSet,
    /// True when the search finished, so no larger code exists.
    pub optimal: bool,
    pub nodes: u64,
}

#[derive(Clone)]
struct Bitset(Vec<u64>);

impl Bitset {
    fn new(len: usize) -> Self {
        Bitset(vec![0; len.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn first(&self) -> Option<usize> {
        self.0.iter().position(|&w| w != 0).map(|k| k * 64 + self.0[k].trailing_zeros() as usize)
    }

    fn and(&self, other: &Bitset) -> Bitset {
        Bitset(self.0.iter().zip(&other.0).map(|(a, b)| a & b).collect())
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
}

struct Clique<'a> {
    adj: &'a [Bitset],
    best: Vec<usize>,
    current: Vec<usize>,
    nodes: u64,
    limits: SearchLimits,
    start: Instant,
    aborted: bool,
}

impl Clique<'_> {
    /// Greedy sequential coloring of `p` in vertex order; returns vertices
    /// with their color numbers, colors nondecreasing.
    fn color(&self, p: &Bitset) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(p.count());
        let mut uncolored = p.clone();
        let mut color = 0;
        while !uncolored.is_empty() {
            color += 1;
            let mut avail = uncolored.clone();
            while let Some(v) = avail.first() {
                avail.clear(v);
                uncolored.clear(v);
                out.push((v, color));
                avail = Bitset(avail.0.iter().zip(&self.adj[v].0).map(|(a, b)| a & !b).collect());
            }
        }
        out
    }

    fn expand(&mut self, mut p: Bitset) {
        self.nodes += 1;
        if self.limits.node_cap.is_some_and(|cap| self.nodes > cap)
            || self.limits.time_cap.is_some_and(|cap| self.nodes % 256 == 0 && self.start.elapsed() > cap)
        {
            self.aborted = true;
        }
        if self.aborted {
            return;
        }
        let colored = self.color(&p);
        for &(v, c) in colored.iter().rev() {
            if self.current.len() + c <= self.best.len() {
                return;
            }
            self.current.push(v);
            let next = p.and(&self.adj[v]);
            if next.is_empty() {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(next);
            }
            self.current.pop();
            p.clear(v);
            if self.aborted {
                return;
            }
        }
    }
}

/// Exhaustive search for a largest d-code in X(n,q). Vertices are visited
/// in sorted matrix order, so the witness is deterministic. When a limit
/// stops the search, the best code found so far is returned with
/// `optimal = false`.
pub fn max_code_search(n: u32, q: u64, d: u32, limits: SearchLimits) -> Result<SearchResult, SearchError> {
    if d < 1 || d > n {
        return Err(SearchError::DistanceOutOfRange { n, d });
    }
    let tower = Arc::new(tower_for_q(q, n)?);
    let t = &*tower;
    let space = HermitianSpace::new(t, n as usize, limits.vertex_cap)?;
    let all: Vec<HermitianMatrix> = space.iter().collect();
    let ranks: Vec<usize> = all.iter().map(|a| a.rank(t)).collect();
    let far = |a: &HermitianMatrix, b: &HermitianMatrix| {
        ranks[space.index_of(&a.sub(b, t).expect("same dimension")) as usize] >= d as usize
    };
    // candidates: neighbours of the zero matrix (index 0)
    let cand: Vec<usize> = (1..all.len()).filter(|&i| ranks[i] >= d as usize).collect();
    let mut adj = vec![Bitset::new(cand.len()); cand.len()];
    for i in 0..cand.len() {
        for j in i + 1..cand.len() {
            if far(&all[cand[i]], &all[cand[j]]) {
                adj[i].set(j);
                adj[j].set(i);
            }
        }
    }
    let mut root = Bitset::new(cand.len());
    (0..cand.len()).for_each(|i| root.set(i));
    let mut search = Clique {
        adj: &adj,
        best: Vec::new(),
        current: Vec::new(),
        nodes: 0,
        limits,
        start: Instant::now(),
        aborted: false,
    };
    if !cand.is_empty() {
        search.expand(root);
    }
    let mut witness: Vec<HermitianMatrix> = search.best.iter().map(|&i| all[cand[i]].clone()).collect();
    witness.push(HermitianMatrix::zero(n as usize));
    let size = witness.len();
    debug_assert!(adj.iter().enumerate().all(|(i, a)| !a.get(i)));
    Ok(SearchResult {
        size,
        witness: CodeSet::new(tower.clone(), n as usize, witness).expect("one dimension"),
        optimal: !search.aborted,
        nodes: search.nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::{inner_distribution, min_distance};

    fn run(n: u32, q: u64, d: u32) -> SearchResult {
        max_code_search(n, q, d, SearchLimits::default()).unwrap()
    }

    #[test]
    fn x22_maximum_two_code_has_size_five() {
        let r = run(2, 2, 2);
        assert!(r.optimal);
        assert_eq!(r.size, 5);
        assert_eq!(min_distance(&inner_distribution(&r.witness).unwrap()), 2);
        // deterministic witness
        assert_eq!(run(2, 2, 2).witness, r.witness);
    }

    #[test]
    fn d1_gives_whole_space() {
        let r = run(2, 2, 1);
        assert!(r.optimal);
        assert_eq!(r.size, 16);
    }

    #[test]
    fn odd_d_search_meets_additive_bound() {
        let r = run(3, 2, 3);
        assert!(r.optimal);
        assert_eq!(r.size, 8);
    }

    #[test]
    fn full_rank_codes_in_dimension_one() {
        // in X(1,q) every nonzero difference is invertible
        for q in [2u64, 3, 4, 5] {
            assert_eq!(run(1, q, 1).size as u64, q);
        }
    }

    /// Oracle: Bron–Kerbosch with pivoting on the full graph (no rooting at
    /// zero, no coloring bound), adjacency from ranks of differences.
    fn bron_kerbosch_max(n: u32, q: u64, d: u32) -> usize {
        let t = tower_for_q(q, 1).unwrap();
        let all: Vec<HermitianMatrix> = HermitianSpace::new(&t, n as usize, 1 << 10).unwrap().iter().collect();
        let adj: Vec<Vec<bool>> = all
            .iter()
            .map(|a| all.iter().map(|b| a != b && a.sub(b, &t).unwrap().rank(&t) >= d as usize).collect())
            .collect();
        fn bk(adj: &[Vec<bool>], r: usize, p: Vec<usize>, x: Vec<usize>, best: &mut usize) {
            if p.is_empty() && x.is_empty() {
                *best = (*best).max(r);
                return;
            }
            if r + p.len() <= *best {
                return;
            }
            let pivot = *p.iter().chain(&x).max_by_key(|&&u| p.iter().filter(|&&v| adj[u][v]).count()).unwrap();
            let (mut p, mut x) = (p, x);
            for v in p.clone() {
                if adj[pivot][v] {
                    continue;
                }
                let np = p.iter().copied().filter(|&w| adj[v][w]).collect();
                let nx = x.iter().copied().filter(|&w| adj[v][w]).collect();
                bk(adj, r + 1, np, nx, best);
                p.retain(|&w| w != v);
                x.push(v);
            }
        }
        let mut best = 0;
        bk(&adj, 0, (0..all.len()).collect(), Vec::new(), &mut best);
        best
    }

    #[test]
    fn agrees_with_bron_kerbosch() {
        for (n, q, d) in [(2, 2, 2), (2, 2, 1), (2, 3, 2), (1, 4, 1)] {
            assert_eq!(run(n, q, d).size, bron_kerbosch_max(n, q, d), "({n},{q},{d})");
        }
    }

    #[test]
    fn x23_two_codes() {
        let r = run(2, 3, 2);
        assert!(r.optimal);
        assert_eq!(min_distance(&inner_distribution(&r.witness).unwrap()), 2);
        // proven optimum; matches q(q²+1)/2 at q = 3
        assert_eq!(r.size, 15);
    }

    #[test]
    fn limits_stop_the_search() {
        let limits = SearchLimits { node_cap: Some(1), ..SearchLimits::default() };
        let r = max_code_search(3, 2, 2, limits).unwrap();
        assert!(!r.optimal);
        assert!(r.size >= 1);
        assert!(max_code_search(3, 3, 2, SearchLimits::default()).is_err());
        assert!(max_code_search(2, 2, 3, SearchLimits::default()).is_err());
    }
}
