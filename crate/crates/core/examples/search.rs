//! Exact maximum-code search in small X(n,q).

use std::time::Duration;

use hrdc::bounds::{max_code_search, SearchLimits};
use hrdc::distributions::inner_distribution;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (n, q, d) in [(2, 2, 2), (3, 2, 3), (2, 3, 2)] {
        let r = max_code_search(n, q, d, SearchLimits::default())?;
        println!(
            "X({n},{q}), d = {d}: size {} (optimal {}, {} nodes), inner {}",
            r.size,
            r.optimal,
            r.nodes,
            inner_distribution(&r.witness)?
        );
    }
    let limits = SearchLimits { time_cap: Some(Duration::from_secs(2)), ..SearchLimits::default() };
    let r = max_code_search(2, 4, 2, limits)?;
    println!("X(2,4), d = 2 after 2 s: best {} (optimal {})", r.size, r.optimal);
    Ok(())
}
