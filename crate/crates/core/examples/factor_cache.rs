//! Factor 4(2^s - s - 1) under a time budget, remembering finished results
//! in a cache file so later runs skip the work.
//!
//!     cargo run --release --example factor_cache -- /tmp/factors.txt 126 162

use std::time::Instant;

use num_bigint::BigUint;
use supersplit::arith::{Budget, FactorCache};
use supersplit::family::family_numerator;

fn main() -> supersplit::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| std::env::temp_dir().join("supersplit-factors.txt").display().to_string());
    let mut values: Vec<u32> = args.filter_map(|a| a.parse().ok()).collect();
    if values.is_empty() {
        values = vec![18, 42, 60, 84];
    }

    let cache = FactorCache::open(&path)?;
    println!("cache {path}: {} entries", cache.len());
    let budget = Budget::millis(20_000);
    for s in values {
        let n: BigUint = family_numerator(s);
        let start = Instant::now();
        let hit = cache.get(&n).is_some();
        let f = cache.factorize(&n, &budget)?;
        let how = if hit { "cached" } else if f.is_complete() { "factored" } else { "budget ran out" };
        println!("s = {s}: {f}  [{how}, {:.2?}]", start.elapsed());
    }
    Ok(())
}
