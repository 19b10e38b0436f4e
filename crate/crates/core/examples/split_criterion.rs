//! Which curves y^n = f(x^m) have a Jacobian that splits into the two
//! quotient Jacobians? Prints the certificates for a few triples and counts
//! the splitting triples in a small box, grouped by prime-level case.

use std::collections::BTreeMap;

use supersplit::split::{classify_prime_case, enumerate_splits, eqm_certificate};

fn main() -> supersplit::Result<()> {
    for (n, m, delta) in [(2, 2, 3), (3, 3, 1), (2, 3, 4), (5, 2, 2)] {
        println!("{}", eqm_certificate(n, m, delta)?);
    }

    let splits = enumerate_splits(12, 12, 60);
    println!("\n{} splitting triples with n, m <= 12 and delta <= 60", splits.len());

    let mut by_case: BTreeMap<String, usize> = BTreeMap::new();
    for c in splits.iter().filter(|c| supersplit::arith::is_prime_u64(c.n)) {
        *by_case.entry(classify_prime_case(c.n, c.m, c.delta)?.to_string()).or_default() += 1;
    }
    for (case, count) in by_case {
        println!("  prime n, case {case}: {count}");
    }
    Ok(())
}
