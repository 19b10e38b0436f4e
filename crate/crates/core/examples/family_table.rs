//! Solve r (m s (s+1) - s 2^(s+1)) = 4 (1 + s - 2^s) for every admissible s
//! up to a bound, printing the s | m | r table.
//!
//!     cargo run --release --example family_table -- 200 --allow-large

use supersplit::arith::Budget;
use supersplit::family::{family_table, genus_x, sum_components, SolveOptions, SolveStatus};

fn main() -> supersplit::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let s_max = args.iter().find_map(|a| a.parse().ok()).unwrap_or(50);
    let opts = SolveOptions {
        budget: Budget::millis(60_000),
        allow_large: args.iter().any(|a| a == "--allow-large"),
        cache: None,
    };

    println!("s | m | r");
    for outcome in family_table(s_max, &opts)? {
        for row in outcome.table_rows() {
            println!("{row}");
        }
        for sol in &outcome.solutions {
            // X_{r,s} is a cover only for r >= 2; s = 2 gives r = 1
            if sol.status == SolveStatus::Exact && sol.r >= 2.into() {
                assert_eq!(genus_x(&sol.r, sol.s)?, sum_components(&sol.r, &sol.m, sol.s)?);
            }
        }
    }
    Ok(())
}
