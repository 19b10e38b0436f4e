//! Candidate automorphism groups of C_{r,λ,m}, built and checked.

use supersplit::groups::{full_group_candidates, realize, reduced_group, verify_presentation, MAX_CAP};

fn main() -> supersplit::Result<()> {
    for (r, lambda, m, n) in [(3, 1, 2, 3), (2, 1, 3, 2), (2, 1, 2, 4)] {
        let reduced = reduced_group(r, lambda, m, true)?;
        println!("r = {r}, λ = {lambda}, m = {m}: reduced group {reduced}, degree {n} extensions:");
        for p in full_group_candidates(n, m, reduced.kind)? {
            let g = realize(&p)?;
            let v = verify_presentation(&p, MAX_CAP)?;
            println!("  {p}");
            println!("    {v:?}, abelian = {}, class sizes {:?}", g.is_abelian(), g.class_sizes());
        }
        println!();
    }

    let p = &full_group_candidates(4, 2, supersplit::groups::ReducedKind::D2m)?[2];
    println!("GAP input for {}:\n{}", p.tag, p.to_gap());
    Ok(())
}
