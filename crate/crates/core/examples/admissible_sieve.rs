//! The congruence sieve on s and the two OEIS sequences behind it.

use supersplit::family::{admissible_s, sequence, SequenceKind};

fn main() {
    let bound = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(500);
    let s = admissible_s(bound);
    println!("admissible s < {bound} ({} values):", s.len());
    println!("{s:?}");

    // s = 2t with t in A014945, s = 4u with u in A014957
    let t = sequence(SequenceKind::A014945, bound as u64 / 2);
    let u = sequence(SequenceKind::A014957, bound as u64 / 4);
    println!("\nA014945 below {}: {t:?}", bound / 2);
    println!("A014957 below {}: {u:?}", bound / 4);

    let mut rebuilt: Vec<u32> = std::iter::once(1)
        .chain(t.iter().map(|&t| 2 * t as u32))
        .chain(u.iter().map(|&u| 4 * u as u32))
        .filter(|&x| x < bound)
        .collect();
    rebuilt.sort_unstable();
    rebuilt.dedup();
    assert_eq!(rebuilt, s);
}
