//! Genus relations behind Jacobian decompositions: Accola's relation for a
//! genus-2 curve with V4 acting, and the Kani–Rosen conditions for
//! y^n = f(x^m).

use supersplit::split::{
    accola_check, accola_ie_check, eqm_certificate, kani_rosen_check, superelliptic_kani_rosen_data, IntersectionEntry,
    PartitionData, SubgroupGenus,
};

fn main() -> supersplit::Result<()> {
    let sub = |order, genus| SubgroupGenus { order, genus };
    let mut v4 = PartitionData { order: 4, g: 2, g0: 0, subgroups: vec![sub(2, 0), sub(2, 1), sub(2, 1)], intersections: None };
    println!("V4 on a genus 2 curve: residual {}", accola_check(&v4)?);

    // the same data in inclusion-exclusion form; all intersections are trivial
    let trivial = |indices: Vec<usize>| IntersectionEntry { indices, order: 1, genus: 2 };
    v4.intersections = Some(vec![trivial(vec![1, 2]), trivial(vec![1, 3]), trivial(vec![2, 3]), trivial(vec![1, 2, 3])]);
    println!("inclusion-exclusion residual {}", accola_ie_check(&v4)?);

    v4.subgroups[2].genus = 0;
    println!("with g(X/H3) = 0 instead: residual {}\n", accola_check(&v4)?);

    for (n, m, delta) in [(2, 2, 3), (3, 3, 1), (3, 2, 4)] {
        let (gij, w) = superelliptic_kani_rosen_data(n, m, delta)?;
        let verdict = kani_rosen_check(&gij, &w)?;
        let cert = eqm_certificate(n, m, delta)?;
        println!("n={n} m={m} delta={delta}: g = {} = {} + {}? {}", cert.g, cert.g1, cert.g2, verdict.holds);
        if let Some(d) = verdict.decomposition {
            println!("  {d}");
        }
    }
    Ok(())
}
