use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use proptest::prelude::*;
use supersplit::arith::{factorize, modpow, Budget};
use supersplit::curves::{genus_superelliptic, quotient_genera};
use supersplit::family::{family_condition, genus_x, smallest_prime_lemma, sum_components, LemmaVerdict};
use supersplit::split::{eqm_certificate, kani_rosen_check, superelliptic_kani_rosen_data};

fn smallest_prime_naive(n: u64) -> u64 {
    (2..).find(|p| n.is_multiple_of(*p)).unwrap()
}

// 2g - 2 = n(-2) + Σ_P (e_P - 1) over a squarefree h of degree d.
fn rh_genus(n: u64, d: u64) -> u64 {
    let finite = d * (n - 1);
    let infinity = n - n.gcd(&d);
    ((finite + infinity) as i64 - 2 * n as i64 + 2) as u64 / 2
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn smallest_prime_lemma_random(a in -10_000i64..10_000, n in 2u64..100_000) {
        let (a, nb) = (BigInt::from(a), BigInt::from(n));
        let hypothesis = modpow(&a, &nb, &nb).unwrap() == BigInt::from(1);
        let verdict = smallest_prime_lemma(&a, &nb).unwrap();
        if hypothesis {
            let p = smallest_prime_naive(n);
            prop_assert_eq!(verdict.clone(), LemmaVerdict::Holds { p: p.to_string() });
            prop_assert_eq!(a.mod_floor(&BigInt::from(p)), BigInt::from(1));
        } else {
            prop_assert_eq!(verdict, LemmaVerdict::NotApplicable);
        }
    }
}

proptest! {
    #[test]
    fn genus_matches_riemann_hurwitz(n in 2u64..200, d in 1u64..2000) {
        prop_assume!(d > n);
        prop_assert_eq!(genus_superelliptic(n, d).unwrap(), rh_genus(n, d));
    }

    #[test]
    fn split_iff_genera_add(n in 2u64..40, m in 2u64..40, delta in 1u64..300) {
        let c = eqm_certificate(n, m, delta).unwrap();
        let g = rh_genus(n, delta * m);
        let q = quotient_genera(n, delta).unwrap();
        prop_assert_eq!(q.g1, rh_genus(n, delta));
        prop_assert_eq!(q.g2, rh_genus(n, delta + 1));
        prop_assert_eq!(c.splits, g == q.g1 + q.g2);
        prop_assert_eq!(c.splits, c.lhs == c.rhs);
    }

    #[test]
    fn kani_rosen_agrees_with_criterion(n in 2u64..30, m in 2u64..30, delta in 1u64..100) {
        let (gij, w) = superelliptic_kani_rosen_data(n, m, delta).unwrap();
        let verdict = kani_rosen_check(&gij, &w).unwrap();
        prop_assert_eq!(verdict.holds, eqm_certificate(n, m, delta).unwrap().splits);
    }

    #[test]
    fn family_equivalence_off_grid(r in 2i64..2000, m in 2i64..2000, s in 1u32..40) {
        let (r, m) = (BigInt::from(r), BigInt::from(m));
        let equal = sum_components(&r, &m, s).unwrap() == genus_x(&r, s).unwrap();
        prop_assert_eq!(equal, family_condition(&r, &m, s));
    }

    #[test]
    fn factorization_of_products(p in 2u64..1u64 << 40, q in 2u64..1u64 << 40) {
        let n = BigUint::from(p) * BigUint::from(q);
        let f = factorize(&n, &Budget::default()).unwrap();
        prop_assert!(f.is_complete());
        let mut prod = BigUint::from(1u32);
        for (prime, e) in f.factors() {
            prod *= prime.pow(*e);
        }
        prop_assert_eq!(prod, n);
    }
}
