//! Arbitrary-precision integer utilities: modular exponentiation,
//! multiplicative order, factorization and divisor enumeration.

mod cache;
mod ecm;
mod factor;
mod prime;

pub use cache::{parse_line, FactorCache, CACHE_ENV};
pub use factor::{factorize, Budget, FactorMap, DEFAULT_BUDGET};
pub(crate) use prime::pow_mod;
pub use prime::{is_prime, is_prime_u64, small_primes, PROBABILISTIC_ROUNDS, TRIAL_DIVISION_BOUND};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::error::{Error, Result};

fn check_modulus(n: &BigInt) -> Result<BigUint> {
    if *n <= BigInt::one() {
        return Err(Error::InvalidModulus(n.to_string()));
    }
    Ok(n.magnitude().clone())
}

fn residue(a: &BigInt, n: &BigUint) -> BigUint {
    let n = BigInt::from_biguint(Sign::Plus, n.clone());
    a.mod_floor(&n).magnitude().clone()
}

/// `a^e mod n`, in `[0, n)`.
pub fn modpow(a: &BigInt, e: &BigInt, n: &BigInt) -> Result<BigInt> {
    let modulus = check_modulus(n)?;
    if e.is_negative() {
        return Err(Error::NegativeExponent(e.to_string()));
    }
    let base = residue(a, &modulus);
    Ok(BigInt::from(base.modpow(e.magnitude(), &modulus)))
}

/// Least `d >= 1` with `a^d = 1 (mod n)`, or `None` when `gcd(a, n) != 1`.
///
/// Starts from `phi(n)` and strips prime factors while the power stays 1, so
/// both `n` and `phi(n)` must factor within the default budget.
pub fn mult_order(a: &BigInt, n: &BigInt) -> Result<Option<BigUint>> {
    let modulus = check_modulus(n)?;
    let base = residue(a, &modulus);
    if !base.gcd(&modulus).is_one() {
        return Ok(None);
    }
    let budget = Budget::default();
    let phi = factorize(&modulus, &budget)?.totient()?;
    let phi_factors = factorize(&phi, &budget)?;
    if !phi_factors.is_complete() {
        return Err(Error::IncompleteFactorization(phi.to_string()));
    }
    let mut order = phi;
    for (p, _) in phi_factors.factors() {
        while order.is_multiple_of(p) {
            let candidate = &order / p;
            if base.modpow(&candidate, &modulus).is_one() {
                order = candidate;
            } else {
                break;
            }
        }
    }
    Ok(Some(order))
}

/// All positive divisors of a completely factored integer, ascending.
pub fn divisors(f: &FactorMap) -> Result<Vec<BigUint>> {
    if !f.is_complete() {
        return Err(Error::IncompleteFactorization(f.n().to_string()));
    }
    let mut out = vec![BigUint::one()];
    for (p, e) in f.factors() {
        let len = out.len();
        let mut power = BigUint::one();
        for _ in 0..*e {
            power *= p;
            for i in 0..len {
                out.push(&out[i] * &power);
            }
        }
    }
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bi(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn fm(n: u64) -> FactorMap {
        factorize(&BigUint::from(n), &Budget::default()).unwrap()
    }

    #[test]
    fn modpow_examples() {
        assert_eq!(modpow(&bi(2), &bi(19), &bi(19)).unwrap(), bi(2));
        assert_eq!(modpow(&bi(2), &bi(43), &bi(43)).unwrap(), bi(2));
        assert_eq!(modpow(&bi(12345), &bi(0), &bi(7)).unwrap(), bi(1));
        assert_eq!(modpow(&bi(-2), &bi(3), &bi(7)).unwrap(), bi(6));
    }

    #[test]
    fn modpow_rejects_bad_input() {
        assert!(matches!(modpow(&bi(2), &bi(3), &bi(1)), Err(Error::InvalidModulus(_))));
        assert!(matches!(modpow(&bi(2), &bi(3), &bi(-5)), Err(Error::InvalidModulus(_))));
        assert!(matches!(modpow(&bi(2), &bi(-1), &bi(5)), Err(Error::NegativeExponent(_))));
    }

    #[test]
    fn mult_order_examples() {
        assert_eq!(mult_order(&bi(4), &bi(9)).unwrap(), Some(BigUint::from(3u32)));
        assert_eq!(mult_order(&bi(1), &bi(97)).unwrap(), Some(BigUint::one()));
        assert_eq!(mult_order(&bi(2), &bi(4)).unwrap(), None);
        assert!(mult_order(&bi(2), &bi(0)).is_err());
        // 2 is a primitive root mod 101
        assert_eq!(mult_order(&bi(2), &bi(101)).unwrap(), Some(BigUint::from(100u32)));
    }

    #[test]
    fn divisor_examples() {
        let to_u = |v: Vec<BigUint>| v.into_iter().map(|d| u64::try_from(d).unwrap()).collect::<Vec<_>>();
        assert_eq!(to_u(divisors(&fm(38)).unwrap()), vec![1, 2, 19, 38]);
        assert_eq!(to_u(divisors(&fm(1)).unwrap()), vec![1]);
        assert_eq!(to_u(divisors(&fm(9)).unwrap()), vec![1, 3, 9]);
    }

    #[test]
    fn divisors_reject_incomplete() {
        let n: BigUint = "12884901083279046317".parse::<BigUint>().unwrap() * 1_000_000_007u64;
        let f = factorize(&n, &Budget::iterations(1)).unwrap();
        if !f.is_complete() {
            assert!(divisors(&f).is_err());
        }
    }

    #[test]
    fn divisor_counts_up_to_20000() {
        for n in 1..=20_000u64 {
            let f = fm(n);
            let ds = divisors(&f).unwrap();
            assert_eq!(BigUint::from(ds.len()), f.divisor_count());
            assert!(ds.windows(2).all(|w| w[0] < w[1]));
            let brute = (1..=n).filter(|d| n % d == 0).count();
            assert_eq!(ds.len(), brute, "n = {n}");
        }
    }

    #[test]
    fn order_divides_totient() {
        for n in 2..=2_000i64 {
            let phi = fm(n as u64).totient().unwrap();
            for a in [2i64, 3, 5, 10, n - 1] {
                if let Some(d) = mult_order(&bi(a), &bi(n)).unwrap() {
                    assert!(phi.is_multiple_of(&d), "a={a} n={n}");
                    assert!(BigUint::from(a.rem_euclid(n) as u64).modpow(&d, &BigUint::from(n as u64)).is_one());
                }
            }
        }
    }

    proptest! {
        #[test]
        fn modpow_matches_repeated_multiplication(a in -1000i64..1000, e in 0u32..10_000, n in 2i64..5000) {
            let mut acc = 1i64;
            for _ in 0..e {
                acc = (acc * a).rem_euclid(n);
            }
            prop_assert_eq!(modpow(&bi(a), &bi(e as i64), &bi(n)).unwrap(), bi(acc % n));
        }

        #[test]
        fn factorization_reconstructs(n in 1u64..u64::MAX) {
            let f = fm(n);
            prop_assert!(f.is_complete());
            let mut prod = BigUint::one();
            for (i, (p, e)) in f.factors().iter().enumerate() {
                prop_assert!(is_prime(p));
                if i > 0 { prop_assert!(f.factors()[i - 1].0 < *p); }
                prod *= p.pow(*e);
            }
            prop_assert_eq!(prod, BigUint::from(n));
        }

        #[test]
        fn divisors_divide(n in 1u64..1_000_000) {
            let f = fm(n);
            let ds = divisors(&f).unwrap();
            prop_assert_eq!(BigUint::from(ds.len()), f.divisor_count());
            for d in &ds {
                prop_assert!((BigUint::from(n) % d) == BigUint::from(0u32));
            }
        }
    }
}
