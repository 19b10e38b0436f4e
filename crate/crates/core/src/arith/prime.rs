//! Primality testing and the small-prime table used by trial division.

use std::sync::OnceLock;

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Trial division covers every prime below this bound.
pub const TRIAL_DIVISION_BOUND: u32 = 1_000_000;

/// Miller–Rabin rounds with random bases for inputs of 64 bits or more.
pub const PROBABILISTIC_ROUNDS: usize = 40;

// Deterministic for every n < 2^64.
const U64_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// All primes below [`TRIAL_DIVISION_BOUND`], ascending.
pub fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| sieve(TRIAL_DIVISION_BOUND))
}

pub(super) fn sieve(bound: u32) -> Vec<u32> {
    let bound = bound as usize;
    let mut composite = vec![false; bound];
    let mut primes = Vec::new();
    for i in 2..bound {
        if composite[i] {
            continue;
        }
        primes.push(i as u32);
        let mut j = i * i;
        while j < bound {
            composite[j] = true;
            j += i;
        }
    }
    primes
}

#[inline]
fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, n: u64) -> u64 {
    let mut acc = 1 % n;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, n);
        }
        base = mul_mod(base, base, n);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin for 64-bit inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &U64_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &a in &U64_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

/// Primality test: exact below 2^64, [`PROBABILISTIC_ROUNDS`] Miller–Rabin
/// rounds above. Bases are drawn from a generator seeded by `n`, so the
/// answer for a given input never changes between runs.
pub fn is_prime(n: &BigUint) -> bool {
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    for &p in &small_primes()[..64] {
        if (n % p).is_zero() {
            return false;
        }
    }
    let one = BigUint::one();
    let n_minus_one = n - &one;
    let s = n_minus_one.trailing_zeros().unwrap_or(0);
    let d = &n_minus_one >> s;

    let mut seed = [0u8; 32];
    for (slot, byte) in seed.iter_mut().zip(n.to_bytes_le()) {
        *slot = byte;
    }
    let mut rng = ChaCha20Rng::from_seed(seed);
    let two = BigUint::from(2u32);

    'rounds: for round in 0..PROBABILISTIC_ROUNDS {
        let a = if round == 0 {
            two.clone()
        } else {
            rng.gen_biguint_range(&two, &n_minus_one)
        };
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_one {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_one {
                continue 'rounds;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn naive(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn sieve_counts() {
        // pi(10^6)
        assert_eq!(small_primes().len(), 78_498);
        assert_eq!(small_primes()[..5], [2, 3, 5, 7, 11]);
        assert_eq!(*small_primes().last().unwrap(), 999_983);
    }

    #[test]
    fn matches_trial_division_below_20000() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime_u64(n), naive(n), "n = {n}");
        }
    }

    #[test]
    fn strong_pseudoprimes_rejected() {
        // strong pseudoprimes to several small bases
        for n in [2047u64, 1_373_653, 25_326_001, 3_215_031_751, 2_152_302_898_747, 3_474_749_660_383, 341_550_071_728_321, 3_825_123_056_546_413_051] {
            assert!(!is_prime_u64(n), "{n}");
        }
        // Carmichael numbers
        for n in [561u64, 1105, 1729, 2465, 2821, 6601, 8911] {
            assert!(!is_prime_u64(n));
        }
    }

    #[test]
    fn big_inputs() {
        let m127 = (BigUint::one() << 127u32) - 1u32;
        assert!(is_prime(&m127));
        let m128 = (BigUint::one() << 128u32) - 1u32;
        assert!(!is_prime(&m128));
        let p: BigUint = "37277251491763635481137535334549611".parse().unwrap();
        assert!(is_prime(&p));
        let q = &p * BigUint::from(5355711182274845549u64);
        assert!(!is_prime(&q));
        assert!(is_prime(&BigUint::from(18446744073709551557u64)));
    }
}
