//! Integer factorization: trial division, Brent's variant of Pollard rho,
//! then the elliptic-curve method, all under one wall-clock and work budget.

use std::cell::Cell;
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use super::ecm::ecm;
use super::prime::{is_prime, small_primes, TRIAL_DIVISION_BOUND};
use crate::error::{Error, Result};

/// Default wall-clock allowance for one factorization.
pub const DEFAULT_BUDGET: Duration = Duration::from_secs(30);

// Iterations of the rho map between gcd checks.
const RHO_BATCH: u64 = 128;
// Rho steps per composite before handing over to elliptic curves.
const RHO_CAP: u64 = 1 << 16;

/// Limits for a single [`factorize`] call. Running out is not an error: the
/// result comes back with `complete = false`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub wall: Duration,
    /// Cap on total work: rho map evaluations plus curve ladder steps, `None`
    /// for unlimited.
    pub max_iterations: Option<u64>,
}

impl Budget {
    pub fn wall(wall: Duration) -> Self {
        Budget { wall, max_iterations: None }
    }

    pub fn millis(ms: u64) -> Self {
        Self::wall(Duration::from_millis(ms))
    }

    /// Deterministic budget: unlimited time, bounded work.
    pub fn iterations(max: u64) -> Self {
        Budget { wall: Duration::MAX, max_iterations: Some(max) }
    }
}

impl Default for Budget {
    fn default() -> Self {
        Self::wall(DEFAULT_BUDGET)
    }
}

/// Prime factorization of a positive integer, possibly partial.
///
/// When complete, the product of `p^e` over `factors` is `n`. When the budget
/// ran out, `cofactor` holds the unfactored composite part and the listed
/// primes times the cofactor is `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "repr::FactorMapRepr", into = "repr::FactorMapRepr")]
pub struct FactorMap {
    n: BigUint,
    factors: Vec<(BigUint, u32)>,
    cofactor: Option<BigUint>,
}

impl FactorMap {
    /// Builds a map from raw parts, checking every invariant.
    pub fn new(n: BigUint, factors: Vec<(BigUint, u32)>, cofactor: Option<BigUint>) -> Result<Self> {
        if n.is_zero() {
            return Err(Error::NonPositive("0".into()));
        }
        let mut product = BigUint::one();
        for (i, (p, e)) in factors.iter().enumerate() {
            if *e == 0 {
                return Err(Error::Parse(format!("zero exponent for {p}")));
            }
            if i > 0 && factors[i - 1].0 >= *p {
                return Err(Error::Parse("primes must be strictly increasing".into()));
            }
            if !is_prime(p) {
                return Err(Error::Parse(format!("{p} is not prime")));
            }
            product *= p.pow(*e);
        }
        if let Some(c) = &cofactor {
            if *c <= BigUint::one() || is_prime(c) {
                return Err(Error::Parse(format!("cofactor {c} is not composite")));
            }
            product *= c;
        }
        if product != n {
            return Err(Error::Parse(format!("factors multiply to {product}, not {n}")));
        }
        Ok(FactorMap { n, factors, cofactor })
    }

    fn from_primes(n: BigUint, mut primes: Vec<BigUint>, cofactor: Option<BigUint>) -> Self {
        primes.sort();
        let mut factors: Vec<(BigUint, u32)> = Vec::new();
        for p in primes {
            match factors.last_mut() {
                Some((q, e)) if *q == p => *e += 1,
                _ => factors.push((p, 1)),
            }
        }
        FactorMap { n, factors, cofactor }
    }

    pub fn n(&self) -> &BigUint {
        &self.n
    }

    pub fn factors(&self) -> &[(BigUint, u32)] {
        &self.factors
    }

    /// Unfactored composite remainder, present only when incomplete.
    pub fn cofactor(&self) -> Option<&BigUint> {
        self.cofactor.as_ref()
    }

    pub fn is_complete(&self) -> bool {
        self.cofactor.is_none()
    }

    pub fn smallest_prime(&self) -> Option<&BigUint> {
        self.factors.first().map(|(p, _)| p)
    }

    /// Number of divisors, `prod(e_i + 1)`; only meaningful when complete.
    pub fn divisor_count(&self) -> BigUint {
        self.factors.iter().map(|(_, e)| BigUint::from(e + 1)).product()
    }

    /// Euler's totient of `n`. Requires a complete factorization.
    pub fn totient(&self) -> Result<BigUint> {
        if !self.is_complete() {
            return Err(Error::IncompleteFactorization(self.n.to_string()));
        }
        Ok(self
            .factors
            .iter()
            .map(|(p, e)| p.pow(e - 1) * (p - 1u32))
            .product())
    }

    /// Factorization of `self.n * other.n`. Both must be complete.
    pub fn merge(&self, other: &FactorMap) -> Result<FactorMap> {
        if !self.is_complete() || !other.is_complete() {
            return Err(Error::IncompleteFactorization(format!("{} * {}", self.n, other.n)));
        }
        let mut primes = Vec::new();
        for (p, e) in self.factors.iter().chain(other.factors.iter()) {
            primes.extend(std::iter::repeat_n(p.clone(), *e as usize));
        }
        Ok(Self::from_primes(&self.n * &other.n, primes, None))
    }

    /// Factorization of `self.n / d`, where `d` divides `n` and is given by
    /// its own factorization. Both must be complete.
    pub fn divide(&self, d: &FactorMap) -> Result<FactorMap> {
        if !self.is_complete() || !d.is_complete() {
            return Err(Error::IncompleteFactorization(format!("{} / {}", self.n, d.n)));
        }
        let mut factors = self.factors.clone();
        for (p, e) in d.factors() {
            match factors.iter_mut().find(|(q, _)| q == p) {
                Some((_, f)) if *f >= *e => *f -= e,
                _ => return Err(Error::Parse(format!("{} does not divide {}", d.n, self.n))),
            }
        }
        factors.retain(|(_, e)| *e > 0);
        Ok(FactorMap { n: &self.n / &d.n, factors, cofactor: None })
    }

    /// Renders the right-hand side `p1^e1 * p2^e2 * ...` (empty for n = 1).
    pub fn render_factors(&self) -> String {
        let mut parts: Vec<String> = self.factors.iter().map(|(p, e)| format!("{p}^{e}")).collect();
        if let Some(c) = &self.cofactor {
            parts.push(format!("[{c}]"));
        }
        parts.join(" * ")
    }
}

impl fmt::Display for FactorMap {
    /// Cache line format: `N = p1^e1 * p2^e2 * ...`. A composite remainder,
    /// if any, is shown in brackets.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.n, self.render_factors())
    }
}

mod repr {
    use super::*;

    #[derive(Serialize, Deserialize)]
    pub struct FactorMapRepr {
        n: String,
        factors: Vec<(String, u32)>,
        complete: bool,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cofactor: Option<String>,
    }

    impl From<FactorMap> for FactorMapRepr {
        fn from(f: FactorMap) -> Self {
            FactorMapRepr {
                n: f.n.to_string(),
                complete: f.cofactor.is_none(),
                factors: f.factors.iter().map(|(p, e)| (p.to_string(), *e)).collect(),
                cofactor: f.cofactor.map(|c| c.to_string()),
            }
        }
    }

    impl TryFrom<FactorMapRepr> for FactorMap {
        type Error = Error;

        fn try_from(r: FactorMapRepr) -> Result<Self> {
            let parse = |s: &str| s.parse::<BigUint>().map_err(|e| Error::Parse(format!("{s}: {e}")));
            let factors = r
                .factors
                .iter()
                .map(|(p, e)| Ok((parse(p)?, *e)))
                .collect::<Result<Vec<_>>>()?;
            let cofactor = r.cofactor.as_deref().map(parse).transpose()?;
            if r.complete != cofactor.is_none() {
                return Err(Error::Parse("complete flag disagrees with cofactor".into()));
            }
            FactorMap::new(parse(&r.n)?, factors, cofactor)
        }
    }
}

pub(super) struct Limits {
    deadline: Option<Instant>,
    remaining: Cell<Option<u64>>,
}

impl Limits {
    pub(super) fn new(budget: &Budget) -> Self {
        Limits {
            deadline: Instant::now().checked_add(budget.wall),
            remaining: Cell::new(budget.max_iterations),
        }
    }

    /// Charges `steps` units of work; false once the budget is spent.
    pub(super) fn charge(&self, steps: u64) -> bool {
        if let Some(left) = self.remaining.get() {
            if left < steps {
                self.remaining.set(Some(0));
                return false;
            }
            self.remaining.set(Some(left - steps));
        }
        match self.deadline {
            Some(d) => Instant::now() < d,
            None => true,
        }
    }
}

/// Factors `n > 0`. Primes below 10^6 are found by trial division; larger
/// composites are split with Brent–Pollard rho and elliptic curves until the
/// budget runs out.
pub fn factorize(n: &BigUint, budget: &Budget) -> Result<FactorMap> {
    if n.is_zero() {
        return Err(Error::NonPositive("0".into()));
    }
    let mut primes = Vec::new();
    let mut rest = n.clone();

    if let Some(small) = rest.to_u64() {
        let mut m = small;
        for &p in small_primes() {
            let p = p as u64;
            if p * p > m {
                break;
            }
            while m % p == 0 {
                primes.push(BigUint::from(p));
                m /= p;
            }
        }
        rest = BigUint::from(m);
    } else {
        for &p in small_primes() {
            if BigUint::from(p).pow(2) > rest {
                break;
            }
            loop {
                let (q, r) = rest.div_rem(&BigUint::from(p));
                if !r.is_zero() {
                    break;
                }
                primes.push(BigUint::from(p));
                rest = q;
            }
        }
    }

    if rest.is_one() {
        return Ok(FactorMap::from_primes(n.clone(), primes, None));
    }
    let bound = BigUint::from(TRIAL_DIVISION_BOUND);
    if rest < &bound * &bound || is_prime(&rest) {
        primes.push(rest);
        return Ok(FactorMap::from_primes(n.clone(), primes, None));
    }

    let limits = Limits::new(budget);
    let mut pending = vec![rest];
    let mut stuck: Vec<BigUint> = Vec::new();
    while let Some(c) = pending.pop() {
        match split(&c, &limits) {
            Some(d) => {
                let e = &c / &d;
                for part in [d, e] {
                    if is_prime(&part) {
                        primes.push(part);
                    } else {
                        pending.push(part);
                    }
                }
            }
            None => stuck.push(c),
        }
    }
    let cofactor = if stuck.is_empty() { None } else { Some(stuck.into_iter().product()) };
    Ok(FactorMap::from_primes(n.clone(), primes, cofactor))
}

/// Finds a nontrivial divisor of the odd composite `n`: a short Brent rho
/// run for small factors, then elliptic curves. `None` when the budget runs
/// out.
fn split(n: &BigUint, limits: &Limits) -> Option<BigUint> {
    let mut seed = [0u8; 32];
    for (slot, byte) in seed.iter_mut().zip(n.to_bytes_le()) {
        *slot = byte;
    }
    let mut rng = ChaCha20Rng::from_seed(seed);
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    let mut spent = 0;
    while spent < RHO_CAP {
        let c = rng.gen_biguint_range(&one, n);
        let x0 = rng.gen_biguint_range(&two, n);
        match brent_rho(n, &x0, &c, limits, RHO_CAP - spent) {
            Rho::Found(d) => return Some(d),
            Rho::Cycle(used) => spent += used,
            Rho::CapReached => break,
            Rho::OutOfBudget => return None,
        }
    }
    ecm(n, &mut rng, limits)
}

enum Rho {
    Found(BigUint),
    /// The sequence closed up without a factor after this many steps.
    Cycle(u64),
    CapReached,
    OutOfBudget,
}

fn brent_rho(n: &BigUint, x0: &BigUint, c: &BigUint, limits: &Limits, cap: u64) -> Rho {
    let step = |v: &BigUint| (v * v + c) % n;
    let abs_diff = |a: &BigUint, b: &BigUint| if a > b { a - b } else { b - a };

    let one = BigUint::one();
    let mut y = x0.clone();
    let mut x = y.clone();
    let mut ys = y.clone();
    let mut q = one.clone();
    let mut g = one.clone();
    let mut r: u64 = 1;
    let mut used = 0;

    while g.is_one() {
        x = y.clone();
        for _ in 0..r {
            y = step(&y);
        }
        used += r;
        if !limits.charge(r) {
            return Rho::OutOfBudget;
        }
        let mut k = 0;
        while k < r && g.is_one() {
            ys = y.clone();
            let batch = RHO_BATCH.min(r - k);
            for _ in 0..batch {
                y = step(&y);
                q = (q * abs_diff(&x, &y)) % n;
            }
            used += batch;
            if !limits.charge(batch) {
                return Rho::OutOfBudget;
            }
            g = q.gcd(n);
            k += batch;
        }
        r *= 2;
        if used >= cap && g.is_one() {
            return Rho::CapReached;
        }
    }

    if &g == n {
        // Batch overshot; replay one step at a time from the saved point.
        loop {
            ys = step(&ys);
            g = abs_diff(&x, &ys).gcd(n);
            if !g.is_one() {
                break;
            }
        }
    }
    if &g == n {
        Rho::Cycle(used)
    } else {
        Rho::Found(g)
    }
}
