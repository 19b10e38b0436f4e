//! Lenstra's elliptic-curve method on Montgomery curves `By^2 = x^3 + Ax^2 + x`
//! in x-only projective coordinates, with Suyama's parametrization and the
//! standard stage-2 continuation.

#![allow(clippy::needless_range_loop)]

use std::sync::{Arc, Mutex};

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, Zero};
use rand_chacha::ChaCha20Rng;

use super::factor::Limits;
use super::prime::sieve;

// (B1, curves) per level; B2 = B2_FACTOR * B1. The last level repeats.
const SCHEDULE: &[(u64, u32)] = &[(2_000, 25), (11_000, 90), (50_000, 300), (250_000, 700), (1_000_000, 1_800)];
const B2_FACTOR: u64 = 50;
// Giant-step width for stage 2.
const WHEEL: u64 = 2_310;

// Widest modulus handled, in 64-bit limbs.
const MAX_LIMBS: usize = 32;

type Limbs = [u64; MAX_LIMBS];

/// Montgomery arithmetic modulo an odd `n`: residues are kept as `xR mod n`
/// with `R = 2^(64k)`.
struct Mont {
    n: Limbs,
    k: usize,
    // -n^-1 mod 2^64
    n_inv: u64,
    r2: Limbs,
}

impl Mont {
    fn new(n: &BigUint) -> Option<Self> {
        let digits = n.to_u64_digits();
        let k = digits.len();
        if k > MAX_LIMBS || n.is_even() {
            return None;
        }
        let mut limbs = [0; MAX_LIMBS];
        limbs[..k].copy_from_slice(&digits);
        let mut inv = 1u64;
        for _ in 0..6 {
            inv = inv.wrapping_mul(2u64.wrapping_sub(digits[0].wrapping_mul(inv)));
        }
        let r2 = (BigUint::one() << (128 * k)) % n;
        let mut mont = Mont { n: limbs, k, n_inv: inv.wrapping_neg(), r2: [0; MAX_LIMBS] };
        mont.r2 = mont.raw(&r2);
        Some(mont)
    }

    fn raw(&self, x: &BigUint) -> Limbs {
        let mut limbs = [0; MAX_LIMBS];
        for (slot, d) in limbs.iter_mut().zip(x.to_u64_digits()) {
            *slot = d;
        }
        limbs
    }

    fn to_mont(&self, x: &BigUint) -> Limbs {
        self.mul(&self.raw(x), &self.r2)
    }

    fn to_big(&self, x: &Limbs) -> BigUint {
        BigUint::from_slice(
            &x[..self.k].iter().flat_map(|&d| [d as u32, (d >> 32) as u32]).collect::<Vec<_>>(),
        )
    }

    fn geq_n(&self, x: &[u64]) -> bool {
        for i in (0..self.k).rev() {
            if x[i] != self.n[i] {
                return x[i] > self.n[i];
            }
        }
        true
    }

    fn sub_n(&self, x: &mut [u64]) {
        let mut borrow = false;
        for i in 0..self.k {
            let (d, b1) = x[i].overflowing_sub(self.n[i]);
            let (d, b2) = d.overflowing_sub(borrow as u64);
            x[i] = d;
            borrow = b1 || b2;
        }
    }

    fn mul(&self, a: &Limbs, b: &Limbs) -> Limbs {
        let k = self.k;
        let mut t = [0u64; MAX_LIMBS + 2];
        for &bi in &b[..k] {
            let mut carry = 0u128;
            for j in 0..k {
                let v = t[j] as u128 + a[j] as u128 * bi as u128 + carry;
                t[j] = v as u64;
                carry = v >> 64;
            }
            let v = t[k] as u128 + carry;
            t[k] = v as u64;
            t[k + 1] = (v >> 64) as u64;

            let m = t[0].wrapping_mul(self.n_inv);
            let mut carry = (t[0] as u128 + m as u128 * self.n[0] as u128) >> 64;
            for j in 1..k {
                let v = t[j] as u128 + m as u128 * self.n[j] as u128 + carry;
                t[j - 1] = v as u64;
                carry = v >> 64;
            }
            let v = t[k] as u128 + carry;
            t[k - 1] = v as u64;
            t[k] = t[k + 1] + (v >> 64) as u64;
        }
        let mut out = [0; MAX_LIMBS];
        out[..k].copy_from_slice(&t[..k]);
        if t[k] != 0 || self.geq_n(&out) {
            self.sub_n(&mut out);
        }
        out
    }

    fn add(&self, a: &Limbs, b: &Limbs) -> Limbs {
        let mut out = [0; MAX_LIMBS];
        let mut carry = false;
        for i in 0..self.k {
            let (s, c1) = a[i].overflowing_add(b[i]);
            let (s, c2) = s.overflowing_add(carry as u64);
            out[i] = s;
            carry = c1 || c2;
        }
        if carry || self.geq_n(&out) {
            self.sub_n(&mut out);
        }
        out
    }

    fn sub(&self, a: &Limbs, b: &Limbs) -> Limbs {
        let mut out = [0; MAX_LIMBS];
        let mut borrow = false;
        for i in 0..self.k {
            let (d, b1) = a[i].overflowing_sub(b[i]);
            let (d, b2) = d.overflowing_sub(borrow as u64);
            out[i] = d;
            borrow = b1 || b2;
        }
        if borrow {
            let mut carry = false;
            for i in 0..self.k {
                let (s, c1) = out[i].overflowing_add(self.n[i]);
                let (s, c2) = s.overflowing_add(carry as u64);
                out[i] = s;
                carry = c1 || c2;
            }
        }
        out
    }
}

#[derive(Clone, Copy)]
struct Point {
    x: Limbs,
    z: Limbs,
}

struct Curve<'a> {
    f: &'a Mont,
    a24: Limbs,
}

enum Outcome {
    Found(BigUint),
    Failed,
    OutOfBudget,
}

impl Curve<'_> {
    fn double(&self, p: &Point) -> Point {
        let f = self.f;
        let s = f.add(&p.x, &p.z);
        let d = f.sub(&p.x, &p.z);
        let ss = f.mul(&s, &s);
        let dd = f.mul(&d, &d);
        let t = f.sub(&ss, &dd);
        let x = f.mul(&ss, &dd);
        let z = f.mul(&t, &f.add(&dd, &f.mul(&self.a24, &t)));
        Point { x, z }
    }

    /// `p + q` given `diff = p - q`.
    fn sum(&self, p: &Point, q: &Point, diff: &Point) -> Point {
        let f = self.f;
        let u = f.mul(&f.sub(&p.x, &p.z), &f.add(&q.x, &q.z));
        let v = f.mul(&f.add(&p.x, &p.z), &f.sub(&q.x, &q.z));
        let plus = f.add(&u, &v);
        let minus = f.sub(&u, &v);
        Point {
            x: f.mul(&diff.z, &f.mul(&plus, &plus)),
            z: f.mul(&diff.x, &f.mul(&minus, &minus)),
        }
    }

    fn scale(&self, p: &Point, k: u64) -> Point {
        if k == 1 {
            return *p;
        }
        let mut r0 = *p;
        let mut r1 = self.double(p);
        for bit in (0..63 - k.leading_zeros()).rev() {
            if (k >> bit) & 1 == 1 {
                r0 = self.sum(&r1, &r0, p);
                r1 = self.double(&r1);
            } else {
                r1 = self.sum(&r1, &r0, p);
                r0 = self.double(&r0);
            }
        }
        r0
    }
}

fn primes_up_to(bound: u64) -> Arc<Vec<u32>> {
    static CACHE: Mutex<Option<Arc<Vec<u32>>>> = Mutex::new(None);
    let mut slot = CACHE.lock().unwrap_or_else(|e| e.into_inner());
    if let Some(p) = slot.as_ref() {
        if p.last().is_some_and(|&l| l as u64 + 1_000 >= bound) || p.len() as u64 >= bound {
            return Arc::clone(p);
        }
    }
    let primes = Arc::new(sieve(bound as u32 + 1));
    *slot = Some(Arc::clone(&primes));
    primes
}

fn nontrivial(g: BigUint, n: &BigUint) -> Option<BigUint> {
    (!g.is_one() && !g.is_zero() && &g != n).then_some(g)
}

/// Looks for a nontrivial divisor of the odd composite `n` with curves drawn
/// from `rng`, until one succeeds or `limits` runs out. Moduli wider than
/// 2048 bits are not attempted.
pub(super) fn ecm(n: &BigUint, rng: &mut ChaCha20Rng, limits: &Limits) -> Option<BigUint> {
    let field = Mont::new(n)?;
    let six = BigUint::from(6u32);
    let mut level = 0;
    loop {
        let (b1, curves) = SCHEDULE[level];
        let b2 = b1 * B2_FACTOR;
        let primes = primes_up_to(b2);
        for _ in 0..curves {
            let sigma = rng.gen_biguint_range(&six, n);
            match run_curve(&field, n, &sigma, b1, b2, &primes, limits) {
                Outcome::Found(d) => return Some(d),
                Outcome::Failed => {}
                Outcome::OutOfBudget => return None,
            }
        }
        level = (level + 1).min(SCHEDULE.len() - 1);
    }
}

fn run_curve(f: &Mont, n: &BigUint, sigma: &BigUint, b1: u64, b2: u64, primes: &[u32], limits: &Limits) -> Outcome {
    let m = |a: &BigUint, b: &BigUint| (a * b) % n;
    let five = BigUint::from(5u32);
    let sq = m(sigma, sigma);
    let u = if sq >= five { sq - five } else { sq + n - five };
    let v = (sigma * 4u32) % n;
    let u3 = m(&m(&u, &u), &u);
    let v3 = m(&m(&v, &v), &v);
    let vu = if v >= u { &v - &u } else { &v + n - &u };
    let num = m(&m(&m(&vu, &vu), &vu), &((&u * 3u32 + &v) % n));
    let den = m(&m(&u3, &v), &BigUint::from(16u32));
    let Some(inv) = den.modinv(n) else {
        return match nontrivial(den.gcd(n), n) {
            Some(d) => Outcome::Found(d),
            None => Outcome::Failed,
        };
    };
    let curve = Curve { f, a24: f.to_mont(&m(&num, &inv)) };
    let mut q = Point { x: f.to_mont(&u3), z: f.to_mont(&v3) };

    // Stage 1: multiply by every prime power up to B1.
    for &p in primes.iter().take_while(|&&p| p as u64 <= b1) {
        let p = p as u64;
        let mut power = p;
        while power <= b1 / p {
            power *= p;
        }
        q = curve.scale(&q, power);
        if !limits.charge(64 - power.leading_zeros() as u64) {
            return Outcome::OutOfBudget;
        }
    }
    let g = f.to_big(&q.z).gcd(n);
    if let Some(d) = nontrivial(g.clone(), n) {
        return Outcome::Found(d);
    }
    if g == *n {
        return Outcome::Failed;
    }

    // Stage 2: one prime p in (B1, B2] per step, written as p = kD ± j.
    let twice = curve.double(&q);
    let mut baby: Vec<Option<Point>> = vec![None; (WHEEL / 2) as usize + 1];
    let (mut prev, mut cur) = (q, q);
    for j in (1..=WHEEL / 2).step_by(2) {
        if j > 1 {
            let next = if j == 3 { curve.sum(&cur, &twice, &q) } else { curve.sum(&cur, &twice, &prev) };
            prev = std::mem::replace(&mut cur, next);
        }
        if j.gcd(&WHEEL) == 1 {
            baby[j as usize] = Some(cur);
        }
    }
    let wheel = curve.scale(&q, WHEEL);
    let mut k = (b1 / WHEEL).max(1);
    let mut giant = curve.scale(&q, k * WHEEL);
    // Only read once k >= 2, where it holds (k - 1)·D·Q.
    let mut before = if k > 1 { curve.scale(&q, (k - 1) * WHEEL) } else { q };
    let mut acc = f.to_mont(&BigUint::one());
    let mut steps = 0u64;
    for &p in primes.iter().skip_while(|&&p| p as u64 <= b1) {
        let p = p as u64;
        if p > b2 {
            break;
        }
        let target = (p + WHEEL / 2) / WHEEL;
        while k < target {
            let next = if k == 1 { curve.double(&wheel) } else { curve.sum(&giant, &wheel, &before) };
            before = std::mem::replace(&mut giant, next);
            k += 1;
        }
        let j = p.abs_diff(k * WHEEL) as usize;
        if let Some(b) = &baby[j] {
            let cross = f.sub(&f.mul(&giant.x, &b.z), &f.mul(&b.x, &giant.z));
            acc = f.mul(&acc, &cross);
        }
        steps += 1;
        if steps.is_multiple_of(256) && !limits.charge(256) {
            return Outcome::OutOfBudget;
        }
    }
    match nontrivial(f.to_big(&acc).gcd(n), n) {
        Some(d) => Outcome::Found(d),
        None => Outcome::Failed,
    }
}
