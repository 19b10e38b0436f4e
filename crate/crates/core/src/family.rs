//! The complete-intersection family `X_{r,s}` and its superelliptic quotients
//! `C_{r,λ,m}`.
//!
//! `Jac(X_{r,s})` is isogenous to `Π_λ Jac(C_{r,λ,m})` exactly when
//!
//! ```text
//! r (m s (s+1) - s 2^(s+1)) = 4 (1 + s - 2^s).
//! ```
//!
//! Writing `X = 2^(s+1) - m (s+1)` turns this into `r s X = 4 (2^s - s - 1)`,
//! so every solution is a divisor pair `(r, X)` of `4 (2^s - s - 1) / s` with
//! `X ≡ 2^(s+1) (mod s+1)`. [`solve_family`] enumerates those pairs.

use std::fmt;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{divisors, factorize, modpow, pow_mod, Budget, FactorCache, FactorMap, TRIAL_DIVISION_BOUND};
use crate::error::{Error, Result};

/// Solves with `s` at or above this are skipped unless large runs are allowed.
pub const LARGE_S: u32 = 126;

/// Values above this print in scientific notation in tables.
pub const SCIENTIFIC_THRESHOLD: u64 = 1_000_000_000_000_000;

/// Significant digits kept in scientific notation.
pub const SIGNIFICANT_DIGITS: usize = 5;

fn pow2(e: u32) -> BigInt {
    BigInt::one() << e
}

fn require_r(r: &BigInt) -> Result<()> {
    if *r < BigInt::from(2) {
        return Err(Error::InvalidFamily(format!("r must be at least 2, got {r}")));
    }
    Ok(())
}

/// `g(X_{r,s}) = (r-1)(r s 2^(s-1) - 2^s + 1)`.
pub fn genus_x(r: &BigInt, s: u32) -> Result<BigInt> {
    require_r(r)?;
    if s < 1 {
        return Err(Error::InvalidFamily("s must be at least 1".into()));
    }
    Ok((r - 1) * (r * s * pow2(s - 1) - pow2(s) + 1))
}

/// `g(C_{r,λ,m}) = 1 + (r/2)((r-1)λm - 2)`.
pub fn genus_c(r: &BigInt, lambda: u32, m: &BigInt) -> Result<BigInt> {
    require_r(r)?;
    if lambda < 1 || *m < BigInt::from(2) {
        return Err(Error::InvalidFamily(format!("need lambda >= 1 and m >= 2, got lambda = {lambda}, m = {m}")));
    }
    let twice: BigInt = r * ((r - 1) * lambda * m - 2);
    if twice.is_odd() {
        return Err(Error::NonIntegral(format!("r((r-1)λm - 2) = {twice} is odd")));
    }
    Ok(BigInt::one() + twice / 2)
}

/// `Σ_{λ=1}^{s} g(C_{r,λ,m})`, checked against the closed form
/// `s(r-1)(r m (s+1)/4 - 1)`.
pub fn sum_components(r: &BigInt, m: &BigInt, s: u32) -> Result<BigInt> {
    let mut sum = BigInt::zero();
    for lambda in 1..=s {
        sum += genus_c(r, lambda, m)?;
    }
    let quarter = BigRational::new(r * m * (s + 1), BigInt::from(4));
    let closed = BigRational::from_integer(BigInt::from(s) * (r - 1)) * (quarter - BigRational::one());
    if !closed.is_integer() {
        return Err(Error::NonIntegral(closed.to_string()));
    }
    let closed = closed.to_integer();
    if closed != sum {
        return Err(Error::NonIntegral(format!("closed form {closed} disagrees with sum {sum}")));
    }
    Ok(sum)
}

/// `r (m s (s+1) - s 2^(s+1)) = 4 (1 + s - 2^s)`, with no division.
pub fn family_condition(r: &BigInt, m: &BigInt, s: u32) -> bool {
    let lhs = r * (m * s * (s + 1) - pow2(s + 1) * s);
    let rhs = (BigInt::from(s) + 1 - pow2(s)) * 4;
    lhs == rhs
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolveStatus {
    Exact,
    /// `s = 1`: both sides of the condition vanish at `m = 2`; the answer
    /// `m = r = 2` is taken from the parity argument, not from division.
    DegenerateS1,
    /// `4(2^s - s - 1)/s` could not be factored within budget, or the solve
    /// was skipped because `s` is large.
    UnresolvedFactoring,
}

impl fmt::Display for SolveStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SolveStatus::Exact => "exact",
            SolveStatus::DegenerateS1 => "degenerate-s1",
            SolveStatus::UnresolvedFactoring => "unresolved-factoring",
        })
    }
}

/// One `(s, m, r)` solution with its divisor witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilySolution {
    pub s: u32,
    pub m: BigInt,
    pub r: BigInt,
    /// `X = 2^(s+1) - m(s+1)`, so that `r s X = 4(2^s - s - 1)`.
    pub witness_x: BigInt,
    /// Factorization of `4(2^s - s - 1)`; absent for `s = 1` where it is 0.
    pub factorization: Option<FactorMap>,
    pub status: SolveStatus,
}

/// Everything [`solve_family`] learned about one `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyOutcome {
    pub s: u32,
    pub status: SolveStatus,
    /// Sorted by descending `r`.
    pub solutions: Vec<FamilySolution>,
    /// Factorization of `4(2^s - s - 1)/s` as far as it got, when attempted.
    pub quotient_factorization: Option<FactorMap>,
}

#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    pub budget: Budget,
    pub allow_large: bool,
    pub cache: Option<Arc<FactorCache>>,
}

impl SolveOptions {
    fn factor(&self, n: &BigUint) -> Result<FactorMap> {
        match &self.cache {
            Some(cache) => cache.factorize(n, &self.budget),
            None => factorize(n, &self.budget),
        }
    }
}

/// `4(2^s - s - 1)`.
pub fn family_numerator(s: u32) -> BigUint {
    ((BigUint::one() << s) - s - 1u32) * 4u32
}

/// All `(m, r)` with `m >= 2`, `r >= 1` satisfying [`family_condition`].
pub fn solve_family(s: u32, opts: &SolveOptions) -> Result<FamilyOutcome> {
    if s < 1 {
        return Err(Error::InvalidFamily("s must be at least 1".into()));
    }
    if s == 1 {
        let two = BigInt::from(2);
        let solution = FamilySolution {
            s,
            m: two.clone(),
            r: two,
            witness_x: BigInt::zero(),
            factorization: None,
            status: SolveStatus::DegenerateS1,
        };
        return Ok(FamilyOutcome { s, status: SolveStatus::DegenerateS1, solutions: vec![solution], quotient_factorization: None });
    }

    let numerator = family_numerator(s);
    let (quotient, rem) = numerator.div_rem(&BigUint::from(s));
    if !rem.is_zero() {
        return Ok(FamilyOutcome { s, status: SolveStatus::Exact, solutions: vec![], quotient_factorization: None });
    }
    if s >= LARGE_S && !opts.allow_large {
        return Ok(FamilyOutcome { s, status: SolveStatus::UnresolvedFactoring, solutions: vec![], quotient_factorization: None });
    }

    let qf = opts.factor(&quotient)?;
    if !qf.is_complete() {
        return Ok(FamilyOutcome { s, status: SolveStatus::UnresolvedFactoring, solutions: vec![], quotient_factorization: Some(qf) });
    }
    let full = qf.merge(&factorize(&BigUint::from(s), &Budget::default())?)?;

    let top = BigUint::one() << (s + 1);
    let modulus = BigUint::from(s + 1);
    let target = &top % &modulus;
    let mut solutions = Vec::new();
    for x in divisors(&qf)? {
        if x >= top || &x % &modulus != target {
            continue;
        }
        let m = (&top - &x) / &modulus;
        if m < BigUint::from(2u32) {
            continue;
        }
        let r = &quotient / &x;
        let (m, r, x) = (BigInt::from(m), BigInt::from(r), BigInt::from(x));
        assert!(family_condition(&r, &m, s), "divisor pair fails the condition at s = {s}");
        solutions.push(FamilySolution { s, m, r, witness_x: x, factorization: Some(full.clone()), status: SolveStatus::Exact });
    }
    solutions.sort_by(|a, b| b.r.cmp(&a.r));
    Ok(FamilyOutcome { s, status: SolveStatus::Exact, solutions, quotient_factorization: Some(qf) })
}

/// Solves each `s` in parallel; results come back in the order given.
pub fn solve_many(values: &[u32], opts: &SolveOptions) -> Result<Vec<FamilyOutcome>> {
    use rayon::prelude::*;
    values.par_iter().map(|&s| solve_family(s, opts)).collect()
}

/// Solves every admissible `s <= s_max`, ascending.
pub fn family_table(s_max: u32, opts: &SolveOptions) -> Result<Vec<FamilyOutcome>> {
    solve_many(&admissible_s(s_max.saturating_add(1)), opts)
}

/// All `s < bound` that survive the 2-adic and congruence sieve: `s = 1`,
/// `s = 2t` with `t` odd and `4^t ≡ 1 (mod t)`, or `s = 4u` with `u` odd and
/// `16^u ≡ 1 (mod u)`. No multiple of 8 survives.
pub fn admissible_s(bound: u32) -> Vec<u32> {
    (1..bound)
        .filter(|&s| match s % 8 {
            1 | 3 | 5 | 7 => s == 1,
            2 | 6 => fixes_one(4, (s / 2) as u64),
            4 => fixes_one(16, (s / 4) as u64),
            _ => false,
        })
        .collect()
}

// a^t ≡ 1 (mod t); every residue is 1 mod 1.
fn fixes_one(a: u64, t: u64) -> bool {
    pow_mod(a, t, t) == 1 % t
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SequenceKind {
    /// Odd `t` with `4^t ≡ 1 (mod t)`.
    A014945,
    /// Odd `u` with `16^u ≡ 1 (mod u)`.
    A014957,
}

impl std::str::FromStr for SequenceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "A014945" => Ok(SequenceKind::A014945),
            "A014957" => Ok(SequenceKind::A014957),
            _ => Err(Error::Parse(format!("unknown sequence {s:?}"))),
        }
    }
}

/// Terms below `bound`, ascending.
pub fn sequence(kind: SequenceKind, bound: u64) -> Vec<u64> {
    let base = match kind {
        SequenceKind::A014945 => 4,
        SequenceKind::A014957 => 16,
    };
    (1..bound).step_by(2).filter(|&t| fixes_one(base, t)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum LemmaVerdict {
    /// `a^n ≢ 1 (mod n)`.
    NotApplicable,
    /// `a ≡ 1 (mod p)` for the smallest prime `p | n`.
    Holds { p: String },
    /// Hypothesis true but `a ≢ 1 (mod p)`.
    Violated { p: String },
    /// The smallest prime factor of `n` could not be determined in budget.
    Undetermined,
}

/// If `a^n ≡ 1 (mod n)` then `a ≡ 1 (mod p)` for the smallest prime `p | n`.
pub fn smallest_prime_lemma(a: &BigInt, n: &BigInt) -> Result<LemmaVerdict> {
    let power = modpow(a, n, n)?;
    if !power.is_one() {
        return Ok(LemmaVerdict::NotApplicable);
    }
    let f = factorize(n.magnitude(), &Budget::default())?;
    let p = match f.smallest_prime() {
        Some(p) if f.is_complete() || *p < BigUint::from(TRIAL_DIVISION_BOUND) => p.clone(),
        _ => return Ok(LemmaVerdict::Undetermined),
    };
    let residue = a.mod_floor(&BigInt::from(p.clone()));
    Ok(if residue.is_one() || (p.is_one() && residue.is_zero()) {
        LemmaVerdict::Holds { p: p.to_string() }
    } else {
        LemmaVerdict::Violated { p: p.to_string() }
    })
}

/// Exact decimal up to [`SCIENTIFIC_THRESHOLD`], otherwise
/// `d.dddd×10^e` with [`SIGNIFICANT_DIGITS`] digits, rounded half up.
pub fn display_value(x: &BigInt) -> String {
    if x.abs() <= BigInt::from(SCIENTIFIC_THRESHOLD) {
        return x.to_string();
    }
    scientific(x, SIGNIFICANT_DIGITS)
}

pub fn scientific(x: &BigInt, digits: usize) -> String {
    let sign = if x.is_negative() { "-" } else { "" };
    let text = x.magnitude().to_string();
    let mut exponent = text.len() - 1;
    if text.len() <= digits {
        return x.to_string();
    }
    let mut mantissa: u64 = text[..digits].parse().expect("decimal digits");
    if text.as_bytes()[digits] >= b'5' {
        mantissa += 1;
        if mantissa == 10u64.pow(digits as u32) {
            mantissa /= 10;
            exponent += 1;
        }
    }
    let m = mantissa.to_string();
    format!("{sign}{}.{}×10^{exponent}", &m[..1], &m[1..])
}

/// Flat row for JSON and CSV export.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyRecord {
    pub s: u32,
    pub m: Option<String>,
    pub r: Option<String>,
    pub witness_x: Option<String>,
    pub status: SolveStatus,
    /// `N = p^e * ...`, with an unfactored part in brackets.
    pub factorization: Option<String>,
}

impl FamilyOutcome {
    /// One record per solution; an unresolved `s` yields one record with
    /// empty `m` and `r`. Solved `s` without solutions yield nothing.
    pub fn records(&self) -> Vec<FamilyRecord> {
        if self.status == SolveStatus::UnresolvedFactoring {
            return vec![FamilyRecord {
                s: self.s,
                m: None,
                r: None,
                witness_x: None,
                status: self.status,
                factorization: self.quotient_factorization.as_ref().map(|f| f.to_string()),
            }];
        }
        self.solutions
            .iter()
            .map(|sol| FamilyRecord {
                s: sol.s,
                m: Some(sol.m.to_string()),
                r: Some(sol.r.to_string()),
                witness_x: Some(sol.witness_x.to_string()),
                status: sol.status,
                factorization: sol.factorization.as_ref().map(|f| f.to_string()),
            })
            .collect()
    }

    /// Table rows `s | m | r`.
    pub fn table_rows(&self) -> Vec<String> {
        if self.status == SolveStatus::UnresolvedFactoring {
            return vec![format!("{} | - | -  (unresolved: factoring incomplete)", self.s)];
        }
        self.solutions
            .iter()
            .map(|sol| format!("{} | {} | {}", sol.s, display_value(&sol.m), display_value(&sol.r)))
            .collect()
    }
}

pub fn records_to_csv(records: &[FamilyRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in records {
        w.serialize(r).map_err(|e| Error::Parse(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

pub fn records_from_csv(text: &str) -> Result<Vec<FamilyRecord>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .map(|r| r.map_err(|e| Error::Parse(e.to_string())))
        .collect()
}

/// `m = 2` reduces the condition to `r = 2/s` for `s >= 2`.
pub fn m2_forced_r(s: u32) -> Option<BigRational> {
    (s >= 2).then(|| BigRational::new(BigInt::from(2), BigInt::from(s)))
}

/// `true` when `m r s = 4k` with `k` odd.
pub fn mrs_is_four_times_odd(sol: &FamilySolution) -> bool {
    let prod = &sol.m * &sol.r * sol.s;
    (prod % 8u32).to_u32() == Some(4)
}
