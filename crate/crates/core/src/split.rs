//! When does `Jac(y^n = f(x^m))` split as `Jac(X1) x Jac(X2)`?
//!
//! The criterion is the integer identity
//!
//! ```text
//! δ(n-1)(m-2) = 1 - (gcd(δ+1, n) + gcd(δ, n) - gcd(δm, n))
//! ```
//!
//! which is equivalent to `g = g1 + g2`. This module evaluates it, classifies
//! its solutions for prime `n`, and checks the Accola and Kani–Rosen genus
//! relations that turn subgroup data into isogeny statements.

use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::is_prime_u64;
use crate::curves::{genus_formula, quotient_genera};
use crate::error::{Error, Result};

/// Both sides of the splitting identity together with the genera it compares.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitCertificate {
    pub n: u64,
    pub m: u64,
    pub delta: u64,
    pub lhs: i64,
    pub rhs: i64,
    pub splits: bool,
    pub g: u64,
    pub g1: u64,
    pub g2: u64,
}

impl fmt::Display for SplitCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "n={} m={} delta={}: lhs={} rhs={} splits={} g={} g1={} g2={}",
            self.n, self.m, self.delta, self.lhs, self.rhs, self.splits, self.g, self.g1, self.g2
        )
    }
}

pub fn eqm_certificate(n: u64, m: u64, delta: u64) -> Result<SplitCertificate> {
    if n < 2 || m < 2 || delta < 1 {
        return Err(Error::InvalidCurve(format!(
            "need n >= 2, m >= 2, delta >= 1; got n = {n}, m = {m}, delta = {delta}"
        )));
    }
    let (ni, mi, di) = (n as i64, m as i64, delta as i64);
    let lhs = di * (ni - 1) * (mi - 2);
    let rhs = 1 - ((di + 1).gcd(&ni) + di.gcd(&ni) - (di * mi).gcd(&ni));
    let g = genus_formula(n, delta * m);
    assert!(g >= 0);
    let q = quotient_genera(n, delta)?;
    let cert = SplitCertificate {
        n,
        m,
        delta,
        lhs,
        rhs,
        splits: lhs == rhs,
        g: g as u64,
        g1: q.g1,
        g2: q.g2,
    };
    debug_assert!(!cert.splits || cert.g == cert.g1 + cert.g2);
    Ok(cert)
}

/// All splitting triples with `2 <= n <= n_max`, `2 <= m <= m_max`,
/// `1 <= δ <= delta_max`, in lexicographic `(n, m, δ)` order.
pub fn enumerate_splits(n_max: u64, m_max: u64, delta_max: u64) -> Vec<SplitCertificate> {
    use rayon::prelude::*;
    (2..=n_max)
        .into_par_iter()
        .flat_map_iter(|n| {
            (2..=m_max).flat_map(move |m| {
                (1..=delta_max).filter_map(move |delta| {
                    let c = eqm_certificate(n, m, delta).expect("parameters in range");
                    c.splits.then_some(c)
                })
            })
        })
        .collect()
}

/// Which of the prime-level solution families a triple belongs to.
/// Checked in order; the first match wins.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PrimeCase {
    /// `m = 2`, `δ ≡ 0 (mod n)`.
    A,
    /// `n = 2`, `m = 2`, `δ` odd.
    B,
    /// `n = 3`, `m = 3`, `δ = 1`.
    C,
    /// `n` odd, `m = 2`, `δ ≢ 0, -1 (mod n)`.
    D,
    None,
}

impl fmt::Display for PrimeCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PrimeCase::A => "A",
            PrimeCase::B => "B",
            PrimeCase::C => "C",
            PrimeCase::D => "D",
            PrimeCase::None => "NONE",
        };
        f.write_str(s)
    }
}

pub fn classify_prime_case(n: u64, m: u64, delta: u64) -> Result<PrimeCase> {
    if !is_prime_u64(n) {
        return Err(Error::NotPrime(n));
    }
    let tag = if m == 2 && delta.is_multiple_of(n) {
        PrimeCase::A
    } else if n == 2 && m == 2 && delta % 2 == 1 {
        PrimeCase::B
    } else if n == 3 && m == 3 && delta == 1 {
        PrimeCase::C
    } else if n % 2 == 1 && m == 2 && !delta.is_multiple_of(n) && delta % n != n - 1 {
        PrimeCase::D
    } else {
        PrimeCase::None
    };
    Ok(tag)
}

/// Outcome for a hyperelliptic curve whose reduced group contains `C_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HyperellipticSplit {
    pub splits: bool,
    /// `Some("V4")` exactly when the Jacobian splits.
    pub group: Option<&'static str>,
    /// `(⌊g/2⌋, ⌊(g+1)/2⌋)` when it splits.
    pub genera: Option<(u64, u64)>,
}

/// The Jacobian of a genus-`g` hyperelliptic curve with reduced group `C_m`
/// splits into the two quotients exactly when `m = 2` (full group `V_4`).
pub fn hyperelliptic_split(m: u64, g: u64) -> Result<HyperellipticSplit> {
    if m < 2 {
        return Err(Error::InvalidCurve(format!("m must be at least 2, got {m}")));
    }
    Ok(if m == 2 {
        HyperellipticSplit { splits: true, group: Some("V4"), genera: Some((g / 2, g.div_ceil(2))) }
    } else {
        HyperellipticSplit { splits: false, group: None, genera: None }
    })
}

/// One subgroup (or intersection of subgroups) with the genus of its quotient.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubgroupGenus {
    pub order: u64,
    pub genus: u64,
}

/// Intersection `H_i ∩ H_j ∩ ...` for a set of 1-based subgroup indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntersectionEntry {
    pub indices: Vec<usize>,
    pub order: u64,
    pub genus: u64,
}

/// Genus data for a curve with a group of automorphisms and a family of
/// subgroups.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionData {
    /// `|G|`
    pub order: u64,
    pub g: u64,
    pub g0: u64,
    pub subgroups: Vec<SubgroupGenus>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intersections: Option<Vec<IntersectionEntry>>,
}

impl PartitionData {
    fn validate(&self) -> Result<()> {
        if self.order == 0 {
            return Err(Error::InvalidPartition("group order must be positive".into()));
        }
        if self.subgroups.is_empty() {
            return Err(Error::InvalidPartition("no subgroups given".into()));
        }
        if let Some(bad) = self.subgroups.iter().find(|h| h.order == 0) {
            return Err(Error::InvalidPartition(format!("subgroup of order {}", bad.order)));
        }
        Ok(())
    }
}

/// Residual of `g0|G| = g - s g + Σ |H_i| g_i` for subgroups meeting pairwise
/// trivially; zero when the relation holds.
pub fn accola_check(p: &PartitionData) -> Result<i64> {
    p.validate()?;
    let s = p.subgroups.len() as i64;
    let g = p.g as i64;
    let sum: i64 = p.subgroups.iter().map(|h| (h.order * h.genus) as i64).sum();
    Ok((p.g0 * p.order) as i64 - (g - s * g + sum))
}

/// Residual of the inclusion–exclusion relation
/// `g0|G| = Σ|H_i|g_i - Σ|H_ij|g_ij + Σ|H_ijk|g_ijk - ...` for subgroups
/// covering `G`. Every intersection of two or more subgroups must be listed.
pub fn accola_ie_check(p: &PartitionData) -> Result<i64> {
    p.validate()?;
    let s = p.subgroups.len();
    if s > 20 {
        return Err(Error::InvalidPartition(format!("{s} subgroups is too many for inclusion-exclusion")));
    }
    let mut table: BTreeMap<Vec<usize>, SubgroupGenus> = BTreeMap::new();
    for e in p.intersections.iter().flatten() {
        let mut key = e.indices.clone();
        key.sort_unstable();
        key.dedup();
        if key.iter().any(|&i| i == 0 || i > s) {
            return Err(Error::InvalidPartition(format!("intersection indices {:?} out of range 1..={s}", e.indices)));
        }
        table.insert(key, SubgroupGenus { order: e.order, genus: e.genus });
    }
    let mut total: i64 = 0;
    for mask in 1u32..(1 << s) {
        let indices: Vec<usize> = (0..s).filter(|i| mask & (1 << i) != 0).map(|i| i + 1).collect();
        let entry = if indices.len() == 1 {
            p.subgroups[indices[0] - 1]
        } else {
            *table.get(&indices).ok_or_else(|| Error::MissingIntersection(indices.clone()))?
        };
        let term = (entry.order * entry.genus) as i64;
        total += if indices.len() % 2 == 1 { term } else { -term };
    }
    Ok((p.g0 * p.order) as i64 - total)
}

/// Verdict of the Kani–Rosen conditions for a genus matrix
/// `g_ij = g(X / H_i H_j)` and integer weights `n_i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KaniRosenVerdict {
    pub holds: bool,
    /// `Σ n_i n_j g_ij`
    pub quadratic: i64,
    /// `Σ_j n_j g_ij` for each `i`
    pub linear: Vec<i64>,
    /// Isogeny implied by the weights, when the conditions hold.
    pub isogeny: Option<String>,
    /// Product decomposition of `Jac(X)`, when `H_1` is trivial, the
    /// off-diagonal genera beyond the first row vanish and the diagonal
    /// genera add up to `g`.
    pub decomposition: Option<String>,
}

fn subscript(i: usize) -> String {
    const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    i.to_string().chars().map(|c| DIGITS[c.to_digit(10).unwrap() as usize]).collect()
}

/// Checks `Σ n_i n_j g_ij = 0` and `Σ_j n_j g_ij = 0` for every `i`.
///
/// Row and column 1 describe `H_1 = {1}`, so `g_11 = g(X)` and
/// `g_ii = g(X/H_i)`.
pub fn kani_rosen_check(gij: &[Vec<i64>], nvec: &[i64]) -> Result<KaniRosenVerdict> {
    let t = gij.len();
    for row in gij {
        if row.len() != t || nvec.len() != t {
            return Err(Error::DimensionMismatch { rows: t, cols: row.len(), len: nvec.len() });
        }
    }
    if nvec.len() != t {
        return Err(Error::DimensionMismatch { rows: t, cols: t, len: nvec.len() });
    }
    for i in 0..t {
        for j in i + 1..t {
            if gij[i][j] != gij[j][i] {
                return Err(Error::AsymmetricMatrix(i + 1, j + 1));
            }
        }
    }
    let linear: Vec<i64> = (0..t).map(|i| (0..t).map(|j| nvec[j] * gij[i][j]).sum()).collect();
    let quadratic: i64 = (0..t).map(|i| nvec[i] * linear[i]).sum();
    let holds = quadratic == 0 && linear.iter().all(|&v| v == 0);

    let jac = |i: usize, e: i64| {
        let base = format!("Jac(𝒳/H{})", subscript(i + 1));
        if e == 1 {
            base
        } else {
            format!("{base}^{e}")
        }
    };
    let side = |positive: bool| {
        let terms: Vec<String> = (0..t)
            .filter(|&i| if positive { nvec[i] > 0 } else { nvec[i] < 0 })
            .map(|i| jac(i, nvec[i].abs()))
            .collect();
        if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" × ")
        }
    };
    let isogeny = holds.then(|| format!("{} ≅ {}", side(true), side(false)));

    let decomposition = (t >= 2 && holds && {
        let off_diagonal_zero = (1..t).all(|i| (i + 1..t).all(|j| gij[i][j] == 0));
        let diag_sum: i64 = (1..t).map(|i| gij[i][i]).sum();
        off_diagonal_zero && diag_sum == gij[0][0]
    })
    .then(|| {
        let factors: Vec<String> = (1..t).map(|i| format!("Jac 𝒳{}", subscript(i))).collect();
        format!("Jac 𝒳 ≅ {}", factors.join(" × "))
    });

    Ok(KaniRosenVerdict { holds, quadratic, linear, isogeny, decomposition })
}

/// Genus matrix and weights for `H_1 = {1}`, `H_2 = <σ>`, `H_3 = <στ>` on
/// `y^n = f(x^m)`: diagonal `(g, g1, g2)`, first row `(g, g1, g2)`,
/// `g(X / H_2 H_3) = 0`, weights `(1, -1, -1)`.
pub fn superelliptic_kani_rosen_data(n: u64, m: u64, delta: u64) -> Result<(Vec<Vec<i64>>, Vec<i64>)> {
    let c = eqm_certificate(n, m, delta)?;
    let (g, g1, g2) = (c.g as i64, c.g1 as i64, c.g2 as i64);
    let gij = vec![vec![g, g1, g2], vec![g1, g1, 0], vec![g2, 0, g2]];
    Ok((gij, vec![1, -1, -1]))
}
