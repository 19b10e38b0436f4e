//! Automorphism groups of the curves `C_{r,λ,m}`: the reduced group, the
//! candidate full groups as presentations, and finite models that check
//! each presentation's order.
//!
//! The full group `G` is a degree `n` central extension of the reduced group
//! `C_m` or `D_{2m}`. Every candidate is built as a set of normal forms with
//! an explicit right action of each generator; [`ConcreteGroup`] turns that
//! into a multiplication table and checks it really is a group.

use std::collections::VecDeque;
use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::pow_mod;
use crate::error::{Error, Result};

/// Largest order [`verify_presentation`] will enumerate.
pub const MAX_CAP: u64 = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ReducedKind {
    Cm,
    D2m,
}

impl fmt::Display for ReducedKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReducedKind::Cm => "Cm",
            ReducedKind::D2m => "D2m",
        })
    }
}

impl std::str::FromStr for ReducedKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cm" => Ok(ReducedKind::Cm),
            "d2m" => Ok(ReducedKind::D2m),
            _ => Err(Error::Parse(format!("reduced group must be Cm or D2m, got {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedGroup {
    pub kind: ReducedKind,
    pub m: u64,
    /// Whether the curve was assumed generic; the answer is only claimed then.
    pub generic: bool,
}

impl fmt::Display for ReducedGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            ReducedKind::Cm => write!(f, "C_{}", self.m)?,
            ReducedKind::D2m => write!(f, "D_{}", 2 * self.m)?,
        }
        if !self.generic {
            f.write_str(" (generic case only)")?;
        }
        Ok(())
    }
}

/// Reduced automorphism group of a generic `C_{r,λ,m}`: `D_{2m}` when
/// `r = 2`, otherwise `C_m`.
pub fn reduced_group(r: u64, lambda: u64, m: u64, generic: bool) -> Result<ReducedGroup> {
    if r < 2 || lambda < 1 || m < 2 {
        return Err(Error::InvalidFamily(format!("need r >= 2, lambda >= 1, m >= 2; got ({r}, {lambda}, {m})")));
    }
    let kind = if r == 2 { ReducedKind::D2m } else { ReducedKind::Cm };
    Ok(ReducedGroup { kind, m, generic })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "tag", content = "l")]
pub enum GroupTag {
    Cmn,
    Metacyclic(u64),
    #[serde(rename = "D2mxCn")]
    D2mxCn,
    D2mn,
    /// `n` even, `m` odd.
    Gspecial,
    G1,
    G2,
    G3,
    G4,
}

impl fmt::Display for GroupTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupTag::Cmn => f.write_str("Cmn"),
            GroupTag::Metacyclic(l) => write!(f, "Metacyclic(l={l})"),
            GroupTag::D2mxCn => f.write_str("D2m×Cn"),
            GroupTag::D2mn => f.write_str("D2mn"),
            GroupTag::Gspecial => f.write_str("Gspecial"),
            GroupTag::G1 => f.write_str("G1"),
            GroupTag::G2 => f.write_str("G2"),
            GroupTag::G3 => f.write_str("G3"),
            GroupTag::G4 => f.write_str("G4"),
        }
    }
}

/// A power of one generator, or a parenthesized block raised to a power.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Term {
    Gen(usize, i64),
    Block(Vec<(usize, i64)>, i64),
}

pub type Word = Vec<Term>;

/// `lhs = rhs`; the relator is `lhs · rhs⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relation {
    pub lhs: Word,
    pub rhs: Word,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupPresentation {
    pub tag: GroupTag,
    pub n: u64,
    pub m: u64,
    pub generators: Vec<String>,
    pub relations: Vec<Relation>,
    pub expected_order: u64,
}

fn g(i: usize, e: i64) -> Term {
    Term::Gen(i, e)
}

fn rel(lhs: Word, rhs: Word) -> Relation {
    Relation { lhs, rhs }
}

fn gamma_pow(e: u64) -> Word {
    if e == 0 {
        vec![]
    } else {
        vec![g(0, e as i64)]
    }
}

// Parameters of ⟨γ, σ, τ | γ^n, σ² = γ^A, τ² = γ^B, (στ)^m = γ^C,
// σγσ⁻¹ = γ, τγτ⁻¹ = γ^T⟩.
#[derive(Clone, Copy, Debug)]
struct Extension {
    a: u64,
    b: u64,
    c: u64,
    inverts: bool,
}

impl GroupTag {
    fn extension(self, n: u64) -> Option<Extension> {
        let half = n / 2;
        let (a, b, c, inverts) = match self {
            GroupTag::D2mxCn => (0, 0, 0, false),
            GroupTag::G1 => (1 % n, 0, 0, true),
            GroupTag::G2 => (1 % n, n - 1, 0, false),
            GroupTag::G3 => (1 % n, 0, half, true),
            GroupTag::G4 | GroupTag::Gspecial => (1 % n, n - 1, half, false),
            _ => return None,
        };
        Some(Extension { a, b, c, inverts })
    }
}

impl GroupPresentation {
    pub fn new(tag: GroupTag, n: u64, m: u64) -> Result<Self> {
        if n < 2 || m < 2 {
            return Err(Error::InvalidGroup(format!("need n >= 2 and m >= 2, got ({n}, {m})")));
        }
        let bad = |why: &str| Err(Error::InvalidGroup(format!("{tag} with (n, m) = ({n}, {m}): {why}")));
        match tag {
            GroupTag::Metacyclic(l) => {
                if l == 0 || l >= n || l.gcd(&n) != 1 {
                    return bad("l must be a unit mod n");
                }
                if pow_mod(l, m, n) != 1 {
                    return bad("l^m must be 1 mod n");
                }
            }
            GroupTag::Gspecial if !n.is_multiple_of(2) || m.is_multiple_of(2) => return bad("needs n even and m odd"),
            GroupTag::G1 | GroupTag::G2 | GroupTag::G3 | GroupTag::G4 if !n.is_multiple_of(2) || !m.is_multiple_of(2) => {
                return bad("needs n and m even")
            }
            _ => {}
        }
        let mn = m * n;
        let (generators, relations, expected_order): (Vec<&str>, Vec<Relation>, u64) = match tag {
            GroupTag::Cmn => (vec!["c"], vec![rel(vec![g(0, mn as i64)], vec![])], mn),
            GroupTag::Metacyclic(l) => (
                vec!["gamma", "sigma"],
                vec![
                    rel(vec![g(0, n as i64)], vec![]),
                    rel(vec![g(1, m as i64)], vec![]),
                    rel(vec![g(1, 1), g(0, 1), g(1, -1)], vec![g(0, l as i64)]),
                ],
                mn,
            ),
            GroupTag::D2mn => (
                vec!["rho", "sigma"],
                vec![
                    rel(vec![g(0, mn as i64)], vec![]),
                    rel(vec![g(1, 2)], vec![]),
                    rel(vec![Term::Block(vec![(1, 1), (0, 1)], 2)], vec![]),
                ],
                2 * mn,
            ),
            _ => {
                let e = tag.extension(n).expect("extension tag");
                let t = if e.inverts { n - 1 } else { 1 };
                (
                    vec!["gamma", "sigma", "tau"],
                    vec![
                        rel(vec![g(0, n as i64)], vec![]),
                        rel(vec![g(1, 2)], gamma_pow(e.a)),
                        rel(vec![g(2, 2)], gamma_pow(e.b)),
                        rel(vec![Term::Block(vec![(1, 1), (2, 1)], m as i64)], gamma_pow(e.c)),
                        rel(vec![g(1, 1), g(0, 1), g(1, -1)], vec![g(0, 1)]),
                        rel(vec![g(2, 1), g(0, 1), g(2, -1)], gamma_pow(t)),
                    ],
                    2 * mn,
                )
            }
        };
        Ok(GroupPresentation {
            tag,
            n,
            m,
            generators: generators.into_iter().map(String::from).collect(),
            relations,
            expected_order,
        })
    }

    /// Relators as flat words, one per relation.
    pub fn relators(&self) -> Vec<Vec<(usize, i64)>> {
        self.relations
            .iter()
            .map(|r| {
                let mut w = flatten(&r.lhs);
                let mut rhs = flatten(&r.rhs);
                rhs.reverse();
                w.extend(rhs.into_iter().map(|(i, e)| (i, -e)));
                w
            })
            .collect()
    }

    /// `F := FreeGroup(...); G := F / [ ... ];` for pasting into GAP.
    pub fn to_gap(&self) -> String {
        let names: Vec<String> = self.generators.iter().map(|s| format!("\"{s}\"")).collect();
        let binds: Vec<String> = self.generators.iter().enumerate().map(|(i, s)| format!("{s} := F.{};", i + 1)).collect();
        let rels: Vec<String> = self
            .relations
            .iter()
            .map(|r| {
                let lhs = gap_word(&r.lhs, &self.generators);
                if r.rhs.is_empty() {
                    lhs
                } else {
                    format!("{lhs}*({})^-1", gap_word(&r.rhs, &self.generators))
                }
            })
            .collect();
        format!("F := FreeGroup({});\n{}\nG := F / [ {} ];\n", names.join(", "), binds.join(" "), rels.join(", "))
    }

    /// Relations in conventional notation, e.g. `σγσ⁻¹ = γ^2`.
    pub fn relation_strings(&self) -> Vec<String> {
        let letters: Vec<&str> = self
            .generators
            .iter()
            .map(|s| match s.as_str() {
                "gamma" => "γ",
                "sigma" => "σ",
                "tau" => "τ",
                "rho" => "ρ",
                other => other,
            })
            .collect();
        self.relations
            .iter()
            .map(|r| {
                let rhs = if r.rhs.is_empty() { "1".to_string() } else { pretty_word(&r.rhs, &letters) };
                format!("{} = {}", pretty_word(&r.lhs, &letters), rhs)
            })
            .collect()
    }
}

impl fmt::Display for GroupPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (n={}, m={}, order {}): ⟨{} | {}⟩", self.tag, self.n, self.m, self.expected_order, self.generators.join(", "), self.relation_strings().join(", "))
    }
}

fn flatten(w: &Word) -> Vec<(usize, i64)> {
    let mut out = Vec::new();
    for t in w {
        match t {
            Term::Gen(i, e) => out.push((*i, *e)),
            Term::Block(inner, e) => {
                let unit: Vec<(usize, i64)> = if *e >= 0 {
                    inner.clone()
                } else {
                    inner.iter().rev().map(|&(i, x)| (i, -x)).collect()
                };
                for _ in 0..e.unsigned_abs() {
                    out.extend_from_slice(&unit);
                }
            }
        }
    }
    out
}

fn power(base: String, e: i64) -> String {
    if e == 1 {
        base
    } else {
        format!("{base}^{e}")
    }
}

fn gap_word(w: &Word, names: &[String]) -> String {
    let parts: Vec<String> = w
        .iter()
        .map(|t| match t {
            Term::Gen(i, e) => power(names[*i].clone(), *e),
            Term::Block(inner, e) => {
                let body: Vec<String> = inner.iter().map(|(i, x)| power(names[*i].clone(), *x)).collect();
                format!("({})^{e}", body.join("*"))
            }
        })
        .collect();
    parts.join("*")
}

fn pretty_word(w: &Word, letters: &[&str]) -> String {
    let one = |i: usize, e: i64| match e {
        1 => letters[i].to_string(),
        -1 => format!("{}⁻¹", letters[i]),
        _ => format!("{}^{e}", letters[i]),
    };
    w.iter()
        .map(|t| match t {
            Term::Gen(i, e) => one(*i, *e),
            Term::Block(inner, e) => {
                let body: String = inner.iter().map(|&(i, x)| one(i, x)).collect();
                format!("({body})^{e}")
            }
        })
        .collect()
}

/// Candidate full automorphism groups over the given reduced group.
pub fn full_group_candidates(n: u64, m: u64, reduced: ReducedKind) -> Result<Vec<GroupPresentation>> {
    let tags: Vec<GroupTag> = match reduced {
        ReducedKind::Cm => {
            let mut tags = vec![GroupTag::Cmn];
            let coprime = m.gcd(&n) == 1;
            tags.extend(
                (2..n)
                    .filter(|&l| l.gcd(&n) == 1 && pow_mod(l, m, n) == 1)
                    .filter(|&l| !coprime || l == n - 1)
                    .map(GroupTag::Metacyclic),
            );
            tags
        }
        ReducedKind::D2m => match (n % 2, m % 2) {
            (1, _) => vec![GroupTag::D2mxCn],
            (_, 1) => vec![GroupTag::D2mxCn, GroupTag::Gspecial],
            _ => vec![GroupTag::D2mxCn, GroupTag::D2mn, GroupTag::G1, GroupTag::G2, GroupTag::G3, GroupTag::G4],
        },
    };
    tags.into_iter().map(|t| GroupPresentation::new(t, n, m)).collect()
}

/// A finite group given by its full multiplication table.
#[derive(Clone, Debug)]
pub struct ConcreteGroup {
    labels: Vec<String>,
    table: Vec<u16>,
    identity: usize,
    generators: Vec<usize>,
}

impl ConcreteGroup {
    /// Builds the group generated by `actions` acting on the right of a set of
    /// `size` normal forms, starting from `identity`.
    ///
    /// Element `y` is identified with the product of generators along a
    /// breadth-first path to it, and `x·y` is that path applied to `x`. The
    /// result is only accepted if it is associative, which Light's test
    /// reduces to `(x·y)·g = x·(y·g)` for generators `g`.
    fn from_actions(size: usize, identity: usize, actions: &[Vec<usize>], labels: Vec<String>) -> Result<Self> {
        if size > u16::MAX as usize {
            return Err(Error::InvalidGroup(format!("{size} elements is beyond the table limit")));
        }
        // breadth-first spanning tree from the identity
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; size];
        let mut seen = vec![false; size];
        let mut order = vec![identity];
        seen[identity] = true;
        let mut queue = VecDeque::from([identity]);
        while let Some(y) = queue.pop_front() {
            for (gi, act) in actions.iter().enumerate() {
                let z = act[y];
                if !seen[z] {
                    seen[z] = true;
                    parent[z] = Some((y, gi));
                    order.push(z);
                    queue.push_back(z);
                }
            }
        }
        let index: Vec<usize> = {
            let mut idx = vec![usize::MAX; size];
            for (i, &e) in order.iter().enumerate() {
                idx[e] = i;
            }
            idx
        };
        let k = order.len();
        let local = |e: usize| index[e];

        // column y holds x·y for every x
        let mut table = vec![0u16; k * k];
        for (x, &e) in order.iter().enumerate() {
            table[x * k] = local(e) as u16;
        }
        for (yi, &y) in order.iter().enumerate().skip(1) {
            let (p, gi) = parent[y].expect("tree parent");
            let pi = local(p);
            for x in 0..k {
                let v = order[table[x * k + pi] as usize];
                let w = actions[gi][v];
                if index[w] == usize::MAX {
                    return Err(Error::InvalidGroup("generator action leaves the generated set".into()));
                }
                table[x * k + yi] = index[w] as u16;
            }
        }

        let light_ok = (0..k).into_par_iter().all(|x| {
            (0..k).all(|yi| {
                actions.iter().all(|act| {
                    let lhs = act[order[table[x * k + yi] as usize]];
                    let y_g = local(act[order[yi]]);
                    lhs == order[table[x * k + y_g] as usize]
                })
            })
        });
        if !light_ok {
            return Err(Error::InvalidGroup("normal-form rules are not associative".into()));
        }
        let group = ConcreteGroup {
            labels: order.iter().map(|&e| labels[e].clone()).collect(),
            table,
            identity: 0,
            generators: actions.iter().map(|act| local(act[identity])).collect(),
        };
        if !(0..k).all(|x| group.inverse_of(x).is_some()) {
            return Err(Error::InvalidGroup("some element has no inverse".into()));
        }
        Ok(group)
    }

    pub fn order(&self) -> usize {
        self.labels.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.order() + y] as usize
    }

    fn inverse_of(&self, x: usize) -> Option<usize> {
        (0..self.order()).find(|&y| self.mul(x, y) == self.identity && self.mul(y, x) == self.identity)
    }

    pub fn inverse(&self, x: usize) -> usize {
        self.inverse_of(x).expect("checked at construction")
    }

    pub fn pow(&self, x: usize, e: i64) -> usize {
        let base = if e < 0 { self.inverse(x) } else { x };
        (0..e.unsigned_abs()).fold(self.identity, |acc, _| self.mul(acc, base))
    }

    /// Evaluates a word in the generators.
    pub fn eval(&self, word: &[(usize, i64)]) -> usize {
        word.iter().fold(self.identity, |acc, &(i, e)| self.mul(acc, self.pow(self.generators[i], e)))
    }

    /// Indices of the relators that do not evaluate to the identity.
    pub fn failing_relators(&self, p: &GroupPresentation) -> Vec<usize> {
        p.relators().iter().enumerate().filter(|(_, w)| self.eval(w) != self.identity).map(|(i, _)| i).collect()
    }

    pub fn is_abelian(&self) -> bool {
        let k = self.order();
        (0..k).into_par_iter().all(|x| (x + 1..k).all(|y| self.mul(x, y) == self.mul(y, x)))
    }

    /// Conjugacy class sizes, ascending.
    pub fn class_sizes(&self) -> Vec<usize> {
        let k = self.order();
        let inv: Vec<usize> = (0..k).map(|x| self.inverse(x)).collect();
        let mut class = vec![usize::MAX; k];
        let mut sizes = Vec::new();
        for x in 0..k {
            if class[x] != usize::MAX {
                continue;
            }
            let mut size = 0;
            for gg in 0..k {
                let c = self.mul(self.mul(inv[gg], x), gg);
                if class[c] == usize::MAX {
                    class[c] = sizes.len();
                    size += 1;
                }
            }
            sizes.push(size);
        }
        sizes.sort_unstable();
        sizes
    }
}

fn cyclic(order: u64) -> Result<ConcreteGroup> {
    let k = order as usize;
    let act: Vec<usize> = (0..k).map(|a| (a + 1) % k).collect();
    ConcreteGroup::from_actions(k, 0, &[act], (0..k).map(|a| format!("c^{a}")).collect())
}

/// `⟨γ, σ | γ^n, σ^m, σγσ⁻¹ = γ^l⟩` on pairs `(a, b)` meaning `γ^a σ^b`, with
/// `(a₁, b₁)(a₂, b₂) = (a₁ + l^{b₁} a₂, b₁ + b₂)`.
pub fn realize_metacyclic(n: u64, m: u64, l: u64) -> Result<ConcreteGroup> {
    if n < 1 || m < 1 || l.gcd(&n) != 1 || pow_mod(l, m, n) != 1 % n {
        return Err(Error::InvalidGroup(format!("metacyclic needs gcd(l, n) = 1 and l^m = 1 mod n; got (n, m, l) = ({n}, {m}, {l})")));
    }
    if n * m > MAX_CAP {
        return Err(Error::InvalidGroup(format!("order {} exceeds {MAX_CAP}", n * m)));
    }
    let (nu, mu) = (n as usize, m as usize);
    let id = |a: usize, b: usize| a * mu + b;
    let mut gamma = vec![0; nu * mu];
    let mut sigma = vec![0; nu * mu];
    let mut labels = vec![String::new(); nu * mu];
    for a in 0..nu {
        for b in 0..mu {
            let lb = pow_mod(l, b as u64, n) as usize;
            gamma[id(a, b)] = id((a + lb) % nu, b);
            sigma[id(a, b)] = id(a, (b + 1) % mu);
            labels[id(a, b)] = format!("γ^{a}σ^{b}");
        }
    }
    ConcreteGroup::from_actions(nu * mu, 0, &[gamma, sigma], labels)
}

/// `D_{2k}` on pairs `(k, f)` meaning `ρ^k σ^f`.
fn dihedral(k: u64) -> Result<ConcreteGroup> {
    let ku = k as usize;
    let id = |r: usize, f: usize| r * 2 + f;
    let mut rho = vec![0; 2 * ku];
    let mut sigma = vec![0; 2 * ku];
    let mut labels = vec![String::new(); 2 * ku];
    for r in 0..ku {
        // σρ = ρ⁻¹σ
        rho[id(r, 0)] = id((r + 1) % ku, 0);
        rho[id(r, 1)] = id((r + ku - 1) % ku, 1);
        sigma[id(r, 0)] = id(r, 1);
        sigma[id(r, 1)] = id(r, 0);
        labels[id(r, 0)] = format!("ρ^{r}");
        labels[id(r, 1)] = format!("ρ^{r}σ");
    }
    ConcreteGroup::from_actions(2 * ku, 0, &[rho, sigma], labels)
}

/// `D_{2m} × C_n` as pairs of a dihedral and a cyclic element.
pub fn direct_product_d2m_cn(n: u64, m: u64) -> Result<ConcreteGroup> {
    let (nu, mu) = (n as usize, m as usize);
    let id = |a: usize, k: usize, f: usize| (a * mu + k) * 2 + f;
    let size = 2 * mu * nu;
    let (mut gamma, mut sigma, mut tau) = (vec![0; size], vec![0; size], vec![0; size]);
    let mut labels = vec![String::new(); size];
    for a in 0..nu {
        for k in 0..mu {
            for f in 0..2 {
                let x = id(a, k, f);
                gamma[x] = id((a + 1) % nu, k, f);
                // dihedral part as reflection sequences: σ^f ρ^k with ρ = στ
                sigma[x] = id(a, k, 1 - f);
                // ρ^k σ^f · τ = ρ^k σ^f σ ρ = ρ^{k+1} when f = 1, ρ^{k-1} σ when f = 0
                tau[x] = if f == 1 { id(a, (k + 1) % mu, 0) } else { id(a, (k + mu - 1) % mu, 1) };
                labels[x] = format!("(ρ^{k}σ^{f}, c^{a})");
            }
        }
    }
    ConcreteGroup::from_actions(size, id(0, 0, 0), &[gamma, sigma, tau], labels)
}

/// Normal forms `γ^a ρ^k σ^f` with `ρ = στ`, for the extensions of `D_{2m}`.
///
/// From the relators: `ργ = γ^T ρ`, `ρ^m = γ^C`, and
/// `σρ = γ^{A+B} ρ⁻¹ σ`. Right multiplication by `τ = σ γ^{-A} ρ` is
/// composed from the other three.
fn extension_group(n: u64, m: u64, e: Extension) -> Result<ConcreteGroup> {
    let (nu, mu) = (n as usize, m as usize);
    let size = 2 * mu * nu;
    let id = |a: usize, k: usize, f: usize| (a * mu + k) * 2 + f;
    let split = |x: usize| (x / 2 / mu, (x / 2) % mu, x % 2);
    let t_pow = |k: usize| if e.inverts && k % 2 == 1 { nu - 1 } else { 1 };
    let add = |a: usize, coeff: usize, k: usize| (a + coeff % nu * t_pow(k)) % nu;

    let mul_gamma = |x: usize, c: usize| {
        let (a, k, f) = split(x);
        id(add(a, c, k), k, f)
    };
    let mul_sigma = |x: usize| {
        let (a, k, f) = split(x);
        if f == 0 {
            id(a, k, 1)
        } else {
            id(add(a, e.a as usize, k), k, 0)
        }
    };
    let (ca, cb, cc) = (e.a as usize, e.b as usize, e.c as usize);
    let mul_rho = |x: usize| {
        let (a, k, f) = split(x);
        if f == 0 {
            return if k + 1 == mu { id((a + cc) % nu, 0, 0) } else { id(a, k + 1, 0) };
        }
        // γ^a ρ^k · γ^E ρ^{m-1} σ with E = A + B - C T^{m-1}
        let c_term = (cc * t_pow(mu - 1)) % nu;
        let exp = (ca + cb + nu - c_term) % nu;
        let a2 = add(a, exp, k);
        if k == 0 {
            id(a2, mu - 1, 1)
        } else {
            id((a2 + cc) % nu, k - 1, 1)
        }
    };
    let minus_a = (nu - ca % nu) % nu;

    let mut gamma = vec![0; size];
    let mut sigma = vec![0; size];
    let mut tau = vec![0; size];
    let mut labels = vec![String::new(); size];
    for x in 0..size {
        gamma[x] = mul_gamma(x, 1);
        sigma[x] = mul_sigma(x);
        tau[x] = mul_rho(mul_gamma(mul_sigma(x), minus_a));
        let (a, k, f) = split(x);
        labels[x] = format!("γ^{a}(στ)^{k}σ^{f}");
    }
    ConcreteGroup::from_actions(size, 0, &[gamma, sigma, tau], labels)
}

/// Concrete model for a presentation.
pub fn realize(p: &GroupPresentation) -> Result<ConcreteGroup> {
    if p.expected_order > MAX_CAP {
        return Err(Error::InvalidGroup(format!("order {} exceeds {MAX_CAP}", p.expected_order)));
    }
    match p.tag {
        GroupTag::Cmn => cyclic(p.n * p.m),
        GroupTag::Metacyclic(l) => realize_metacyclic(p.n, p.m, l),
        GroupTag::D2mn => dihedral(p.n * p.m),
        tag => extension_group(p.n, p.m, tag.extension(p.n).expect("extension tag")),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "kebab-case")]
pub enum Verification {
    Matches { order: u64 },
    Differs { expected: u64, actual: u64 },
    TooLarge { expected: u64, cap: u64 },
}

/// Builds the concrete model, checks every relator on it and compares its
/// order with the expected one.
///
/// The normal forms already bound the presented group's order from above, so
/// a model of that size satisfying every relator pins the order down.
pub fn verify_presentation(p: &GroupPresentation, cap: u64) -> Result<Verification> {
    if cap > MAX_CAP {
        return Err(Error::InvalidGroup(format!("cap must be at most {MAX_CAP}")));
    }
    if p.expected_order > cap {
        return Ok(Verification::TooLarge { expected: p.expected_order, cap });
    }
    let group = realize(p)?;
    let failing = group.failing_relators(p);
    if !failing.is_empty() {
        let text = p.relation_strings();
        let names: Vec<&str> = failing.iter().map(|&i| text[i].as_str()).collect();
        return Err(Error::InvalidGroup(format!("model of {} violates {}", p.tag, names.join(", "))));
    }
    let actual = group.order() as u64;
    Ok(if actual == p.expected_order {
        Verification::Matches { order: actual }
    } else {
        Verification::Differs { expected: p.expected_order, actual }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn reduced_examples() {
        assert_eq!(reduced_group(2, 1, 5, true).unwrap().kind, ReducedKind::D2m);
        assert_eq!(reduced_group(3, 1, 4, true).unwrap().kind, ReducedKind::Cm);
        assert_eq!(reduced_group(2, 3, 2, true).unwrap().kind, ReducedKind::D2m);
        assert_eq!(reduced_group(2, 1, 5, true).unwrap().to_string(), "D_10");
        assert!(reduced_group(1, 1, 5, true).is_err());
    }

    fn tags(n: u64, m: u64, r: ReducedKind) -> Vec<GroupTag> {
        full_group_candidates(n, m, r).unwrap().into_iter().map(|p| p.tag).collect()
    }

    #[test]
    fn candidate_examples() {
        assert_eq!(tags(3, 2, ReducedKind::Cm), vec![GroupTag::Cmn, GroupTag::Metacyclic(2)]);
        assert_eq!(tags(3, 4, ReducedKind::D2m), vec![GroupTag::D2mxCn]);
        assert_eq!(tags(2, 3, ReducedKind::D2m), vec![GroupTag::D2mxCn, GroupTag::Gspecial]);
        assert_eq!(tags(4, 2, ReducedKind::D2m).len(), 6);
        // l = 4 has order 2 mod 5 and gcd(4, 5) = 1, so only n - 1 survives
        assert_eq!(tags(5, 4, ReducedKind::Cm), vec![GroupTag::Cmn, GroupTag::Metacyclic(4)]);
        // gcd(2, 8) = 2: every l with l^2 = 1 mod 8
        assert_eq!(
            tags(8, 2, ReducedKind::Cm),
            vec![GroupTag::Cmn, GroupTag::Metacyclic(3), GroupTag::Metacyclic(5), GroupTag::Metacyclic(7)]
        );
    }

    #[test]
    fn coprime_case_only_offers_n_minus_one() {
        for n in 2..=30u64 {
            for m in 2..=30u64 {
                if m.gcd(&n) != 1 {
                    continue;
                }
                for p in full_group_candidates(n, m, ReducedKind::Cm).unwrap() {
                    if let GroupTag::Metacyclic(l) = p.tag {
                        assert_eq!(l, n - 1);
                    }
                }
            }
        }
    }

    #[test]
    fn metacyclic_examples() {
        let s3 = realize_metacyclic(3, 2, 2).unwrap();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        assert_eq!(s3.class_sizes(), vec![1, 2, 3]);

        let direct = realize_metacyclic(4, 3, 1).unwrap();
        assert_eq!(direct.order(), 12);
        assert!(direct.is_abelian());

        let g = realize_metacyclic(5, 4, 2).unwrap();
        assert_eq!(g.order(), 20);
        let p = GroupPresentation::new(GroupTag::Metacyclic(2), 5, 4).unwrap();
        assert!(g.failing_relators(&p).is_empty());

        assert!(realize_metacyclic(4, 2, 2).is_err());
        assert!(realize_metacyclic(5, 3, 2).is_err());
    }

    #[test]
    fn metacyclic_product_formula() {
        let (n, m, l) = (7u64, 3u64, 2u64);
        let g = realize_metacyclic(n, m, l).unwrap();
        let parse = |s: &str| -> (u64, u64) {
            let (a, b) = s.trim_start_matches("γ^").split_once("σ^").unwrap();
            (a.parse().unwrap(), b.parse().unwrap())
        };
        for x in 0..g.order() {
            for y in 0..g.order() {
                let (a1, b1) = parse(g.label(x));
                let (a2, b2) = parse(g.label(y));
                let want = ((a1 + pow_mod(l, b1, n) * a2) % n, (b1 + b2) % m);
                assert_eq!(parse(g.label(g.mul(x, y))), want);
            }
        }
    }

    #[test]
    fn metacyclic_relators_exhaustive() {
        for n in 2..=12u64 {
            for m in 2..=12u64 {
                for l in 1..n {
                    if l.gcd(&n) != 1 || pow_mod(l, m, n) != 1 {
                        continue;
                    }
                    let g = realize_metacyclic(n, m, l).unwrap();
                    assert_eq!(g.order() as u64, n * m);
                    assert_eq!(g.is_abelian(), l == 1, "({n}, {m}, {l})");
                    if l > 1 {
                        let p = GroupPresentation::new(GroupTag::Metacyclic(l), n, m).unwrap();
                        assert!(g.failing_relators(&p).is_empty());
                    }
                }
            }
        }
    }

    #[test]
    fn verification_examples() {
        let p = GroupPresentation::new(GroupTag::D2mxCn, 3, 4).unwrap();
        assert_eq!(verify_presentation(&p, MAX_CAP).unwrap(), Verification::Matches { order: 24 });
        let p = GroupPresentation::new(GroupTag::Metacyclic(2), 3, 2).unwrap();
        assert_eq!(verify_presentation(&p, MAX_CAP).unwrap(), Verification::Matches { order: 6 });
        let p = GroupPresentation::new(GroupTag::G2, 2, 2).unwrap();
        assert_eq!(verify_presentation(&p, MAX_CAP).unwrap(), Verification::Matches { order: 8 });
        let p = GroupPresentation::new(GroupTag::G1, 6, 6).unwrap();
        assert_eq!(verify_presentation(&p, 50).unwrap(), Verification::TooLarge { expected: 72, cap: 50 });
        assert!(verify_presentation(&p, MAX_CAP + 1).is_err());
    }

    #[test]
    fn every_candidate_verifies_small() {
        for n in 2..=6u64 {
            for m in 2..=6u64 {
                for reduced in [ReducedKind::Cm, ReducedKind::D2m] {
                    for p in full_group_candidates(n, m, reduced).unwrap() {
                        let v = verify_presentation(&p, MAX_CAP).unwrap();
                        assert_eq!(v, Verification::Matches { order: p.expected_order }, "{p}");
                    }
                }
            }
        }
    }

    #[test]
    fn direct_product_agrees_with_presentation() {
        for n in 2..=6u64 {
            for m in 2..=6u64 {
                let direct = direct_product_d2m_cn(n, m).unwrap();
                let p = GroupPresentation::new(GroupTag::D2mxCn, n, m).unwrap();
                assert!(direct.failing_relators(&p).is_empty());
                let model = realize(&p).unwrap();
                assert_eq!(direct.order(), model.order());
                assert_eq!(direct.class_sizes(), model.class_sizes());
            }
        }
    }

    #[test]
    fn extensions_are_not_all_alike() {
        // G2 with n = m = 2: σ⁴ = τ⁴ = 1, and (στ)² = 1 gives στ = τ⁻¹σ⁻¹ = τσ,
        // so it is abelian, unlike D_8
        let d8 = dihedral(4).unwrap();
        let g2 = realize(&GroupPresentation::new(GroupTag::G2, 2, 2).unwrap()).unwrap();
        assert_eq!(g2.order(), 8);
        assert_eq!(d8.class_sizes(), vec![1, 1, 2, 2, 2]);
        assert!(g2.is_abelian());
        assert!(!d8.is_abelian());
        // γ is central in G2 and G4, inverted by τ in G1 and G3
        for (tag, central) in [(GroupTag::G1, false), (GroupTag::G2, true), (GroupTag::G3, false), (GroupTag::G4, true)] {
            let g = realize(&GroupPresentation::new(tag, 4, 2).unwrap()).unwrap();
            let gamma = g.generators()[0];
            let is_central = (0..g.order()).all(|x| g.mul(x, gamma) == g.mul(gamma, x));
            assert_eq!(is_central, central, "{tag}");
        }
    }

    #[test]
    fn inconsistent_rules_are_rejected() {
        // right actions that do not come from a group
        let a = vec![1, 0, 2];
        let b = vec![0, 2, 1];
        let labels = (0..3).map(|i| i.to_string()).collect();
        assert!(ConcreteGroup::from_actions(3, 0, &[a, b], labels).is_err());
    }

    #[test]
    fn gap_text() {
        let p = GroupPresentation::new(GroupTag::G4, 4, 2).unwrap();
        assert_eq!(
            p.to_gap(),
            "F := FreeGroup(\"gamma\", \"sigma\", \"tau\");\ngamma := F.1; sigma := F.2; tau := F.3;\n\
             G := F / [ gamma^4, sigma^2*(gamma)^-1, tau^2*(gamma^3)^-1, (sigma*tau)^2*(gamma^2)^-1, \
             sigma*gamma*sigma^-1*(gamma)^-1, tau*gamma*tau^-1*(gamma)^-1 ];\n"
        );
        let m = GroupPresentation::new(GroupTag::Metacyclic(2), 3, 2).unwrap();
        assert_eq!(m.relation_strings(), vec!["γ^3 = 1", "σ^2 = 1", "σγσ⁻¹ = γ^2"]);
    }

    #[test]
    fn presentation_rejects_bad_parameters() {
        assert!(GroupPresentation::new(GroupTag::Metacyclic(2), 4, 2).is_err());
        assert!(GroupPresentation::new(GroupTag::Gspecial, 3, 3).is_err());
        assert!(GroupPresentation::new(GroupTag::G1, 4, 3).is_err());
        assert!(GroupPresentation::new(GroupTag::Cmn, 1, 3).is_err());
    }

    #[test]
    fn labels_are_distinct() {
        let g = realize(&GroupPresentation::new(GroupTag::G3, 4, 4).unwrap()).unwrap();
        let set: HashSet<&str> = (0..g.order()).map(|x| g.label(x)).collect();
        assert_eq!(set.len(), 32);
    }
}
