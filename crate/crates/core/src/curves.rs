//! Superelliptic curves `y^n = f(x^m)` and `y^n = x f(x^m)`, their genus,
//! and the two degree-`m` quotient curves.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Genus from the ramification of `y^n = f(x)`, `deg f = d`, evaluated as
/// written for any `d >= 1`: `1 + (nd - n - d - gcd(d, n)) / 2`.
pub fn genus_formula(n: u64, d: u64) -> i64 {
    let (n, d) = (n as i64, d as i64);
    let twice = n * d - n - d - n.gcd(&d);
    debug_assert!(twice % 2 == 0);
    1 + twice / 2
}

/// Genus of `y^n = f(x)` with squarefree `f` of degree `d > n`.
pub fn genus_superelliptic(n: u64, d: u64) -> Result<u64> {
    if n < 2 || d <= n {
        return Err(Error::DegreeNotAboveLevel { n, d });
    }
    Ok(genus_formula(n, d) as u64)
}

/// Genera of the quotients `y^n = f(X)` (degree δ) and `y^n = X f(X)`
/// (degree δ+1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientGenera {
    pub g1: u64,
    pub g2: u64,
    /// Set when a degree does not exceed `n`, so the genus formula was applied
    /// outside its stated range.
    pub formula_extended: bool,
}

pub fn quotient_genera(n: u64, delta: u64) -> Result<QuotientGenera> {
    if n < 2 || delta < 1 {
        return Err(Error::InvalidCurve(format!("need n >= 2 and delta >= 1, got n = {n}, delta = {delta}")));
    }
    let g1 = genus_formula(n, delta);
    let g2 = genus_formula(n, delta + 1);
    assert!(g1 >= 0 && g2 >= 0, "negative quotient genus for n = {n}, delta = {delta}");
    Ok(QuotientGenera { g1: g1 as u64, g2: g2 as u64, formula_extended: delta < n })
}

/// For `m = λn` the subfield `L = k(X^m, X^i Y)` uses `i = λ(n-1)`. Returns
/// `i` and whether `ζ_m^i ζ_n = 1`, i.e. whether `i/m + 1/n` is an integer.
pub fn subfield_exponent(n: u64, lambda: u64) -> (u64, bool) {
    let i = lambda * (n - 1);
    let m = lambda * n;
    let sum = Ratio::new(i, m) + Ratio::new(1, n);
    (i, sum.is_integer())
}

/// True iff the polynomial (coefficients in descending order) is squarefree,
/// i.e. `gcd(f, f')` is constant.
pub fn discriminant_nonzero(coeffs: &[BigRational]) -> Result<bool> {
    let f = poly::from_descending(coeffs);
    if f.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    if f.len() == 1 {
        return Err(Error::ConstantPolynomial);
    }
    let g = poly::gcd(f.clone(), poly::derivative(&f));
    Ok(g.len() == 1)
}

/// A curve `y^n = f(x^m)` (or `y^n = x f(x^m)` when `twisted`) with
/// `f(X) = X^δ + a_1 X^(δ-1) + ... + a_(δ-1) X + 1`.
///
/// Equality is structural.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuperellipticCurve {
    n: u64,
    m: u64,
    delta: u64,
    coeffs: Option<Vec<BigRational>>,
    twisted: bool,
}

impl SuperellipticCurve {
    /// Generic curve with no explicit coefficients.
    pub fn new(n: u64, m: u64, delta: u64) -> Result<Self> {
        if n < 2 || m < 1 || delta < 1 {
            return Err(Error::InvalidCurve(format!("n = {n}, m = {m}, delta = {delta}")));
        }
        Ok(SuperellipticCurve { n, m, delta, coeffs: None, twisted: false })
    }

    /// Curve with explicit middle coefficients `a_1..a_(δ-1)`; δ is
    /// `coeffs.len() + 1`. Rejects repeated roots.
    pub fn with_coeffs(n: u64, m: u64, coeffs: Vec<BigRational>) -> Result<Self> {
        let mut c = Self::new(n, m, coeffs.len() as u64 + 1)?;
        c.coeffs = Some(coeffs);
        c.check_squarefree()?;
        Ok(c)
    }

    pub fn twisted(mut self) -> Result<Self> {
        self.twisted = true;
        if self.coeffs.is_some() {
            self.check_squarefree()?;
        }
        Ok(self)
    }

    fn check_squarefree(&self) -> Result<()> {
        if let Some(f) = self.expanded() {
            if !discriminant_nonzero(&f)? {
                return Err(Error::InvalidCurve(format!("{} has repeated roots", self.equation())));
            }
        }
        Ok(())
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    pub fn delta(&self) -> u64 {
        self.delta
    }

    pub fn coeffs(&self) -> Option<&[BigRational]> {
        self.coeffs.as_deref()
    }

    pub fn is_twisted(&self) -> bool {
        self.twisted
    }

    /// Degree of the right-hand side in `x`.
    pub fn degree(&self) -> u64 {
        self.delta * self.m + u64::from(self.twisted)
    }

    /// Genus by the ramification formula; see [`Self::formula_extended`].
    pub fn genus(&self) -> u64 {
        let g = genus_formula(self.n, self.degree());
        assert!(g >= 0);
        g as u64
    }

    /// True when `degree <= n`, outside the range where the genus formula
    /// is stated.
    pub fn formula_extended(&self) -> bool {
        self.degree() <= self.n
    }

    /// Coefficients of the right-hand side in `x`, descending.
    pub fn expanded(&self) -> Option<Vec<BigRational>> {
        let coeffs = self.coeffs.as_ref()?;
        let m = self.m as usize;
        let mut out = vec![BigRational::zero(); self.degree() as usize + 1];
        let mut put = |power_of_big_x: usize, c: BigRational| {
            out[power_of_big_x * m] = c;
        };
        let delta = self.delta as usize;
        put(0, BigRational::one());
        for (i, a) in coeffs.iter().enumerate() {
            put(i + 1, a.clone());
        }
        put(delta, BigRational::one());
        // With the x-twist the vector is one longer, so every power shifts up
        // by one and the constant term stays zero.
        Some(out)
    }

    /// `y^n = ...` with descending powers; generic curves print symbolically.
    pub fn equation(&self) -> String {
        let rhs = match self.expanded() {
            Some(f) => poly::render_descending(&f, "x"),
            None => {
                let inner = if self.m == 1 { "x".to_string() } else { format!("x^{}", self.m) };
                let f = format!("f({inner})");
                if self.twisted {
                    format!("x*{f}")
                } else {
                    f
                }
            }
        };
        format!("y^{} = {}", self.n, rhs)
    }

    /// The quotients by `σ: x -> ζ_m x` and by `στ`.
    pub fn quotient_equations(&self) -> Result<QuotientPair> {
        if self.twisted {
            return Err(Error::TwistedInput);
        }
        let coeffs = self.coeffs.clone().ok_or(Error::MissingCoefficients)?;
        let genera = quotient_genera(self.n, self.delta)?;
        let x1 = SuperellipticCurve::with_coeffs(self.n, 1, coeffs)?;
        let x2 = x1.clone().twisted()?;
        Ok(QuotientPair { x1, x2, g1: genera.g1, g2: genera.g2 })
    }
}

impl fmt::Display for SuperellipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.equation())
    }
}

impl Serialize for SuperellipticCurve {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("SuperellipticCurve", 8)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("m", &self.m)?;
        st.serialize_field("delta", &self.delta)?;
        st.serialize_field("twisted", &self.twisted)?;
        let coeffs: Option<Vec<String>> = self.coeffs.as_ref().map(|c| c.iter().map(|a| a.to_string()).collect());
        st.serialize_field("coeffs", &coeffs)?;
        st.serialize_field("genus", &self.genus())?;
        st.serialize_field("formula_extended", &self.formula_extended())?;
        st.serialize_field("equation", &self.equation())?;
        st.end()
    }
}

/// The quotient curves `X1: y^n = f(X)` and `X2: y^n = X f(X)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientPair {
    pub x1: SuperellipticCurve,
    pub x2: SuperellipticCurve,
    pub g1: u64,
    pub g2: u64,
}

/// Parses `"3"`, `"-2/5"` style rationals.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

mod poly {
    //! Dense univariate polynomials over Q, ascending coefficients, no
    //! trailing zeros.

    use super::*;

    pub fn from_descending(c: &[BigRational]) -> Vec<BigRational> {
        let mut p: Vec<BigRational> = c.iter().rev().cloned().collect();
        trim(&mut p);
        p
    }

    fn trim(p: &mut Vec<BigRational>) {
        while p.last().is_some_and(Zero::is_zero) {
            p.pop();
        }
    }

    pub fn derivative(p: &[BigRational]) -> Vec<BigRational> {
        let mut d: Vec<BigRational> = p
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
            .collect();
        trim(&mut d);
        d
    }

    fn rem(mut a: Vec<BigRational>, b: &[BigRational]) -> Vec<BigRational> {
        let lead = b.last().expect("nonzero divisor");
        while a.len() >= b.len() {
            let q = a.last().unwrap() / lead;
            let shift = a.len() - b.len();
            for (i, c) in b.iter().enumerate() {
                a[shift + i] -= &q * c;
            }
            trim(&mut a);
        }
        a
    }

    pub fn gcd(mut a: Vec<BigRational>, mut b: Vec<BigRational>) -> Vec<BigRational> {
        while !b.is_empty() {
            let r = rem(a, &b);
            a = b;
            b = r;
        }
        a
    }

    pub fn render_descending(c: &[BigRational], var: &str) -> String {
        let deg = c.len().saturating_sub(1);
        let mut out = String::new();
        for (k, coeff) in c.iter().enumerate() {
            if coeff.is_zero() {
                continue;
            }
            let power = deg - k;
            let sign = if coeff.is_negative() { "-" } else { "+" };
            if out.is_empty() {
                if sign == "-" {
                    out.push('-');
                }
            } else {
                out.push_str(&format!(" {sign} "));
            }
            let mag = coeff.abs();
            let mono = match power {
                0 => String::new(),
                1 => var.to_string(),
                p => format!("{var}^{p}"),
            };
            if mag.is_one() && power > 0 {
                out.push_str(&mono);
            } else if mag.is_integer() {
                out.push_str(&format!("{mag}{mono}"));
            } else {
                out.push_str(&format!("({mag}){mono}"));
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    fn qs(v: &[i64]) -> Vec<BigRational> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn genus_examples() {
        assert_eq!(genus_superelliptic(2, 5).unwrap(), 2);
        assert_eq!(genus_superelliptic(2, 6).unwrap(), 2);
        assert_eq!(genus_superelliptic(3, 4).unwrap(), 3);
        assert!(matches!(genus_superelliptic(2, 2), Err(Error::DegreeNotAboveLevel { n: 2, d: 2 })));
        assert!(genus_superelliptic(1, 5).is_err());
    }

    #[test]
    fn coprime_branch_matches_closed_form() {
        for n in 2..20u64 {
            for d in n + 1..60 {
                if n.gcd(&d) == 1 {
                    assert_eq!(genus_superelliptic(n, d).unwrap(), (n - 1) * (d - 1) / 2);
                }
            }
        }
    }

    #[test]
    fn quotient_genera_examples() {
        let g = quotient_genera(2, 3).unwrap();
        assert_eq!((g.g1, g.g2), (1, 1));
        assert_eq!(g.g1 + g.g2, genus_superelliptic(2, 6).unwrap());
        let g = quotient_genera(3, 1).unwrap();
        assert_eq!((g.g1, g.g2), (0, 1));
        assert!(g.formula_extended);
        let g = quotient_genera(2, 1).unwrap();
        assert_eq!((g.g1, g.g2), (0, 0));
    }

    #[test]
    fn quotient_genera_agree_above_level() {
        for n in 2..10u64 {
            for delta in n + 1..50 {
                let g = quotient_genera(n, delta).unwrap();
                assert_eq!(g.g1, genus_superelliptic(n, delta).unwrap());
                assert_eq!(g.g2, genus_superelliptic(n, delta + 1).unwrap());
                assert!(!g.formula_extended);
            }
        }
    }

    #[test]
    fn quotient_equations_hyperelliptic() {
        let c = SuperellipticCurve::with_coeffs(2, 2, qs(&[3])).unwrap();
        assert_eq!(c.equation(), "y^2 = x^4 + 3x^2 + 1");
        let pair = c.quotient_equations().unwrap();
        assert_eq!(pair.x1.equation(), "y^2 = x^2 + 3x + 1");
        assert_eq!(pair.x2.equation(), "y^2 = x^3 + 3x^2 + x");
        assert_eq!((pair.g1, pair.g2), (0, 1));
        assert_eq!(pair.x1.genus(), pair.g1);
        assert_eq!(pair.x2.genus(), pair.g2);
        assert_eq!(pair.x1.coeffs(), c.coeffs());
        assert_eq!(pair.x2.coeffs(), c.coeffs());
    }

    #[test]
    fn quotient_equations_delta3() {
        let c = SuperellipticCurve::with_coeffs(2, 2, qs(&[1, -2])).unwrap();
        let pair = c.quotient_equations().unwrap();
        assert_eq!((pair.g1, pair.g2), (1, 1));
    }

    #[test]
    fn quotient_equations_trigonal() {
        let c = SuperellipticCurve::with_coeffs(3, 3, vec![]).unwrap();
        assert_eq!(c.equation(), "y^3 = x^3 + 1");
        let pair = c.quotient_equations().unwrap();
        assert_eq!(pair.x1.equation(), "y^3 = x + 1");
        assert_eq!(pair.x2.equation(), "y^3 = x^2 + x");
        assert_eq!((pair.g1, pair.g2), (0, 1));
    }

    #[test]
    fn quotient_equations_errors() {
        let twisted = SuperellipticCurve::with_coeffs(2, 2, qs(&[3])).unwrap().twisted().unwrap();
        assert!(matches!(twisted.quotient_equations(), Err(Error::TwistedInput)));
        let generic = SuperellipticCurve::new(2, 2, 3).unwrap();
        assert!(matches!(generic.quotient_equations(), Err(Error::MissingCoefficients)));
    }

    #[test]
    fn repeated_roots_rejected() {
        // x^4 + 2x^2 + 1 = (x^2 + 1)^2
        assert!(SuperellipticCurve::with_coeffs(2, 2, qs(&[2])).is_err());
    }

    #[test]
    fn subfield_exponent_examples() {
        assert_eq!(subfield_exponent(2, 1), (1, true));
        assert_eq!(subfield_exponent(3, 2), (4, true));
        assert_eq!(subfield_exponent(5, 3), (12, true));
    }

    #[test]
    fn subfield_exponent_always_verifies() {
        for n in 2..=50 {
            for lambda in 1..=50 {
                assert!(subfield_exponent(n, lambda).1);
            }
        }
    }

    #[test]
    fn discriminant_examples() {
        assert!(discriminant_nonzero(&qs(&[1, 3, 1])).unwrap());
        assert!(!discriminant_nonzero(&qs(&[1, 2, 1])).unwrap());
        assert!(discriminant_nonzero(&qs(&[1, 0])).unwrap());
        assert!(matches!(discriminant_nonzero(&qs(&[0, 0])), Err(Error::ZeroPolynomial)));
        assert!(matches!(discriminant_nonzero(&qs(&[5])), Err(Error::ConstantPolynomial)));
        // (x - 1/2)^2 (x + 3)
        let c = vec![q(1), q(2), BigRational::new(BigInt::from(-11), BigInt::from(4)), BigRational::new(BigInt::from(3), BigInt::from(4))];
        assert!(!discriminant_nonzero(&c).unwrap());
    }

    #[test]
    fn json_rendering() {
        let c = SuperellipticCurve::with_coeffs(2, 2, vec![BigRational::new(BigInt::from(3), BigInt::from(2))]).unwrap();
        let v = serde_json::to_value(&c).unwrap();
        assert_eq!(v["n"], 2);
        assert_eq!(v["delta"], 2);
        assert_eq!(v["coeffs"][0], "3/2");
        assert_eq!(v["genus"], 1);
        assert_eq!(v["equation"], "y^2 = x^4 + (3/2)x^2 + 1");
        let generic = SuperellipticCurve::new(3, 2, 4).unwrap().twisted().unwrap();
        let v = serde_json::to_value(&generic).unwrap();
        assert!(v["coeffs"].is_null());
        assert_eq!(v["equation"], "y^3 = x*f(x^2)");
        assert_eq!(v["genus"], genus_superelliptic(3, 9).unwrap());
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_rational("-2/4").unwrap(), BigRational::new(BigInt::from(-1), BigInt::from(2)));
        assert_eq!(parse_rational(" 7 ").unwrap(), q(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
