//! Build explicit curves y^n = f(x^m), print them with their quotients
//! X1: y^n = f(x) and X2: y^n = x f(x), and compare the genera.

use supersplit::curves::{parse_rational, SuperellipticCurve};

fn show(n: u64, m: u64, coeffs: &[&str]) -> supersplit::Result<()> {
    let coeffs = coeffs.iter().map(|c| parse_rational(c)).collect::<supersplit::Result<Vec<_>>>()?;
    let curve = SuperellipticCurve::with_coeffs(n, m, coeffs)?;
    let q = curve.quotient_equations()?;
    println!("{}  (g = {})", curve, curve.genus());
    println!("  X1: {}  (g1 = {})", q.x1, q.g1);
    println!("  X2: {}  (g2 = {})", q.x2, q.g2);
    println!("  g1 + g2 = {}\n", q.g1 + q.g2);
    Ok(())
}

fn main() -> supersplit::Result<()> {
    show(2, 2, &["3"])?;
    show(2, 2, &["1", "-2"])?;
    show(3, 3, &[])?;
    show(3, 2, &["3/2"])?;

    // repeated roots are rejected: x^4 + 2x^2 + 1 = (x^2 + 1)^2
    let bad = SuperellipticCurve::with_coeffs(2, 2, vec![parse_rational("2")?]);
    println!("y^2 = x^4 + 2x^2 + 1: {}", bad.unwrap_err());
    Ok(())
}
