//! Mass of μ, its line masses and the exponential means ∫ c^z dμ = 1.

use compsemi::measure::{exact_line_mass, MuQuadrature, QuadratureSpec};
use num_complex::Complex64;

fn main() -> compsemi::Result<()> {
    let spec = QuadratureSpec::default();
    let quad = MuQuadrature::new(&spec)?;
    quad.check_budget()?;
    println!("tail estimate {:.3e}", quad.tail_estimate());

    let total = quad.integrate(|_| Complex64::new(1.0, 0.0));
    println!("total mass     {:.15}", total.re);
    for n in -1..=4 {
        println!(
            "line {n:>2}: quadrature {:.15}  exact {:.15}",
            quad.line_mass(n).unwrap_or(0.0),
            exact_line_mass(n)
        );
    }
    for c in [0.1, 0.5, 0.9] {
        let v = quad.integrate(|p| (p.z() * f64::ln(c)).exp());
        println!("∫ {c}^z dμ = {:.12} {:+.2e}i", v.re, v.im);
    }
    Ok(())
}
