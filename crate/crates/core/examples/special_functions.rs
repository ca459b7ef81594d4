//! Complex log-Gamma and the transform of |Γ(c/2 + iα)|² against sech.

use compsemi::measure::QuadratureSpec;
use compsemi::specialfn::{log_gamma, sech_closed_form, verify_sech_integral};
use num_complex::Complex64;

fn main() -> compsemi::Result<()> {
    let z = Complex64::new(0.5, 3.0);
    println!("ln Γ({z}) = {}", log_gamma(z)?);
    let spec = QuadratureSpec::default();
    for c in [1.0, 2.0, 5.0] {
        let r = verify_sech_integral(c, std::f64::consts::LN_2, &spec)?;
        println!(
            "c={c}: closed {:.12} numeric {:.12} diff {:.1e}",
            sech_closed_form(c, std::f64::consts::LN_2),
            r.numeric[0],
            r.abs_diff
        );
    }
    Ok(())
}
