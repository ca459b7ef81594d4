//! Lower bound ‖(T_{s^z} − s^{z₀})f‖² ≥ λ²/(m+3)‖f‖² for exponential sums f
//! and points z₀ = m/2 + iy₀ away from the spectrum.

use compsemi::measure::QuadratureSpec;
use compsemi::spectra::{exclusion_bound, random_exponential_sums, verify_separation};

fn main() -> compsemi::Result<()> {
    let spec = QuadratureSpec::default();
    let fs = random_exponential_sums(7, 3);
    for m in 0..3 {
        println!("s=0.25 m={m}: bound λ²/(m+3) = {:.6}", exclusion_bound(0.25, m)?);
        for f in &fs {
            let r = verify_separation(0.25, m, 1.0, f, &spec)?;
            println!("  lhs {:.6}  rhs {:.6}  pass={}", r.closed_form[0], r.numeric[0], r.pass);
        }
    }
    Ok(())
}
