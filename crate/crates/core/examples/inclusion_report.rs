//! Residual certificates that sampled symbol values lie in the spectrum.

use compsemi::apsymbol::{spectrum_inclusion_report, Combination};

fn main() -> compsemi::Result<()> {
    let a = Combination::parse("I + 0.5*C(0.25)")?;
    let report = spectrum_inclusion_report(&a, &[200, 400], &[0.0, 1.0], &[1, 4, 16])?;
    for sample in &report.samples {
        println!("y={} λ={:?}", sample.y, sample.lambda);
        for r in &sample.residuals {
            println!("  N={} ell={} residual {:.3e}", r.n, r.ell, r.value);
        }
    }
    println!("{}", report.note);
    Ok(())
}
