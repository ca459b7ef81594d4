//! Approximate eigenvectors on the circle of radius s^{-1/2}: the truncated
//! residual ‖(T_N − λ)k‖²/‖k‖² tracks the analytic value and falls like 1/ℓ.

use compsemi::operators::{residual_sequence, write_residual_csv};
use compsemi::spectra::single_spectrum;

fn main() -> compsemi::Result<()> {
    let s = 0.25;
    let sp = single_spectrum(s)?;
    println!("# radius {}", sp.radius);
    let rows = residual_sequence(s, 1.0, &[1, 2, 5, 10, 20, 50, 100], 400)?;
    write_residual_csv(&rows, std::io::stdout())?;
    for r in &rows {
        if !r.within_tail_bound() {
            eprintln!("ell={} outside its tail interval", r.ell);
        }
    }
    Ok(())
}
