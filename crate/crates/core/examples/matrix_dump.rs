//! Truncated composition and Toeplitz matrices: binary round trip, norms and
//! smallest singular values.

use compsemi::operators::{
    composition_matrix, min_singular, operator_norm, read_matrix_binary, toeplitz_matrix, write_matrix_binary,
    write_matrix_csv, Basis,
};
use num_complex::Complex64;

fn main() -> compsemi::Result<()> {
    let c = composition_matrix(0.5, 4)?;
    write_matrix_csv(&c, std::io::stdout())?;

    let t = toeplitz_matrix(0.25, 50)?;
    let mut bytes = Vec::new();
    write_matrix_binary(&t, &mut bytes)?;
    let back = read_matrix_binary(bytes.as_slice(), Basis::Newton)?;
    println!("binary round trip exact: {}", back.entries() == t.entries());
    println!("‖T_50‖ = {:.6}", operator_norm(&t));
    for lambda in [Complex64::new(2.0, 0.0), Complex64::new(0.5, 0.0)] {
        println!("σ_min(T_50 − {lambda}) = {:.3e}", min_singular(&t, lambda));
    }
    Ok(())
}
