//! Kernel vectors are eigenvectors of the adjoint Toeplitz operator:
//! T*_{s^z} k_w = s^{w̄} k_w, exactly on every truncation.

use compsemi::operators::{kernel_vector, toeplitz_matrix, verify_adjoint_eigen};
use num_complex::Complex64;

fn main() -> compsemi::Result<()> {
    let w = Complex64::new(1.0, 0.0);
    let k = kernel_vector(w, 6)?;
    println!("k_1 coordinates: {:?}", k.coords.iter().map(|c| c.re).collect::<Vec<_>>());
    let t_star = toeplitz_matrix(0.25, 6)?.adjoint();
    let image = t_star.apply(&k.coords)?;
    println!("T* k_1 / k_1 = {:?}", image[0] / k.coords[0]);

    for (s, w, n) in [(0.25, Complex64::new(1.0, 0.0), 10), (0.5, Complex64::new(0.3, 2.0), 200)] {
        let r = verify_adjoint_eigen(s, w, n)?;
        println!("s={s} w={w} N={n}: relative residual {:.2e} pass={}", r.numeric[0], r.pass);
    }
    Ok(())
}
