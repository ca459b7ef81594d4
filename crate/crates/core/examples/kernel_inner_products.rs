//! ⟨s^z K_w, t^z K_w⟩ in L²(μ): closed form, quadrature and the truncated
//! matrix quadratic form.

use compsemi::measure::{kernel_ip, verify_kernel_ip, QuadratureSpec};
use compsemi::operators::kernel_ip_matrix_form;
use num_complex::Complex64;

fn main() -> compsemi::Result<()> {
    let spec = QuadratureSpec::default();
    let cases = [
        (0.25, 0.25, Complex64::new(0.5, 0.0)),
        (0.5, 0.75, Complex64::new(1.0, 1.0)),
        (0.25, 0.75, Complex64::new(-0.3, 2.0)),
    ];
    for (s, t, w) in cases {
        let closed = kernel_ip(s, t, w)?;
        let report = verify_kernel_ip(s, t, w, &QuadratureSpec { tolerance: 1e-4, ..spec })?;
        print!("s={s} t={t} w={w}: closed {closed:.10}  quad diff {:.2e}", report.abs_diff);
        if w.re >= 0.0 {
            let form = kernel_ip_matrix_form(s, t, w, 400)?;
            print!("  matrix diff {:.2e}", (form - closed).norm());
        }
        println!();
    }
    Ok(())
}
