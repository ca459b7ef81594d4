//! Gamma-function machinery, Newton polynomials and the sech integral.
//!
//! Everything here is a pure function of its arguments.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde_json::json;

use crate::error::{domain, Error, Result};
use crate::measure::QuadratureSpec;
use crate::quadrature::PanelRule;
use crate::report::VerificationReport;

pub type ComplexValue = Complex64;

// Lanczos approximation, g = 671/128 with 14 terms (Numerical Recipes, 3rd ed.).
const LANCZOS_SHIFT: f64 = 5.242_187_5;
#[allow(clippy::excessive_precision)]
const LANCZOS_C0: f64 = 0.999_999_999_999_997_092;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 14] = [
    57.156_235_665_862_923_5,
    -59.597_960_355_475_491_2,
    14.136_097_974_741_747_1,
    -0.491_913_816_097_620_199,
    0.339_946_499_848_118_887e-4,
    0.465_236_289_270_485_756e-4,
    -0.983_744_753_048_795_646e-4,
    0.158_088_703_224_912_494e-3,
    -0.210_264_441_724_104_883e-3,
    0.217_439_618_115_212_643e-3,
    -0.164_318_106_536_763_890e-3,
    0.844_182_239_838_527_433e-4,
    -0.261_908_384_015_814_087e-4,
    0.368_991_826_595_316_234e-5,
];
const SQRT_TWO_PI: f64 = 2.506_628_274_631_000_5;

/// Index of a Newton polynomial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NewtonIndex(pub usize);

/// Principal branch of log Γ(z) for re(z) > 0.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re > 0.0) || !z.im.is_finite() {
        return Err(domain("log_gamma", format!("requires re(z) > 0, got {z}")));
    }
    Ok(log_gamma_unchecked(z))
}

pub(crate) fn log_gamma_unchecked(z: Complex64) -> Complex64 {
    let t = z + LANCZOS_SHIFT;
    let head = (z + 0.5) * t.ln() - t;
    let mut ser = Complex64::new(LANCZOS_C0, 0.0);
    let mut y = z;
    for c in LANCZOS_COEF {
        y += 1.0;
        ser += c / y;
    }
    head + (SQRT_TWO_PI * ser / z).ln()
}

/// ln Γ(x) for real x > 0.
pub fn ln_gamma_real(x: f64) -> Result<f64> {
    log_gamma(Complex64::new(x, 0.0)).map(|v| v.re)
}

/// |Γ(x+iy)|², evaluated as exp(2 re log Γ). Underflows to 0 for very large |y|.
pub fn abs_gamma_sq(x: f64, y: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(domain("abs_gamma_sq", format!("requires x > 0, got {x}")));
    }
    Ok(abs_gamma_sq_unchecked(x, y))
}

pub(crate) fn abs_gamma_sq_unchecked(x: f64, y: f64) -> f64 {
    // log Γ(conj z) = conj log Γ(z); evaluate at |y| so the result is exactly even.
    (2.0 * log_gamma_unchecked(Complex64::new(x, y.abs())).re).exp()
}

/// N_n(z) = (-1)^n z(z-1)...(z-n+1)/n!.
pub fn newton_poly(n: NewtonIndex, z: Complex64) -> Complex64 {
    let mut value = Complex64::new(1.0, 0.0);
    for k in 0..n.0 {
        let kf = k as f64;
        value *= (kf - z) / (kf + 1.0);
    }
    value
}

/// N_0(z), ..., N_{len-1}(z) by the same product recurrence.
pub fn newton_values(len: usize, z: Complex64) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(len);
    let mut value = Complex64::new(1.0, 0.0);
    for k in 0..len {
        out.push(value);
        let kf = k as f64;
        value *= (kf - z) / (kf + 1.0);
    }
    out
}

/// [½ sech(u/2)]^c.
pub fn sech_closed_form(c: f64, u: f64) -> f64 {
    (0.5 / (0.5 * u).cosh()).powf(c)
}

/// Quadrature of (1/2π)∫|Γ(c/2+iα)|² e^{-iuα} dα / Γ(c) against [½ sech(u/2)]^c.
///
/// The tail estimate is the mass of the u = 0 integrand outside [-Y, Y], obtained
/// from its exact total 2^{-c}.
pub fn verify_sech_integral(c: f64, u: f64, spec: &QuadratureSpec) -> Result<VerificationReport> {
    if !(c > 0.0) {
        return Err(domain("verify_sech_integral", format!("requires c > 0, got {c}")));
    }
    spec.validate()?;
    let rule = PanelRule::symmetric(spec.y_cutoff, spec.nodes_per_unit);
    let ln_gamma_c = ln_gamma_real(c)?;
    let half = 0.5 * c;
    let mut numeric = Complex64::new(0.0, 0.0);
    let mut mass = 0.0;
    for (alpha, w) in rule.iter() {
        let density =
            (2.0 * log_gamma_unchecked(Complex64::new(half, alpha.abs())).re - ln_gamma_c).exp();
        mass += w * density;
        numeric += w * density * Complex64::new(0.0, -u * alpha).exp();
    }
    numeric /= 2.0 * PI;
    mass /= 2.0 * PI;
    let tail = (0.5f64.powf(c) - mass).max(0.0);
    if tail > spec.tolerance {
        return Err(Error::QuadratureBudget {
            tail,
            tolerance: spec.tolerance,
        });
    }
    let closed = sech_closed_form(c, u);
    Ok(VerificationReport::new(
        "sech_integral",
        json!({ "c": c, "u": u, "tolerance": spec.tolerance }),
        Complex64::new(closed, 0.0),
        numeric,
        tail,
        spec.tolerance,
    ))
}
