//! Quadrature against the gamma-weighted measure μ on the half-lines
//! re z = n/2 (n >= -1), closed-form inner products in H²(μ), and verifiers
//! that check each closed form against quadrature.
//!
//! The line n carries the density |Γ(n/2 + 1 + iy)|² / (2π (n+1)!) in y and has
//! exact mass 2^{-(n+2)}, so the measure has total mass 1. Truncating the line
//! sum at `max_line` leaves mass 2^{-(max_line+2)}; truncating each line to
//! |y| <= `y_cutoff` leaves the difference between the exact and the computed
//! line mass. Both are added into the `tail_estimate` of every report.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{domain, Error, Result};
use crate::quadrature::PanelRule;
use crate::report::VerificationReport;
use crate::specialfn::{abs_gamma_sq_unchecked, ln_gamma_real, log_gamma_unchecked};

/// Truncation and resolution of the μ-quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Largest line index n in the sum (the line n = -1 is always included).
    pub max_line: i32,
    /// Half-width of each line integral.
    pub y_cutoff: f64,
    /// Gauss–Legendre panels per unit length.
    pub nodes_per_unit: usize,
    /// Target absolute error.
    pub tolerance: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            max_line: 40,
            y_cutoff: 40.0,
            nodes_per_unit: 8,
            tolerance: 1e-8,
        }
    }
}

impl QuadratureSpec {
    pub fn with_tolerance(tolerance: f64) -> Self {
        Self {
            tolerance,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_line < -1 {
            return Err(Error::Config(format!("max_line must be >= -1, got {}", self.max_line)));
        }
        if !(self.y_cutoff > 0.0) || !self.y_cutoff.is_finite() {
            return Err(Error::Config(format!("y_cutoff must be positive, got {}", self.y_cutoff)));
        }
        if self.nodes_per_unit < 2 {
            return Err(Error::Config(format!(
                "nodes_per_unit must be >= 2, got {}",
                self.nodes_per_unit
            )));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::Config(format!("tolerance must be positive, got {}", self.tolerance)));
        }
        Ok(())
    }

    /// Mass of the lines beyond `max_line`.
    pub fn line_truncation_tail(&self) -> f64 {
        0.5f64.powi(self.max_line + 2)
    }
}

/// A point n/2 + iy on one of the lines carrying μ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfPlanePoint {
    pub line_index: i32,
    pub y: f64,
}

impl HalfPlanePoint {
    pub fn new(line_index: i32, y: f64) -> Result<Self> {
        if line_index < -1 {
            return Err(domain("HalfPlanePoint", format!("line index {line_index} < -1")));
        }
        Ok(Self { line_index, y })
    }

    pub fn re(&self) -> f64 {
        0.5 * self.line_index as f64
    }

    pub fn z(&self) -> Complex64 {
        Complex64::new(self.re(), self.y)
    }
}

/// f(z) = Σ c_j a_j^z with every a_j in (0, 1].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentialCoefficients {
    terms: Vec<(f64, Complex64)>,
}

impl ExponentialCoefficients {
    pub fn new(terms: Vec<(f64, Complex64)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(domain("ExponentialCoefficients", "empty term list"));
        }
        if let Some((a, _)) = terms.iter().find(|(a, _)| !(*a > 0.0 && *a <= 1.0)) {
            return Err(domain("ExponentialCoefficients", format!("base {a} outside (0, 1]")));
        }
        Ok(Self { terms })
    }

    pub fn single(a: f64) -> Result<Self> {
        Self::new(vec![(a, Complex64::new(1.0, 0.0))])
    }

    pub fn terms(&self) -> &[(f64, Complex64)] {
        &self.terms
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.terms.iter().map(|(a, c)| c * (z * a.ln()).exp()).sum()
    }

    /// ⟨f, g⟩ in H²(μ) from the exponential inner products.
    pub fn inner(&self, other: &Self) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                acc += c * d.conj() * ip_exponentials_unchecked(*a, *b);
            }
        }
        acc
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner(self).re
    }

    /// s^z f(z), again an exponential sum.
    pub fn scaled(&self, s: f64) -> Result<Self> {
        Self::new(self.terms.iter().map(|(a, c)| (a * s, *c)).collect())
    }

    /// f + k g
    pub fn add_scaled(&self, k: Complex64, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().map(|(a, c)| (*a, k * c)));
        Self { terms }
    }
}

/// Density of μ on line n at height y.
pub fn line_weight(n: i32, y: f64) -> Result<f64> {
    if n < -1 {
        return Err(domain("line_weight", format!("line index {n} < -1")));
    }
    Ok(line_weight_unchecked(n, y))
}

fn line_weight_unchecked(n: i32, y: f64) -> f64 {
    let x = 0.5 * n as f64 + 1.0;
    let log_fact = ln_gamma_real(n as f64 + 2.0).unwrap_or(0.0);
    (2.0 * log_gamma_unchecked(Complex64::new(x, y.abs())).re - log_fact).exp() / (2.0 * PI)
}

/// Exact mass 2^{-(n+2)} of line n.
pub fn exact_line_mass(n: i32) -> f64 {
    0.5f64.powi(n + 2)
}

#[derive(Debug, Clone)]
struct LineRule {
    index: i32,
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

/// Precomputed nodes and μ-weights for a given [`QuadratureSpec`].
#[derive(Debug, Clone)]
pub struct MuQuadrature {
    spec: QuadratureSpec,
    lines: Vec<LineRule>,
    masses: Vec<f64>,
    tail: f64,
}

impl MuQuadrature {
    pub fn new(spec: &QuadratureSpec) -> Result<Self> {
        spec.validate()?;
        let rule = PanelRule::symmetric(spec.y_cutoff, spec.nodes_per_unit);
        let lines: Vec<LineRule> = (-1..=spec.max_line)
            .into_par_iter()
            .map(|n| {
                let (nodes, weights): (Vec<f64>, Vec<f64>) =
                    rule.iter().map(|(y, w)| (y, w * line_weight_unchecked(n, y))).unzip();
                LineRule { index: n, nodes, weights }
            })
            .collect();
        let masses: Vec<f64> = lines.iter().map(|l| l.weights.iter().sum()).collect();
        let y_tail: f64 = lines
            .iter()
            .zip(&masses)
            .map(|(l, m)| (exact_line_mass(l.index) - m).max(0.0))
            .sum();
        Ok(Self {
            spec: *spec,
            lines,
            masses,
            tail: y_tail + spec.line_truncation_tail(),
        })
    }

    pub fn spec(&self) -> &QuadratureSpec {
        &self.spec
    }

    /// μ-mass outside the truncated domain.
    pub fn tail_estimate(&self) -> f64 {
        self.tail
    }

    /// Fails when the truncated domain misses more mass than the tolerance allows.
    pub fn check_budget(&self) -> Result<()> {
        if self.tail > self.spec.tolerance {
            Err(Error::QuadratureBudget {
                tail: self.tail,
                tolerance: self.spec.tolerance,
            })
        } else {
            Ok(())
        }
    }

    /// Computed mass of line n over [-Y, Y].
    pub fn line_mass(&self, n: i32) -> Option<f64> {
        self.lines.iter().position(|l| l.index == n).map(|i| self.masses[i])
    }

    /// Σ_n ∫ f(n/2 + iy) w_n(y) dy over the truncated domain.
    ///
    /// Lines are integrated in parallel and reduced in line order, so the
    /// result does not depend on the thread count.
    pub fn integrate<F>(&self, f: F) -> Complex64
    where
        F: Fn(HalfPlanePoint) -> Complex64 + Sync,
    {
        self.integrate_lines(f, |_| true)
    }

    pub fn integrate_lines<F, P>(&self, f: F, include: P) -> Complex64
    where
        F: Fn(HalfPlanePoint) -> Complex64 + Sync,
        P: Fn(i32) -> bool + Sync,
    {
        let per_line: Vec<Complex64> = self
            .lines
            .par_iter()
            .map(|line| {
                if !include(line.index) {
                    return Complex64::new(0.0, 0.0);
                }
                let mut acc = Complex64::new(0.0, 0.0);
                for (y, w) in line.nodes.iter().zip(&line.weights) {
                    acc += *w * f(HalfPlanePoint { line_index: line.index, y: *y });
                }
                acc
            })
            .collect();
        per_line.into_iter().sum()
    }

    pub fn integrate_line<F>(&self, n: i32, f: F) -> Complex64
    where
        F: Fn(HalfPlanePoint) -> Complex64 + Sync,
    {
        self.integrate_lines(f, |k| k == n)
    }
}

/// One-shot μ-integral; see [`MuQuadrature::integrate`].
pub fn integrate_mu<F>(f: F, spec: &QuadratureSpec) -> Result<Complex64>
where
    F: Fn(HalfPlanePoint) -> Complex64 + Sync,
{
    Ok(MuQuadrature::new(spec)?.integrate(f))
}

/// Computed mass of line n over [-Y, Y].
pub fn line_mass(n: i32, spec: &QuadratureSpec) -> Result<f64> {
    if n < -1 {
        return Err(domain("line_mass", format!("line index {n} < -1")));
    }
    spec.validate()?;
    let rule = PanelRule::symmetric(spec.y_cutoff, spec.nodes_per_unit);
    Ok(rule.integrate(|y| line_weight_unchecked(n, y)))
}

fn check_unit_interval(op: &'static str, name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v <= 1.0 {
        Ok(())
    } else {
        Err(domain(op, format!("{name} = {v} outside (0, 1]")))
    }
}

/// ⟨a^z, b^z⟩ = 1/(a + b - ab).
pub fn ip_exponentials(a: f64, b: f64) -> Result<f64> {
    check_unit_interval("ip_exponentials", "a", a)?;
    check_unit_interval("ip_exponentials", "b", b)?;
    Ok(ip_exponentials_unchecked(a, b))
}

fn ip_exponentials_unchecked(a: f64, b: f64) -> f64 {
    1.0 / (a + b - a * b)
}

fn check_kernel_point(op: &'static str, w: Complex64) -> Result<()> {
    if w.re > -0.5 && w.im.is_finite() {
        Ok(())
    } else {
        Err(domain(op, format!("kernel point {w} needs re(w) > -1/2")))
    }
}

/// ⟨T_{t^z}* T_{s^z} k_w, k_w⟩ = s^w t^{w̄} / (s + t - st)^{2 re w + 1}.
///
/// Accepts s, t in (0, 1]; t = 1 gives ⟨T_{s^z} k_w, k_w⟩ = s^w.
pub fn kernel_ip(s: f64, t: f64, w: Complex64) -> Result<Complex64> {
    check_unit_interval("kernel_ip", "s", s)?;
    check_unit_interval("kernel_ip", "t", t)?;
    check_kernel_point("kernel_ip", w)?;
    let num = (w * s.ln() + w.conj() * t.ln()).exp();
    Ok(num / (s + t - s * t).powf(2.0 * w.re + 1.0))
}

/// ‖K_w‖² = Γ(2 re w + 1) / |Γ(w̄ + 1)|².
pub fn kernel_norm_sq(w: Complex64) -> Result<f64> {
    check_kernel_point("kernel_norm_sq", w)?;
    Ok(kernel_norm_sq_unchecked(w))
}

pub(crate) fn kernel_norm_sq_unchecked(w: Complex64) -> f64 {
    let num = ln_gamma_real(2.0 * w.re + 1.0).unwrap_or(f64::NAN);
    (num - 2.0 * log_gamma_unchecked(w.conj() + 1.0).re).exp()
}

/// log |K_w(z)|² with K_w(z) = Γ(z + w̄ + 1) / (Γ(z + 1) Γ(w̄ + 1)).
fn log_kernel_abs_sq(z: Complex64, w: Complex64) -> f64 {
    let wb = w.conj();
    2.0 * (log_gamma_unchecked(z + wb + 1.0) - log_gamma_unchecked(z + 1.0) - log_gamma_unchecked(wb + 1.0))
        .re
}

/// Quadrature of ∫ s^z t^{z̄} |K_w|²/‖K_w‖² dμ against [`kernel_ip`].
pub fn verify_kernel_ip(s: f64, t: f64, w: Complex64, spec: &QuadratureSpec) -> Result<VerificationReport> {
    let closed = kernel_ip(s, t, w)?;
    let quad = MuQuadrature::new(spec)?;
    quad.check_budget()?;
    Ok(verify_kernel_ip_with(&quad, s, t, w, closed))
}

pub(crate) fn verify_kernel_ip_with(
    quad: &MuQuadrature,
    s: f64,
    t: f64,
    w: Complex64,
    closed: Complex64,
) -> VerificationReport {
    let log_norm = kernel_norm_sq_unchecked(w).ln();
    let (ls, lt) = (s.ln(), t.ln());
    let numeric = quad.integrate(|p| {
        let z = p.z();
        let phase = z * ls + z.conj() * lt;
        (phase + (log_kernel_abs_sq(z, w) - log_norm)).exp()
    });
    VerificationReport::new(
        "kernel_inner_product",
        json!({ "s": s, "t": t, "w": [w.re, w.im], "tolerance": quad.spec.tolerance }),
        closed,
        numeric,
        quad.tail_estimate(),
        quad.spec.tolerance,
    )
}

/// ∫₀¹ ⟨(sa)^z, b^z⟩ ds = ln((a + b - ab)/b) / (a(1 - b)), continued by its limit 1 at b = 1.
pub fn mean_identity_closed_form(a: f64, b: f64) -> Result<f64> {
    check_unit_interval("mean_identity", "a", a)?;
    check_unit_interval("mean_identity", "b", b)?;
    // ∫₀¹ ds / (b + s·a(1-b)) = ln(1 + x)/(x b) with x = a(1-b)/b.
    let x = a * (1.0 - b) / b;
    let ratio = if x.abs() < 1e-8 {
        1.0 - x / 2.0 + x * x / 3.0
    } else {
        x.ln_1p() / x
    };
    Ok(ratio / b)
}

/// Averaging identity ∫₀¹ ⟨(sa)^z, b^z⟩ ds = ⟨(1+z)^{-1} a^z, b^z⟩_{L²(μ)}.
pub fn verify_mean_identity(a: f64, b: f64, spec: &QuadratureSpec) -> Result<VerificationReport> {
    let closed = mean_identity_closed_form(a, b)?;
    let quad = MuQuadrature::new(spec)?;
    quad.check_budget()?;
    let (la, lb) = (a.ln(), b.ln());
    let numeric = quad.integrate(|p| {
        let z = p.z();
        (z * la + z.conj() * lb).exp() / (z + 1.0)
    });
    Ok(VerificationReport::new(
        "mean_identity",
        json!({ "a": a, "b": b, "tolerance": spec.tolerance }),
        Complex64::new(closed, 0.0),
        numeric,
        quad.tail_estimate(),
        spec.tolerance,
    ))
}

/// ∫|Γ(x + 1 + iy)|² dy = 2π Γ(2x + 2) 2^{-(2x+2)}.
pub fn gamma_line_norm_sq(x: f64) -> Result<f64> {
    if !(x > -1.0) {
        return Err(domain("gamma_line_norm_sq", format!("x = {x} <= -1")));
    }
    let c = 2.0 * x + 2.0;
    Ok(2.0 * PI * (ln_gamma_real(c)? - c * 2f64.ln()).exp())
}

/// Quadrature of ‖Γ(x + 1 + i·) a^{x + i·}‖²_{L²(ℝ)} and its truncation tail.
fn strip_line_norm_sq(a: f64, x: f64, spec: &QuadratureSpec) -> Result<(f64, f64)> {
    let rule = PanelRule::symmetric(spec.y_cutoff, spec.nodes_per_unit);
    let raw = rule.integrate(|y| abs_gamma_sq_unchecked(x + 1.0, y));
    let tail = (gamma_line_norm_sq(x)? - raw).max(0.0);
    Ok((a.powf(2.0 * x) * raw, a.powf(2.0 * x) * tail))
}

/// Log-convexity of line norms for F(z) = Γ(z + 1) a^z across three vertical lines.
pub fn verify_three_lines(
    a: f64,
    alpha: f64,
    beta: f64,
    gamma: f64,
    spec: &QuadratureSpec,
) -> Result<VerificationReport> {
    if !(a > 0.0 && a <= 1.0) {
        return Err(domain("verify_three_lines", format!("a = {a} outside (0, 1]")));
    }
    if !(-0.5 <= alpha && alpha < beta && beta < gamma) {
        return Err(domain(
            "verify_three_lines",
            format!("need -1/2 <= alpha < beta < gamma, got ({alpha}, {beta}, {gamma})"),
        ));
    }
    spec.validate()?;
    let (na, ta) = strip_line_norm_sq(a, alpha, spec)?;
    let (nb, tb) = strip_line_norm_sq(a, beta, spec)?;
    let (ng, tg) = strip_line_norm_sq(a, gamma, spec)?;
    let tail = ta.max(tb).max(tg);
    if tail > spec.tolerance {
        return Err(Error::QuadratureBudget {
            tail,
            tolerance: spec.tolerance,
        });
    }
    let theta = (gamma - beta) / (gamma - alpha);
    let bound = na.sqrt().powf(theta) * ng.sqrt().powf(1.0 - theta);
    Ok(VerificationReport::upper_bound(
        "three_lines",
        json!({ "a": a, "alpha": alpha, "beta": beta, "gamma": gamma, "tolerance": spec.tolerance }),
        bound,
        nb.sqrt(),
        tail,
        spec.tolerance,
    ))
}

/// ‖f‖² <= (m + 3) Σ_{n ≠ m} ∫ |f(n/2 + iy)|² w_n(y) dy.
pub fn verify_norm_bound(
    f: &ExponentialCoefficients,
    m: i32,
    spec: &QuadratureSpec,
) -> Result<VerificationReport> {
    if m < 0 {
        return Err(domain("verify_norm_bound", format!("m = {m} < 0")));
    }
    let quad = MuQuadrature::new(spec)?;
    quad.check_budget()?;
    Ok(verify_norm_bound_with(&quad, f, m))
}

pub(crate) fn verify_norm_bound_with(
    quad: &MuQuadrature,
    f: &ExponentialCoefficients,
    m: i32,
) -> VerificationReport {
    let lhs = f.norm_sq();
    let partial = quad.integrate_lines(|p| Complex64::new(f.eval(p.z()).norm_sqr(), 0.0), |n| n != m);
    let rhs = (m as f64 + 3.0) * partial.re;
    let tol = quad.spec.tolerance;
    VerificationReport::upper_bound(
        "norm_bound",
        json!({ "m": m, "terms": f.terms().len(), "tolerance": tol }),
        rhs,
        lhs,
        quad.tail_estimate(),
        tol * rhs.abs(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn line_weight_values() {
        assert!((line_weight(-1, 0.0).unwrap() - 0.5).abs() < 1e-14);
        assert!((line_weight(0, 0.0).unwrap() - 1.0 / (2.0 * PI)).abs() < 1e-15);
        assert!((line_weight(2, 0.0).unwrap() - 1.0 / (12.0 * PI)).abs() < 1e-15);
        assert_eq!(line_weight(3, 2.5).unwrap(), line_weight(3, -2.5).unwrap());
        assert!(line_weight(-2, 0.0).is_err());
    }

    #[test]
    fn line_masses_match_geometric_oracle() {
        let spec = QuadratureSpec::default();
        for n in -1..=12 {
            let m = line_mass(n, &spec).unwrap();
            assert!((m - exact_line_mass(n)).abs() < 1e-12, "n={n} m={m}");
        }
    }

    // Σ_n a^n·mass_n must reproduce ⟨a^z, a^z⟩ = 1/(2a - a²); this pins the
    // oracle mass_n = 2^{-(n+2)} independently of any quadrature.
    #[test]
    fn line_mass_oracle_matches_generating_function() {
        for a in [0.1f64, 0.35, 0.5, 0.8, 1.0] {
            let series: f64 = (-1..400).map(|n| a.powi(n) * exact_line_mass(n)).sum();
            assert!((series - ip_exponentials(a, a).unwrap()).abs() < 1e-13);
        }
    }

    #[test]
    fn total_mass_and_exponential_means() {
        let quad = MuQuadrature::new(&QuadratureSpec::default()).unwrap();
        let total = quad.integrate(|_| c(1.0, 0.0));
        assert!((total.re - 1.0).abs() < 1e-8);
        let line = quad.integrate_line(-1, |_| c(1.0, 0.0));
        assert!((line.re - 0.5).abs() < 1e-8);
        for cc in [0.1, 0.5, 0.9, 1.0] {
            let v = quad.integrate(|p| (p.z() * f64::ln(cc)).exp());
            assert!((v - 1.0).norm() < 1e-8, "c={cc}: {v}");
        }
        assert!(quad.tail_estimate() < 1e-12);
    }

    #[test]
    fn refinement_changes_less_than_tail() {
        let base = QuadratureSpec::default();
        let q0 = MuQuadrature::new(&base).unwrap();
        let v0 = q0.integrate(|_| c(1.0, 0.0));
        for spec in [
            QuadratureSpec { y_cutoff: 80.0, ..base },
            QuadratureSpec { nodes_per_unit: 16, ..base },
        ] {
            let v = integrate_mu(|_| c(1.0, 0.0), &spec).unwrap();
            assert!((v - v0).norm() < q0.tail_estimate());
        }
    }

    #[test]
    fn exponential_inner_products() {
        assert_eq!(ip_exponentials(1.0, 1.0).unwrap(), 1.0);
        assert!((ip_exponentials(0.5, 0.5).unwrap() - 4.0 / 3.0).abs() < 1e-15);
        assert_eq!(ip_exponentials(0.5, 1.0).unwrap(), 1.0);
        assert!(ip_exponentials(0.0, 0.5).is_err());
        assert!(ip_exponentials(0.5, 1.5).is_err());
    }

    #[test]
    fn exponential_inner_products_by_quadrature() {
        let quad = MuQuadrature::new(&QuadratureSpec::default()).unwrap();
        let grid = [0.15, 0.4, 0.7, 1.0];
        for a in grid {
            for b in grid {
                let (la, lb) = (f64::ln(a), f64::ln(b));
                let v = quad.integrate(|p| (p.z() * la + p.z().conj() * lb).exp());
                assert!((v - ip_exponentials(a, b).unwrap()).norm() < 1e-6);
            }
        }
    }

    #[test]
    fn kernel_ip_closed_form_examples() {
        assert!((kernel_ip(0.5, 0.5, c(0.0, 0.0)).unwrap() - 4.0 / 3.0).norm() < 1e-15);
        assert!((kernel_ip(0.25, 0.25, c(0.5, 0.0)).unwrap() - 64.0 / 49.0).norm() < 1e-14);
        for ell in 1..8 {
            let s: f64 = 0.3;
            let v = kernel_ip(s, s, c(ell as f64 / 2.0, 0.0)).unwrap();
            let expected = s.powi(ell) / (2.0 * s - s * s).powi(ell + 1);
            assert!((v.re - expected).abs() < 1e-12 * expected);
        }
        assert!(kernel_ip(0.5, 0.5, c(-0.5, 0.0)).is_err());
    }

    #[test]
    fn kernel_ip_symmetries() {
        let w = c(0.3, -1.2);
        for (s, t) in [(0.2, 0.7), (0.5, 0.9)] {
            assert!((kernel_ip(s, t, c(0.0, 0.0)).unwrap().re - ip_exponentials(s, t).unwrap()).abs() < 1e-14);
            let a = kernel_ip(s, t, w).unwrap();
            let b = kernel_ip(t, s, w).unwrap();
            assert!((a - b.conj()).norm() < 1e-14);
        }
    }

    #[test]
    fn kernel_norms() {
        assert!((kernel_norm_sq(c(0.0, 0.0)).unwrap() - 1.0).abs() < 1e-14);
        assert!((kernel_norm_sq(c(1.0, 0.0)).unwrap() - 2.0).abs() < 1e-13);
        assert!((kernel_norm_sq(c(0.5, 0.0)).unwrap() - 4.0 / PI).abs() < 1e-13);
        assert!(kernel_norm_sq(c(-0.6, 0.0)).is_err());
    }

    #[test]
    fn kernel_ip_quadrature_examples() {
        let spec = QuadratureSpec::with_tolerance(1e-6);
        for (s, t, w) in [(0.5, 0.5, c(0.0, 0.0)), (0.25, 0.75, c(0.5, 0.0))] {
            let r = verify_kernel_ip(s, t, w, &spec).unwrap();
            assert!(r.pass, "{r:?}");
        }
        let loose = QuadratureSpec {
            nodes_per_unit: 16,
            tolerance: 1e-4,
            ..QuadratureSpec::default()
        };
        let r = verify_kernel_ip(0.5, 0.5, c(-0.4, 2.0), &loose).unwrap();
        assert!(r.pass, "{r:?}");
    }

    #[test]
    fn mean_identity_closed_forms() {
        assert!((mean_identity_closed_form(1.0, 1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((mean_identity_closed_form(0.5, 0.5).unwrap() - 4.0 * 1.5f64.ln()).abs() < 1e-14);
        assert!((mean_identity_closed_form(0.5, 1.0).unwrap() - 1.0).abs() < 1e-15);
        // continuity through b = 1
        let near = mean_identity_closed_form(0.3, 1.0 - 1e-10).unwrap();
        assert!((near - 1.0).abs() < 1e-9);
        // direct quadrature of the defining integral
        let rule = PanelRule::interval(0.0, 1.0, 32);
        for (a, b) in [(0.25, 0.75), (0.9, 0.1)] {
            let direct = rule.integrate(|s| ip_exponentials(s * a, b).unwrap_or(0.0));
            assert!((direct - mean_identity_closed_form(a, b).unwrap()).abs() < 1e-13);
        }
    }

    #[test]
    fn mean_identity_quadrature() {
        let spec = QuadratureSpec::with_tolerance(1e-6);
        for (a, b) in [(1.0, 1.0), (0.5, 0.5), (0.5, 1.0)] {
            let r = verify_mean_identity(a, b, &spec).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn three_lines_examples() {
        let spec = QuadratureSpec::with_tolerance(1e-9);
        for (a, x) in [(0.5, (-0.5, 0.0, 0.5)), (1.0, (-0.5, 0.25, 3.0)), (0.9, (0.0, 1.0, 2.0))] {
            let r = verify_three_lines(a, x.0, x.1, x.2, &spec).unwrap();
            assert!(r.pass, "{r:?}");
        }
        assert!(verify_three_lines(0.5, 0.0, 0.0, 1.0, &spec).is_err());
        assert!(verify_three_lines(0.5, -0.7, 0.0, 1.0, &spec).is_err());
    }

    #[test]
    fn gamma_line_norm_closed_form_matches_quadrature() {
        let spec = QuadratureSpec::default();
        for x in [-0.5, 0.0, 0.7, 2.0] {
            let (v, _) = strip_line_norm_sq(1.0, x, &spec).unwrap();
            assert!((v - gamma_line_norm_sq(x).unwrap()).abs() < 1e-10 * v);
        }
        assert!((gamma_line_norm_sq(-0.5).unwrap() - PI).abs() < 1e-13);
    }

    #[test]
    fn norm_bound_examples() {
        let spec = QuadratureSpec::default();
        let one = ExponentialCoefficients::single(1.0).unwrap();
        let r = verify_norm_bound(&one, 0, &spec).unwrap();
        assert!(r.pass);
        assert!((r.closed_form[0] - 9.0 / 4.0).abs() < 1e-8);
        let half = ExponentialCoefficients::single(0.5).unwrap();
        let r = verify_norm_bound(&half, 0, &spec).unwrap();
        assert!(r.pass);
        assert!((r.numeric[0] - 4.0 / 3.0).abs() < 1e-14);
        assert!((r.closed_form[0] - 3.0 * (4.0 / 3.0 - 0.25)).abs() < 1e-8);
        let diff = ExponentialCoefficients::new(vec![(0.3, c(1.0, 0.0)), (0.7, c(-1.0, 0.0))]).unwrap();
        assert!(verify_norm_bound(&diff, 1, &spec).unwrap().pass);
    }

    #[test]
    fn starved_spec_reports_budget_error() {
        let spec = QuadratureSpec {
            y_cutoff: 2.0,
            ..QuadratureSpec::default()
        };
        let quad = MuQuadrature::new(&spec).unwrap();
        assert!(quad.tail_estimate() > 1e-4);
        assert!(matches!(
            verify_mean_identity(0.5, 0.5, &spec),
            Err(Error::QuadratureBudget { .. })
        ));
    }

    #[test]
    fn spec_validation() {
        let bad = [
            QuadratureSpec { max_line: -2, ..QuadratureSpec::default() },
            QuadratureSpec { y_cutoff: 0.0, ..QuadratureSpec::default() },
            QuadratureSpec { nodes_per_unit: 1, ..QuadratureSpec::default() },
            QuadratureSpec { tolerance: 0.0, ..QuadratureSpec::default() },
        ];
        for spec in bad {
            assert!(matches!(spec.validate(), Err(Error::Config(_))));
        }
        assert!(QuadratureSpec { max_line: -1, ..QuadratureSpec::default() }.validate().is_ok());
    }
}
