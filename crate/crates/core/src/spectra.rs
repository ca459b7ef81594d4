//! Approximate point spectra of T_{s^z} and joint spectra of finite families
//! (T_{s_1^z}, …, T_{s_n^z}) with s_j = e^{-q_j β}, q_j rational.
//!
//! A nonzero joint point is written (s_j^{-1/2} e^{iθ_j})_j. The curve
//! y ↦ (s_j^{-1/2+iy})_j has phases θ_j = -q_j β y, and its closure is cut out
//! by the congruences Σ k_j θ_j ≡ 0 (mod 2π) for k in the integer relation
//! lattice of q.

use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{domain, Error, Result};
use crate::measure::{ExponentialCoefficients, MuQuadrature, QuadratureSpec};
use crate::report::VerificationReport;
use crate::scale::{rational_to_f64, Scale};

/// σ_ap(T_{s^z}) = s^{-1/2}𝕋 ∪ {0}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SingleSpectrum {
    pub radius: f64,
    pub includes_zero: bool,
}

impl SingleSpectrum {
    pub fn contains(&self, lambda: Complex64, tol: f64) -> bool {
        let r = lambda.norm();
        (self.includes_zero && r <= tol) || (r - self.radius).abs() <= tol
    }
}

pub fn single_spectrum(s: f64) -> Result<SingleSpectrum> {
    if !(s > 0.0 && s < 1.0) {
        return Err(domain("single_spectrum", format!("s = {s} outside (0, 1)")));
    }
    Ok(SingleSpectrum {
        radius: s.powf(-0.5),
        includes_zero: true,
    })
}

/// λ_{s,m}²/(m+3) with λ_{s,m} = s^{m/2}(1 - √s).
pub fn exclusion_bound(s: f64, m: u32) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return Err(domain("exclusion_bound", format!("s = {s} outside (0, 1)")));
    }
    let lambda = s.powf(m as f64 / 2.0) * (1.0 - s.sqrt());
    Ok(lambda * lambda / (m as f64 + 3.0))
}

/// Parameters s_j = exp(-q_j β) with exact positive rationals q_j.
#[derive(Debug, Clone, PartialEq)]
pub struct ExponentTuple {
    beta: f64,
    q: Vec<Rational64>,
}

impl ExponentTuple {
    pub fn new(beta: f64, q: Vec<Rational64>) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(domain("ExponentTuple", format!("beta = {beta} must be positive")));
        }
        if q.is_empty() {
            return Err(domain("ExponentTuple", "empty exponent list"));
        }
        if let Some(bad) = q.iter().find(|x| **x <= Rational64::from_integer(0)) {
            return Err(domain("ExponentTuple", format!("exponent {bad} is not positive")));
        }
        for (i, a) in q.iter().enumerate() {
            if q[..i].contains(a) {
                return Err(domain("ExponentTuple", format!("exponent {a} repeated")));
            }
        }
        Ok(Self { beta, q })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn q(&self) -> &[Rational64] {
        &self.q
    }

    pub fn arity(&self) -> usize {
        self.q.len()
    }

    /// -q_j β
    pub fn ln_s(&self, j: usize) -> f64 {
        -rational_to_f64(self.q[j]) * self.beta
    }

    pub fn s(&self, j: usize) -> f64 {
        self.ln_s(j).exp()
    }

    /// s_j as an exact scale for word letters.
    pub fn scale(&self, j: usize) -> Scale {
        Scale::exp_neg(self.q[j], self.beta).expect("beta validated")
    }

    pub fn radius(&self, j: usize) -> f64 {
        (-0.5 * self.ln_s(j)).exp()
    }

    /// Sub-tuple on the given coordinates.
    pub fn project(&self, indices: &[usize]) -> Result<Self> {
        let q = indices
            .iter()
            .map(|&i| {
                self.q.get(i).copied().ok_or(Error::Arity {
                    expected: self.arity(),
                    found: i + 1,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.beta, q)
    }
}

/// Integer vectors k with Σ k_j q_j = 0, in Hermite normal form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationLattice {
    pub basis: Vec<Vec<i64>>,
}

impl RelationLattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Every basis vector satisfies Σ k_j q_j = 0 in exact rational arithmetic.
    pub fn is_relation_basis(&self, q: &[Rational64]) -> bool {
        self.basis.iter().all(|k| {
            k.len() == q.len()
                && k.iter()
                    .zip(q)
                    .fold(Rational64::from_integer(0), |acc, (ki, qi)| acc + *qi * *ki)
                    == Rational64::from_integer(0)
        })
    }
}

pub fn relation_lattice(t: &ExponentTuple) -> RelationLattice {
    let den = t.q.iter().fold(1i128, |acc, x| acc.lcm(&(*x.denom() as i128)));
    let mut a: Vec<i128> = t.q.iter().map(|x| *x.numer() as i128 * (den / *x.denom() as i128)).collect();
    let n = a.len();
    // unimodular column operations reducing a to a single nonzero entry
    let mut u: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect();
    loop {
        let nonzero: Vec<usize> = (0..n).filter(|&i| a[i] != 0).collect();
        if nonzero.len() <= 1 {
            break;
        }
        let p = *nonzero.iter().min_by_key(|&&i| a[i].abs()).expect("nonempty");
        for &j in &nonzero {
            if j == p {
                continue;
            }
            let f = Integer::div_floor(&a[j], &a[p]);
            a[j] -= f * a[p];
            for row in u.iter_mut() {
                row[j] -= f * row[p];
            }
        }
    }
    let pivot = (0..n).find(|&i| a[i] != 0).expect("q has positive entries");
    let rows: Vec<Vec<i128>> = (0..n)
        .filter(|&j| j != pivot)
        .map(|j| u.iter().map(|row| row[j]).collect())
        .collect();
    RelationLattice {
        basis: hermite_normal_form(rows)
            .into_iter()
            .map(|r| r.into_iter().map(|x| x as i64).collect())
            .collect(),
    }
}

/// Row-style Hermite normal form: positive pivots, entries above each pivot in [0, pivot).
fn hermite_normal_form(mut rows: Vec<Vec<i128>>) -> Vec<Vec<i128>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        loop {
            let candidates: Vec<usize> = (r..rows.len()).filter(|&i| rows[i][c] != 0).collect();
            if candidates.is_empty() {
                break;
            }
            let p = *candidates.iter().min_by_key(|&&i| rows[i][c].abs()).expect("nonempty");
            rows.swap(r, p);
            let mut done = true;
            for i in (r + 1)..rows.len() {
                if rows[i][c] != 0 {
                    let f = Integer::div_floor(&rows[i][c], &rows[r][c]);
                    for j in 0..ncols {
                        rows[i][j] -= f * rows[r][j];
                    }
                    done &= rows[i][c] == 0;
                }
            }
            if done {
                break;
            }
        }
        if rows[r][c] == 0 {
            continue;
        }
        if rows[r][c] < 0 {
            rows[r].iter_mut().for_each(|x| *x = -*x);
        }
        for i in 0..r {
            let f = Integer::div_floor(&rows[i][c], &rows[r][c]);
            for j in 0..ncols {
                rows[i][j] -= f * rows[r][j];
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeKind {
    FullTorus,
    PeriodicCurve,
    GenericClosure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointSpectrumShape {
    pub kind: ShapeKind,
    pub period: Option<f64>,
    pub lattice_basis: Vec<Vec<i64>>,
    /// Dimension of the torus that closes the curve: arity minus lattice rank.
    #[serde(skip)]
    pub closure_dimension: usize,
}

impl JointSpectrumShape {
    /// Shape for n parameters whose logarithms are declared formally independent
    /// over ℤ; such tuples cannot be built from rational exponents.
    pub fn formally_independent(n: usize) -> Self {
        Self {
            kind: ShapeKind::FullTorus,
            period: None,
            lattice_basis: Vec::new(),
            closure_dimension: n,
        }
    }
}

/// Periodic curve with period 2Mπ/(q_1 β), M the lcm of the reduced denominators of q_j/q_1.
pub fn classify_joint_spectrum(t: &ExponentTuple) -> JointSpectrumShape {
    let q1 = t.q[0];
    let m = t.q[1..].iter().fold(1i64, |acc, qj| acc.lcm((*qj / q1).denom()));
    let lattice = relation_lattice(t);
    JointSpectrumShape {
        kind: ShapeKind::PeriodicCurve,
        period: Some(2.0 * m as f64 * PI / (rational_to_f64(q1) * t.beta)),
        closure_dimension: t.arity() - lattice.rank(),
        lattice_basis: lattice.basis,
    }
}

/// Representative of x modulo 2π in [-π, π].
pub fn wrap_angle(x: f64) -> f64 {
    let r = x.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

fn check_arity(t: &ExponentTuple, found: usize) -> Result<()> {
    if found == t.arity() {
        Ok(())
    } else {
        Err(Error::Arity {
            expected: t.arity(),
            found,
        })
    }
}

/// Whether (s_j^{-1/2} e^{iθ_j})_j lies in the closure of the curve.
pub fn joint_membership(t: &ExponentTuple, theta: &[f64], tol: f64) -> Result<bool> {
    check_arity(t, theta.len())?;
    Ok(lattice_membership(&relation_lattice(t), theta, tol))
}

fn lattice_membership(lattice: &RelationLattice, theta: &[f64], tol: f64) -> bool {
    lattice.basis.iter().all(|k| {
        let sum: f64 = k.iter().zip(theta).map(|(ki, th)| *ki as f64 * th).sum();
        wrap_angle(sum).abs() <= tol
    })
}

/// Membership of an arbitrary point in σ_ap, including the joint zero.
pub fn point_membership(t: &ExponentTuple, point: &[Complex64], tol: f64) -> Result<bool> {
    check_arity(t, point.len())?;
    if point.iter().all(|z| z.norm() <= tol) {
        return Ok(true);
    }
    let on_circles = point
        .iter()
        .enumerate()
        .all(|(j, z)| (z.norm() - t.radius(j)).abs() <= tol * t.radius(j).max(1.0));
    if !on_circles {
        return Ok(false);
    }
    let theta: Vec<f64> = point.iter().map(|z| z.arg()).collect();
    joint_membership(t, &theta, tol)
}

/// (s_j^{-1/2+iy})_j
pub fn curve_point(t: &ExponentTuple, y: f64) -> Vec<Complex64> {
    (0..t.arity())
        .map(|j| (Complex64::new(-0.5, y) * t.ln_s(j)).exp())
        .collect()
}

/// Phases θ_j = -q_j β y of the curve point at y.
pub fn curve_phases(t: &ExponentTuple, y: f64) -> Vec<f64> {
    (0..t.arity()).map(|j| wrap_angle(t.ln_s(j) * y)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CurveSample {
    pub y: f64,
    pub point: Vec<Complex64>,
}

pub fn sample_curve(t: &ExponentTuple, y_min: f64, y_max: f64, count: usize) -> Result<Vec<CurveSample>> {
    if count < 2 {
        return Err(domain("sample_curve", "count must be at least 2"));
    }
    let h = (y_max - y_min) / (count - 1) as f64;
    Ok((0..count)
        .map(|i| {
            let y = if i == count - 1 { y_max } else { y_min + i as f64 * h };
            CurveSample {
                y,
                point: curve_point(t, y),
            }
        })
        .collect())
}

/// Columns y, re_1, im_1, …, re_n, im_n.
pub fn write_curve_csv<W: Write>(samples: &[CurveSample], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let n = samples.first().map_or(0, |s| s.point.len());
    let mut header = vec!["y".to_string()];
    for j in 1..=n {
        header.push(format!("re_{j}"));
        header.push(format!("im_{j}"));
    }
    w.write_record(&header).map_err(crate::operators::io_err)?;
    for s in samples {
        let mut row = vec![s.y];
        for z in &s.point {
            row.push(z.re);
            row.push(z.im);
        }
        w.serialize(row).map_err(crate::operators::io_err)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

/// Torus distance max_j |θ_j - θ_j(y)| minimised over y ∈ [0, y_max] by a
/// grid search with golden-section refinement.
pub fn brute_force_distance(t: &ExponentTuple, theta: &[f64], y_max: f64, step: f64) -> Result<f64> {
    check_arity(t, theta.len())?;
    let dist = |y: f64| {
        (0..t.arity())
            .map(|j| wrap_angle(theta[j] - t.ln_s(j) * y).abs())
            .fold(0.0, f64::max)
    };
    let steps = (y_max / step).ceil() as usize;
    let mut grid: Vec<(f64, f64)> = (0..=steps).map(|i| (i as f64 * step, dist(i as f64 * step))).collect();
    grid.sort_by(|a, b| a.1.total_cmp(&b.1));
    let mut best = grid[0].1;
    for &(y0, _) in grid.iter().take(8) {
        let (mut a, mut b) = (y0 - step, y0 + step);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        for _ in 0..80 {
            let c = b - g * (b - a);
            let d = a + g * (b - a);
            if dist(c) < dist(d) {
                b = d;
            } else {
                a = c;
            }
        }
        best = best.min(dist(0.5 * (a + b)));
    }
    Ok(best)
}

/// Uniform phases in [-π, π)^n from a seeded generator.
pub fn random_thetas(seed: u64, n: usize, count: usize) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..n).map(|_| rng.gen_range(-PI..PI)).collect())
        .collect()
}

/// Random exponential sums with 1–4 terms, bases in (0.05, 1], coefficients in the unit square.
pub fn random_exponential_sums(seed: u64, count: usize) -> Vec<ExponentialCoefficients> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let terms = rng.gen_range(1..=4);
            let list = (0..terms)
                .map(|_| {
                    let a = rng.gen_range(0.05..=1.0);
                    let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                    (a, c)
                })
                .collect();
            ExponentialCoefficients::new(list).expect("bases drawn inside (0, 1]")
        })
        .collect()
}

/// ‖(T_{s^z} - s^{z₀})f‖² >= λ_{s,m}²/(m+3)·‖f‖² with z₀ = m/2 + i y₀.
///
/// The left side is evaluated both exactly from the exponential sum and by
/// μ-quadrature; the report fails if the two disagree beyond the tolerance.
pub fn verify_separation(
    s: f64,
    m: u32,
    y0: f64,
    f: &ExponentialCoefficients,
    spec: &QuadratureSpec,
) -> Result<VerificationReport> {
    let quad = MuQuadrature::new(spec)?;
    quad.check_budget()?;
    verify_separation_with(&quad, s, m, y0, f)
}

pub(crate) fn verify_separation_with(
    quad: &MuQuadrature,
    s: f64,
    m: u32,
    y0: f64,
    f: &ExponentialCoefficients,
) -> Result<VerificationReport> {
    let bound = exclusion_bound(s, m)?;
    let ln_s = s.ln();
    let z0 = Complex64::new(m as f64 / 2.0, y0);
    let shift = (z0 * ln_s).exp();
    let g = f.scaled(s)?.add_scaled(-shift, f);
    let exact = g.norm_sq();
    let quadrature = quad
        .integrate(|p| {
            let z = p.z();
            Complex64::new(((z * ln_s).exp() - shift).norm_sqr() * f.eval(z).norm_sqr(), 0.0)
        })
        .re;
    let target = bound * f.norm_sq();
    let tol = quad.spec().tolerance;
    let scale = exact.abs().max(1.0);
    let mut report = VerificationReport::upper_bound(
        "off_spectrum_separation",
        json!({
            "s": s, "m": m, "y0": y0, "terms": f.terms().len(),
            "exact_lhs": exact, "quadrature_lhs": quadrature, "tolerance": tol,
        }),
        exact.min(quadrature),
        target,
        quad.tail_estimate(),
        tol * scale,
    );
    report.pass &= (exact - quadrature).abs() <= 1e-6 * scale;
    Ok(report)
}
