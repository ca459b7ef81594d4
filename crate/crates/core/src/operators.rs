//! Matrix truncations of C_{φ_s} (monomial basis) and T_{s^z} (Newton basis),
//! words in the generators, Newton-kernel coordinate vectors and residual
//! diagnostics.
//!
//! Under the basis identification u^n ↔ N_n the matrix of C_{φ_s}* in the
//! monomial basis coincides with the matrix of T_{s^z} in the Newton basis, so
//! both live in the same [`TruncatedOperator`] type and only the tag differs.

use std::collections::HashMap;
use std::fmt;
use std::io::{Read, Write};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

use crate::error::{domain, Error, Result};
use crate::measure::{kernel_ip, kernel_norm_sq};
use crate::report::VerificationReport;
use crate::scale::Scale;
use crate::specialfn::newton_values;


/// Rows of the extended action are generated until the restricted row mass drops below this.
const ROW_MASS_CUTOFF: f64 = 1e-20;

/// Dense SVD is used up to this dimension; inverse iteration above.
pub const DENSE_SVD_LIMIT: usize = 600;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Monomial,
    Newton,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedOperator {
    basis: Basis,
    entries: DMatrix<Complex64>,
}

impl TruncatedOperator {
    pub fn new(basis: Basis, entries: DMatrix<Complex64>) -> Result<Self> {
        if entries.nrows() != entries.ncols() || entries.nrows() == 0 {
            return Err(Error::DimensionMismatch {
                expected: entries.nrows().max(1),
                found: entries.ncols(),
            });
        }
        Ok(Self { basis, entries })
    }

    pub fn identity(n: usize, basis: Basis) -> Self {
        Self {
            basis,
            entries: DMatrix::identity(n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    pub fn into_entries(self) -> DMatrix<Complex64> {
        self.entries
    }

    /// Conjugate transpose, with the basis tag switched.
    pub fn adjoint(&self) -> Self {
        Self {
            basis: match self.basis {
                Basis::Monomial => Basis::Newton,
                Basis::Newton => Basis::Monomial,
            },
            entries: self.entries.adjoint(),
        }
    }

    fn check_dim(&self, found: usize) -> Result<()> {
        if found == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                expected: self.dim(),
                found,
            })
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other.dim())?;
        Ok(Self {
            basis: self.basis,
            entries: &self.entries * &other.entries,
        })
    }

    /// self + c·other
    pub fn add_scaled(&self, c: Complex64, other: &Self) -> Result<Self> {
        self.check_dim(other.dim())?;
        Ok(Self {
            basis: self.basis,
            entries: &self.entries + &other.entries * c,
        })
    }

    pub fn apply(&self, v: &DVector<Complex64>) -> Result<DVector<Complex64>> {
        self.check_dim(v.len())?;
        Ok(&self.entries * v)
    }

    /// A - λI
    pub fn shifted(&self, lambda: Complex64) -> DMatrix<Complex64> {
        let mut m = self.entries.clone();
        for i in 0..m.nrows() {
            m[(i, i)] -= lambda;
        }
        m
    }
}

fn check_s(op: &'static str, s: f64) -> Result<()> {
    if s > 0.0 && s <= 1.0 {
        Ok(())
    } else {
        Err(domain(op, format!("s = {s} outside (0, 1]")))
    }
}

fn check_n(op: &'static str, n: usize) -> Result<()> {
    if n >= 1 {
        Ok(())
    } else {
        Err(domain(op, "dimension must be at least 1"))
    }
}

/// Coefficients of (sz + 1 - s)^n for n < N, stored column by column:
/// entry [k][n] = C(n,k) s^k (1-s)^{n-k}.
fn binomial_columns(s: f64, n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::<f64>::zeros(n, n);
    let r = 1.0 - s;
    m[(0, 0)] = 1.0;
    for col in 1..n {
        m[(0, col)] = r * m[(0, col - 1)];
        for k in 1..=col {
            m[(k, col)] = s * m[(k - 1, col - 1)] + r * m[(k, col - 1)];
        }
    }
    m
}

/// Matrix of C_{φ_s} on polynomials of degree < N in the monomial basis.
pub fn composition_matrix(s: f64, n: usize) -> Result<TruncatedOperator> {
    check_s("composition_matrix", s)?;
    check_n("composition_matrix", n)?;
    Ok(TruncatedOperator {
        basis: Basis::Monomial,
        entries: binomial_columns(s, n).map(|x| Complex64::new(x, 0.0)),
    })
}

/// Matrix of T_{s^z} in the Newton basis: the transpose of [`composition_matrix`].
pub fn toeplitz_matrix(s: f64, n: usize) -> Result<TruncatedOperator> {
    check_s("toeplitz_matrix", s)?;
    check_n("toeplitz_matrix", n)?;
    Ok(TruncatedOperator {
        basis: Basis::Newton,
        entries: binomial_columns(s, n).transpose().map(|x| Complex64::new(x, 0.0)),
    })
}

/// T_{s^z} v for v supported on the first v.len() Newton coordinates, without
/// truncating the output: rows are produced until the binomial row mass that
/// meets the support of v falls below 1e-20.
pub fn toeplitz_apply(s: f64, v: &[Complex64]) -> Result<Vec<Complex64>> {
    check_s("toeplitz_apply", s)?;
    let n = v.len();
    check_n("toeplitz_apply", n)?;
    if s == 1.0 {
        return Ok(v.to_vec());
    }
    let r = 1.0 - s;
    let mut row = vec![0.0; n];
    row[0] = 1.0;
    let mut out = Vec::with_capacity(2 * n);
    let mut k = 0usize;
    loop {
        let val: Complex64 = row.iter().zip(v).map(|(a, x)| x * *a).sum();
        out.push(val);
        let mass: f64 = row.iter().sum();
        if k + 1 >= n && mass < ROW_MASS_CUTOFF {
            break;
        }
        for j in (1..n).rev() {
            row[j] = s * row[j - 1] + r * row[j];
        }
        row[0] *= r;
        k += 1;
    }
    Ok(out)
}

/// One generator C_{φ_s} or its adjoint.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Letter {
    pub s: Scale,
    pub adjoint: bool,
}

impl Letter {
    pub fn new(s: Scale, adjoint: bool) -> Result<Self> {
        if !s.in_unit_interval() {
            return Err(domain("Letter", format!("s = {s} outside (0, 1]")));
        }
        Ok(Self { s, adjoint })
    }

    pub fn from_f64(s: f64, adjoint: bool) -> Result<Self> {
        check_s("Letter", s)?;
        Self::new(Scale::from_f64(s)?, adjoint)
    }

    pub fn c(s: f64) -> Result<Self> {
        Self::from_f64(s, false)
    }

    pub fn c_star(s: f64) -> Result<Self> {
        Self::from_f64(s, true)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "C{}({})", if self.adjoint { "*" } else { "" }, self.s)
    }
}

/// A product of generators, read left to right as operator composition.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        if letters.is_empty() {
            return Err(domain("Word", "empty word"));
        }
        Ok(Self { letters })
    }

    pub fn from_pairs(pairs: &[(f64, bool)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(s, a)| Letter::from_f64(s, a)).collect::<Result<_>>()?)
    }

    pub fn identity() -> Self {
        Self {
            letters: vec![
                Letter { s: Scale::one(), adjoint: false },
                Letter { s: Scale::one(), adjoint: true },
            ],
        }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Alternating form C(s₁)C*(s₂)…C*(s_m): adjacent letters of the same kind
    /// are merged, interior identity letters dropped, and C(1) / C*(1) padding
    /// added at the ends when needed.
    pub fn canonical(&self) -> Result<Self> {
        let mut out: Vec<Letter> = Vec::with_capacity(self.letters.len() + 2);
        for letter in self.letters.iter().filter(|l| !l.s.is_one()) {
            match out.last_mut() {
                Some(last) if last.adjoint == letter.adjoint => {
                    last.s = last.s.mul(&letter.s)?;
                }
                _ => out.push(letter.clone()),
            }
        }
        if out.is_empty() {
            return Ok(Self::identity());
        }
        if out[0].adjoint {
            out.insert(0, Letter { s: Scale::one(), adjoint: false });
        }
        if !out[out.len() - 1].adjoint {
            out.push(Letter { s: Scale::one(), adjoint: true });
        }
        Ok(Self { letters: out })
    }

    pub fn is_canonical(&self) -> bool {
        let n = self.letters.len();
        n.is_multiple_of(2)
            && self.letters.iter().enumerate().all(|(i, l)| {
                l.adjoint == (i % 2 == 1) && (!l.s.is_one() || i == 0 || i == n - 1)
            })
    }

    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|l| l.s.is_one())
    }

    /// Word of the adjoint operator: reversed, with every letter flipped.
    pub fn adjoint(&self) -> Self {
        Self {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter { s: l.s.clone(), adjoint: !l.adjoint })
                .collect(),
        }
    }

    pub fn concat(&self, other: &Self) -> Self {
        let mut letters = self.letters.clone();
        letters.extend(other.letters.iter().cloned());
        Self { letters }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "I");
        }
        for l in &self.letters {
            if l.s.is_one() {
                continue;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

fn letter_matrix(letter: &Letter, n: usize, cache: &mut HashMap<u64, DMatrix<f64>>) -> DMatrix<f64> {
    let s = letter.s.value();
    let m = cache.entry(s.to_bits()).or_insert_with(|| binomial_columns(s, n));
    if letter.adjoint {
        m.transpose()
    } else {
        m.clone()
    }
}

/// Ordered product of per-letter truncations in the monomial basis.
///
/// Products of truncations agree with truncations of products only as N → ∞
/// when adjoint and non-adjoint letters are interleaved.
pub fn word_matrix(word: &Word, n: usize) -> Result<TruncatedOperator> {
    check_n("word_matrix", n)?;
    let mut cache = HashMap::new();
    let mut acc = DMatrix::<f64>::identity(n, n);
    for letter in word.letters().iter().filter(|l| !l.s.is_one()) {
        acc = &acc * letter_matrix(letter, n, &mut cache);
    }
    Ok(TruncatedOperator {
        basis: Basis::Monomial,
        entries: acc.map(|x| Complex64::new(x, 0.0)),
    })
}

/// Applies the truncated word to a vector letter by letter (right to left),
/// equal to `word_matrix(word, N) * v` without forming the product.
pub fn word_apply(word: &Word, v: &DVector<Complex64>) -> Result<DVector<Complex64>> {
    let n = v.len();
    check_n("word_apply", n)?;
    let mut cache = HashMap::new();
    let mut out = v.clone();
    for letter in word.letters().iter().rev().filter(|l| !l.s.is_one()) {
        let m = letter_matrix(letter, n, &mut cache).map(|x| Complex64::new(x, 0.0));
        out = m * out;
    }
    Ok(out)
}

/// Normalised-kernel data for K_w in Newton coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelVector {
    pub w: Complex64,
    pub coords: DVector<Complex64>,
    pub norm_sq_exact: f64,
    pub tail_mass: f64,
}

impl KernelVector {
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Σ_{n<N} |coords[n]|²
    pub fn partial_norm_sq(&self) -> f64 {
        self.coords.norm_squared()
    }
}

/// Newton coordinates conj(N_n(w)), n < N, of the reproducing kernel K_w.
pub fn kernel_vector(w: Complex64, n: usize) -> Result<KernelVector> {
    check_n("kernel_vector", n)?;
    let norm_sq_exact = kernel_norm_sq(w)?;
    let coords = DVector::from_iterator(n, newton_values(n, w).into_iter().map(|c| c.conj()));
    let tail_mass = (norm_sq_exact - coords.norm_squared()).max(0.0);
    Ok(KernelVector {
        w,
        coords,
        norm_sq_exact,
        tail_mass,
    })
}

/// ‖(A - λI)v‖ / ‖v‖
pub fn residual(op: &TruncatedOperator, lambda: Complex64, v: &DVector<Complex64>) -> Result<f64> {
    let av = op.apply(v)?;
    Ok((av - v * lambda).norm() / v.norm())
}

/// T* K_w = conj(s^w) K_w checked on the truncation. The residual of the
/// truncated pair is bounded by s^{-1/2}·sqrt(tail_mass)/‖K_N‖.
pub fn verify_adjoint_eigen(s: f64, w: Complex64, n: usize) -> Result<VerificationReport> {
    check_s("verify_adjoint_eigen", s)?;
    let k = kernel_vector(w, n)?;
    let t_adj = composition_matrix(s, n)?;
    let lambda = (w * s.ln()).exp().conj();
    let res = residual(&t_adj, lambda, &k.coords)?;
    let bound = s.powf(-0.5) * k.tail_mass.sqrt() / k.coords.norm();
    Ok(VerificationReport::upper_bound(
        "adjoint_kernel_eigen",
        json!({ "s": s, "w": [w.re, w.im], "N": n, "eigenvalue": [lambda.re, lambda.im] }),
        bound,
        res,
        k.tail_mass,
        1e-12,
    ))
}

/// ⟨T_s k_w, T_t k_w⟩ from the first N Newton coordinates of K_w, with both
/// images computed without output truncation and normalised by the exact ‖K_w‖².
pub fn kernel_ip_matrix_form(s: f64, t: f64, w: Complex64, n: usize) -> Result<Complex64> {
    let k = kernel_vector(w, n)?;
    let coords: Vec<Complex64> = k.coords.iter().copied().collect();
    let a = toeplitz_apply(s, &coords)?;
    let b = toeplitz_apply(t, &coords)?;
    let ip: Complex64 = a.iter().zip(&b).map(|(x, y)| x * y.conj()).sum();
    Ok(ip / k.norm_sq_exact)
}

/// One row of a residual scan; residuals are squared.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualRow {
    pub s: f64,
    pub y: f64,
    pub ell: u32,
    pub n: usize,
    /// ‖(T_N - λ)k‖² / ‖k‖² on the truncated kernel.
    pub numeric: f64,
    /// ‖(T - λ)k_w‖² for the untruncated normalised kernel.
    pub analytic: f64,
    /// Interval that must contain `numeric` given the kernel tail.
    pub lower: f64,
    pub upper: f64,
    pub tail_mass: f64,
}

impl ResidualRow {
    pub fn within_tail_bound(&self) -> bool {
        let slack = 1e-9 * self.upper.max(1.0);
        self.numeric >= self.lower - slack && self.numeric <= self.upper + slack
    }
}

/// (1/s)(2-s)^{-2/ℓ} - 2 s^{1/ℓ} re(λ̄ s^{-1/2+iy}) + |λ|²
pub fn analytic_residual_sq(s: f64, y: f64, ell: u32, lambda: Complex64) -> f64 {
    let l = ell as f64;
    let curve = (Complex64::new(-0.5, y) * s.ln()).exp();
    (2.0 - s).powf(-2.0 / l) / s - 2.0 * s.powf(1.0 / l) * (lambda.conj() * curve).re + lambda.norm_sqr()
}

/// w_ℓ = -1/2 + 1/ℓ + iy
pub fn approximate_eigen_point(y: f64, ell: u32) -> Complex64 {
    Complex64::new(-0.5 + 1.0 / ell as f64, y)
}

/// Residuals of T_{s^z} at λ = s^{-1/2+iy} on the kernels k_{w_ℓ}.
pub fn residual_sequence(s: f64, y: f64, ell_list: &[u32], n: usize) -> Result<Vec<ResidualRow>> {
    if !(s > 0.0 && s < 1.0) {
        return Err(domain("residual_sequence", format!("s = {s} outside (0, 1)")));
    }
    let lambda = (Complex64::new(-0.5, y) * s.ln()).exp();
    let t = toeplitz_matrix(s, n)?;
    ell_list
        .iter()
        .map(|&ell| {
            if ell == 0 {
                return Err(domain("residual_sequence", "ell must be >= 1"));
            }
            let w = approximate_eigen_point(y, ell);
            let k = kernel_vector(w, n)?;
            let tk = t.apply(&k.coords)?;
            let numeric_vec = &tk - &k.coords * lambda;
            let partial = k.partial_norm_sq();
            let numeric = numeric_vec.norm_squared() / partial;
            let analytic = analytic_residual_sq(s, y, ell, lambda);
            let tk_exact = kernel_ip(s, s, w)?.re * k.norm_sq_exact;
            let a = (tk_exact - tk.norm_squared()).max(0.0).sqrt();
            let b = k.tail_mass.sqrt();
            let full = analytic * k.norm_sq_exact;
            let spill = a + lambda.norm() * b;
            Ok(ResidualRow {
                s,
                y,
                ell,
                n,
                numeric,
                analytic,
                lower: (full - spill * spill).max(0.0) / partial,
                upper: full / partial,
                tail_mass: k.tail_mass,
            })
        })
        .collect()
}

/// One row of a zero-direction scan; values are ‖T_{s^z} k_{ℓ/2}‖².
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroDirectionRow {
    pub s: f64,
    pub ell: u32,
    pub n: usize,
    pub numeric: f64,
    pub analytic: f64,
    pub tail_mass: f64,
}

/// ‖T_{s^z} k_{ω_ℓ}‖² with ω_ℓ = ℓ/2 against s^ℓ/(2s - s²)^{ℓ+1}.
pub fn zero_direction_sequence(s_list: &[f64], ell_list: &[u32], n: usize) -> Result<Vec<ZeroDirectionRow>> {
    let mut rows = Vec::with_capacity(s_list.len() * ell_list.len());
    for &ell in ell_list {
        let w = Complex64::new(ell as f64 / 2.0, 0.0);
        let k = kernel_vector(w, n)?;
        let coords: Vec<Complex64> = k.coords.iter().copied().collect();
        for &s in s_list {
            if !(s > 0.0 && s < 1.0) {
                return Err(domain("zero_direction_sequence", format!("s = {s} outside (0, 1)")));
            }
            let tk = toeplitz_apply(s, &coords)?;
            let numeric = tk.iter().map(|c| c.norm_sqr()).sum::<f64>() / k.partial_norm_sq();
            rows.push(ZeroDirectionRow {
                s,
                ell,
                n,
                numeric,
                analytic: s.powi(ell as i32) / (2.0 * s - s * s).powi(ell as i32 + 1),
                tail_mass: k.tail_mass,
            });
        }
    }
    Ok(rows)
}

/// Smallest singular value of A - λI.
pub fn min_singular(op: &TruncatedOperator, lambda: Complex64) -> f64 {
    let b = op.shifted(lambda);
    if b.nrows() <= DENSE_SVD_LIMIT {
        return b.singular_values().min();
    }
    inverse_iteration_min_singular(b)
}

fn inverse_iteration_min_singular(b: DMatrix<Complex64>) -> f64 {
    let n = b.nrows();
    let bh = b.adjoint();
    let lu = b.lu();
    let lu_h = bh.lu();
    let mut x = DVector::from_element(n, Complex64::new(1.0 / (n as f64).sqrt(), 0.0));
    let mut sigma = f64::INFINITY;
    for _ in 0..500 {
        let Some(y) = lu_h.solve(&x) else { return 0.0 };
        let Some(z) = lu.solve(&y) else { return 0.0 };
        let growth = z.norm();
        if !growth.is_finite() || growth == 0.0 {
            return 0.0;
        }
        let next = 1.0 / growth.sqrt();
        x = z.unscale(growth);
        if (next - sigma).abs() <= 1e-13 * next {
            return next;
        }
        sigma = next;
    }
    sigma
}

/// Largest singular value: dense SVD up to [`DENSE_SVD_LIMIT`], power iteration on AᴴA above.
pub fn operator_norm(op: &TruncatedOperator) -> f64 {
    let a = op.entries();
    if a.nrows() <= DENSE_SVD_LIMIT {
        return a.singular_values().max();
    }
    let ah = a.adjoint();
    let n = a.nrows();
    let mut x = DVector::from_element(n, Complex64::new(1.0 / (n as f64).sqrt(), 0.0));
    let mut sigma = 0.0;
    for _ in 0..2000 {
        let z = &ah * (a * &x);
        let growth = z.norm();
        if growth == 0.0 {
            return 0.0;
        }
        let next = growth.sqrt();
        x = z.unscale(growth);
        if (next - sigma).abs() <= 1e-12 * next {
            return next;
        }
        sigma = next;
    }
    sigma
}

/// Column-major CSV dump with columns row, col, re, im.
pub fn write_matrix_csv<W: Write>(op: &TruncatedOperator, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["row", "col", "re", "im"]).map_err(io_err)?;
    let m = op.entries();
    for col in 0..m.ncols() {
        for row in 0..m.nrows() {
            let v = m[(row, col)];
            w.serialize((row, col, v.re, v.im)).map_err(io_err)?;
        }
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

const MATRIX_MAGIC: &[u8; 4] = b"CSMX";

/// Binary dump: magic "CSMX", u64 LE dimension, then column-major (re, im) f64 LE pairs.
pub fn write_matrix_binary<W: Write>(op: &TruncatedOperator, mut out: W) -> Result<()> {
    let m = op.entries();
    let mut buf = Vec::with_capacity(12 + 16 * m.len());
    buf.extend_from_slice(MATRIX_MAGIC);
    buf.extend_from_slice(&(m.nrows() as u64).to_le_bytes());
    for v in m.iter() {
        buf.extend_from_slice(&v.re.to_le_bytes());
        buf.extend_from_slice(&v.im.to_le_bytes());
    }
    out.write_all(&buf).map_err(|e| Error::Io(e.to_string()))
}

pub fn read_matrix_binary<R: Read>(mut input: R, basis: Basis) -> Result<TruncatedOperator> {
    let mut buf = Vec::new();
    input.read_to_end(&mut buf).map_err(|e| Error::Io(e.to_string()))?;
    if buf.len() < 12 || &buf[..4] != MATRIX_MAGIC {
        return Err(Error::Io("not a matrix dump".into()));
    }
    let n = u64::from_le_bytes(buf[4..12].try_into().expect("8 bytes")) as usize;
    let body = &buf[12..];
    if body.len() != 16 * n * n {
        return Err(Error::DimensionMismatch {
            expected: 16 * n * n,
            found: body.len(),
        });
    }
    let vals: Vec<Complex64> = body
        .chunks_exact(16)
        .map(|c| {
            Complex64::new(
                f64::from_le_bytes(c[..8].try_into().expect("8 bytes")),
                f64::from_le_bytes(c[8..].try_into().expect("8 bytes")),
            )
        })
        .collect();
    TruncatedOperator::new(basis, DMatrix::from_vec(n, n, vals))
}

/// Residual scan CSV: s, y, ell, N, numeric, analytic, then the tail interval.
pub fn write_residual_csv<W: Write>(rows: &[ResidualRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["s", "y", "ell", "N", "numeric", "analytic", "lower", "upper", "tail_mass"])
        .map_err(io_err)?;
    for r in rows {
        w.serialize((r.s, r.y, r.ell, r.n, r.numeric, r.analytic, r.lower, r.upper, r.tail_mass))
            .map_err(io_err)?;
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

pub(crate) fn io_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}
