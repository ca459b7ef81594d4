//! Trigonometric polynomials Σ c e^{iαy}, the symbol map sending C_{φ_s} to
//! (s^{-1/2} χ_{-ln s}, 0) and I to (χ_0, 1), and residual certificates for
//! symbol values of operator combinations.
//!
//! Frequencies coming from words are kept exactly as −ln x for an exact
//! positive [`Scale`] x, so cancellations to χ_0 and the homomorphism laws hold
//! bitwise. Frequencies supplied as plain reals merge within 1e-12.

use std::cmp::Ordering;
use std::f64::consts::PI;
use std::fmt;

use nalgebra::DVector;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{approximate_eigen_point, kernel_vector, word_apply, Letter, Word};
use crate::quadrature::PanelRule;
use crate::scale::Scale;

/// Frequencies closer than this are merged when either one is a plain real.
pub const MERGE_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub enum Frequency {
    /// −ln x
    Exact(Scale),
    Real(f64),
}

impl Frequency {
    pub fn zero() -> Self {
        Self::Exact(Scale::one())
    }

    pub fn value(&self) -> f64 {
        match self {
            Self::Exact(x) if x.is_one() => 0.0,
            Self::Exact(x) => -x.ln(),
            Self::Real(v) => *v,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Self::Exact(x) => x.is_one(),
            Self::Real(v) => v.abs() <= MERGE_TOLERANCE,
        }
    }

    pub fn same(&self, other: &Self) -> bool {
        match (self, other) {
            (Self::Exact(a), Self::Exact(b)) => a == b,
            _ => (self.value() - other.value()).abs() <= MERGE_TOLERANCE,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        match (self, other) {
            // −ln a − ln b = −ln(ab)
            (Self::Exact(a), Self::Exact(b)) => Ok(Self::Exact(a.mul(b)?)),
            _ => Ok(Self::Real(self.value() + other.value())),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Self::Exact(x) => Self::Exact(x.recip()),
            Self::Real(v) => Self::Real(-v),
        }
    }

    fn order(&self, other: &Self) -> Ordering {
        self.value().total_cmp(&other.value())
    }
}

/// Finite sum Σ c_k χ_{α_k} with χ_α(y) = e^{iαy}, sorted by frequency, no zero coefficients.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TrigPolynomial {
    terms: Vec<(Frequency, Complex64)>,
}

impl TrigPolynomial {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex64) -> Self {
        Self::monomial(Frequency::zero(), c)
    }

    pub fn monomial(freq: Frequency, c: Complex64) -> Self {
        let mut p = Self::zero();
        p.add_term(freq, c);
        p
    }

    /// Builds from plain real frequencies.
    pub fn from_real_terms(terms: &[(f64, Complex64)]) -> Self {
        let mut p = Self::zero();
        for &(a, c) in terms {
            p.add_term(Frequency::Real(a), c);
        }
        p
    }

    pub fn terms(&self) -> &[(Frequency, Complex64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, freq: Frequency, c: Complex64) {
        if let Some(i) = self.terms.iter().position(|(f, _)| f.same(&freq)) {
            self.terms[i].1 += c;
            if self.terms[i].1 == Complex64::zero() {
                self.terms.remove(i);
            }
            return;
        }
        if c == Complex64::zero() {
            return;
        }
        let at = self.terms.partition_point(|(f, _)| f.order(&freq) == Ordering::Less);
        self.terms.insert(at, (freq, c));
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (f, c) in &other.terms {
            out.add_term(f.clone(), *c);
        }
        out
    }

    pub fn scale(&self, k: Complex64) -> Self {
        let mut out = Self::zero();
        for (f, c) in &self.terms {
            out.add_term(f.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let mut out = Self::zero();
        for (f, c) in &self.terms {
            for (g, d) in &other.terms {
                out.add_term(f.add(g)?, c * d);
            }
        }
        Ok(out)
    }

    /// Pointwise complex conjugate: mirrored frequencies, conjugated coefficients.
    pub fn conj(&self) -> Self {
        let mut out = Self::zero();
        for (f, c) in &self.terms {
            out.add_term(f.neg(), c.conj());
        }
        out
    }

    pub fn coefficient_sum(&self) -> f64 {
        self.terms.iter().map(|(_, c)| c.norm()).sum()
    }

    fn min_nonzero_frequency(&self) -> Option<f64> {
        self.terms
            .iter()
            .map(|(f, _)| f.value().abs())
            .filter(|v| *v > MERGE_TOLERANCE)
            .min_by(f64::total_cmp)
    }
}

pub fn evaluate(f: &TrigPolynomial, y: f64) -> Complex64 {
    f.terms
        .iter()
        .map(|(a, c)| c * Complex64::from_polar(1.0, a.value() * y))
        .sum()
}

/// Stored coefficient at the given frequency.
pub fn bohr_coefficient(f: &TrigPolynomial, alpha: &Frequency) -> Complex64 {
    f.terms
        .iter()
        .find(|(g, _)| g.same(alpha))
        .map_or(Complex64::zero(), |(_, c)| *c)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BohrEstimate {
    pub value: Complex64,
    /// Σ_{α_k ≠ α} |c_k| / (T |α_k − α|)
    pub error_bound: f64,
}

/// (1/2T) ∫_{−T}^{T} f(y) e^{−iαy} dy by composite Gauss–Legendre quadrature.
pub fn bohr_mean(f: &TrigPolynomial, alpha: f64, half_width: f64) -> BohrEstimate {
    let max_gap = f
        .terms
        .iter()
        .map(|(g, _)| (g.value() - alpha).abs())
        .fold(0.0, f64::max);
    let rule = PanelRule::symmetric(half_width, (max_gap.ceil() as usize).max(1) + 1);
    let mut acc = Complex64::zero();
    for (y, w) in rule.iter() {
        acc += w * evaluate(f, y) * Complex64::from_polar(1.0, -alpha * y);
    }
    let error_bound = f
        .terms
        .iter()
        .map(|(g, c)| (c.norm(), (g.value() - alpha).abs()))
        .filter(|(_, gap)| *gap > MERGE_TOLERANCE)
        .map(|(m, gap)| m / (half_width * gap))
        .sum();
    BohrEstimate {
        value: acc / (2.0 * half_width),
        error_bound,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SupNormEstimate {
    /// max |f(y)| over the sample grid; a lower bound for the sup norm.
    pub sampled: f64,
    /// Σ |c_k|; an upper bound for the sup norm.
    pub coefficient_sum: f64,
}

/// Samples y = 0 and a uniform grid on [−L, L] with L fifty periods of the slowest nonzero frequency.
pub fn sup_norm_estimate(f: &TrigPolynomial, samples: usize) -> Result<SupNormEstimate> {
    if samples == 0 {
        return Err(crate::error::domain("sup_norm_estimate", "samples must be at least 1"));
    }
    let span = f.min_nonzero_frequency().map_or(1.0, |a| 50.0 * 2.0 * PI / a);
    let h = if samples > 1 { 2.0 * span / (samples - 1) as f64 } else { 0.0 };
    let grid_max = (0..samples)
        .into_par_iter()
        .map(|k| evaluate(f, -span + k as f64 * h).norm())
        .reduce(|| 0.0, f64::max);
    Ok(SupNormEstimate {
        sampled: grid_max.max(evaluate(f, 0.0).norm()),
        coefficient_sum: f.coefficient_sum(),
    })
}

/// Element (f, c) of AP(ℝ) ⊕ ℂ.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolPair {
    pub ap_part: TrigPolynomial,
    pub point_part: Complex64,
}

impl SymbolPair {
    pub fn identity() -> Self {
        Self {
            ap_part: TrigPolynomial::constant(Complex64::one()),
            point_part: Complex64::one(),
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            ap_part: self.ap_part.mul(&other.ap_part)?,
            point_part: self.point_part * other.point_part,
        })
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            ap_part: self.ap_part.add(&other.ap_part),
            point_part: self.point_part + other.point_part,
        }
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self {
            ap_part: self.ap_part.scale(k),
            point_part: self.point_part * k,
        }
    }

    pub fn conj(&self) -> Self {
        Self {
            ap_part: self.ap_part.conj(),
            point_part: self.point_part.conj(),
        }
    }

    pub fn to_json(&self) -> SymbolJson {
        SymbolJson {
            symbol: self
                .ap_part
                .terms()
                .iter()
                .map(|(f, c)| FrequencyTerm {
                    freq: f.value(),
                    re: c.re,
                    im: c.im,
                })
                .collect(),
            point: [self.point_part.re, self.point_part.im],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequencyTerm {
    pub freq: f64,
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolJson {
    pub symbol: Vec<FrequencyTerm>,
    pub point: [f64; 2],
}

/// Exact symbol of a single word: coefficient (Π s_k)^{-1/2} at frequency −ln(Π s_k^{±1}),
/// point part 1 exactly when every letter is the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordSymbol {
    pub frequency: Scale,
    pub magnitude: Scale,
    pub point: bool,
}

impl WordSymbol {
    pub fn identity() -> Self {
        Self {
            frequency: Scale::one(),
            magnitude: Scale::one(),
            point: true,
        }
    }

    pub fn of_letter(letter: &Letter) -> Self {
        if letter.s.is_one() {
            return Self::identity();
        }
        Self {
            frequency: if letter.adjoint { letter.s.recip() } else { letter.s.clone() },
            magnitude: letter.s.clone(),
            point: false,
        }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        Ok(Self {
            frequency: self.frequency.mul(&other.frequency)?,
            magnitude: self.magnitude.mul(&other.magnitude)?,
            point: self.point && other.point,
        })
    }

    pub fn conj(&self) -> Self {
        Self {
            frequency: self.frequency.recip(),
            magnitude: self.magnitude.clone(),
            point: self.point,
        }
    }

    pub fn coefficient(&self) -> f64 {
        1.0 / self.magnitude.value().sqrt()
    }

    pub fn to_pair(&self) -> SymbolPair {
        SymbolPair {
            ap_part: TrigPolynomial::monomial(
                Frequency::Exact(self.frequency.clone()),
                Complex64::new(self.coefficient(), 0.0),
            ),
            point_part: if self.point { Complex64::one() } else { Complex64::zero() },
        }
    }
}

pub fn symbol_of_word(word: &Word) -> Result<WordSymbol> {
    word.letters()
        .iter()
        .try_fold(WordSymbol::identity(), |acc, l| acc.mul(&WordSymbol::of_letter(l)))
}

pub fn symbol_of_generator(s: f64, adjoint: bool) -> Result<SymbolPair> {
    Ok(WordSymbol::of_letter(&Letter::from_f64(s, adjoint)?).to_pair())
}

/// c₀I + Σ c_i W_i with canonical words W_i.
#[derive(Debug, Clone, PartialEq)]
pub struct Combination {
    pub c0: Complex64,
    pub terms: Vec<(Complex64, Word)>,
}

impl Combination {
    pub fn new(c0: Complex64, terms: Vec<(Complex64, Word)>) -> Result<Self> {
        let terms = terms
            .into_iter()
            .map(|(c, w)| Ok((c, w.canonical()?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { c0, terms })
    }

    pub fn word(word: &Word) -> Result<Self> {
        Self::new(Complex64::zero(), vec![(Complex64::one(), word.clone())])
    }

    pub fn parse(text: &str) -> Result<Self> {
        Parser::new(text).parse()
    }

    /// A^H v on Newton coordinates, each word applied through its truncated letters.
    pub fn apply_adjoint(&self, v: &DVector<Complex64>) -> Result<DVector<Complex64>> {
        let mut out = v * self.c0.conj();
        for (c, w) in &self.terms {
            out += word_apply(&w.adjoint(), v)? * c.conj();
        }
        Ok(out)
    }
}

fn fmt_complex(c: Complex64) -> String {
    if c.im == 0.0 {
        format!("{}", c.re)
    } else {
        format!("({}{:+}i)", c.re, c.im)
    }
}

impl fmt::Display for Combination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.c0 != Complex64::zero() || self.terms.is_empty() {
            parts.push(format!("{}*I", fmt_complex(self.c0)));
        }
        for (c, w) in &self.terms {
            if *c == Complex64::one() {
                parts.push(w.to_string());
            } else {
                parts.push(format!("{}*{w}", fmt_complex(*c)));
            }
        }
        write!(f, "{}", parts.join(" + "))
    }
}

pub fn symbol_of_combination(a: &Combination) -> Result<SymbolPair> {
    let mut out = SymbolPair::identity().scale(a.c0);
    for (c, w) in &a.terms {
        out = out.add(&symbol_of_word(w)?.to_pair().scale(*c));
    }
    Ok(out)
}

/// Seeded random words: 1–6 letters with s = p/q, 1 <= p <= q <= 12.
pub fn random_words(seed: u64, count: usize) -> Vec<Word> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let len = rng.gen_range(1..=6);
            let letters = (0..len)
                .map(|_| {
                    let q = rng.gen_range(1..=12i64);
                    let p = rng.gen_range(1..=q);
                    let s = Scale::from_ratio(p, q).expect("positive ratio");
                    Letter::new(s, rng.gen_bool(0.5)).expect("ratio in (0, 1]")
                })
                .collect();
            Word::new(letters).expect("nonempty")
        })
        .collect()
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn new(text: &str) -> Self {
        Self {
            chars: text.chars().collect(),
            pos: 0,
        }
    }

    /// Positions are 1-based character columns.
    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            pos: self.pos + 1,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{c}'")))
        }
    }

    fn parse(mut self) -> Result<Combination> {
        let mut c0 = Complex64::zero();
        let mut terms: Vec<(Complex64, Word)> = Vec::new();
        self.skip_ws();
        if self.peek().is_none() {
            return Err(self.error("empty expression"));
        }
        let mut sign = if self.eat('-') { -1.0 } else { 1.0 };
        loop {
            self.skip_ws();
            let (coef, word) = self.term()?;
            let coef = coef * sign;
            match word {
                Some(w) if !w.is_identity() => terms.push((coef, w.canonical()?)),
                _ => c0 += coef,
            }
            self.skip_ws();
            match self.peek() {
                None => break,
                Some('+') => sign = 1.0,
                Some('-') => sign = -1.0,
                Some(c) => return Err(self.error(format!("unexpected '{c}'"))),
            }
            self.pos += 1;
        }
        Ok(Combination { c0, terms })
    }

    fn term(&mut self) -> Result<(Complex64, Option<Word>)> {
        match self.peek() {
            Some('C') | Some('I') => Ok((Complex64::one(), Some(self.product()?))),
            Some(c) if c.is_ascii_digit() || c == '.' || c == '(' => {
                let coef = self.scalar()?;
                self.skip_ws();
                if self.eat('*') {
                    self.skip_ws();
                    return Ok((coef, Some(self.product()?)));
                }
                if matches!(self.peek(), Some('C') | Some('I')) {
                    return Ok((coef, Some(self.product()?)));
                }
                Ok((coef, None))
            }
            Some(c) => Err(self.error(format!("unexpected '{c}'"))),
            None => Err(self.error("expected a term")),
        }
    }

    fn product(&mut self) -> Result<Word> {
        let mut letters = Vec::new();
        while let Some(c) = self.peek() {
            match c {
                'I' => {
                    self.pos += 1;
                    letters.push(Letter::new(Scale::one(), false)?);
                }
                'C' => {
                    self.pos += 1;
                    let adjoint = self.eat('*');
                    self.skip_ws();
                    self.expect('(')?;
                    self.skip_ws();
                    let at = self.pos;
                    let s = self.rational()?;
                    let scale = Scale::from_rational(s).map_err(|_| Error::Parse {
                        pos: at + 1,
                        msg: "parameter must be positive".into(),
                    })?;
                    let letter = Letter::new(scale, adjoint).map_err(|_| Error::Parse {
                        pos: at + 1,
                        msg: "parameter must lie in (0, 1]".into(),
                    })?;
                    self.skip_ws();
                    self.expect(')')?;
                    letters.push(letter);
                }
                _ => break,
            }
            self.skip_ws();
        }
        if letters.is_empty() {
            return Err(self.error("expected C(s), C*(s) or I"));
        }
        Word::new(letters)
    }

    fn scalar(&mut self) -> Result<Complex64> {
        if self.eat('(') {
            self.skip_ws();
            let neg = self.eat('-');
            self.skip_ws();
            let mut re = self.real()? * if neg { -1.0 } else { 1.0 };
            let mut im = 0.0;
            if self.eat('i') {
                std::mem::swap(&mut re, &mut im);
            }
            self.skip_ws();
            if let Some(sign) = self.peek().filter(|c| *c == '+' || *c == '-') {
                self.pos += 1;
                self.skip_ws();
                let v = self.real()?;
                self.expect('i')?;
                im += if sign == '-' { -v } else { v };
            }
            self.skip_ws();
            self.expect(')')?;
            return Ok(Complex64::new(re, im));
        }
        let v = self.real()?;
        if self.eat('i') {
            Ok(Complex64::new(0.0, v))
        } else {
            Ok(Complex64::new(v, 0.0))
        }
    }

    fn real(&mut self) -> Result<f64> {
        Ok(self.rational()?.to_f64().unwrap_or(f64::NAN))
    }

    /// Decimal `d[.d]` or ratio `d/d`, parsed exactly.
    fn rational(&mut self) -> Result<BigRational> {
        let start = self.pos;
        let int = self.digits();
        let mut value = BigRational::from_integer(int.clone().unwrap_or_default());
        if self.eat('.') {
            let frac_start = self.pos;
            let frac = self.digits().ok_or_else(|| self.error("expected digits after '.'"))?;
            let places = (self.pos - frac_start) as u32;
            value += BigRational::new(frac, BigInt::from(10).pow(places));
        } else if int.is_none() {
            self.pos = start;
            return Err(self.error("expected a number"));
        }
        if self.eat('/') {
            let den = self.digits().ok_or_else(|| self.error("expected a denominator"))?;
            if den.is_zero() {
                return Err(self.error("zero denominator"));
            }
            value /= BigRational::from_integer(den);
        }
        Ok(value)
    }

    fn digits(&mut self) -> Option<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        (self.pos > start).then(|| {
            self.chars[start..self.pos]
                .iter()
                .collect::<String>()
                .parse()
                .expect("ascii digits")
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualEntry {
    #[serde(rename = "N")]
    pub n: usize,
    pub ell: u32,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionSample {
    pub y: f64,
    pub lambda: [f64; 2],
    pub residuals: Vec<ResidualEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InclusionReport {
    pub word: String,
    pub symbol: Vec<FrequencyTerm>,
    pub point: [f64; 2],
    pub samples: Vec<InclusionSample>,
    /// Residuals at the point part c₀ on the kernels k_{ℓ/2}.
    pub point_residuals: Vec<ResidualEntry>,
    pub note: String,
}

/// For each y: λ = ψ(A)(y) and ‖(A_N^H − λ̄) k_w‖/‖k_w‖ with w = −1/2 + 1/ℓ + iy.
/// Small values certify λ̄ ∈ σ_ap(A*), hence λ ∈ σ(A).
pub fn spectrum_inclusion_report(
    a: &Combination,
    n_list: &[usize],
    y_samples: &[f64],
    ell_list: &[u32],
) -> Result<InclusionReport> {
    if ell_list.contains(&0) {
        return Err(crate::error::domain("spectrum_inclusion_report", "ell must be >= 1"));
    }
    let sym = symbol_of_combination(a)?;
    let residual = |w: Complex64, n: usize, target: Complex64| -> Result<f64> {
        let k = kernel_vector(w, n)?;
        let av = a.apply_adjoint(&k.coords)?;
        Ok((av - &k.coords * target).norm() / k.coords.norm())
    };
    let samples = y_samples
        .iter()
        .map(|&y| {
            let lambda = evaluate(&sym.ap_part, y);
            let mut residuals = Vec::new();
            for &n in n_list {
                for &ell in ell_list {
                    let value = residual(approximate_eigen_point(y, ell), n, lambda.conj())?;
                    residuals.push(ResidualEntry { n, ell, value });
                }
            }
            Ok(InclusionSample {
                y,
                lambda: [lambda.re, lambda.im],
                residuals,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut point_residuals = Vec::new();
    if let Some(&n) = n_list.iter().max() {
        for &ell in ell_list {
            let w = Complex64::new(ell as f64 / 2.0, 0.0);
            let value = residual(w, n, sym.point_part.conj())?;
            point_residuals.push(ResidualEntry { n, ell, value });
        }
    }
    let json = sym.to_json();
    Ok(InclusionReport {
        word: a.to_string(),
        symbol: json.symbol,
        point: json.point,
        samples,
        point_residuals,
        note: "residuals are approximate-eigenvector certificates for the adjoint at conj(lambda); \
               they support lambda in the spectrum of A and do not by themselves prove non-invertibility \
               of the untruncated operator"
            .into(),
    })
}
