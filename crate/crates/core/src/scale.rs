//! Exact positive reals of the form r·e^{-cβ} with r rational, c rational and β
//! a fixed positive scale. Two forms with nonzero c are only comparable when
//! they share the same β; β is treated as independent of logarithms of rationals.

use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Scale {
    ratio: BigRational,
    beta_exp: Rational64,
    beta_bits: u64,
}

impl Scale {
    pub fn one() -> Self {
        Self::from_rational(BigRational::one()).expect("1 is positive")
    }

    pub fn from_rational(ratio: BigRational) -> Result<Self> {
        if !ratio.is_positive() {
            return Err(Error::Scale(format!("{ratio} is not positive")));
        }
        Ok(Self {
            ratio,
            beta_exp: Rational64::zero(),
            beta_bits: 0,
        })
    }

    /// Exact rational value of a finite positive double.
    pub fn from_f64(s: f64) -> Result<Self> {
        if !(s > 0.0 && s.is_finite()) {
            return Err(Error::Scale(format!("{s} is not a finite positive number")));
        }
        Self::from_rational(BigRational::from_float(s).expect("finite"))
    }

    pub fn from_ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Scale("zero denominator".into()));
        }
        Self::from_rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// e^{-qβ}
    pub fn exp_neg(q: Rational64, beta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::Scale(format!("beta = {beta} must be finite and positive")));
        }
        let mut out = Self::one();
        out.beta_exp = q;
        out.beta_bits = if q.is_zero() { 0 } else { beta.to_bits() };
        Ok(out)
    }

    pub fn ratio(&self) -> &BigRational {
        &self.ratio
    }

    pub fn beta_exp(&self) -> Rational64 {
        self.beta_exp
    }

    pub fn beta(&self) -> Option<f64> {
        (!self.beta_exp.is_zero()).then(|| f64::from_bits(self.beta_bits))
    }

    pub fn is_one(&self) -> bool {
        self.ratio.is_one() && self.beta_exp.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.beta_exp.is_zero()
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        let beta_bits = match (self.beta(), other.beta()) {
            (Some(a), Some(b)) if a.to_bits() != b.to_bits() => {
                return Err(Error::Scale(format!("incompatible scales beta = {a} and beta = {b}")))
            }
            (Some(a), _) | (None, Some(a)) => a.to_bits(),
            (None, None) => 0,
        };
        let beta_exp = checked_add(self.beta_exp, other.beta_exp)?;
        Ok(Self {
            ratio: &self.ratio * &other.ratio,
            beta_exp,
            beta_bits: if beta_exp.is_zero() { 0 } else { beta_bits },
        })
    }

    pub fn recip(&self) -> Self {
        Self {
            ratio: self.ratio.recip(),
            beta_exp: -self.beta_exp,
            beta_bits: self.beta_bits,
        }
    }

    /// ln(r) - cβ, with ln(r) evaluated as `(r as f64).ln()` whenever r is a normal double.
    pub fn ln(&self) -> f64 {
        let log_ratio = ln_rational(&self.ratio);
        match self.beta() {
            None => log_ratio,
            Some(beta) => log_ratio - rational_to_f64(self.beta_exp) * beta,
        }
    }

    pub fn value(&self) -> f64 {
        match self.beta() {
            None => self.ratio.to_f64().unwrap_or(f64::NAN),
            Some(_) => self.ln().exp(),
        }
    }

    /// True when the value lies in (0, 1]; exact for rational scales.
    pub fn in_unit_interval(&self) -> bool {
        match self.beta() {
            None => self.ratio <= BigRational::one(),
            Some(_) => self.ln() <= 0.0,
        }
    }
}

fn checked_add(a: Rational64, b: Rational64) -> Result<Rational64> {
    let den = num_integer::lcm(*a.denom(), *b.denom());
    let num = (*a.numer() as i128) * (den / a.denom()) as i128 + (*b.numer() as i128) * (den / b.denom()) as i128;
    i64::try_from(num)
        .map(|n| Rational64::new(n, den))
        .map_err(|_| Error::Scale("exponent overflow".into()))
}

pub(crate) fn rational_to_f64(q: Rational64) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

fn ln_rational(r: &BigRational) -> f64 {
    match r.to_f64() {
        Some(v) if v.is_normal() => v.ln(),
        _ => ln_bigint(r.numer()) - ln_bigint(r.denom()),
    }
}

fn ln_bigint(n: &BigInt) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        return n.to_f64().unwrap_or(f64::NAN).ln();
    }
    let shift = bits - 60;
    let top: BigInt = n >> shift;
    top.to_f64().unwrap_or(f64::NAN).ln() + shift as f64 * std::f64::consts::LN_2
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.ratio;
        let shown = match r.to_f64() {
            Some(v) if BigRational::from_float(v).as_ref() == Some(r) => format!("{v}"),
            _ => format!("{}/{}", r.numer(), r.denom()),
        };
        match self.beta() {
            None => write!(f, "{shown}"),
            Some(beta) if r.is_one() => write!(f, "exp(-{}*{beta})", self.beta_exp),
            Some(beta) => write!(f, "{shown}*exp(-{}*{beta})", self.beta_exp),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_products_are_exact() {
        let a = Scale::from_f64(0.1).unwrap();
        let b = Scale::from_ratio(1, 3).unwrap();
        let p = a.mul(&b).unwrap().mul(&b.recip()).unwrap();
        assert_eq!(p, a);
        assert!(a.mul(&a.recip()).unwrap().is_one());
    }

    #[test]
    fn ln_of_quarter_is_the_double_log() {
        assert_eq!(Scale::from_f64(0.25).unwrap().ln(), 0.25f64.ln());
        assert_eq!(Scale::from_ratio(1, 3).unwrap().ln(), (1.0f64 / 3.0).ln());
    }

    #[test]
    fn beta_forms() {
        let s1 = Scale::exp_neg(Rational64::new(1, 1), 1.0).unwrap();
        let s2 = Scale::exp_neg(Rational64::new(3, 2), 1.0).unwrap();
        assert!((s1.value() - (-1f64).exp()).abs() < 1e-16);
        let p = s1.mul(&s2).unwrap();
        assert_eq!(p.beta_exp(), Rational64::new(5, 2));
        assert!(s1.mul(&s1.recip()).unwrap().is_one());
        let other = Scale::exp_neg(Rational64::new(1, 1), 2.0).unwrap();
        assert!(s1.mul(&other).is_err());
        assert!(s1.in_unit_interval());
    }

    #[test]
    fn huge_ratios_keep_finite_logs() {
        let mut p = Scale::one();
        let q = Scale::from_ratio(1, 7).unwrap();
        for _ in 0..600 {
            p = p.mul(&q).unwrap();
        }
        assert!((p.ln() - 600.0 * (1.0f64 / 7.0).ln()).abs() < 1e-9);
    }

    #[test]
    fn display() {
        assert_eq!(Scale::from_f64(0.25).unwrap().to_string(), "0.25");
        assert_eq!(Scale::from_ratio(1, 3).unwrap().to_string(), "1/3");
        assert_eq!(Scale::one().to_string(), "1");
    }
}
