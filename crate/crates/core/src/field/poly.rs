//! Dense univariate polynomials in `e` with rational coefficients.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::rational::{format_rational, parse_rational};
use crate::error::{Error, Result};

/// Coefficients in ascending degree: `coeffs[k]` multiplies `e^k`.
/// Empty for zero, otherwise the last coefficient is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct EpsPolynomial {
    coeffs: Vec<BigRational>,
}

impl EpsPolynomial {
    fn normalize(mut self) -> Self {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
        self
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Self { coeffs: vec![c] }.normalize()
    }

    /// The indeterminate `e`.
    pub fn epsilon() -> Self {
        Self::from_coeffs(vec![BigRational::zero(), BigRational::one()])
    }

    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Self {
        Self { coeffs }.normalize()
    }

    pub fn from_i64s(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> BigRational {
        self.coeffs.get(k).cloned().unwrap_or_else(BigRational::zero)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&BigRational> {
        self.coeffs.last()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_canonical(&self) -> bool {
        self.coeffs.last().is_none_or(|c| !c.is_zero())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }

    pub fn neg(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![BigRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    /// Euclidean division: `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        let d = divisor.degree().ok_or(Error::DivisionByZero)?;
        let lead = divisor.coeffs[d].clone();
        let mut rem = self.coeffs.clone();
        if rem.len() <= d {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![BigRational::zero(); rem.len() - d];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + d] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, b) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * b;
            }
            quot[k] = c;
        }
        rem.truncate(d);
        Ok((Self::from_coeffs(quot), Self::from_coeffs(rem)))
    }

    /// Divides by the leading coefficient. Zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) if !lc.is_one() => {
                let inv = lc.recip();
                self.scale(&inv)
            }
            _ => self.clone(),
        }
    }

    /// Horner evaluation.
    pub fn eval(&self, v: &BigRational) -> BigRational {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRational::zero(), |acc, c| acc * v + c)
    }

    /// Compact rendering without spaces or `*`: `30-15e`, `1/2+e^2`.
    pub fn to_compact(&self) -> String {
        self.render(false)
    }

    fn render(&self, spaced: bool) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            match (out.is_empty(), neg, spaced) {
                (true, true, _) => out.push('-'),
                (true, false, _) => {}
                (false, true, true) => out.push_str(" - "),
                (false, false, true) => out.push_str(" + "),
                (false, true, false) => out.push('-'),
                (false, false, false) => out.push('+'),
            }
            let mag = c.abs();
            if k == 0 {
                out.push_str(&format_rational(&mag));
                continue;
            }
            if !mag.is_one() {
                out.push_str(&format_rational(&mag));
                if spaced {
                    out.push('*');
                }
            }
            out.push('e');
            if k > 1 {
                out.push('^');
                out.push_str(&k.to_string());
            }
        }
        out
    }

    /// Parses either rendering produced by this type (`Display` or
    /// [`to_compact`](Self::to_compact)).
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::BadToken {
            line: 1,
            token: text.to_string(),
        };
        let s: String = text.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
        if s.is_empty() {
            return Err(bad());
        }
        let bytes = s.as_bytes();
        let mut pos = 0;
        let mut acc = Self::zero();
        while pos < bytes.len() {
            let negative = match bytes[pos] {
                b'-' => {
                    pos += 1;
                    true
                }
                b'+' if pos > 0 => {
                    pos += 1;
                    false
                }
                _ if pos == 0 => false,
                _ => return Err(bad()),
            };
            let start = pos;
            while pos < bytes.len() && (bytes[pos].is_ascii_digit() || bytes[pos] == b'/') {
                pos += 1;
            }
            let coef = if pos > start {
                parse_rational(&s[start..pos], 1).map_err(|_| bad())?
            } else {
                BigRational::one()
            };
            let mut power = 0usize;
            if pos < bytes.len() && bytes[pos] == b'e' {
                pos += 1;
                power = 1;
                if pos < bytes.len() && bytes[pos] == b'^' {
                    pos += 1;
                    let ps = pos;
                    while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                        pos += 1;
                    }
                    power = s[ps..pos].parse().map_err(|_| bad())?;
                }
            } else if pos == start {
                return Err(bad());
            }
            let mut coeffs = vec![BigRational::zero(); power + 1];
            coeffs[power] = if negative { -coef } else { coef };
            acc = acc.add(&Self::from_coeffs(coeffs));
        }
        Ok(acc)
    }
}

/// Pretty rendering: `30 - 15*e`, `4 + e`.
impl fmt::Display for EpsPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(true))
    }
}

/// Monic greatest common divisor by the Euclidean algorithm over the
/// rationals.
pub fn poly_gcd(p: &EpsPolynomial, q: &EpsPolynomial) -> Result<EpsPolynomial> {
    if p.is_zero() && q.is_zero() {
        return Err(Error::BothZero);
    }
    let (mut a, mut b) = (p.clone(), q.clone());
    while !b.is_zero() {
        let (_, r) = a.div_rem(&b)?;
        a = b;
        b = r;
    }
    Ok(a.monic())
}
