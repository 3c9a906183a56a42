//! The rational-function field Q(e).

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{poly_gcd, EpsPolynomial};
use super::rational::format_rational;
use super::Field;
use crate::error::{Error, Result};

/// `num / den`, reduced, with `den` monic. Zero is `0 / 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EpsRational {
    num: EpsPolynomial,
    den: EpsPolynomial,
}

impl EpsRational {
    pub fn new(num: EpsPolynomial, den: EpsPolynomial) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::from_poly(EpsPolynomial::zero()));
        }
        let g = poly_gcd(&num, &den)?;
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_rem(&g)?.0, den.div_rem(&g)?.0)
        };
        if let Some(lc) = den.leading().filter(|lc| !One::is_one(*lc)) {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        let r = Self { num, den };
        debug_assert!(r.is_canonical());
        Ok(r)
    }

    pub fn from_poly(num: EpsPolynomial) -> Self {
        Self {
            num,
            den: EpsPolynomial::one(),
        }
    }

    /// The indeterminate `e`.
    pub fn epsilon() -> Self {
        Self::from_poly(EpsPolynomial::epsilon())
    }

    pub fn numer(&self) -> &EpsPolynomial {
        &self.num
    }

    pub fn denom(&self) -> &EpsPolynomial {
        &self.den
    }

    /// The numerator when the denominator is 1.
    pub fn as_polynomial(&self) -> Option<&EpsPolynomial> {
        self.den.is_one().then_some(&self.num)
    }

    /// The value when this is a constant.
    pub fn as_constant(&self) -> Option<BigRational> {
        match self.as_polynomial()?.degree() {
            None => Some(<BigRational as Zero>::zero()),
            Some(0) => Some(self.num.coeff(0)),
            _ => None,
        }
    }

    pub fn to_compact(&self) -> String {
        if self.den.is_one() {
            self.num.to_compact()
        } else {
            format!("({})/({})", self.num.to_compact(), self.den.to_compact())
        }
    }

    /// Inverse of [`to_compact`](Self::to_compact) and `Display`.
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        if let Some(rest) = t.strip_prefix('(') {
            if let Some((num, den)) = rest.split_once(")/(") {
                if let Some(den) = den.strip_suffix(')') {
                    return Self::new(EpsPolynomial::parse(num)?, EpsPolynomial::parse(den)?);
                }
            }
            return Err(Error::BadToken {
                line: 1,
                token: text.to_string(),
            });
        }
        Ok(Self::from_poly(EpsPolynomial::parse(t)?))
    }
}

impl fmt::Display for EpsRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Field for EpsRational {
    fn zero() -> Self {
        Self::from_poly(EpsPolynomial::zero())
    }

    fn one() -> Self {
        Self::from_poly(EpsPolynomial::one())
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn plus(&self, rhs: &Self) -> Self {
        if self.den == rhs.den {
            return Self::new(self.num.add(&rhs.num), self.den.clone()).expect("nonzero denominator");
        }
        let num = self.num.mul(&rhs.den).add(&rhs.num.mul(&self.den));
        Self::new(num, self.den.mul(&rhs.den)).expect("nonzero denominator")
    }

    fn minus(&self, rhs: &Self) -> Self {
        self.plus(&rhs.negate())
    }

    fn times(&self, rhs: &Self) -> Self {
        Self::new(self.num.mul(&rhs.num), self.den.mul(&rhs.den)).expect("nonzero denominator")
    }

    fn negate(&self) -> Self {
        Self {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    fn try_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Self::new(self.num.mul(&rhs.den), self.den.mul(&rhs.num))
    }

    fn from_rational(q: &BigRational) -> Self {
        Self::from_poly(EpsPolynomial::constant(q.clone()))
    }

    fn to_token(&self) -> String {
        self.to_compact()
    }

    fn is_canonical(&self) -> bool {
        self.num.is_canonical()
            && self.den.is_canonical()
            && self.den.leading().is_some_and(One::is_one)
            && (self.num.is_zero() && self.den.is_one()
                || poly_gcd(&self.num, &self.den).is_ok_and(|g| g.is_one()))
    }
}

/// Substitutes `e = point`.
pub fn eval_at(p: &EpsRational, point: &BigRational) -> Result<BigRational> {
    let den = p.den.eval(point);
    if Zero::is_zero(&den) {
        return Err(Error::PoleAtPoint {
            point: format_rational(point),
        });
    }
    Ok(p.num.eval(point) / den)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(c: &[i64]) -> EpsPolynomial {
        EpsPolynomial::from_i64s(c)
    }

    fn r(n: &[i64], d: &[i64]) -> EpsRational {
        EpsRational::new(poly(n), poly(d)).unwrap()
    }

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn difference_of_squares_cancels() {
        let num = r(&[-1, 0, 1], &[1]);
        let den = r(&[-1, 1], &[1]);
        assert_eq!(num.try_div(&den).unwrap(), r(&[1, 1], &[1]));
    }

    #[test]
    fn canonical_denominator_is_monic() {
        let x = r(&[3], &[0, 2]);
        assert_eq!(x.denom(), &poly(&[0, 1]));
        assert_eq!(x.numer(), &EpsPolynomial::constant(BigRational::new(3.into(), 2.into())));
        assert!(x.is_canonical());
        assert_eq!(r(&[0], &[5, 5]), EpsRational::zero());
    }

    #[test]
    fn eval_examples() {
        assert_eq!(eval_at(&r(&[30, -15], &[1]), &q(1)).unwrap(), q(15));
        assert_eq!(eval_at(&EpsRational::from_rational(&q(7)), &q(-3)).unwrap(), q(7));
        assert!(matches!(eval_at(&r(&[1], &[-1, 1]), &q(1)), Err(Error::PoleAtPoint { .. })));
    }

    #[test]
    fn division_by_zero_function() {
        assert_eq!(r(&[1, 1], &[1]).try_div(&EpsRational::zero()), Err(Error::DivisionByZero));
        assert_eq!(EpsRational::new(poly(&[1]), poly(&[])), Err(Error::DivisionByZero));
    }

    #[test]
    fn compact_round_trip() {
        for x in [r(&[30, -15], &[1]), r(&[1, 2], &[-1, 0, 3]), EpsRational::zero()] {
            assert_eq!(EpsRational::parse(&x.to_compact()).unwrap(), x);
            assert_eq!(EpsRational::parse(&x.to_string()).unwrap(), x);
        }
        assert!(EpsRational::parse("(1+e)/").is_err());
    }
}
