use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::Field;
use crate::error::{Error, Result};

impl Field for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn plus(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn minus(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn times(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn negate(&self) -> Self {
        -self
    }

    fn try_div(&self, rhs: &Self) -> Result<Self> {
        if Zero::is_zero(rhs) {
            return Err(Error::DivisionByZero);
        }
        Ok(self / rhs)
    }

    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }

    fn is_canonical(&self) -> bool {
        use num_integer::Integer;
        self.denom().is_positive() && self.numer().gcd(self.denom()).is_one()
    }
}

pub fn rational_from_i64(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// `p` for integers, `p/q` otherwise.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn parse_digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

/// Parses an optionally signed decimal integer, optionally followed by `/`
/// and an unsigned decimal denominator: `-7`, `+2`, `3/4`.
///
/// `line` only labels the error.
pub fn parse_rational(token: &str, line: usize) -> Result<BigRational> {
    let bad = || Error::BadToken {
        line,
        token: token.to_string(),
    };
    let (negative, body) = match token.as_bytes().first() {
        Some(b'-') => (true, &token[1..]),
        Some(b'+') => (false, &token[1..]),
        _ => (false, token),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (parse_digits(n).ok_or_else(bad)?, parse_digits(d).ok_or_else(bad)?),
        None => (parse_digits(body).ok_or_else(bad)?, BigInt::one()),
    };
    if den.is_zero() {
        return Err(Error::ZeroDenominator {
            line,
            token: token.to_string(),
        });
    }
    let q = BigRational::new(num, den);
    Ok(if negative { -q } else { q })
}
