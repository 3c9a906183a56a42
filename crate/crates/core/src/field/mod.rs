//! Exact scalar fields.
//!
//! Two fields implement [`Field`]: arbitrary-precision rationals
//! ([`BigRational`]) and rational functions in one indeterminate
//! ([`EpsRational`]). Every value is kept in canonical form, so `==` is a
//! structural comparison.

mod eps;
mod poly;
mod rational;

use std::cell::Cell;
use std::fmt;
use std::ops::AddAssign;

pub use eps::{eval_at, EpsRational};
pub use num_rational::BigRational;
pub use poly::{poly_gcd, EpsPolynomial};
pub use rational::{format_rational, parse_rational, rational_from_i64};

use crate::error::Result;

/// Exact field arithmetic over canonical values.
pub trait Field: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn plus(&self, rhs: &Self) -> Self;
    fn minus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn negate(&self) -> Self;
    /// Fails with `DivisionByZero` when `rhs` is zero.
    fn try_div(&self, rhs: &Self) -> Result<Self>;
    /// Embeds a rational constant.
    fn from_rational(q: &BigRational) -> Self;

    fn is_one(&self) -> bool {
        *self == Self::one()
    }

    /// Whitespace-free rendering for the matrix text format.
    fn to_token(&self) -> String {
        self.to_string()
    }

    /// Canonical-form check, used by debug assertions and tests.
    fn is_canonical(&self) -> bool {
        true
    }
}

/// Plain snapshot of operation counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct OpCounts {
    pub adds: u64,
    pub subs: u64,
    pub muls: u64,
    pub divs: u64,
}

impl OpCounts {
    pub fn total(&self) -> u64 {
        self.adds + self.subs + self.muls + self.divs
    }

    /// Component-wise difference `self - earlier`.
    pub fn since(&self, earlier: &OpCounts) -> OpCounts {
        OpCounts {
            adds: self.adds - earlier.adds,
            subs: self.subs - earlier.subs,
            muls: self.muls - earlier.muls,
            divs: self.divs - earlier.divs,
        }
    }
}

impl AddAssign for OpCounts {
    fn add_assign(&mut self, rhs: OpCounts) {
        self.adds += rhs.adds;
        self.subs += rhs.subs;
        self.muls += rhs.muls;
        self.divs += rhs.divs;
    }
}

/// Counts field operations for one evaluation.
///
/// A counter is owned by a single evaluation and handed down by reference.
/// It is deliberately `!Sync`; parallel runs each create their own.
/// Negation and zero tests are free.
#[derive(Debug, Default)]
pub struct OpCounter {
    adds: Cell<u64>,
    subs: Cell<u64>,
    muls: Cell<u64>,
    divs: Cell<u64>,
}

fn bump(c: &Cell<u64>) {
    c.set(c.get() + 1);
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn counts(&self) -> OpCounts {
        OpCounts {
            adds: self.adds.get(),
            subs: self.subs.get(),
            muls: self.muls.get(),
            divs: self.divs.get(),
        }
    }

    pub fn add<F: Field>(&self, a: &F, b: &F) -> F {
        bump(&self.adds);
        a.plus(b)
    }

    pub fn sub<F: Field>(&self, a: &F, b: &F) -> F {
        bump(&self.subs);
        a.minus(b)
    }

    pub fn mul<F: Field>(&self, a: &F, b: &F) -> F {
        bump(&self.muls);
        a.times(b)
    }

    pub fn div<F: Field>(&self, a: &F, b: &F) -> Result<F> {
        let q = a.try_div(b)?;
        bump(&self.divs);
        Ok(q)
    }

    /// `base^exp` by repeated multiplication; `exp - 1` counted products.
    pub fn pow<F: Field>(&self, base: &F, exp: u32) -> F {
        if exp == 0 {
            return F::one();
        }
        let mut acc = base.clone();
        for _ in 1..exp {
            acc = self.mul(&acc, base);
        }
        acc
    }

    /// 2x2 determinant `a*d - b*c`: two products and one subtraction.
    pub fn det2<F: Field>(&self, a: &F, b: &F, c: &F, d: &F) -> F {
        let ad = self.mul(a, d);
        let bc = self.mul(b, c);
        self.sub(&ad, &bc)
    }
}
