#![allow(dead_code)]

use detcore::field::rational_from_i64;
use detcore::{BigRational, SquareMatrix};
use proptest::prelude::*;

pub fn q(v: i64) -> BigRational {
    rational_from_i64(v)
}

pub fn from_flat(n: usize, flat: &[i64]) -> SquareMatrix<BigRational> {
    SquareMatrix::from_fn(n, |i, j| q(flat[i * n + j]))
}

/// Integer matrices of the given order with entries in `lo..=hi`.
pub fn int_matrix(n: usize, lo: i64, hi: i64) -> impl Strategy<Value = SquareMatrix<BigRational>> {
    prop::collection::vec(lo..=hi, n * n).prop_map(move |v| from_flat(n, &v))
}

/// Orders in `orders`, entries in `lo..=hi`.
pub fn any_matrix(
    orders: std::ops::RangeInclusive<usize>,
    lo: i64,
    hi: i64,
) -> impl Strategy<Value = SquareMatrix<BigRational>> {
    orders.prop_flat_map(move |n| int_matrix(n, lo, hi))
}
