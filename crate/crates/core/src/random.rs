//! Seeded random integer matrices.
//!
//! Entries are drawn uniformly from a closed range and filled row by row.
//! Each `(seed, stream)` pair is an independent ChaCha8 stream, so parallel
//! samples can split by sample id without sharing a generator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{rational_from_i64, BigRational};
use crate::matrix::SquareMatrix;

pub fn seeded_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Panics if `lo > hi` or `order == 0`.
pub fn random_integer_matrix<R: Rng + ?Sized>(
    rng: &mut R,
    order: usize,
    lo: i64,
    hi: i64,
) -> SquareMatrix<BigRational> {
    SquareMatrix::from_fn(order, |_, _| rational_from_i64(rng.gen_range(lo..=hi)))
}
