//! Reference matrices with known determinants.

use crate::field::BigRational;
use crate::matrix::{parse_matrix, SquareMatrix};

/// A 5x5 integer matrix whose condensation runs without a zero divisor.
/// Determinant 5.
pub const CONDENSABLE_5X5: &str = "\
1 0 -2 3 2
-1 -3 2 -2 0
-3 -2 2 -1 1
-2 3 -1 2 0
0 -3 1 -1 -3
";

/// A 5x5 integer matrix whose 2x2 minor at (3,3) vanishes, so plain
/// condensation divides by zero in its third step. Determinant 15.
pub const SINGULAR_INTERIOR_5X5: &str = "\
-1 0 -1 0 -2
2 1 -2 -1 0
-1 2 1 -2 1
1 3 1 -2 -1
-1 1 -2 -2 0
";

pub fn condensable_5x5() -> SquareMatrix<BigRational> {
    parse_matrix(CONDENSABLE_5X5).expect("valid sample")
}

pub fn singular_interior_5x5() -> SquareMatrix<BigRational> {
    parse_matrix(SINGULAR_INTERIOR_5X5).expect("valid sample")
}
