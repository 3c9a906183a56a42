//! Exact determinant evaluation by adjacent-minor condensation and by
//! fixed-pivot reduction, with naive oracle evaluators and the classical
//! cofactor identities used to check them.

pub mod chio;
pub mod dodgson;
pub mod error;
pub mod field;
pub mod matrix;
pub mod oracle;
pub mod random;
pub mod samples;

pub use error::{Error, Result};
pub use field::{BigRational, EpsPolynomial, EpsRational, Field, OpCounter, OpCounts};
pub use matrix::{Axis, Pos, Sign, SquareMatrix};
