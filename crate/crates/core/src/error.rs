use thiserror::Error;

use crate::matrix::Pos;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("gcd of two zero polynomials is undefined")]
    BothZero,
    #[error("denominator vanishes at e = {point}")]
    PoleAtPoint { point: String },

    #[error("line {line}: expected {expected} entries, found {found}")]
    RaggedRows {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("matrix has {rows} rows but {cols} columns")]
    NotSquare { rows: usize, cols: usize },
    #[error("line {line}: cannot parse {token:?} as a rational")]
    BadToken { line: usize, token: String },
    #[error("line {line}: zero denominator in {token:?}")]
    ZeroDenominator { line: usize, token: String },
    #[error("matrix text contains no rows")]
    EmptyMatrix,
    #[error("expected order {expected}, got {found}")]
    WrongOrder { expected: usize, found: usize },
    #[error("index {pos} out of range for order {order}")]
    IndexOutOfRange { pos: Pos, order: usize },

    #[error("zero divisor at {position} of the order-{divisor_order} stage")]
    ZeroDivisor { divisor_order: usize, position: Pos },
    #[error("divisor at {position} of the order-{divisor_order} stage is identically zero in e")]
    SymbolicZeroDivisor { divisor_order: usize, position: Pos },
    #[error("symbolic condensation ended in {0}, which is not a polynomial of degree <= 1")]
    NotAffine(String),

    #[error("({i}, {j}) lies on the pivot line through ({r}, {s})")]
    OnPivotLine { i: usize, j: usize, r: usize, s: usize },
    #[error("pivot at {0} is zero")]
    ZeroPivot(Pos),
    #[error("{given} forced pivots supplied but only {needed} stages take a pivot")]
    TooManyPivots { given: usize, needed: usize },

    #[error("order {0} exceeds the permutation-sum limit of 8")]
    TooLarge(usize),
    #[error("line indices must differ, got {0} twice")]
    EqualIndices(usize),
    #[error("order {0} is too small, need at least {1}")]
    TooSmall(usize, usize),
}
