//! Naive ground-truth determinants and the classical cofactor identities.
//!
//! Nothing here is meant to be fast. The permutation sum and the first-row
//! Laplace expansion are the references every reduction method is checked
//! against.

use crate::error::{Error, Result};
use crate::field::{Field, OpCounter};
use crate::matrix::{det2_counted, submatrix, Axis, Pos, Sign, SquareMatrix};

/// Largest order accepted by [`det_definition`].
pub const DEFINITION_MAX_ORDER: usize = 8;

/// One term of the permutation sum: a bijection of `1..=n` and its
/// Levi-Civita sign.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationTerm {
    pub permutation: Vec<usize>,
    pub sign: Sign,
}

fn inversion_parity(p: &[usize]) -> bool {
    let mut odd = false;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                odd = !odd;
            }
        }
    }
    odd
}

fn next_permutation(p: &mut [usize]) -> bool {
    let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) else {
        return false;
    };
    let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// All `n!` permutations of `1..=n` in lexicographic order, identity first.
pub fn permutation_terms(n: usize) -> impl Iterator<Item = PermutationTerm> {
    let mut current: Option<Vec<usize>> = Some((1..=n).collect());
    std::iter::from_fn(move || {
        let p = current.take()?;
        let mut next = p.clone();
        if next_permutation(&mut next) {
            current = Some(next);
        }
        let sign = Sign::from_parity(inversion_parity(&p));
        Some(PermutationTerm {
            permutation: p,
            sign,
        })
    })
}

pub fn det_definition<F: Field>(a: &SquareMatrix<F>) -> Result<F> {
    det_definition_counted(a, &OpCounter::new())
}

/// Signed sum over all permutations. Refuses orders above 8.
pub fn det_definition_counted<F: Field>(a: &SquareMatrix<F>, ops: &OpCounter) -> Result<F> {
    let n = a.order();
    if n > DEFINITION_MAX_ORDER {
        return Err(Error::TooLarge(n));
    }
    let mut acc: Option<F> = None;
    for term in permutation_terms(n) {
        let mut product = a.at(0, term.permutation[0] - 1).clone();
        for (i, &col) in term.permutation.iter().enumerate().skip(1) {
            product = ops.mul(&product, a.at(i, col - 1));
        }
        acc = Some(match (acc, term.sign) {
            (None, sign) => sign.apply(&product),
            (Some(s), Sign::Plus) => ops.add(&s, &product),
            (Some(s), Sign::Minus) => ops.sub(&s, &product),
        });
    }
    Ok(acc.expect("at least one permutation"))
}

pub fn det_laplace<F: Field>(a: &SquareMatrix<F>) -> F {
    det_laplace_counted(a, &OpCounter::new())
}

/// Recursive cofactor expansion along the first row.
pub fn det_laplace_counted<F: Field>(a: &SquareMatrix<F>, ops: &OpCounter) -> F {
    match a.order() {
        1 => a.at(0, 0).clone(),
        2 => det2_counted(a, ops).expect("order 2"),
        n => {
            let mut acc: Option<F> = None;
            for j in 0..n {
                let minor = submatrix(a, Pos::new(1, j + 1)).expect("in range");
                let term = ops.mul(a.at(0, j), &det_laplace_counted(&minor, ops));
                acc = Some(match acc {
                    None => term,
                    Some(s) if j % 2 == 0 => ops.add(&s, &term),
                    Some(s) => ops.sub(&s, &term),
                });
            }
            acc.expect("order >= 3")
        }
    }
}

/// `(-1)^(i+j)` times the minor with row `i` and column `j` removed.
pub fn cofactor<F: Field>(a: &SquareMatrix<F>, pos: Pos) -> Result<F> {
    let minor = submatrix(a, pos)?;
    let value = det_laplace(&minor);
    Ok(Sign::from_parity((pos.row + pos.col) % 2 == 1).apply(&value))
}

/// Entry `(i, j)` holds the cofactor of `a_ij`.
pub fn cofactor_table<F: Field>(a: &SquareMatrix<F>) -> Result<SquareMatrix<F>> {
    if a.order() < 2 {
        return Err(Error::TooSmall(a.order(), 2));
    }
    let mut rows = Vec::with_capacity(a.order());
    for i in 1..=a.order() {
        let row = (1..=a.order())
            .map(|j| cofactor(a, Pos::new(i, j)))
            .collect::<Result<Vec<_>>>()?;
        rows.push(row);
    }
    SquareMatrix::from_rows(rows)
}

/// The adjugate, as the untransposed cofactor grid. Transposition does not
/// change any determinant-level identity.
pub fn adjugate<F: Field>(a: &SquareMatrix<F>) -> Result<SquareMatrix<F>> {
    cofactor_table(a)
}

/// Laplace expansion along an arbitrary line (1-based `index`).
pub fn laplace_along<F: Field>(a: &SquareMatrix<F>, axis: Axis, index: usize) -> Result<F> {
    line_sum(a, axis, index, index)
}

fn line_sum<F: Field>(a: &SquareMatrix<F>, axis: Axis, entries: usize, cofactors: usize) -> Result<F> {
    let n = a.order();
    if n == 1 {
        let pos = Pos::new(entries, cofactors);
        return a.get(pos).cloned();
    }
    let mut acc = F::zero();
    for t in 1..=n {
        let (entry, cof) = match axis {
            Axis::Rows => (Pos::new(entries, t), Pos::new(cofactors, t)),
            Axis::Columns => (Pos::new(t, entries), Pos::new(t, cofactors)),
        };
        acc = acc.plus(&a.get(entry)?.times(&cofactor(a, cof)?));
    }
    Ok(acc)
}

/// Alien-cofactor sum over columns: `sum_a a_{a,k} * cof_{a,l}` for `k != l`.
/// Always zero for a correct determinant theory.
pub fn cauchy_sum<F: Field>(a: &SquareMatrix<F>, k: usize, l: usize) -> Result<F> {
    cauchy_sum_along(a, Axis::Columns, k, l)
}

/// [`cauchy_sum`] for either axis.
pub fn cauchy_sum_along<F: Field>(a: &SquareMatrix<F>, axis: Axis, k: usize, l: usize) -> Result<F> {
    if k == l {
        return Err(Error::EqualIndices(k));
    }
    line_sum(a, axis, k, l)
}

/// Returns `(det2 of the four corner (n-1)-minors, det(A) * det(central
/// (n-2)-minor))`. The two sides agree for every square matrix of order >= 3.
pub fn lemma_corner_check<F: Field>(a: &SquareMatrix<F>) -> Result<(F, F)> {
    let n = a.order();
    if n < 3 {
        return Err(Error::TooSmall(n, 3));
    }
    let corner = |r, c| a.block(Pos::new(r, c), n - 1).map(|b| det_laplace(&b));
    let (b11, b12, b21, b22) = (corner(1, 1)?, corner(1, 2)?, corner(2, 1)?, corner(2, 2)?);
    let lhs = b11.times(&b22).minus(&b12.times(&b21));
    let central = det_laplace(&a.block(Pos::new(2, 2), n - 2)?);
    let rhs = det_laplace(a).times(&central);
    Ok((lhs, rhs))
}
