//! Fixed-pivot reduction.
//!
//! A nonzero pivot `a_rs` is fixed and every entry off its row and column is
//! replaced by the signed 2x2 minor `σ_ij (a_ij a_rs - a_is a_rj)`. The
//! reduced matrix has determinant `a_rs^(n-2) det(A)`, so the divisors of
//! all stages are stacked and applied once after the order-2 stage has been
//! turned into the single number `Z`.

use std::cmp::Ordering;
use std::fmt;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::field::{BigRational, Field, OpCounter, OpCounts};
use crate::matrix::{det2_counted, Pos, Sign, SquareMatrix};

/// Fields whose elements can be ranked by size for pivot selection.
pub trait Magnitude: Field {
    fn cmp_magnitude(&self, other: &Self) -> Ordering;
}

impl Magnitude for BigRational {
    fn cmp_magnitude(&self, other: &Self) -> Ordering {
        self.abs().cmp(&other.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PivotPolicy {
    /// Largest absolute value, earliest row-major position on ties.
    #[default]
    MaxMagnitude,
    /// First nonzero entry in row-major order.
    FirstNonzero,
}

impl fmt::Display for PivotPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PivotPolicy::MaxMagnitude => "max-magnitude",
            PivotPolicy::FirstNonzero => "first-nonzero",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ChioOptions {
    pub policy: PivotPolicy,
    /// Pivots for the leading stages, each 1-based in its own stage matrix.
    /// Later stages fall back to `policy`.
    pub forced_pivots: Vec<Pos>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pivot<F> {
    pub position: Pos,
    pub value: F,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChioStage<F> {
    pub k: usize,
    pub matrix: SquareMatrix<F>,
    /// The pivot fixed in this stage's matrix; absent for orders 1 and 2
    /// and for an all-zero stage.
    pub pivot: Option<Pivot<F>>,
    /// Operations spent producing this stage from the previous one.
    pub ops: OpCounts,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChioTrace<F> {
    pub stages: Vec<ChioStage<F>>,
    /// Product of `pivot^(m-2)` over the pivoted stages of order `m`.
    pub divisor: F,
    pub final_z: F,
}

impl<F: Field> ChioTrace<F> {
    /// Operations spent in the pivoted reduction steps only, excluding the
    /// closing 2x2 determinant and the divisor arithmetic.
    pub fn reduction_ops(&self) -> OpCounts {
        let mut total = OpCounts::default();
        for pair in self.stages.windows(2) {
            if pair[0].pivot.is_some() {
                total += pair[1].ops;
            }
        }
        total
    }

    pub fn pivots(&self) -> impl Iterator<Item = &Pivot<F>> {
        self.stages.iter().filter_map(|s| s.pivot.as_ref())
    }
}

/// `σ_ij`: +1 when `r - i` and `s - j` have the same sign, -1 otherwise.
pub fn sign_factor(i: usize, j: usize, r: usize, s: usize) -> Result<Sign> {
    if i == r || j == s {
        return Err(Error::OnPivotLine { i, j, r, s });
    }
    Ok(Sign::from_parity((i < r) != (j < s)))
}

pub fn chio_reduce<F: Field>(a: &SquareMatrix<F>, pivot: Pos) -> Result<SquareMatrix<F>> {
    chio_reduce_counted(a, pivot, &OpCounter::new())
}

/// Drops the pivot's row and column; the remaining lines keep their
/// relative order.
pub fn chio_reduce_counted<F: Field>(a: &SquareMatrix<F>, pivot: Pos, ops: &OpCounter) -> Result<SquareMatrix<F>> {
    let n = a.order();
    if n < 2 {
        return Err(Error::TooSmall(n, 2));
    }
    let a_rs = a.get(pivot)?;
    if a_rs.is_zero() {
        return Err(Error::ZeroPivot(pivot));
    }
    let (r, s) = (pivot.row - 1, pivot.col - 1);
    let skip = |t: usize, p: usize| if t >= p { t + 1 } else { t };
    Ok(SquareMatrix::from_fn(n - 1, |bi, bj| {
        let (i, j) = (skip(bi, r), skip(bj, s));
        let minor = ops.det2(a.at(i, j), a.at(i, s), a.at(r, j), a_rs);
        let sigma = sign_factor(i, j, r, s).expect("off the pivot lines");
        sigma.apply(&minor)
    }))
}

/// Picks a pivot under `policy`, or `None` for an all-zero matrix.
pub fn choose_pivot<F: Magnitude>(a: &SquareMatrix<F>, policy: PivotPolicy) -> Option<Pos> {
    let n = a.order();
    let cells = (0..n).flat_map(|i| (0..n).map(move |j| (i, j)));
    let (i, j) = match policy {
        PivotPolicy::FirstNonzero => cells.into_iter().find(|&(i, j)| !a.at(i, j).is_zero())?,
        PivotPolicy::MaxMagnitude => {
            let mut best: Option<(usize, usize)> = None;
            for (i, j) in cells {
                let x = a.at(i, j);
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.cmp_magnitude(a.at(bi, bj)) == Ordering::Greater) {
                    best = Some((i, j));
                }
            }
            best?
        }
    };
    Some(Pos::new(i + 1, j + 1))
}

pub fn chio_det<F: Magnitude>(a: &SquareMatrix<F>, options: &ChioOptions) -> Result<(F, ChioTrace<F>)> {
    chio_det_counted(a, options, &OpCounter::new())
}

/// Reduces to order 1 with deferred division: `value = Z / divisor`.
pub fn chio_det_counted<F: Magnitude>(
    a: &SquareMatrix<F>,
    options: &ChioOptions,
    ops: &OpCounter,
) -> Result<(F, ChioTrace<F>)> {
    let n = a.order();
    let pivot_stages = n.saturating_sub(2);
    if options.forced_pivots.len() > pivot_stages {
        return Err(Error::TooManyPivots {
            given: options.forced_pivots.len(),
            needed: pivot_stages,
        });
    }

    let mut stages: Vec<ChioStage<F>> = Vec::with_capacity(n);
    let mut current = a.clone();
    let mut produced_by = OpCounts::default();
    let mut divisor = F::one();

    while current.order() > 2 {
        let k = stages.len();
        if current.is_zero() {
            stages.push(ChioStage {
                k,
                matrix: current,
                pivot: None,
                ops: produced_by,
            });
            let zero = F::zero();
            return Ok((
                zero.clone(),
                ChioTrace {
                    stages,
                    divisor,
                    final_z: zero,
                },
            ));
        }
        let position = match options.forced_pivots.get(k) {
            Some(&p) => p,
            None => choose_pivot(&current, options.policy).expect("nonzero matrix has a pivot"),
        };
        let value = current.get(position)?.clone();
        let before = ops.counts();
        let next = chio_reduce_counted(&current, position, ops)?;
        let reduce_ops = ops.counts().since(&before);
        let exponent = current.order() as u32 - 2;
        divisor = ops.mul(&divisor, &ops.pow(&value, exponent));
        stages.push(ChioStage {
            k,
            matrix: current,
            pivot: Some(Pivot { position, value }),
            ops: produced_by,
        });
        current = next;
        produced_by = reduce_ops;
    }

    let final_z = if current.order() == 2 {
        let before = ops.counts();
        let z = det2_counted(&current, ops)?;
        stages.push(ChioStage {
            k: stages.len(),
            matrix: current,
            pivot: None,
            ops: produced_by,
        });
        produced_by = ops.counts().since(&before);
        z
    } else {
        current.at(0, 0).clone()
    };
    stages.push(ChioStage {
        k: stages.len(),
        matrix: SquareMatrix::from_fn(1, |_, _| final_z.clone()),
        pivot: None,
        ops: produced_by,
    });

    let value = if divisor.is_one() {
        final_z.clone()
    } else {
        ops.div(&final_z, &divisor)?
    };
    Ok((
        value,
        ChioTrace {
            stages,
            divisor,
            final_z,
        },
    ))
}
