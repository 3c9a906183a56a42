//! Adjacent-minor condensation.
//!
//! Each step replaces every 2x2 block of adjacent entries by its
//! determinant. From the second step on, entry `(i, j)` is divided by the
//! interior entry `(i+1, j+1)` of the matrix two steps back. Entry `(p, q)`
//! of stage `k` equals the connected `(k+1)`-minor of the input whose
//! top-left corner is `(p, q)`, so a zero divisor means that minor vanishes.
//!
//! A zero divisor is repaired in two ways. First every combination of
//! cyclic row and column rotations is tried, by increasing total shift, with
//! the rotation sign tracked. If none works, the offending minors are
//! perturbed additively by `c * e` over Q(e) and the result is evaluated at
//! `e = 0`.

use std::collections::BTreeMap;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{eval_at, rational_from_i64, BigRational, EpsRational, Field, OpCounter};
use crate::matrix::{cyclic_shift, det2_counted, Axis, Pos, Sign, SquareMatrix};
use crate::random::seeded_rng;

/// Coefficient redraws allowed before the perturbation gives up.
pub const MAX_REDRAWS: usize = 8;
/// Perturbation coefficients are drawn from `±1..=±MAX_COEFFICIENT`.
pub const MAX_COEFFICIENT: i64 = 9;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CondensationStage<F> {
    pub k: usize,
    pub matrix: SquareMatrix<F>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbationMode {
    /// The entry is replaced by `e`.
    Replace,
    /// The entry becomes `a_ij + c * e`.
    Add(i64),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Perturbation {
    pub position: Pos,
    pub original: BigRational,
    pub mode: PerturbationMode,
}

/// Stage matrices of a run, over Q or over Q(e).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Stages {
    Exact(Vec<CondensationStage<BigRational>>),
    Symbolic(Vec<CondensationStage<EpsRational>>),
}

impl Stages {
    pub fn len(&self) -> usize {
        match self {
            Stages::Exact(s) => s.len(),
            Stages::Symbolic(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Every stage rendered in the matrix text format.
    pub fn to_texts(&self) -> Vec<String> {
        match self {
            Stages::Exact(s) => s.iter().map(|st| st.matrix.to_text()).collect(),
            Stages::Symbolic(s) => s.iter().map(|st| st.matrix.to_text()).collect(),
        }
    }

    /// Every stage as rows of whitespace-free tokens.
    pub fn to_tokens(&self) -> Vec<Vec<Vec<String>>> {
        fn tok<F: Field>(stages: &[CondensationStage<F>]) -> Vec<Vec<Vec<String>>> {
            stages
                .iter()
                .map(|st| st.matrix.rows().map(|r| r.iter().map(Field::to_token).collect()).collect())
                .collect()
        }
        match self {
            Stages::Exact(s) => tok(s),
            Stages::Symbolic(s) => tok(s),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CondensationTrace {
    pub stages: Stages,
    pub permutation_sign: Sign,
    pub shifts_applied: Vec<(Axis, i64)>,
    pub perturbations: Vec<Perturbation>,
    /// The final 1x1 entry of a symbolic run.
    pub final_polynomial: Option<EpsRational>,
}

impl CondensationTrace {
    fn exact(stages: Vec<SquareMatrix<BigRational>>) -> Self {
        Self {
            stages: Stages::Exact(number(stages)),
            permutation_sign: Sign::Plus,
            shifts_applied: Vec::new(),
            perturbations: Vec::new(),
            final_polynomial: None,
        }
    }

    /// True when a rotation or a perturbation was needed.
    pub fn repaired(&self) -> bool {
        !self.shifts_applied.is_empty() || !self.perturbations.is_empty()
    }
}

fn number<F>(stages: Vec<SquareMatrix<F>>) -> Vec<CondensationStage<F>> {
    stages
        .into_iter()
        .enumerate()
        .map(|(k, matrix)| CondensationStage { k, matrix })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct DodgsonOptions {
    /// Seeds the perturbation coefficients.
    pub seed: u64,
}

/// All vanishing interior divisors of one step, 1-based in the divisor matrix.
struct ZeroDivisors {
    /// Stage index of the divisor matrix.
    stage: usize,
    positions: Vec<Pos>,
}

fn condense_step<F: Field>(
    s: &SquareMatrix<F>,
    prev: Option<&SquareMatrix<F>>,
    ops: &OpCounter,
) -> std::result::Result<SquareMatrix<F>, Vec<Pos>> {
    let m = s.order();
    if let Some(r) = prev {
        let zeros: Vec<Pos> = (1..m)
            .flat_map(|i| (1..m).map(move |j| (i, j)))
            .filter(|&(i, j)| r.at(i, j).is_zero())
            .map(|(i, j)| Pos::new(i + 1, j + 1))
            .collect();
        if !zeros.is_empty() {
            return Err(zeros);
        }
    }
    Ok(SquareMatrix::from_fn(m - 1, |i, j| {
        let minor = ops.det2(s.at(i, j), s.at(i, j + 1), s.at(i + 1, j), s.at(i + 1, j + 1));
        match prev {
            Some(r) => ops.div(&minor, r.at(i + 1, j + 1)).expect("divisors checked nonzero"),
            None => minor,
        }
    }))
}

/// One condensation step of `s` (order m >= 2). With `prev` (order m+1),
/// each 2x2 minor is divided by the matching interior entry of `prev`.
pub fn condense_once<F: Field>(s: &SquareMatrix<F>, prev: Option<&SquareMatrix<F>>) -> Result<SquareMatrix<F>> {
    condense_once_counted(s, prev, &OpCounter::new())
}

pub fn condense_once_counted<F: Field>(
    s: &SquareMatrix<F>,
    prev: Option<&SquareMatrix<F>>,
    ops: &OpCounter,
) -> Result<SquareMatrix<F>> {
    if s.order() < 2 {
        return Err(Error::TooSmall(s.order(), 2));
    }
    if let Some(r) = prev {
        if r.order() != s.order() + 1 {
            return Err(Error::WrongOrder {
                expected: s.order() + 1,
                found: r.order(),
            });
        }
    }
    condense_step(s, prev, ops).map_err(|zeros| Error::ZeroDivisor {
        divisor_order: s.order() + 1,
        position: zeros[0],
    })
}

/// Condenses down to order 1, returning every stage including the input.
fn condense_chain<F: Field>(a: &SquareMatrix<F>, ops: &OpCounter) -> std::result::Result<Vec<SquareMatrix<F>>, ZeroDivisors> {
    let mut stages = vec![a.clone()];
    while stages.last().expect("nonempty").order() > 1 {
        let k = stages.len() - 1;
        let prev = k.checked_sub(1).map(|p| &stages[p]);
        let next = condense_step(&stages[k], prev, ops).map_err(|positions| ZeroDivisors {
            stage: k - 1,
            positions,
        })?;
        stages.push(next);
    }
    Ok(stages)
}

/// Rotation candidates: every (row shift, column shift) except (0, 0), by
/// increasing total shift, smaller row shift first on ties.
fn rotation_order(n: usize) -> Vec<(usize, usize)> {
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|r| (0..n).map(move |c| (r, c)))
        .filter(|&p| p != (0, 0))
        .collect();
    pairs.sort_by_key(|&(r, c)| (r + c, r));
    pairs
}

pub fn dodgson_det(a: &SquareMatrix<BigRational>, options: &DodgsonOptions) -> Result<(BigRational, CondensationTrace)> {
    dodgson_det_counted(a, options, &OpCounter::new())
}

/// Determinant by condensation. Zero interior divisors are repaired by
/// rotations and then by perturbation, and every repair is recorded in the
/// trace. Work spent on failed attempts is counted too.
pub fn dodgson_det_counted(
    a: &SquareMatrix<BigRational>,
    options: &DodgsonOptions,
    ops: &OpCounter,
) -> Result<(BigRational, CondensationTrace)> {
    match a.order() {
        1 => return Ok((a.at(0, 0).clone(), CondensationTrace::exact(vec![a.clone()]))),
        2 => {
            let d = det2_counted(a, ops)?;
            let last = SquareMatrix::from_fn(1, |_, _| d.clone());
            return Ok((d, CondensationTrace::exact(vec![a.clone(), last])));
        }
        _ => {}
    }

    if let Ok(stages) = condense_chain(a, ops) {
        let value = stages.last().expect("nonempty").at(0, 0).clone();
        return Ok((value, CondensationTrace::exact(stages)));
    }

    let n = a.order();
    for (rows, cols) in rotation_order(n) {
        let (shifted, row_sign) = cyclic_shift(a, Axis::Rows, rows as i64);
        let (shifted, col_sign) = cyclic_shift(&shifted, Axis::Columns, cols as i64);
        if let Ok(stages) = condense_chain(&shifted, ops) {
            let sign = row_sign * col_sign;
            let value = sign.apply(stages.last().expect("nonempty").at(0, 0));
            let mut trace = CondensationTrace::exact(stages);
            trace.permutation_sign = sign;
            trace.shifts_applied = [(Axis::Rows, rows), (Axis::Columns, cols)]
                .into_iter()
                .filter(|&(_, k)| k != 0)
                .map(|(axis, k)| (axis, k as i64))
                .collect();
            return Ok((value, trace));
        }
    }

    perturbed_det(a, options, ops)
}

fn draw_coefficient<R: Rng>(rng: &mut R) -> i64 {
    let magnitude = rng.gen_range(1..=MAX_COEFFICIENT);
    if rng.gen_bool(0.5) {
        -magnitude
    } else {
        magnitude
    }
}

fn perturbed_det(
    a: &SquareMatrix<BigRational>,
    options: &DodgsonOptions,
    ops: &OpCounter,
) -> Result<(BigRational, CondensationTrace)> {
    let mut rng = seeded_rng(options.seed, 0);
    let mut coefficients: BTreeMap<Pos, i64> = BTreeMap::new();
    let mut redraws = 0;
    loop {
        let lifted = SquareMatrix::from_fn(a.order(), |i, j| {
            let base = EpsRational::from_rational(a.at(i, j));
            match coefficients.get(&Pos::new(i + 1, j + 1)) {
                Some(&c) => base.plus(&EpsRational::epsilon().times(&EpsRational::from_rational(&rational_from_i64(c)))),
                None => base,
            }
        });
        match condense_chain(&lifted, ops) {
            Ok(stages) => {
                let poly = stages.last().expect("nonempty").at(0, 0).clone();
                let value = eval_at(&poly, &BigRational::from_integer(0.into()))?;
                let perturbations = coefficients
                    .iter()
                    .map(|(&position, &c)| Perturbation {
                        position,
                        original: a.get(position).expect("in range").clone(),
                        mode: PerturbationMode::Add(c),
                    })
                    .collect();
                let trace = CondensationTrace {
                    stages: Stages::Symbolic(number(stages)),
                    permutation_sign: Sign::Plus,
                    shifts_applied: Vec::new(),
                    perturbations,
                    final_polynomial: Some(poly),
                };
                return Ok((value, trace));
            }
            Err(zeros) => {
                // The divisor at (p, q) of stage k is the connected minor of
                // order k+1 with top-left corner (p, q).
                let size = zeros.stage + 1;
                let mut cells = Vec::new();
                for p in &zeros.positions {
                    for di in 0..size {
                        for dj in 0..size {
                            cells.push(Pos::new(p.row + di, p.col + dj));
                        }
                    }
                }
                cells.sort();
                cells.dedup();
                let fresh: Vec<Pos> = cells.iter().copied().filter(|c| !coefficients.contains_key(c)).collect();
                if fresh.is_empty() {
                    redraws += 1;
                    if redraws > MAX_REDRAWS {
                        return Err(Error::SymbolicZeroDivisor {
                            divisor_order: a.order() - zeros.stage,
                            position: zeros.positions[0],
                        });
                    }
                    for c in cells {
                        coefficients.insert(c, draw_coefficient(&mut rng));
                    }
                } else {
                    for c in fresh {
                        coefficients.insert(c, draw_coefficient(&mut rng));
                    }
                }
            }
        }
    }
}

/// Replaces the entry at `position` by `e` and condenses over Q(e).
///
/// Returns the determinant as an affine polynomial in `e`; evaluating it at
/// the original entry restores the determinant of `a`.
pub fn condense_with_symbolic_entry(a: &SquareMatrix<BigRational>, position: Pos) -> Result<(EpsRational, CondensationTrace)> {
    condense_with_symbolic_entry_counted(a, position, &OpCounter::new())
}

pub fn condense_with_symbolic_entry_counted(
    a: &SquareMatrix<BigRational>,
    position: Pos,
    ops: &OpCounter,
) -> Result<(EpsRational, CondensationTrace)> {
    if a.order() < 3 {
        return Err(Error::TooSmall(a.order(), 3));
    }
    let original = a.get(position)?.clone();
    let lifted = a.map(EpsRational::from_rational).with_entry(position, EpsRational::epsilon())?;
    let stages = condense_chain(&lifted, ops).map_err(|zeros| Error::SymbolicZeroDivisor {
        divisor_order: a.order() - zeros.stage,
        position: zeros.positions[0],
    })?;
    let poly = stages.last().expect("nonempty").at(0, 0).clone();
    match poly.as_polynomial().and_then(|p| p.degree()) {
        Some(d) if d > 1 => return Err(Error::NotAffine(poly.to_string())),
        None if !poly.is_zero() => return Err(Error::NotAffine(poly.to_string())),
        _ => {}
    }
    let trace = CondensationTrace {
        stages: Stages::Symbolic(number(stages)),
        permutation_sign: Sign::Plus,
        shifts_applied: Vec::new(),
        perturbations: vec![Perturbation {
            position,
            original,
            mode: PerturbationMode::Replace,
        }],
        final_polynomial: Some(poly.clone()),
    };
    Ok((poly, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::EpsPolynomial;
    use crate::oracle::det_laplace;
    use crate::samples::{condensable_5x5, singular_interior_5x5};

    fn m(rows: &[&[i64]]) -> SquareMatrix<BigRational> {
        SquareMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| rational_from_i64(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn q(v: i64) -> BigRational {
        rational_from_i64(v)
    }

    #[test]
    fn first_step_has_no_division() {
        let b = condense_once(&condensable_5x5(), None).unwrap();
        assert_eq!(b, m(&[&[-3, -6, -2, 4], &[-7, -2, 2, -2], &[-13, -4, 3, -2], &[6, 0, -1, -6]]));
    }

    #[test]
    fn second_step_divides_by_interior() {
        let a = condensable_5x5();
        let b = condense_once(&a, None).unwrap();
        let c = condense_once(&b, Some(&a)).unwrap();
        assert_eq!(c, m(&[&[12, -8, 2], &[-1, 1, -2], &[8, -4, -10]]));
    }

    #[test]
    fn rank_one_condenses_to_zero() {
        let ones = SquareMatrix::from_fn(3, |_, _| q(1));
        assert_eq!(condense_once(&ones, None).unwrap(), SquareMatrix::zeros(2));
    }

    #[test]
    fn zero_divisor_is_located() {
        let a = m(&[&[1, 2, 3], &[4, 0, 6], &[7, 8, 9]]);
        let b = condense_once(&a, None).unwrap();
        assert_eq!(
            condense_once(&b, Some(&a)),
            Err(Error::ZeroDivisor {
                divisor_order: 3,
                position: Pos::new(2, 2)
            })
        );
        assert!(matches!(condense_once(&b, Some(&b)), Err(Error::WrongOrder { .. })));
    }

    #[test]
    fn small_orders_are_direct() {
        let (v, t) = dodgson_det(&m(&[&[7]]), &DodgsonOptions::default()).unwrap();
        assert_eq!(v, q(7));
        assert_eq!(t.stages.len(), 1);
        let (v, t) = dodgson_det(&m(&[&[1, 2], &[3, 4]]), &DodgsonOptions::default()).unwrap();
        assert_eq!(v, q(-2));
        assert_eq!(t.stages.len(), 2);
    }

    #[test]
    fn condensable_example_needs_no_repair() {
        let (v, t) = dodgson_det(&condensable_5x5(), &DodgsonOptions::default()).unwrap();
        assert_eq!(v, q(5));
        assert!(!t.repaired());
        let Stages::Exact(stages) = &t.stages else { panic!("exact run expected") };
        assert_eq!(stages[3].matrix, m(&[&[-2, 7], &[1, -6]]));
        assert_eq!(stages[4].matrix, m(&[&[5]]));
    }

    #[test]
    fn singular_interior_is_repaired() {
        let (v, t) = dodgson_det(&singular_interior_5x5(), &DodgsonOptions::default()).unwrap();
        assert_eq!(v, q(15));
        assert!(t.repaired());
    }

    #[test]
    fn identity_four_needs_perturbation() {
        let (v, t) = dodgson_det(&SquareMatrix::identity(4), &DodgsonOptions::default()).unwrap();
        assert_eq!(v, q(1));
        assert!(t.shifts_applied.is_empty());
        assert!(!t.perturbations.is_empty());
        assert!(t.final_polynomial.is_some());
    }

    #[test]
    fn odd_rotation_sign_is_applied() {
        // The zero at (2,2) blocks the plain run; one column rotation of an
        // order-4 matrix fixes it and flips the sign.
        let a = m(&[&[1, 2, 0, 1], &[3, 0, 1, 2], &[2, 1, 3, 1], &[1, 3, 2, 4]]);
        let (v, t) = dodgson_det(&a, &DodgsonOptions::default()).unwrap();
        assert_eq!(v, det_laplace(&a));
        assert_eq!(v, q(-49));
        assert_eq!(t.shifts_applied, vec![(Axis::Columns, 1)]);
        assert_eq!(t.permutation_sign, Sign::Minus);
    }

    #[test]
    fn zero_matrix_is_zero() {
        for n in 1..=5 {
            let (v, _) = dodgson_det(&SquareMatrix::zeros(n), &DodgsonOptions::default()).unwrap();
            assert_eq!(v, q(0), "order {n}");
        }
    }

    #[test]
    fn symbolic_entry_reproduces_affine_polynomial() {
        let (poly, t) = condense_with_symbolic_entry(&singular_interior_5x5(), Pos::new(3, 3)).unwrap();
        assert_eq!(poly, EpsRational::from_poly(EpsPolynomial::from_i64s(&[30, -15])));
        assert_eq!(eval_at(&poly, &q(1)).unwrap(), q(15));
        assert_eq!(t.stages.len(), 5);
    }

    #[test]
    fn symbolic_centre_of_identity() {
        let (poly, _) = condense_with_symbolic_entry(&SquareMatrix::identity(3), Pos::new(2, 2)).unwrap();
        assert_eq!(poly, EpsRational::epsilon());
    }

    #[test]
    fn symbolic_entry_errors() {
        assert_eq!(
            condense_with_symbolic_entry(&SquareMatrix::identity(2), Pos::new(1, 1)).map(|r| r.0),
            Err(Error::TooSmall(2, 3))
        );
        assert!(matches!(
            condense_with_symbolic_entry(&SquareMatrix::identity(3), Pos::new(4, 1)),
            Err(Error::IndexOutOfRange { .. })
        ));
        // Identity 4x4 with e at (1,1): the interior still holds structural zeros.
        assert!(matches!(
            condense_with_symbolic_entry(&SquareMatrix::identity(4), Pos::new(1, 1)),
            Err(Error::SymbolicZeroDivisor { .. })
        ));
    }

    #[test]
    fn rotation_candidates_cover_all_pairs() {
        let order = rotation_order(3);
        assert_eq!(order.len(), 8);
        assert_eq!(order[0], (0, 1));
        assert_eq!(order[1], (1, 0));
        assert_eq!(*order.last().unwrap(), (2, 2));
    }
}
