//! Dense square matrices over an exact field.
//!
//! Storage is row-major and zero-based ([`SquareMatrix::at`]). Positions
//! passed to the determinant operations use 1-based [`Pos`], which is also
//! how traces print them.

use std::fmt;
use std::ops::Mul;

use crate::error::{Error, Result};
use crate::field::{parse_rational, BigRational, Field, OpCounter};

/// A 1-based (row, column) position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Pos {
    pub row: usize,
    pub col: usize,
}

impl Pos {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }

    fn in_range(&self, order: usize) -> bool {
        (1..=order).contains(&self.row) && (1..=order).contains(&self.col)
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.row, self.col)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(odd: bool) -> Self {
        if odd {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn as_i32(self) -> i32 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn apply<F: Field>(self, x: &F) -> F {
        match self {
            Sign::Plus => x.clone(),
            Sign::Minus => x.negate(),
        }
    }
}

impl Mul for Sign {
    type Output = Sign;

    fn mul(self, rhs: Sign) -> Sign {
        Sign::from_parity(self != rhs)
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    Rows,
    Columns,
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axis::Rows => "rows",
            Axis::Columns => "columns",
        })
    }
}

/// An n x n grid, n >= 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SquareMatrix<F> {
    order: usize,
    entries: Vec<F>,
}

impl<F: Field> SquareMatrix<F> {
    pub fn from_rows(rows: Vec<Vec<F>>) -> Result<Self> {
        let order = rows.len();
        if order == 0 {
            return Err(Error::EmptyMatrix);
        }
        let width = rows[0].len();
        if let Some((line, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != width) {
            return Err(Error::RaggedRows {
                line: line + 1,
                expected: width,
                found: row.len(),
            });
        }
        if width != order {
            return Err(Error::NotSquare {
                rows: order,
                cols: width,
            });
        }
        Ok(Self {
            order,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    /// Builds from a zero-based generator. Panics if `order == 0`.
    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> F) -> Self {
        assert!(order >= 1, "matrix order must be at least 1");
        let mut entries = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                entries.push(f(i, j));
            }
        }
        Self { order, entries }
    }

    pub fn identity(order: usize) -> Self {
        Self::from_fn(order, |i, j| if i == j { F::one() } else { F::zero() })
    }

    pub fn zeros(order: usize) -> Self {
        Self::from_fn(order, |_, _| F::zero())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Zero-based access.
    pub fn at(&self, i: usize, j: usize) -> &F {
        &self.entries[i * self.order + j]
    }

    /// 1-based access.
    pub fn get(&self, pos: Pos) -> Result<&F> {
        self.check(pos)?;
        Ok(self.at(pos.row - 1, pos.col - 1))
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.entries[i * self.order..(i + 1) * self.order]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[F]> {
        self.entries.chunks(self.order)
    }

    pub fn entries(&self) -> &[F] {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        self.rows().map(<[F]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(F::is_zero)
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> SquareMatrix<G> {
        SquareMatrix {
            order: self.order,
            entries: self.entries.iter().map(f).collect(),
        }
    }

    /// Returns a copy with one entry replaced.
    pub fn with_entry(&self, pos: Pos, value: F) -> Result<Self> {
        self.check(pos)?;
        let mut out = self.clone();
        out.entries[(pos.row - 1) * self.order + pos.col - 1] = value;
        Ok(out)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.order, |i, j| self.at(j, i).clone())
    }

    /// The contiguous `size` x `size` block whose top-left corner is `corner`.
    pub fn block(&self, corner: Pos, size: usize) -> Result<Self> {
        let last = Pos::new(corner.row + size - 1, corner.col + size - 1);
        self.check(corner)?;
        self.check(last)?;
        Ok(Self::from_fn(size, |i, j| {
            self.at(corner.row - 1 + i, corner.col - 1 + j).clone()
        }))
    }

    /// Swaps two zero-based rows.
    pub fn swap_rows(&self, a: usize, b: usize) -> Self {
        Self::from_fn(self.order, |i, j| {
            let src = if i == a {
                b
            } else if i == b {
                a
            } else {
                i
            };
            self.at(src, j).clone()
        })
    }

    fn check(&self, pos: Pos) -> Result<()> {
        if pos.in_range(self.order) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                pos,
                order: self.order,
            })
        }
    }

    /// One row per line, entries separated by single spaces.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(Field::to_token).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }
}

impl<F: Field> fmt::Display for SquareMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.to_text().trim_end())
    }
}

/// Parses the whitespace-separated matrix text format. Blank lines are
/// skipped and `#` starts a comment.
pub fn parse_matrix(text: &str) -> Result<SquareMatrix<BigRational>> {
    let mut rows = Vec::new();
    let mut width = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let row = content
            .split_whitespace()
            .map(|tok| parse_rational(tok, line))
            .collect::<Result<Vec<_>>>()?;
        if row.is_empty() {
            continue;
        }
        let expected = *width.get_or_insert(row.len());
        if row.len() != expected {
            return Err(Error::RaggedRows {
                line,
                expected,
                found: row.len(),
            });
        }
        rows.push(row);
    }
    SquareMatrix::from_rows(rows)
}

pub fn det2<F: Field>(m: &SquareMatrix<F>) -> Result<F> {
    det2_counted(m, &OpCounter::new())
}

/// `m11*m22 - m12*m21`.
pub fn det2_counted<F: Field>(m: &SquareMatrix<F>, ops: &OpCounter) -> Result<F> {
    if m.order() != 2 {
        return Err(Error::WrongOrder {
            expected: 2,
            found: m.order(),
        });
    }
    Ok(ops.det2(m.at(0, 0), m.at(0, 1), m.at(1, 0), m.at(1, 1)))
}

/// Deletes one row and one column, keeping the relative order of the rest.
pub fn submatrix<F: Field>(a: &SquareMatrix<F>, drop: Pos) -> Result<SquareMatrix<F>> {
    a.check(drop)?;
    if a.order() < 2 {
        return Err(Error::TooSmall(a.order(), 2));
    }
    let (dr, dc) = (drop.row - 1, drop.col - 1);
    Ok(SquareMatrix::from_fn(a.order() - 1, |i, j| {
        let si = if i >= dr { i + 1 } else { i };
        let sj = if j >= dc { j + 1 } else { j };
        a.at(si, sj).clone()
    }))
}

/// Rotates rows (or columns) so that line `i` of the result is line
/// `i + k (mod n)` of `a`. The sign is the determinant factor of the
/// rotation, `(-1)^((n-1) k)`.
pub fn cyclic_shift<F: Field>(a: &SquareMatrix<F>, axis: Axis, k: i64) -> (SquareMatrix<F>, Sign) {
    let n = a.order();
    let shift = k.rem_euclid(n as i64) as usize;
    let sign = Sign::from_parity((n - 1) % 2 == 1 && k.rem_euclid(2) == 1);
    let shifted = SquareMatrix::from_fn(n, |i, j| match axis {
        Axis::Rows => a.at((i + shift) % n, j).clone(),
        Axis::Columns => a.at(i, (j + shift) % n).clone(),
    });
    (shifted, sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::rational_from_i64;

    fn m(rows: &[&[i64]]) -> SquareMatrix<BigRational> {
        SquareMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| rational_from_i64(v)).collect())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn parses_five_by_five() {
        let a = parse_matrix(crate::samples::CONDENSABLE_5X5).unwrap();
        assert_eq!(
            a,
            m(&[
                &[1, 0, -2, 3, 2],
                &[-1, -3, 2, -2, 0],
                &[-3, -2, 2, -1, 1],
                &[-2, 3, -1, 2, 0],
                &[0, -3, 1, -1, -3]
            ])
        );
        assert_eq!(a.to_text(), crate::samples::CONDENSABLE_5X5);
    }

    #[test]
    fn parse_single_fraction() {
        let a = parse_matrix("1/2").unwrap();
        assert_eq!(a.order(), 1);
        assert_eq!(a.at(0, 0), &BigRational::new(1.into(), 2.into()));
        assert_eq!(a.to_text(), "1/2\n");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(parse_matrix("1 2\n3"), Err(Error::RaggedRows { line: 2, .. })));
        assert!(matches!(parse_matrix("1 2\n3 4\n5 6"), Err(Error::NotSquare { rows: 3, cols: 2 })));
        assert!(matches!(parse_matrix("1 x\n3 4"), Err(Error::BadToken { line: 1, .. })));
        assert!(matches!(parse_matrix("1 2\n3 4/0"), Err(Error::ZeroDenominator { line: 2, .. })));
        assert_eq!(parse_matrix("  # nothing\n\n"), Err(Error::EmptyMatrix));
    }

    #[test]
    fn parse_comments_and_blank_lines() {
        let a = parse_matrix("# header\n1 2 # first\n\n  3   4\n").unwrap();
        assert_eq!(a, m(&[&[1, 2], &[3, 4]]));
    }

    #[test]
    fn det2_examples() {
        assert_eq!(det2(&m(&[&[-2, 7], &[1, -6]])).unwrap(), rational_from_i64(5));
        assert_eq!(det2(&SquareMatrix::<BigRational>::identity(2)).unwrap(), rational_from_i64(1));
        assert_eq!(det2(&m(&[&[3, -4], &[3, -4]])).unwrap(), rational_from_i64(0));
        assert!(matches!(det2(&m(&[&[1]])), Err(Error::WrongOrder { expected: 2, found: 1 })));
    }

    #[test]
    fn det2_costs_two_products_and_a_subtraction() {
        let ops = OpCounter::new();
        det2_counted(&m(&[&[1, 2], &[3, 4]]), &ops).unwrap();
        let c = ops.counts();
        assert_eq!((c.adds, c.subs, c.muls, c.divs), (0, 1, 2, 0));
    }

    #[test]
    fn submatrix_examples() {
        let a = m(&[&[1, 2], &[3, 4]]);
        assert_eq!(submatrix(&a, Pos::new(1, 1)).unwrap(), m(&[&[4]]));
        let id: SquareMatrix<BigRational> = SquareMatrix::identity(3);
        assert_eq!(submatrix(&id, Pos::new(2, 2)).unwrap(), SquareMatrix::identity(2));
        assert!(matches!(submatrix(&a, Pos::new(3, 1)), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(submatrix(&a, Pos::new(0, 1)), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn shift_signs() {
        let a3 = m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        let (s, sign) = cyclic_shift(&a3, Axis::Rows, 1);
        assert_eq!(sign, Sign::Plus);
        assert_eq!(s, m(&[&[4, 5, 6], &[7, 8, 9], &[1, 2, 3]]));
        let (s, _) = cyclic_shift(&a3, Axis::Columns, -1);
        assert_eq!(s, m(&[&[3, 1, 2], &[6, 4, 5], &[9, 7, 8]]));

        let a4: SquareMatrix<BigRational> = SquareMatrix::identity(4);
        assert_eq!(cyclic_shift(&a4, Axis::Rows, 1).1, Sign::Minus);
        assert_eq!(cyclic_shift(&a4, Axis::Columns, 2).1, Sign::Plus);
        assert_eq!(cyclic_shift(&a4, Axis::Columns, -3).1, Sign::Minus);
        assert_eq!(cyclic_shift(&a4, Axis::Rows, 0), (a4.clone(), Sign::Plus));
    }

    #[test]
    fn block_extraction() {
        let a = m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        assert_eq!(a.block(Pos::new(2, 2), 2).unwrap(), m(&[&[5, 6], &[8, 9]]));
        assert!(a.block(Pos::new(2, 3), 2).is_err());
    }
}
