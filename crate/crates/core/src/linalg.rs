//! Exact linear algebra over the rationals by fraction-free elimination.
//!
//! Rows are cleared of denominators and kept as primitive integer vectors;
//! elimination steps are integer cross-multiplications followed by division by
//! the row content, so no fractions appear until solutions are read off.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::poly::Rational;

type IntRow = Vec<(usize, BigInt)>;

fn to_int_row(row: &[(usize, Rational)]) -> IntRow {
    let mut lcm = BigInt::one();
    for (_, v) in row {
        lcm = lcm.lcm(v.denom());
    }
    let mut out: IntRow = row
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(c, v)| (*c, v.numer() * (&lcm / v.denom())))
        .collect();
    out.sort_by_key(|(c, _)| *c);
    make_primitive(&mut out);
    out
}

fn make_primitive(row: &mut IntRow) {
    let mut g = BigInt::zero();
    for (_, v) in row.iter() {
        g = g.gcd(v);
        if g.is_one() {
            return;
        }
    }
    if g.is_zero() || g.is_one() {
        return;
    }
    for (_, v) in row.iter_mut() {
        *v /= &g;
    }
}

fn entry(row: &IntRow, col: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&col, |(c, _)| *c)
        .ok()
        .map(|i| &row[i].1)
}

/// `a * x - b * y` for sparse integer rows.
fn lincomb(a: &BigInt, x: &IntRow, b: &BigInt, y: &IntRow) -> IntRow {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push((x[i].0, a * &x[i].1));
            i += 1;
        } else if take_y {
            out.push((y[j].0, -(b * &y[j].1)));
            j += 1;
        } else {
            let v = a * &x[i].1 - b * &y[j].1;
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incremental reduced row echelon form. Only columns below `limit` may hold
/// pivots; later columns are carried along (right-hand sides, row tracking).
#[derive(Debug, Clone)]
pub struct Echelon {
    limit: usize,
    pivots: Vec<(usize, IntRow)>,
    pivot_of: HashMap<usize, usize>,
}

impl Echelon {
    pub fn new(limit: usize) -> Self {
        Echelon {
            limit,
            pivots: Vec::new(),
            pivot_of: HashMap::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    fn reduce(&self, mut row: IntRow) -> IntRow {
        let hits: Vec<usize> = row
            .iter()
            .filter(|(c, _)| *c < self.limit)
            .filter_map(|(c, _)| self.pivot_of.get(c).copied())
            .collect();
        for k in hits {
            let (pc, prow) = &self.pivots[k];
            let Some(v) = entry(&row, *pc).cloned() else {
                continue;
            };
            let p = entry(prow, *pc).unwrap();
            let g = p.gcd(&v);
            row = lincomb(&(p / &g), &row, &(&v / &g), prow);
            make_primitive(&mut row);
        }
        row
    }

    /// Adds a row; returns the reduced row when it has no pivot (its entries
    /// below `limit` vanish), or `None` when it became a new pivot.
    fn insert_int(&mut self, row: IntRow) -> Option<IntRow> {
        let row = self.reduce(row);
        let Some(&(col, _)) = row.iter().find(|(c, _)| *c < self.limit) else {
            return Some(row);
        };
        let mut row = row;
        if entry(&row, col).unwrap().is_negative() {
            for (_, v) in row.iter_mut() {
                *v = -&*v;
            }
        }
        let p = entry(&row, col).unwrap().clone();
        for (_, other) in self.pivots.iter_mut() {
            if let Some(v) = entry(other, col).cloned() {
                let g = p.gcd(&v);
                let mut next = lincomb(&(&p / &g), other, &(&v / &g), &row);
                make_primitive(&mut next);
                *other = next;
            }
        }
        self.pivot_of.insert(col, self.pivots.len());
        self.pivots.push((col, row));
        None
    }

    /// Inserts a rational vector; true if it was independent of the rows so far.
    pub fn insert(&mut self, row: &[(usize, Rational)]) -> bool {
        self.insert_int(to_int_row(row)).is_none()
    }

    pub fn insert_dense(&mut self, row: &[Rational]) -> bool {
        self.insert(&dense_to_sparse(row))
    }

    /// Whether the vector lies in the span of the inserted rows.
    pub fn contains_dense(&self, row: &[Rational]) -> bool {
        let r = self.reduce(to_int_row(&dense_to_sparse(row)));
        !r.iter().any(|(c, _)| *c < self.limit)
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        let mut cols: Vec<usize> = self.pivots.iter().map(|(c, _)| *c).collect();
        cols.sort_unstable();
        cols
    }
}

fn dense_to_sparse(row: &[Rational]) -> Vec<(usize, Rational)> {
    row.iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| (i, v.clone()))
        .collect()
}

/// Dense rational matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        QMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + a * b;
                        out.set(i, j, v);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .map(|(a, b)| a * b)
                    .fold(Rational::zero(), |acc, x| acc + x)
            })
            .collect()
    }

    pub fn to_sparse(&self) -> SparseMatrix {
        SparseMatrix {
            cols: self.cols,
            rows: (0..self.rows).map(|i| dense_to_sparse(self.row(i))).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.to_sparse().rank()
    }

    /// Basis of the right kernel `{v : A v = 0}`.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        self.to_sparse().nullspace()
    }

    pub fn solve(&self, b: &[Rational]) -> LinearSolution {
        self.to_sparse().solve(b)
    }
}

/// Row-sparse rational matrix; the natural shape for assembled systems.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    pub cols: usize,
    pub rows: Vec<Vec<(usize, Rational)>>,
}

/// Outcome of `A x = b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LinearSolution {
    Solution(Vec<Rational>),
    /// `y` with `y A = 0` and `y b != 0`.
    Infeasible(Vec<Rational>),
}

impl SparseMatrix {
    pub fn new(cols: usize) -> Self {
        SparseMatrix {
            cols,
            rows: Vec::new(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn to_dense(&self) -> QMatrix {
        let mut m = QMatrix::zeros(self.rows.len(), self.cols);
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row {
                m.set(i, *j, v.clone());
            }
        }
        m
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Vec<Rational> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .fold(Rational::zero(), |acc, (j, v)| acc + v * &x[*j])
            })
            .collect()
    }

    /// `y A` for a row vector `y`.
    pub fn left_mul(&self, y: &[Rational]) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.cols];
        for (row, yi) in self.rows.iter().zip(y) {
            if yi.is_zero() {
                continue;
            }
            for (j, v) in row {
                out[*j] += v * yi;
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.cols);
        for row in &self.rows {
            e.insert(row);
        }
        e.rank()
    }

    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let mut e = Echelon::new(self.cols);
        for row in &self.rows {
            e.insert(row);
        }
        let pivots: HashMap<usize, &IntRow> = e.pivots.iter().map(|(c, r)| (*c, r)).collect();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains_key(c)) {
            let mut v = vec![Rational::zero(); self.cols];
            v[free] = Rational::one();
            for (pc, prow) in &e.pivots {
                if let Some(val) = entry(prow, free) {
                    let p = entry(prow, *pc).unwrap();
                    v[*pc] = -Rational::new(val.clone(), p.clone());
                }
            }
            basis.push(v);
        }
        basis
    }

    /// Solves `A x = b` exactly, or returns a left-kernel witness.
    pub fn solve(&self, b: &[Rational]) -> LinearSolution {
        assert_eq!(b.len(), self.rows.len(), "right-hand side length");
        let n = self.cols;
        let mut e = Echelon::new(n);
        let mut witness_row = None;
        for (i, row) in self.rows.iter().enumerate() {
            let mut aug: Vec<(usize, Rational)> = row.clone();
            if !b[i].is_zero() {
                aug.push((n, b[i].clone()));
            }
            aug.push((n + 1 + i, Rational::one()));
            if let Some(rest) = e.insert_int(to_int_row(&aug)) {
                if entry(&rest, n).is_some() && witness_row.is_none() {
                    witness_row = Some(rest);
                }
            }
        }
        if let Some(rest) = witness_row {
            let mut y = vec![Rational::zero(); self.rows.len()];
            for (c, v) in rest {
                if c > n {
                    y[c - n - 1] = Rational::from_integer(v);
                }
            }
            return LinearSolution::Infeasible(y);
        }
        let mut x = vec![Rational::zero(); n];
        for (pc, prow) in &e.pivots {
            if let Some(v) = entry(prow, n) {
                x[*pc] = Rational::new(v.clone(), entry(prow, *pc).unwrap().clone());
            }
        }
        LinearSolution::Solution(x)
    }
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::poly::int;

    fn q(rows: &[&[i64]]) -> QMatrix {
        QMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
    }

    #[test]
    fn rank_and_nullspace() {
        let m = q(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        assert!(m.mul_vec(&ns[0]).iter().all(|v| v.is_zero()));
        assert_eq!(QMatrix::zeros(3, 4).nullspace().len(), 4);
        assert_eq!(QMatrix::identity(3).rank(), 3);
    }

    #[test]
    fn solve_or_witness() {
        let m = q(&[&[1, 1], &[1, -1], &[2, 0]]);
        match m.solve(&[int(3), int(1), int(4)]) {
            LinearSolution::Solution(x) => assert_eq!(x, vec![int(2), int(1)]),
            other => panic!("{other:?}"),
        }
        let b = [int(3), int(1), int(5)];
        match m.solve(&b) {
            LinearSolution::Infeasible(y) => {
                let s = m.to_sparse();
                assert!(s.left_mul(&y).iter().all(|v| v.is_zero()));
                let pairing: Rational = y.iter().zip(&b).map(|(a, c)| a * c).sum();
                assert!(!pairing.is_zero());
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn span_membership() {
        let mut e = Echelon::new(3);
        assert!(e.insert_dense(&[int(1), int(2), int(0)]));
        assert!(!e.insert_dense(&[int(-2), int(-4), int(0)]));
        assert!(e.contains_dense(&[int(3), int(6), int(0)]));
        assert!(!e.contains_dense(&[int(0), int(0), int(1)]));
        assert!(!e.insert_dense(&[int(0), int(0), int(0)]));
    }

    fn arb_matrix() -> impl Strategy<Value = QMatrix> {
        (1usize..6, 1usize..6).prop_flat_map(|(r, c)| {
            prop::collection::vec(prop::collection::vec(-3i64..4, c), r).prop_map(|rows| {
                QMatrix::from_rows(
                    rows.into_iter()
                        .map(|row| row.into_iter().map(int).collect())
                        .collect(),
                )
            })
        })
    }

    proptest! {
        #[test]
        fn rank_nullity(m in arb_matrix()) {
            let ns = m.nullspace();
            prop_assert_eq!(m.rank() + ns.len(), m.ncols());
            for v in &ns {
                prop_assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
            }
        }

        #[test]
        fn solutions_and_witnesses_check(m in arb_matrix(), seed in prop::collection::vec(-3i64..4, 6)) {
            let b: Vec<Rational> = (0..m.nrows()).map(|i| int(seed[i])).collect();
            match m.solve(&b) {
                LinearSolution::Solution(x) => prop_assert_eq!(m.mul_vec(&x), b),
                LinearSolution::Infeasible(y) => {
                    prop_assert!(m.to_sparse().left_mul(&y).iter().all(|v| v.is_zero()));
                    let pairing: Rational = y.iter().zip(&b).map(|(a, c)| a * c).sum();
                    prop_assert!(!pairing.is_zero());
                }
            }
        }
    }
}
