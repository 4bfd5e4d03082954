//! Dense exact linear algebra over the rationals.
//!
//! Pivoting always takes the first row (in current order) with a nonzero
//! entry in the pivot column, so results are deterministic.

use crate::arith::{PolyQ, Rational};
use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Panics if the rows have different lengths.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged matrix rows");
        let n = rows.len();
        Matrix {
            rows: n,
            cols,
            data: rows.into_iter().flatten().collect(),
        }
    }

    /// Builds the matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[Vec<Rational>]) -> Self {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        let mut m = Matrix::zeros(rows, cols);
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "ragged matrix columns");
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
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

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn select_rows(&self, indices: &[usize]) -> Matrix {
        Matrix::from_rows(indices.iter().map(|&i| self.row(i).to_vec()).collect())
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Applies the matrix to a vector of polynomials.
    pub fn mul_poly_vec(&self, v: &[PolyQ]) -> Vec<PolyQ> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, _)| !a.is_zero())
                    .map(|(a, p)| p.scale(a))
                    .sum()
            })
            .collect()
    }

    /// First position `(i, j)` with `i < j` where the matrix differs from its
    /// transpose.
    pub fn first_asymmetry(&self) -> Option<(usize, usize)> {
        if self.rows != self.cols {
            return Some((0, 0));
        }
        for i in 0..self.rows {
            for j in i + 1..self.cols {
                if self.get(i, j) != self.get(j, i) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// `u^T · self · v`.
    pub fn bilinear(&self, u: &[Rational], v: &[Rational]) -> Rational {
        let mv = self.mul_vec(v);
        u.iter().zip(&mv).map(|(a, b)| a * b).sum()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.cols {
            self.data.swap(a * self.cols + k, b * self.cols + k);
        }
    }
}

/// Reduced row-echelon form together with the bookkeeping needed to map
/// rows back to the input.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub reduced: Matrix,
    /// Pivot column of each of the first `rank` rows.
    pub pivots: Vec<usize>,
    /// Input row index now sitting at each position.
    pub row_origin: Vec<usize>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

/// Row-reduces `m`, restricting pivot search to the first `pivot_cols` columns
/// (the remaining columns ride along, e.g. an augmented right-hand side).
pub fn rref_partial(m: &Matrix, pivot_cols: usize) -> Echelon {
    let mut a = m.clone();
    let mut row_origin: Vec<usize> = (0..a.rows).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..pivot_cols.min(a.cols) {
        if r == a.rows {
            break;
        }
        let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
            continue;
        };
        a.swap_rows(r, p);
        row_origin.swap(r, p);
        let inv = a.get(r, c).recip().expect("pivot is nonzero");
        for k in 0..a.cols {
            let v = a.get(r, k) * &inv;
            a.set(r, k, v);
        }
        for i in 0..a.rows {
            if i == r || a.get(i, c).is_zero() {
                continue;
            }
            let factor = a.get(i, c).clone();
            for k in 0..a.cols {
                let v = a.get(i, k) - &(&factor * a.get(r, k));
                a.set(i, k, v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    Echelon {
        reduced: a,
        pivots,
        row_origin,
    }
}

pub fn rref(m: &Matrix) -> Echelon {
    rref_partial(m, m.cols)
}

pub fn rank(m: &Matrix) -> usize {
    rref(m).rank()
}

/// Why a square-or-tall system has no unique solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveFailure {
    UnderDetermined {
        rank: usize,
    },
    /// Input row index whose equation reduces to `0 = c`, `c ≠ 0`.
    Inconsistent {
        row: usize,
    },
}

/// Solves `a x = b` exactly, requiring full column rank and consistency.
pub fn solve_unique(a: &Matrix, b: &[Rational]) -> Result<Vec<Rational>, SolveFailure> {
    let aug = augment(a, b);
    let ech = rref_partial(&aug, a.cols);
    let rank = ech.rank();
    if rank < a.cols {
        return Err(SolveFailure::UnderDetermined { rank });
    }
    check_consistent(&ech, a.cols)?;
    Ok((0..a.cols)
        .map(|i| ech.reduced.get(i, a.cols).clone())
        .collect())
}

/// A particular solution of `a x = b` with free variables set to zero, or
/// `None` when the system is inconsistent.
pub fn solve_particular(a: &Matrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let aug = augment(a, b);
    let ech = rref_partial(&aug, a.cols);
    check_consistent(&ech, a.cols).ok()?;
    let mut x = vec![Rational::zero(); a.cols];
    for (r, &c) in ech.pivots.iter().enumerate() {
        x[c] = ech.reduced.get(r, a.cols).clone();
    }
    Some(x)
}

fn augment(a: &Matrix, b: &[Rational]) -> Matrix {
    assert_eq!(a.rows, b.len(), "right-hand side length");
    let mut aug = Matrix::zeros(a.rows, a.cols + 1);
    for (i, bi) in b.iter().enumerate() {
        for j in 0..a.cols {
            aug.set(i, j, a.get(i, j).clone());
        }
        aug.set(i, a.cols, bi.clone());
    }
    aug
}

fn check_consistent(ech: &Echelon, cols: usize) -> Result<(), SolveFailure> {
    for r in ech.rank()..ech.reduced.rows {
        if !ech.reduced.get(r, cols).is_zero() {
            return Err(SolveFailure::Inconsistent {
                row: ech.row_origin[r],
            });
        }
    }
    Ok(())
}

pub fn inverse(m: &Matrix) -> Option<Matrix> {
    if m.rows != m.cols {
        return None;
    }
    let n = m.rows;
    let mut aug = Matrix::zeros(n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, m.get(i, j).clone());
        }
        aug.set(i, n + i, Rational::one());
    }
    let ech = rref_partial(&aug, n);
    if ech.rank() < n {
        return None;
    }
    let mut inv = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            inv.set(i, j, ech.reduced.get(i, n + j).clone());
        }
    }
    Some(inv)
}

/// A row that lies in the span of earlier independent rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RowDependency {
    pub row: usize,
    /// `(independent row index, coefficient)` pairs with nonzero coefficients.
    pub combination: Vec<(usize, Rational)>,
}

/// Greedy scan in row order: a row joins the independent set unless it is a
/// combination of rows already selected.
pub fn row_dependencies(m: &Matrix) -> (Vec<usize>, Vec<RowDependency>) {
    let mut independent: Vec<usize> = Vec::new();
    let mut dependent = Vec::new();
    for i in 0..m.rows {
        let target = m.row(i).to_vec();
        let combination = if independent.is_empty() {
            target.iter().all(Rational::is_zero).then(Vec::new)
        } else {
            let span = m.select_rows(&independent).transpose();
            solve_particular(&span, &target).map(|coeffs| {
                independent
                    .iter()
                    .copied()
                    .zip(coeffs)
                    .filter(|(_, c)| !c.is_zero())
                    .collect()
            })
        };
        match combination {
            Some(combination) => dependent.push(RowDependency {
                row: i,
                combination,
            }),
            None => independent.push(i),
        }
    }
    (independent, dependent)
}

/// The linear projection `Q^n → Q^k` whose kernel is the span of a set of
/// relations and which sends each chosen basis vector to a coordinate vector.
#[derive(Clone, Debug)]
pub struct QuotientMap {
    projection: Matrix,
    relation_rank: usize,
}

impl QuotientMap {
    /// Fails unless the basis vectors and the relation span together form a
    /// direct-sum decomposition of the ambient space.
    pub fn new(basis: &[Vec<Rational>], relations: &[Vec<Rational>]) -> Result<Self, Error> {
        let n = basis.first().or(relations.first()).map_or(0, Vec::len);
        let k = basis.len();
        let independent: Vec<Vec<Rational>> = if relations.is_empty() {
            Vec::new()
        } else {
            let ech = rref(&Matrix::from_rows(relations.to_vec()));
            (0..ech.rank())
                .map(|r| ech.reduced.row(r).to_vec())
                .collect()
        };
        let relation_rank = independent.len();
        if k + relation_rank != n {
            return Err(Error::Quotient(format!(
                "{k} basis vectors + relation rank {relation_rank} != ambient dimension {n}"
            )));
        }
        let mut columns = basis.to_vec();
        columns.extend(independent);
        let inv = inverse(&Matrix::from_columns(&columns)).ok_or_else(|| {
            Error::Quotient("basis vectors are not independent modulo the relations".into())
        })?;
        let projection = inv.select_rows(&(0..k).collect::<Vec<_>>());
        Ok(QuotientMap {
            projection,
            relation_rank,
        })
    }

    pub fn relation_rank(&self) -> usize {
        self.relation_rank
    }

    pub fn dimension(&self) -> usize {
        self.projection.rows
    }

    pub fn projection(&self) -> &Matrix {
        &self.projection
    }

    pub fn apply(&self, v: &[Rational]) -> Vec<Rational> {
        self.projection.mul_vec(v)
    }

    pub fn apply_poly(&self, v: &[PolyQ]) -> Vec<PolyQ> {
        self.projection.mul_poly_vec(v)
    }
}
