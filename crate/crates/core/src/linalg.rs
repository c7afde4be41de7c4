//! Exact linear algebra over the rationals: reduced row echelon form,
//! linear solves and row-space comparisons. Plumbing shared by the polytope,
//! fan and moment-level modules.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut};

use num_traits::{One, Zero};

use crate::exactalg::IntMatrix;
use crate::{Int, Rat};

/// Dense matrix over the rationals, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rat>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![Rat::zero(); rows * cols])
    }

    pub fn from_int_matrix(m: &IntMatrix) -> Self {
        Self::new(
            m.rows(),
            m.cols(),
            (0..m.rows())
                .flat_map(|i| m.row(i).iter().map(|v| Rat::from_integer(v.clone())))
                .collect(),
        )
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row);
        }
        Self::new(r, c, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> impl Iterator<Item = &[Rat]> {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].clone();
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|k| &self[(i, k)] * &v[k])
                    .fold(Rat::zero(), |a, b| a + b)
            })
            .collect()
    }

    pub fn select_cols(&self, cols: &[usize]) -> Self {
        let mut out = Self::zero(self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out[(i, jj)] = self[(i, j)].clone();
            }
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// In-place reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            if row == self.rows {
                break;
            }
            let Some(p) = (row..self.rows).find(|&i| !self[(i, col)].is_zero()) else {
                continue;
            };
            self.swap_rows(row, p);
            let inv = self[(row, col)].clone();
            for j in col..self.cols {
                let v = &self[(row, j)] / &inv;
                self[(row, j)] = v;
            }
            for i in 0..self.rows {
                if i == row || self[(i, col)].is_zero() {
                    continue;
                }
                let factor = self[(i, col)].clone();
                for j in col..self.cols {
                    let v = &self[(i, j)] - &factor * &self[(row, j)];
                    self[(i, j)] = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Solves `a * x = b` exactly. Returns `None` when inconsistent; free
/// variables (if any) are set to zero.
pub fn solve(a: &RatMatrix, b: &[Rat]) -> Option<Vec<Rat>> {
    assert_eq!(a.rows(), b.len());
    let mut aug = RatMatrix::zero(a.rows(), a.cols() + 1);
    for i in 0..a.rows() {
        for j in 0..a.cols() {
            aug[(i, j)] = a[(i, j)].clone();
        }
        aug[(i, a.cols())] = b[i].clone();
    }
    let pivots = aug.rref();
    if pivots.last() == Some(&a.cols()) {
        return None; // a row reads 0 = 1
    }
    let mut x = vec![Rat::zero(); a.cols()];
    for (row, &col) in pivots.iter().enumerate() {
        x[col] = aug[(row, a.cols())].clone();
    }
    Some(x)
}

/// Solves a square system with a unique solution; `None` when singular.
pub fn solve_unique(a: &RatMatrix, b: &[Rat]) -> Option<Vec<Rat>> {
    assert!(a.rows() == a.cols());
    if a.rank() < a.cols() {
        return None;
    }
    solve(a, b)
}

/// Whether `v` lies in the row space of `a` (over the rationals).
pub fn row_space_contains(a: &RatMatrix, v: &[Rat]) -> bool {
    solve(&a.transpose(), v).is_some()
}

/// Mutual containment of the row spaces of `a` and `b`.
pub fn same_row_space(a: &RatMatrix, b: &RatMatrix) -> bool {
    b.row_vecs().all(|r| row_space_contains(a, r)) && a.row_vecs().all(|r| row_space_contains(b, r))
}

/// Inner product of two rational vectors.
pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| x * y)
        .fold(Rat::zero(), |acc, v| acc + v)
}

/// Inner product of an integer and a rational vector.
pub fn dot_int(a: &[Int], b: &[Rat]) -> Rat {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| Rat::from_integer(x.clone()) * y)
        .fold(Rat::zero(), |acc, v| acc + v)
}

/// Exact determinant of a square rational matrix.
pub fn det(a: &RatMatrix) -> Rat {
    assert!(a.rows() == a.cols());
    let n = a.rows();
    let mut m = a.clone();
    let mut result = Rat::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !m[(i, k)].is_zero()) else {
            return Rat::zero();
        };
        if p != k {
            m.swap_rows(k, p);
            result = -result;
        }
        let pivot = m[(k, k)].clone();
        result *= pivot.clone();
        for i in k + 1..n {
            if m[(i, k)].is_zero() {
                continue;
            }
            let factor = &m[(i, k)] / &pivot;
            for j in k..n {
                let v = &m[(i, j)] - &factor * &m[(k, j)];
                m[(i, j)] = v;
            }
        }
    }
    result
}
