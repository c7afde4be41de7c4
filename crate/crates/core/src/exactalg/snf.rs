//! Smith normal form over the integers.
//!
//! The decomposition `U * A * V = S` diagonalises an integer matrix by
//! unimodular factors. The diagonal of `S` is nonnegative and forms a
//! divisibility chain; it is canonical, while `U` and `V` are not.
//!
//! Pivoting always picks the entry of smallest nonzero absolute value in the
//! remaining submatrix, which keeps intermediate coefficient growth in check.
//! Entries are arbitrary-precision regardless.

use alloc::vec::Vec;

use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;
use crate::Int;

/// Result of [`smith_normal_form`]: `u * a * v = s` with `u`, `v` unimodular
/// and `s` diagonal with the invariant-factor divisibility chain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub s: IntMatrix,
    pub v: IntMatrix,
    /// Diagonal of `s`, including trailing zeros.
    pub invariant_factors: Vec<Int>,
}

impl SmithDecomposition {
    /// Number of nonzero invariant factors.
    pub fn rank(&self) -> usize {
        self.invariant_factors
            .iter()
            .filter(|d| !d.is_zero())
            .count()
    }

    /// Checks the full contract against the source matrix: recomposition,
    /// unimodularity, diagonal shape and the divisibility chain.
    pub fn verify(&self, a: &IntMatrix) -> bool {
        if self.u.rows() != a.rows()
            || self.v.rows() != a.cols()
            || self.s.rows() != a.rows()
            || self.s.cols() != a.cols()
        {
            return false;
        }
        if self.u.mul(a).mul(&self.v) != self.s {
            return false;
        }
        if !self.u.is_unimodular() || !self.v.is_unimodular() {
            return false;
        }
        if !self.s.is_diagonal() {
            return false;
        }
        let diag = self.s.diagonal();
        if diag != self.invariant_factors {
            return false;
        }
        for w in diag.windows(2) {
            if w[0].is_negative() || w[1].is_negative() {
                return false;
            }
            if !w[1].is_zero() && (w[0].is_zero() || !w[1].is_multiple_of(&w[0])) {
                return false;
            }
        }
        true
    }
}

/// Position of the entry with smallest nonzero absolute value in the
/// submatrix starting at `(k, k)`, if any.
fn smallest_pivot(s: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in k..s.rows() {
        for j in k..s.cols() {
            if s[(i, j)].is_zero() {
                continue;
            }
            match best {
                Some(b) if s[(b.0, b.1)].abs() <= s[(i, j)].abs() => {}
                _ => best = Some((i, j)),
            }
        }
    }
    best
}

/// Computes the Smith normal form of `a`. Total on all matrices, including
/// empty ones.
pub fn smith_normal_form(a: &IntMatrix) -> SmithDecomposition {
    let (rows, cols) = (a.rows(), a.cols());
    let mut s = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);

    for k in 0..rows.min(cols) {
        // not a while-let: the divisibility sweep re-enters via `continue`
        #[allow(clippy::while_let_loop)]
        'pivot: loop {
            let Some((pi, pj)) = smallest_pivot(&s, k) else {
                break;
            };
            s.swap_rows(k, pi);
            u.swap_rows(k, pi);
            s.swap_cols(k, pj);
            v.swap_cols(k, pj);
            if s[(k, k)].is_negative() {
                s.negate_row(k);
                u.negate_row(k);
            }

            // Clear column k below the pivot. Any nonzero remainder is
            // strictly smaller than the pivot and becomes the next pivot.
            let mut clean = true;
            for i in k + 1..rows {
                if s[(i, k)].is_zero() {
                    continue;
                }
                let q = s[(i, k)].div_floor(&s[(k, k)]);
                if !q.is_zero() {
                    let neg_q = -q;
                    s.add_row_multiple(i, k, &neg_q);
                    u.add_row_multiple(i, k, &neg_q);
                }
                if !s[(i, k)].is_zero() {
                    clean = false;
                }
            }
            for j in k + 1..cols {
                if s[(k, j)].is_zero() {
                    continue;
                }
                let q = s[(k, j)].div_floor(&s[(k, k)]);
                if !q.is_zero() {
                    let neg_q = -q;
                    s.add_col_multiple(j, k, &neg_q);
                    v.add_col_multiple(j, k, &neg_q);
                }
                if !s[(k, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }

            // Enforce the divisibility chain: pull a non-multiple into row k
            // and keep reducing.
            for i in k + 1..rows {
                for j in k + 1..cols {
                    if !s[(i, j)].is_multiple_of(&s[(k, k)]) {
                        let one = Int::from(1);
                        s.add_row_multiple(k, i, &one);
                        u.add_row_multiple(k, i, &one);
                        continue 'pivot;
                    }
                }
            }
            break;
        }
    }

    let invariant_factors = s.diagonal();
    SmithDecomposition {
        u,
        s,
        v,
        invariant_factors,
    }
}
