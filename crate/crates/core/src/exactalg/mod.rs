//! Exact integer linear algebra: Smith normal form, saturated integer
//! kernels, cokernels as finitely generated abelian groups, and the
//! dualisation of a ray map into its transpose and quotient projection.

mod group;
mod matrix;
mod snf;

use alloc::vec::Vec;
use core::fmt;

use num_traits::{Signed, Zero};

use crate::Int;

pub use group::{CokernelPresentation, FinAbGroup};
pub use matrix::IntMatrix;
pub use snf::{smith_normal_form, SmithDecomposition};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExactAlgError {
    /// The map has infinite cokernel (its rank is below the target rank); a
    /// fan built from it would have torus factors.
    NonFiniteCokernel { rank: usize, target_rank: usize },
}

impl fmt::Display for ExactAlgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NonFiniteCokernel { rank, target_rank } => write!(
                f,
                "cokernel is not finite: rank {rank} < target rank {target_rank}"
            ),
        }
    }
}

impl core::error::Error for ExactAlgError {}

/// Flips the sign of every free row whose first nonzero entry is negative.
/// This composes the presentation with an automorphism of the free part, so
/// the presented group is unchanged.
fn normalize_free_row(row: &mut [Int]) {
    if let Some(first) = row.iter().find(|v| !v.is_zero()) {
        if first.is_negative() {
            for v in row.iter_mut() {
                *v = -core::mem::take(v);
            }
        }
    }
}

/// Cokernel of `a` viewed as a map `Z^cols -> Z^rows`, presented in the
/// canonical Smith basis (torsion coordinates first, then free ones).
pub fn cokernel(a: &IntMatrix) -> CokernelPresentation {
    let decomposition = smith_normal_form(a);
    let target_rank = a.rows();
    let rank = decomposition.rank();
    let group = FinAbGroup::from_invariant_factors(&decomposition.invariant_factors, target_rank);

    // coker(a) = Z^rows / im(a); in the basis given by the rows of U the
    // image becomes diagonal, so the quotient map reads off rows of U:
    // rows with invariant factor 1 vanish, rows with factor d >= 2 are read
    // mod d, rows beyond the rank are free.
    let mut rows: Vec<Vec<Int>> = Vec::new();
    for (i, d) in decomposition.invariant_factors.iter().enumerate() {
        if d.abs() >= Int::from(2) {
            let row: Vec<Int> = decomposition
                .u
                .row(i)
                .iter()
                .map(|v| num_integer::Integer::mod_floor(v, d))
                .collect();
            rows.push(row);
        }
    }
    for i in rank..target_rank {
        let mut row = decomposition.u.row(i).to_vec();
        normalize_free_row(&mut row);
        rows.push(row);
    }

    let generators = rows.len();
    let mut projection = IntMatrix::zero(generators, target_rank);
    for (i, row) in rows.into_iter().enumerate() {
        for (j, v) in row.into_iter().enumerate() {
            projection[(i, j)] = v;
        }
    }
    debug_assert_eq!(generators, group.torsion().len() + group.free_rank());
    CokernelPresentation { group, projection }
}

/// A saturated basis of `ker(a)` intersected with the integer lattice; the
/// columns of the result span the rational kernel and generate a direct
/// summand of `Z^cols`.
pub fn integer_kernel(a: &IntMatrix) -> IntMatrix {
    let decomposition = smith_normal_form(a);
    let rank = decomposition.rank();
    let n = a.cols();
    // ker(S) is spanned by the last n - rank coordinates, so ker(A) is
    // spanned by the corresponding columns of V.
    let mut basis = decomposition.v.select_cols(&(rank..n).collect::<Vec<_>>());
    for j in 0..basis.cols() {
        if let Some(i) = (0..basis.rows()).find(|&i| !basis[(i, j)].is_zero()) {
            if basis[(i, j)].is_negative() {
                basis.negate_col(j);
            }
        }
    }
    basis
}

/// Dualises a ray map `beta: Z^m -> Z^d` with finite cokernel into its
/// transpose `beta^*` and the quotient projection `beta^v` onto
/// `coker(beta^*)`.
pub fn dualize(beta: &IntMatrix) -> Result<(IntMatrix, CokernelPresentation), ExactAlgError> {
    let rank = beta.rank();
    if rank < beta.rows() {
        return Err(ExactAlgError::NonFiniteCokernel {
            rank,
            target_rank: beta.rows(),
        });
    }
    let beta_star = beta.transpose();
    let beta_vee = cokernel(&beta_star);
    Ok((beta_star, beta_vee))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::int;

    #[test]
    fn cokernel_of_p2_beta_one_star() {
        // beta_1^* is the transpose of [[1,0,-2],[0,1,-2]]
        let a = IntMatrix::from_rows(&[&[1, 0], &[0, 1], &[-2, -2]]);
        let p = cokernel(&a);
        assert_eq!(p.group, FinAbGroup::free(1));
        assert_eq!(p.projection, IntMatrix::from_rows(&[&[2, 2, 1]]));
    }

    #[test]
    fn cokernel_of_p2_beta_two_star() {
        let a = IntMatrix::from_rows(&[&[2, 0], &[0, 2], &[-2, -2]]);
        let p = cokernel(&a);
        assert_eq!(p.group, FinAbGroup::new(1, alloc::vec![int(2), int(2)]));
        // the presentation is only canonical up to automorphism, so check
        // the structural facts rather than raw entries
        assert_eq!(p.projection.rows(), 3);
        for col in 0..2 {
            let image = p.apply(&a.col_vec(col));
            assert!(
                image.iter().all(|v| v.is_zero()),
                "projection must kill im(beta^*)"
            );
        }
    }

    #[test]
    fn cokernel_of_wp112_star() {
        let a = IntMatrix::from_rows(&[&[1, 0], &[0, 1], &[-1, -2]]);
        let p = cokernel(&a);
        assert_eq!(p.group, FinAbGroup::free(1));
        assert_eq!(p.projection, IntMatrix::from_rows(&[&[1, 2, 1]]));
    }

    #[test]
    fn kernel_of_p2_beta_one() {
        let a = IntMatrix::from_rows(&[&[1, 0, -2], &[0, 1, -2]]);
        assert_eq!(
            integer_kernel(&a),
            IntMatrix::from_rows(&[&[2], &[2], &[1]])
        );
    }

    #[test]
    fn kernel_of_wp112_beta() {
        let a = IntMatrix::from_rows(&[&[1, 0, -1], &[0, 1, -2]]);
        assert_eq!(
            integer_kernel(&a),
            IntMatrix::from_rows(&[&[1], &[2], &[1]])
        );
    }

    #[test]
    fn kernel_of_injective_map_is_empty() {
        let a = IntMatrix::from_rows(&[&[1], &[0]]);
        let k = integer_kernel(&a);
        assert_eq!((k.rows(), k.cols()), (1, 0));
    }

    #[test]
    fn dualize_conehead() {
        let beta = IntMatrix::from_rows(&[&[3, -1]]);
        let (beta_star, beta_vee) = dualize(&beta).unwrap();
        assert_eq!(beta_star, IntMatrix::from_rows(&[&[3], &[-1]]));
        assert_eq!(beta_vee.group, FinAbGroup::free(1));
        // projection (a, b) -> a + 3b: kills the column (3, -1), surjective
        assert_eq!(beta_vee.projection, IntMatrix::from_rows(&[&[1, 3]]));
    }

    #[test]
    fn dualize_identity_is_trivial() {
        let beta = IntMatrix::identity(2);
        let (_, beta_vee) = dualize(&beta).unwrap();
        assert!(beta_vee.group.is_trivial());
    }

    #[test]
    fn dualize_rejects_rank_deficient_maps() {
        let beta = IntMatrix::from_rows(&[&[1, 1], &[1, 1]]);
        assert_eq!(
            dualize(&beta),
            Err(ExactAlgError::NonFiniteCokernel {
                rank: 1,
                target_rank: 2
            })
        );
    }
}
