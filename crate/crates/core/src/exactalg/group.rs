//! Finitely generated abelian groups in canonical form.

use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use crate::Int;

/// A finitely generated abelian group `Z^free_rank + Z/t_1 + ... + Z/t_k`
/// with every `t_i >= 2` and `t_i | t_{i+1}`.
///
/// The representation is canonical, so group isomorphism is literal equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FinAbGroup {
    free_rank: usize,
    torsion: Vec<Int>,
}

impl FinAbGroup {
    pub fn trivial() -> Self {
        Self {
            free_rank: 0,
            torsion: Vec::new(),
        }
    }

    pub fn free(rank: usize) -> Self {
        Self {
            free_rank: rank,
            torsion: Vec::new(),
        }
    }

    /// Single cyclic group `Z/n` (`n >= 2`).
    pub fn cyclic(n: u64) -> Self {
        assert!(n >= 2);
        Self {
            free_rank: 0,
            torsion: alloc::vec![Int::from(n)],
        }
    }

    pub fn new(free_rank: usize, torsion: Vec<Int>) -> Self {
        for w in torsion.windows(2) {
            assert!(
                w[1].is_multiple_of(&w[0]),
                "torsion must form a divisibility chain"
            );
        }
        assert!(
            torsion.iter().all(|t| *t >= Int::from(2)),
            "torsion entries must be >= 2"
        );
        Self { free_rank, torsion }
    }

    /// Group presented as the cokernel of a map into `Z^target_rank` whose
    /// Smith invariant factors are `diag`.
    pub fn from_invariant_factors(diag: &[Int], target_rank: usize) -> Self {
        let rank = diag.iter().filter(|d| !d.is_zero()).count();
        assert!(rank <= target_rank);
        let torsion = diag
            .iter()
            .filter(|d| d.abs() >= Int::from(2))
            .map(|d| d.abs())
            .collect();
        Self {
            free_rank: target_rank - rank,
            torsion,
        }
    }

    /// Canonical form of a direct sum of cyclic groups `Z/n_1 + ... + Z/n_k`
    /// (entries `n_i >= 1`; factors of order one vanish).
    pub fn from_cyclic_orders(orders: &[Int]) -> Self {
        let n = orders.len();
        let mut diag = IntMatrix::zero(n, n);
        for (i, o) in orders.iter().enumerate() {
            assert!(o.is_positive(), "cyclic orders must be positive");
            diag[(i, i)] = o.clone();
        }
        let snf = super::snf::smith_normal_form(&diag);
        Self::from_invariant_factors(&snf.invariant_factors, n)
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[Int] {
        &self.torsion
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    /// Order of the group; `None` when infinite.
    pub fn order(&self) -> Option<Int> {
        if self.free_rank > 0 {
            return None;
        }
        Some(self.torsion.iter().fold(Int::one(), |acc, t| acc * t))
    }
}

impl fmt::Display for FinAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut first = true;
        for t in &self.torsion {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "Z/{t}")?;
            first = false;
        }
        if self.free_rank > 0 {
            if !first {
                write!(f, " + ")?;
            }
            if self.free_rank == 1 {
                write!(f, "Z")?;
            } else {
                write!(f, "Z^{}", self.free_rank)?;
            }
        }
        Ok(())
    }
}

/// A cokernel `Z^t -> coker(A)` presented in the canonical Smith basis:
/// torsion coordinates first (in invariant-factor order), then free ones.
///
/// `projection` has one row per generator of the quotient and `t` columns;
/// torsion rows are reduced modulo their order, free rows have their first
/// nonzero entry positive. The presentation is canonical only up to an
/// automorphism of the group, so callers compare groups and derived data
/// (stabilisers, orders), never raw projection entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CokernelPresentation {
    pub group: FinAbGroup,
    pub projection: IntMatrix,
}

impl CokernelPresentation {
    /// Image of an ambient vector: torsion classes (reduced mod the orders)
    /// followed by the free coordinates.
    pub fn apply(&self, x: &[Int]) -> Vec<Int> {
        let mut image = self.projection.mul_vec(x);
        for (i, t) in self.group.torsion().iter().enumerate() {
            image[i] = image[i].mod_floor(t);
        }
        image
    }

    /// Ambient rank of the presented quotient's source.
    pub fn ambient_rank(&self) -> usize {
        self.projection.cols()
    }
}
