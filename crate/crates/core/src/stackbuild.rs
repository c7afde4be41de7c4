//! From a stacky fan to its quotient data: the diagonal group presentations
//! on the algebraic and compact side, isotropy groups of zero-patterns,
//! local charts at maximal cones, and the finite extension relating the
//! labelled and unlabelled compact groups.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use num_traits::Signed;

use crate::exactalg::{
    cokernel, dualize, integer_kernel, CokernelPresentation, FinAbGroup, IntMatrix,
};
use crate::fan::{Fan, ZeroPattern};
use crate::linalg::{solve, RatMatrix};
use crate::{Int, Rat};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StackError {
    /// The ray map has rank below the ambient dimension, so its cokernel is
    /// infinite (the fan would have torus factors).
    NonFiniteCokernel { rank: usize, dim: usize },
    /// The requested cone is not a maximal cone of the fan.
    NotMaximalCone { cone: BTreeSet<usize> },
}

impl fmt::Display for StackError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::NonFiniteCokernel { rank, dim } => {
                write!(f, "ray map has rank {rank} < {dim}; cokernel is not finite")
            }
            Self::NotMaximalCone { cone } => {
                write!(f, "not a maximal cone: {{")?;
                for (i, r) in cone.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", r + 1)?;
                }
                write!(f, "}}")
            }
        }
    }
}

impl core::error::Error for StackError {}

/// A fan with a positive label on each ray and the associated ray map
/// `beta` whose `j`-th column is `label_j * ray_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StackyFan {
    fan: Fan,
    labels: Vec<u32>,
    beta: IntMatrix,
}

impl StackyFan {
    /// Builds `beta` from the rays and labels and checks that its cokernel
    /// is finite (guaranteed when the fan is complete).
    pub fn new(fan: Fan, labels: Vec<u32>) -> Result<Self, StackError> {
        assert_eq!(labels.len(), fan.num_rays(), "one label per ray");
        assert!(labels.iter().all(|&n| n >= 1), "labels must be positive");
        let beta = ray_map(&fan, &labels);
        let rank = beta.rank();
        if rank < fan.dim() {
            return Err(StackError::NonFiniteCokernel {
                rank,
                dim: fan.dim(),
            });
        }
        Ok(Self { fan, labels, beta })
    }

    pub fn fan(&self) -> &Fan {
        &self.fan
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn beta(&self) -> &IntMatrix {
        &self.beta
    }

    pub fn dim(&self) -> usize {
        self.fan.dim()
    }

    pub fn num_rays(&self) -> usize {
        self.fan.num_rays()
    }

    /// The same fan with every label set to one.
    pub fn with_trivial_labels(&self) -> Self {
        Self::new(self.fan.clone(), alloc::vec![1; self.labels.len()])
            .expect("rank is label independent")
    }
}

fn ray_map(fan: &Fan, labels: &[u32]) -> IntMatrix {
    IntMatrix::from_fn(fan.dim(), fan.num_rays(), |i, j| {
        Int::from(labels[j]) * &fan.rays()[j][i]
    })
}

/// Which incarnation of a diagonal group a presentation describes: the
/// algebraic one inside `(C*)^m` or the compact one inside `(R/Z)^m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    Algebraic,
    Compact,
}

/// A group `(free part)^l x Z/t_1 x ... x Z/t_k` embedded in the rank-`m`
/// diagonal group, free part `(C*)^l` or `(R/Z)^l` depending on the flavor.
///
/// `exponents` has one row per ambient coordinate and one column per
/// generator, free generators first, then torsion generators; torsion
/// columns are read modulo their order. The generator basis is canonical
/// only up to an automorphism of the group, so presentations are compared
/// through canonical data (ranks, torsion, stabilisers), never entrywise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagGroupPresentation {
    pub flavor: Flavor,
    pub ambient_rank: usize,
    pub free_rank: usize,
    pub torsion: Vec<Int>,
    pub exponents: IntMatrix,
}

impl DiagGroupPresentation {
    fn from_cokernel(presentation: &CokernelPresentation, flavor: Flavor) -> Self {
        let group = &presentation.group;
        let (l, k) = (group.free_rank(), group.torsion().len());
        let m = presentation.ambient_rank();
        // projection rows are torsion-first; exponent columns go free-first
        let exponents = IntMatrix::from_fn(m, l + k, |j, col| {
            if col < l {
                presentation.projection[(k + col, j)].clone()
            } else {
                presentation.projection[(col - l, j)].clone()
            }
        });
        Self {
            flavor,
            ambient_rank: m,
            free_rank: l,
            torsion: group.torsion().to_vec(),
            exponents,
        }
    }

    /// The abstract group being embedded, in canonical form.
    pub fn group(&self) -> FinAbGroup {
        FinAbGroup::new(self.free_rank, self.torsion.clone())
    }

    /// Exponent row of one ambient coordinate, free entries first.
    pub fn exponent_row(&self, coordinate: usize) -> &[Int] {
        self.exponents.row(coordinate)
    }

    /// Columns of the free generators (the scaling directions).
    pub fn free_columns(&self) -> IntMatrix {
        self.exponents
            .select_cols(&(0..self.free_rank).collect::<Vec<_>>())
    }

    /// Checks that the embedding into the diagonal group is injective, via
    /// the Smith normal form of the exponent/relation matrix: the dual
    /// projection must be surjective, i.e. the columns of the exponent rows
    /// together with the torsion relations must span the generator lattice.
    pub fn embedding_is_injective(&self) -> bool {
        let gens = self.free_rank + self.torsion.len();
        let m = self.ambient_rank;
        let mut b = IntMatrix::zero(gens, m + self.torsion.len());
        for j in 0..m {
            for g in 0..gens {
                b[(g, j)] = self.exponents[(j, g)].clone();
            }
        }
        for (i, t) in self.torsion.iter().enumerate() {
            b[(self.free_rank + i, m + i)] = t.clone();
        }
        cokernel(&b).group.is_trivial()
    }

    /// The subgroup acting trivially on every coordinate outside `pattern`,
    /// i.e. the isotropy group of a point vanishing exactly there. Computed
    /// as the dual of the quotient of the generator group by the off-pattern
    /// exponent rows, reduced to canonical form.
    pub fn stabilizer(&self, pattern: &ZeroPattern) -> FinAbGroup {
        let gens = self.free_rank + self.torsion.len();
        let off_pattern: Vec<usize> = (0..self.ambient_rank)
            .filter(|j| !pattern.contains(*j))
            .collect();
        let mut b = IntMatrix::zero(gens, off_pattern.len() + self.torsion.len());
        for (col, &j) in off_pattern.iter().enumerate() {
            for g in 0..gens {
                b[(g, col)] = self.exponents[(j, g)].clone();
            }
        }
        for (i, t) in self.torsion.iter().enumerate() {
            b[(self.free_rank + i, off_pattern.len() + i)] = t.clone();
        }
        cokernel(&b).group
    }
}

/// Isotropy group of a zero-pattern under a diagonal group presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropyReport {
    pub pattern: ZeroPattern,
    pub group: FinAbGroup,
}

/// Local chart data of a maximal cone: the restricted ray map, its finite
/// cokernel and the chart order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalChart {
    pub cone: BTreeSet<usize>,
    pub beta_sigma: IntMatrix,
    pub chart_group: FinAbGroup,
    pub order: Int,
}

/// The algebraic quotient group `H(beta) = Hom(coker(beta^*), C^*)` with its
/// embedding exponents in the canonical Smith basis of the cokernel.
pub fn build_h(sf: &StackyFan) -> DiagGroupPresentation {
    let (_, beta_vee) = dualize(sf.beta()).expect("stacky fan has finite cokernel");
    DiagGroupPresentation::from_cokernel(&beta_vee, Flavor::Algebraic)
}

/// The compact quotient group `ker(beta-bar) = Hom(coker(beta^*), R/Z)`.
///
/// It carries exactly the same rank, torsion and exponent data as
/// [`build_h`]; that identity of data is the computational content of the
/// natural isomorphism between the two descriptions. The exponent columns
/// genuinely live in the kernel of `beta` (free columns) respectively in
/// the kernel modulo the torsion order (torsion columns), which tests check
/// against an independent route through the Smith form of `beta` itself.
pub fn build_kerbar(sf: &StackyFan) -> DiagGroupPresentation {
    let mut presentation = build_h(sf);
    presentation.flavor = Flavor::Compact;
    presentation
}

/// Kernel of the label-collapsing covering from the compact group of the
/// labelled fan onto the compact group of the trivially labelled fan,
/// restricted to the identity components. Computed as the lattice quotient
/// `D^{-1} K_0 / K` where `K`, `K_0` are the saturated integer kernels of
/// `beta` and `beta_0` and `D` is the label matrix.
pub fn finite_extension(sf: &StackyFan) -> FinAbGroup {
    let kernel = integer_kernel(sf.beta());
    let trivial = sf.with_trivial_labels();
    let kernel0 = integer_kernel(trivial.beta());
    let l = kernel.cols();
    debug_assert_eq!(l, kernel0.cols());
    if l == 0 {
        return FinAbGroup::trivial();
    }

    // scaled = D * K, column by column in the basis K_0
    let scaled = IntMatrix::from_fn(kernel.rows(), l, |i, j| {
        Int::from(sf.labels()[i]) * &kernel[(i, j)]
    });
    let k0_rat = RatMatrix::from_int_matrix(&kernel0);
    let mut change = IntMatrix::zero(l, l);
    for j in 0..l {
        let rhs: Vec<Rat> = (0..kernel.rows())
            .map(|i| Rat::from_integer(scaled[(i, j)].clone()))
            .collect();
        let coeffs = solve(&k0_rat, &rhs).expect("D * ker(beta) lies in the span of ker(beta_0)");
        for (i, c) in coeffs.into_iter().enumerate() {
            assert!(c.is_integer(), "saturation guarantees integral coordinates");
            change[(i, j)] = c.to_integer();
        }
    }
    cokernel(&change).group
}

/// Stabiliser of a zero-pattern; well-defined group theory for any pattern,
/// admissible or not (inadmissible points are excluded from the quotient
/// space itself, which callers flag separately).
pub fn isotropy(group: &DiagGroupPresentation, pattern: &ZeroPattern) -> IsotropyReport {
    IsotropyReport {
        pattern: pattern.clone(),
        group: group.stabilizer(pattern),
    }
}

/// Restriction of the ray map to a maximal cone: a finite quotient group
/// whose order is the absolute determinant of the chosen columns.
pub fn local_chart(sf: &StackyFan, cone: &BTreeSet<usize>) -> Result<LocalChart, StackError> {
    if !sf.fan().max_cones().contains(cone) {
        return Err(StackError::NotMaximalCone { cone: cone.clone() });
    }
    let columns: Vec<usize> = cone.iter().copied().collect();
    let beta_sigma = sf.beta().select_cols(&columns);
    let chart_group = cokernel(&beta_sigma).group;
    let order = beta_sigma.det().abs();
    debug_assert_eq!(chart_group.order(), Some(order.clone()));
    Ok(LocalChart {
        cone: cone.clone(),
        beta_sigma,
        chart_group,
        order,
    })
}

/// The chart-level extension data `(sum of Z/n_j, H(beta_sigma),
/// H(beta_sigma,0))`; orders multiply: `|H(beta_sigma)| = prod n_j *
/// |H(beta_sigma,0)|`.
pub fn chart_extension(
    sf: &StackyFan,
    cone: &BTreeSet<usize>,
) -> Result<(FinAbGroup, FinAbGroup, FinAbGroup), StackError> {
    let chart = local_chart(sf, cone)?;
    let label_orders: Vec<Int> = cone.iter().map(|&j| Int::from(sf.labels()[j])).collect();
    let label_sum = FinAbGroup::from_cyclic_orders(&label_orders);
    let trivial = sf.with_trivial_labels();
    let chart0 = local_chart(&trivial, cone)?;
    Ok((label_sum, chart.chart_group, chart0.chart_group))
}
