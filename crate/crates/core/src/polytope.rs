//! Labelled rational polytopes in H-representation: validation, exact vertex
//! enumeration, the Delzant smoothness test and normal-fan extraction.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::diagnostics::ValidationReport;
use crate::exactalg::IntMatrix;
use crate::fan::Fan;
use crate::feasibility::{LinearSystem, Rel};
use crate::linalg::{dot_int, solve_unique, RatMatrix};
use crate::stackbuild::{StackError, StackyFan};
use crate::{Int, Rat};

/// Affine half-space `{ a : <a, u> >= -eta }` with integer inward normal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HalfSpace {
    pub normal: Vec<Int>,
    pub eta: Rat,
}

impl HalfSpace {
    pub fn new(normal: Vec<Int>, eta: Rat) -> Self {
        Self { normal, eta }
    }

    pub fn is_primitive(&self) -> bool {
        let gcd = self.normal.iter().fold(Int::zero(), |acc, v| acc.gcd(v));
        gcd == Int::from(1)
    }
}

/// A facet of a labelled polytope: a half-space plus its positive integer
/// label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub halfspace: HalfSpace,
    pub label: u32,
}

/// A rational polytope given by half-spaces, each facet carrying an orbifold
/// label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelledPolytope {
    dim: usize,
    facets: Vec<Facet>,
}

/// An exact vertex together with the indices of the facets active there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vertex {
    pub point: Vec<Rat>,
    pub active: BTreeSet<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolytopeError {
    /// The half-space intersection is not full-dimensional.
    Degenerate,
    /// A vertex lies on more than `dim` facets, so the normal fan would not
    /// be simplicial.
    NonSimpleVertex {
        point: Vec<Rat>,
    },
    Stack(StackError),
}

impl fmt::Display for PolytopeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Degenerate => write!(f, "polytope is not full-dimensional"),
            Self::NonSimpleVertex { point } => {
                write!(f, "non-simple vertex at (")?;
                for (i, c) in point.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
            Self::Stack(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for PolytopeError {}

impl From<StackError> for PolytopeError {
    fn from(e: StackError) -> Self {
        Self::Stack(e)
    }
}

impl LabelledPolytope {
    /// Structural construction: dimensions must agree and labels must be
    /// positive. Geometric requirements are checked by [`Self::validate`].
    pub fn new(dim: usize, facets: Vec<Facet>) -> Self {
        assert!(dim >= 1, "dimension must be positive");
        for facet in &facets {
            assert_eq!(
                facet.halfspace.normal.len(),
                dim,
                "normal has wrong dimension"
            );
            assert!(facet.label >= 1, "labels must be positive");
        }
        Self { dim, facets }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn num_facets(&self) -> usize {
        self.facets.len()
    }

    pub fn labels(&self) -> Vec<u32> {
        self.facets.iter().map(|f| f.label).collect()
    }

    pub fn etas(&self) -> Vec<Rat> {
        self.facets
            .iter()
            .map(|f| f.halfspace.eta.clone())
            .collect()
    }

    /// Facet normals as the rows of an `m x d` matrix.
    fn normal_matrix(&self) -> IntMatrix {
        IntMatrix::from_fn(self.facets.len(), self.dim, |i, j| {
            self.facets[i].halfspace.normal[j].clone()
        })
    }

    /// Checks primitivity, boundedness, full-dimensionality and irredundancy,
    /// each decided exactly. Every check is reported; nothing throws.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::new();

        for (i, facet) in self.facets.iter().enumerate() {
            let hs = &facet.halfspace;
            if hs.normal.iter().all(Zero::is_zero) {
                report.record(
                    "primitive-normal",
                    false,
                    format!("facet {} has zero normal", i + 1),
                );
            } else if !hs.is_primitive() {
                report.record(
                    "primitive-normal",
                    false,
                    format!("facet {} normal is not primitive", i + 1),
                );
            } else {
                report.record("primitive-normal", true, format!("facet {}", i + 1));
            }
        }

        let bounded = self.is_bounded();
        report.record(
            "bounded",
            bounded,
            if bounded {
                format!("normals positively span Q^{}", self.dim)
            } else {
                "recession cone is nontrivial".to_string()
            },
        );

        let full_dim = self.is_full_dimensional();
        report.record(
            "full-dimensional",
            full_dim,
            if full_dim {
                "interior point exists".to_string()
            } else {
                "no interior point".to_string()
            },
        );

        if full_dim {
            let reference = points_of(&self.vertices_unchecked());
            for j in 0..self.facets.len() {
                let mut reduced = self.clone();
                reduced.facets.remove(j);
                let without = points_of(&reduced.vertices_unchecked());
                if reference == without {
                    report.record(
                        "irredundant",
                        false,
                        format!(
                            "facet {} is redundant (removal keeps the vertex set)",
                            j + 1
                        ),
                    );
                } else {
                    report.record("irredundant", true, format!("facet {}", j + 1));
                }
            }
        }

        report
    }

    /// Boundedness, decided exactly: the normals must positively span.
    fn is_bounded(&self) -> bool {
        let normals = self.normal_matrix();
        if normals.rank() < self.dim {
            return false;
        }
        // unbounded iff some direction satisfies <u_j, a> >= 0 for all j
        // with at least one product positive (scaled to sum >= 1)
        let mut sys = LinearSystem::new(self.dim);
        let mut total = vec![Rat::zero(); self.dim];
        for facet in &self.facets {
            let coeffs: Vec<Rat> = facet
                .halfspace
                .normal
                .iter()
                .map(|v| Rat::from_integer(v.clone()))
                .collect();
            for (t, c) in total.iter_mut().zip(&coeffs) {
                *t += c;
            }
            sys.push(coeffs, Rel::Ge, Rat::zero());
        }
        sys.push(total, Rel::Ge, Rat::from_integer(1.into()));
        !sys.solve().is_feasible()
    }

    fn is_full_dimensional(&self) -> bool {
        let mut sys = LinearSystem::new(self.dim);
        for facet in &self.facets {
            let coeffs: Vec<Rat> = facet
                .halfspace
                .normal
                .iter()
                .map(|v| Rat::from_integer(v.clone()))
                .collect();
            sys.push(coeffs, Rel::Gt, -facet.halfspace.eta.clone());
        }
        sys.solve().is_feasible()
    }

    /// Exhaustive exact vertex enumeration over all `dim`-subsets of facets.
    /// Inputs are desk-scale, so `C(m, d)` solves are acceptable.
    fn vertices_unchecked(&self) -> Vec<Vertex> {
        let m = self.facets.len();
        let d = self.dim;
        let mut found: BTreeMap<Vec<Rat>, BTreeSet<usize>> = BTreeMap::new();
        for subset in combinations(m, d) {
            let a = RatMatrix::from_rows(
                subset
                    .iter()
                    .map(|&j| {
                        self.facets[j]
                            .halfspace
                            .normal
                            .iter()
                            .map(|v| Rat::from_integer(v.clone()))
                            .collect()
                    })
                    .collect(),
            );
            let b: Vec<Rat> = subset
                .iter()
                .map(|&j| -self.facets[j].halfspace.eta.clone())
                .collect();
            let Some(point) = solve_unique(&a, &b) else {
                continue;
            };
            if !self.contains(&point) {
                continue;
            }
            let active = self.active_facets(&point);
            found.insert(point, active);
        }
        found
            .into_iter()
            .map(|(point, active)| Vertex { point, active })
            .collect()
    }

    pub fn contains(&self, point: &[Rat]) -> bool {
        self.facets
            .iter()
            .all(|f| dot_int(&f.halfspace.normal, point) >= -f.halfspace.eta.clone())
    }

    fn active_facets(&self, point: &[Rat]) -> BTreeSet<usize> {
        self.facets
            .iter()
            .enumerate()
            .filter(|(_, f)| dot_int(&f.halfspace.normal, point) == -f.halfspace.eta.clone())
            .map(|(j, _)| j)
            .collect()
    }

    /// Complete exact vertex enumeration; fails on degenerate input.
    pub fn enumerate_vertices(&self) -> Result<Vec<Vertex>, PolytopeError> {
        if !self.is_full_dimensional() {
            return Err(PolytopeError::Degenerate);
        }
        Ok(self.vertices_unchecked())
    }

    /// Delzant smoothness: at every vertex the active primitive normals form
    /// a basis of the lattice. Returns the offending vertices otherwise.
    /// Labels play no role here.
    pub fn is_smooth(&self) -> Result<(bool, Vec<Vertex>), PolytopeError> {
        let vertices = self.enumerate_vertices()?;
        let mut offending = Vec::new();
        for v in &vertices {
            if v.active.len() != self.dim {
                offending.push(v.clone());
                continue;
            }
            let rows: Vec<usize> = v.active.iter().copied().collect();
            let block = IntMatrix::from_fn(self.dim, self.dim, |i, j| {
                self.facets[rows[i]].halfspace.normal[j].clone()
            });
            if !block.det().abs().is_one() {
                offending.push(v.clone());
            }
        }
        Ok((offending.is_empty(), offending))
    }

    /// The normal fan with labels carried over: rays are the facet normals in
    /// facet order, one maximal cone per vertex.
    pub fn normal_fan(&self) -> Result<StackyFan, PolytopeError> {
        let vertices = self.enumerate_vertices()?;
        let mut max_cones = Vec::with_capacity(vertices.len());
        for v in vertices {
            if v.active.len() != self.dim {
                return Err(PolytopeError::NonSimpleVertex { point: v.point });
            }
            max_cones.push(v.active);
        }
        let rays: Vec<Vec<Int>> = self
            .facets
            .iter()
            .map(|f| f.halfspace.normal.clone())
            .collect();
        let fan = Fan::new(self.dim, rays, max_cones);
        Ok(StackyFan::new(fan, self.labels())?)
    }

    /// Adds `<c, u_j>` to each eta, which translates the polytope.
    pub fn translate(&self, c: &[Rat]) -> Self {
        assert_eq!(c.len(), self.dim);
        let facets = self
            .facets
            .iter()
            .map(|f| Facet {
                halfspace: HalfSpace {
                    normal: f.halfspace.normal.clone(),
                    eta: f.halfspace.eta.clone() + dot_int(&f.halfspace.normal, c),
                },
                label: f.label,
            })
            .collect();
        Self {
            dim: self.dim,
            facets,
        }
    }

    /// Reorders the facet list by `perm` (new index `i` takes old facet
    /// `perm[i]`).
    pub fn permute_facets(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.facets.len());
        let facets = perm.iter().map(|&j| self.facets[j].clone()).collect();
        Self {
            dim: self.dim,
            facets,
        }
    }
}

fn points_of(vertices: &[Vertex]) -> BTreeSet<Vec<Rat>> {
    vertices.iter().map(|v| v.point.clone()).collect()
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > n {
        return out;
    }
    let mut current: Vec<usize> = (0..k).collect();
    loop {
        out.push(current.clone());
        // advance to the next combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if current[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        current[i] += 1;
        for j in i + 1..k {
            current[j] = current[j - 1] + 1;
        }
    }
}
