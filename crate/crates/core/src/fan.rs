//! Simplicial fans as combinatorial objects: validation (simplicial,
//! complete, proper pairwise intersections) and the irrelevant-locus
//! combinatorics defining the admissible zero-patterns of the quotient
//! construction.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_integer::Integer;
use num_traits::Zero;

use crate::diagnostics::ValidationReport;
use crate::exactalg::IntMatrix;
use crate::feasibility::{LinearSystem, Rel};
use crate::{Int, Rat};

/// Exhaustive pattern enumeration refuses fans with more rays than this.
pub const MAX_RAYS_FOR_ENUMERATION: usize = 30;

/// A fan given by its rays and the ray-index sets of its maximal cones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fan {
    dim: usize,
    rays: Vec<Vec<Int>>,
    max_cones: Vec<BTreeSet<usize>>,
}

/// A subset of ray indices marking the coordinates that vanish. Indices are
/// zero-based internally; `Display` prints them one-based to match the
/// customary notation.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ZeroPattern(pub BTreeSet<usize>);

impl ZeroPattern {
    pub fn empty() -> Self {
        Self(BTreeSet::new())
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(indices: I) -> Self {
        Self(indices.into_iter().collect())
    }

    pub fn contains(&self, index: usize) -> bool {
        self.0.contains(&index)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn is_subset(&self, other: &BTreeSet<usize>) -> bool {
        self.0.is_subset(other)
    }
}

impl fmt::Display for ZeroPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, idx) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{}", idx + 1)?;
        }
        write!(f, "}}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FanError {
    TooManyRays { rays: usize, max: usize },
}

impl fmt::Display for FanError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::TooManyRays { rays, max } => {
                write!(f, "fan has {rays} rays, enumeration is capped at {max}")
            }
        }
    }
}

impl core::error::Error for FanError {}

/// How completeness was established for a fan.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Completeness {
    Checked,
    Failed,
    /// Dimension is four or higher: the facet-pairing criterion is out of
    /// reach, completeness must be asserted by the caller.
    AssertedByUser,
    NotChecked,
}

impl Fan {
    pub fn new(dim: usize, rays: Vec<Vec<Int>>, max_cones: Vec<BTreeSet<usize>>) -> Self {
        assert!(dim >= 1);
        for ray in &rays {
            assert_eq!(ray.len(), dim, "ray has wrong dimension");
        }
        for cone in &max_cones {
            assert!(
                cone.iter().all(|&i| i < rays.len()),
                "cone references a missing ray"
            );
        }
        Self {
            dim,
            rays,
            max_cones,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rays(&self) -> &[Vec<Int>] {
        &self.rays
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn max_cones(&self) -> &[BTreeSet<usize>] {
        &self.max_cones
    }

    fn ray_matrix(&self, cone: &BTreeSet<usize>) -> IntMatrix {
        let indices: Vec<usize> = cone.iter().copied().collect();
        IntMatrix::from_fn(indices.len(), self.dim, |i, j| {
            self.rays[indices[i]][j].clone()
        })
    }

    /// Validates rays (primitive, distinct, used), simpliciality, pairwise
    /// proper intersections, and completeness (decided for `dim <= 3`,
    /// asserted by the caller beyond that).
    pub fn validate(&self, assume_complete: bool) -> ValidationReport {
        let mut report = ValidationReport::new();

        for (i, ray) in self.rays.iter().enumerate() {
            let passed = !ray.iter().all(Zero::is_zero)
                && ray.iter().fold(Int::zero(), |acc, v| acc.gcd(v)) == Int::from(1);
            report.record("primitive-ray", passed, format!("ray {}", i + 1));
        }

        let mut seen: BTreeSet<&Vec<Int>> = BTreeSet::new();
        let mut distinct = true;
        for ray in &self.rays {
            if !seen.insert(ray) {
                distinct = false;
            }
        }
        report.record(
            "distinct-rays",
            distinct,
            if distinct {
                format!("{} rays", self.rays.len())
            } else {
                "duplicate ray present".to_string()
            },
        );

        let mut used: BTreeSet<usize> = BTreeSet::new();
        for cone in &self.max_cones {
            used.extend(cone.iter().copied());
        }
        let unused: Vec<usize> = (0..self.rays.len()).filter(|i| !used.contains(i)).collect();
        report.record(
            "rays-used",
            unused.is_empty(),
            if unused.is_empty() {
                "every ray generates a cone".to_string()
            } else {
                format!("ray {} lies in no maximal cone", unused[0] + 1)
            },
        );

        for (c, cone) in self.max_cones.iter().enumerate() {
            let simplicial = self.ray_matrix(cone).rank() == cone.len();
            report.record("simplicial", simplicial, format!("cone {}", c + 1));
        }

        for a in 0..self.max_cones.len() {
            for b in a + 1..self.max_cones.len() {
                let proper = self.cones_intersect_properly(&self.max_cones[a], &self.max_cones[b]);
                report.record(
                    "proper-intersection",
                    proper,
                    format!("cones {} and {}", a + 1, b + 1),
                );
            }
        }

        match self.completeness(assume_complete) {
            Completeness::Checked => {
                report.record("complete", true, "facet pairing verified".to_string())
            }
            Completeness::Failed => report.record(
                "complete",
                false,
                format!("support does not cover Q^{}", self.dim),
            ),
            Completeness::AssertedByUser => report.record(
                "complete",
                true,
                format!("dim {} >= 4: completeness asserted by the user", self.dim),
            ),
            Completeness::NotChecked => report.record(
                "complete",
                false,
                format!(
                    "dim {} >= 4: completeness not checkable, pass the assertion flag",
                    self.dim
                ),
            ),
        }

        report
    }

    /// Whether two maximal cones meet in a common face, decided by searching
    /// for an exact separating functional vanishing on the shared rays.
    fn cones_intersect_properly(&self, a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> bool {
        if a == b {
            return false; // duplicate maximal cones
        }
        if a.is_subset(b) || b.is_subset(a) {
            return false; // one "maximal" cone inside another
        }
        let shared: BTreeSet<usize> = a.intersection(b).copied().collect();
        let mut sys = LinearSystem::new(self.dim);
        let as_rat = |idx: usize| -> Vec<Rat> {
            self.rays[idx]
                .iter()
                .map(|v| Rat::from_integer(v.clone()))
                .collect()
        };
        for &r in a.difference(&shared) {
            let coeffs: Vec<Rat> = as_rat(r).into_iter().map(|v| -v).collect();
            sys.push(coeffs, Rel::Gt, Rat::zero());
        }
        for &r in b.difference(&shared) {
            sys.push(as_rat(r), Rel::Gt, Rat::zero());
        }
        for &r in &shared {
            sys.push(as_rat(r), Rel::Eq, Rat::zero());
        }
        sys.solve().is_feasible()
    }

    /// Completeness status. For `dim <= 3` this verifies that every
    /// `(dim-1)`-face of a maximal cone is shared by exactly two maximal
    /// cones and that the fan is connected through facets.
    pub fn completeness(&self, assume_complete: bool) -> Completeness {
        if self.dim >= 4 {
            return if assume_complete {
                Completeness::AssertedByUser
            } else {
                Completeness::NotChecked
            };
        }
        if self.max_cones.is_empty() || self.max_cones.iter().any(|c| c.len() != self.dim) {
            return Completeness::Failed;
        }
        if self.dim == 1 {
            // the only complete simplicial fan in Q^1 is {R>=0, R<=0}
            let ok = self.rays.len() == 2
                && self.max_cones.len() == 2
                && self.rays.iter().any(|r| r[0] > Int::zero())
                && self.rays.iter().any(|r| r[0] < Int::zero())
                && (0..2).all(|i| self.max_cones.contains(&BTreeSet::from([i])));
            return if ok {
                Completeness::Checked
            } else {
                Completeness::Failed
            };
        }

        // facet pairing
        for cone in &self.max_cones {
            for &drop in cone {
                let facet: BTreeSet<usize> = cone.iter().copied().filter(|&r| r != drop).collect();
                let count = self.max_cones.iter().filter(|c| facet.is_subset(c)).count();
                if count != 2 {
                    return Completeness::Failed;
                }
            }
        }

        // connectivity through facets
        let n = self.max_cones.len();
        let mut visited = vec![false; n];
        let mut stack = vec![0usize];
        visited[0] = true;
        while let Some(c) = stack.pop() {
            #[allow(clippy::needless_range_loop)] // `other` indexes two slices
            for other in 0..n {
                if visited[other] {
                    continue;
                }
                let shared = self.max_cones[c]
                    .intersection(&self.max_cones[other])
                    .count();
                if shared == self.dim - 1 {
                    visited[other] = true;
                    stack.push(other);
                }
            }
        }
        if visited.iter().all(|&v| v) {
            Completeness::Checked
        } else {
            Completeness::Failed
        }
    }

    /// A point with zero-set `pattern` avoids the irrelevant locus exactly
    /// when the pattern fits inside a maximal cone.
    pub fn is_admissible(&self, pattern: &ZeroPattern) -> bool {
        self.max_cones.iter().any(|cone| pattern.is_subset(cone))
    }

    /// All admissible zero-patterns, each listed once, ordered by size then
    /// lexicographically.
    pub fn admissible_patterns(&self) -> Result<Vec<ZeroPattern>, FanError> {
        self.check_enumeration_bound()?;
        let mut seen: BTreeSet<BTreeSet<usize>> = BTreeSet::new();
        for cone in &self.max_cones {
            let indices: Vec<usize> = cone.iter().copied().collect();
            for mask in 0u64..(1u64 << indices.len()) {
                let subset: BTreeSet<usize> = indices
                    .iter()
                    .enumerate()
                    .filter(|(bit, _)| mask & (1 << bit) != 0)
                    .map(|(_, &r)| r)
                    .collect();
                seen.insert(subset);
            }
        }
        let mut patterns: Vec<ZeroPattern> = seen.into_iter().map(ZeroPattern).collect();
        patterns.sort_by(|a, b| (a.len(), &a.0).cmp(&(b.len(), &b.0)));
        Ok(patterns)
    }

    /// The minimal inadmissible patterns. Any inadmissible pattern contains
    /// one of these; their size is at most `dim + 1` because every proper
    /// subset must fit in a maximal cone.
    pub fn minimal_inadmissible_patterns(&self) -> Result<Vec<ZeroPattern>, FanError> {
        self.check_enumeration_bound()?;
        let m = self.num_rays();
        let mut result = Vec::new();
        for size in 1..=(self.dim + 1).min(m) {
            for subset in crate::polytope::combinations(m, size) {
                let pattern = ZeroPattern::from_indices(subset.iter().copied());
                if self.is_admissible(&pattern) {
                    continue;
                }
                let minimal = subset.iter().all(|&skip| {
                    let sub =
                        ZeroPattern::from_indices(subset.iter().copied().filter(|&x| x != skip));
                    self.is_admissible(&sub)
                });
                if minimal {
                    result.push(pattern);
                }
            }
        }
        result.sort_by(|a, b| (a.len(), &a.0).cmp(&(b.len(), &b.0)));
        Ok(result)
    }

    fn check_enumeration_bound(&self) -> Result<(), FanError> {
        if self.num_rays() > MAX_RAYS_FOR_ENUMERATION {
            return Err(FanError::TooManyRays {
                rays: self.num_rays(),
                max: MAX_RAYS_FOR_ENUMERATION,
            });
        }
        Ok(())
    }
}
