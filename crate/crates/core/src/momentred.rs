//! Symplectic-reduction data on the exact side: the kernel functionals of
//! the ray map, the level value, rational feasibility of the level set per
//! zero-pattern, the regular-value criterion and the inclusion of the level
//! set in the admissible locus.
//!
//! The moment map is normalised as `mu_0(z) = (|z_1|^2, ..., |z_m|^2) / 2`
//! and the level value as `xi = iota^*((n_1 eta_1, ..., n_m eta_m))`; all
//! computations work on the coordinates `r_j = |z_j|^2 / 2`. With this
//! level the solutions of `iota^* r = xi`, `r >= 0` are exactly
//! `r_j = n_j (<w, u_j> + eta_j)` for `w` in the polytope, so the level set
//! realises the polytope itself and `xi` is invariant under translation
//! (the shift lands in the row space of `beta`, which `iota^*` kills).

use alloc::vec::Vec;

use num_traits::Zero;

use crate::exactalg::integer_kernel;
use crate::fan::{Fan, FanError, ZeroPattern};
use crate::feasibility::{Certificate, Feasibility, LinearSystem, Rel};
use crate::linalg::RatMatrix;
use crate::polytope::{LabelledPolytope, PolytopeError};
use crate::stackbuild::StackyFan;
use crate::Rat;

/// The exact moment data of a labelled polytope: the kernel functionals
/// `iota^*` (the saturated integer kernel of `beta`, read as rows) and the
/// level value `xi`. The induced moment map is `r -> iota^* . r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MomentData {
    iota_star: RatMatrix,
    xi: Vec<Rat>,
}

impl MomentData {
    /// `iota^*` as a rational `(m - d) x m` matrix.
    pub fn iota_star(&self) -> &RatMatrix {
        &self.iota_star
    }

    /// Coefficient rows of the induced map on `r = (|z_j|^2 / 2)_j`; this is
    /// `iota^*` itself.
    pub fn moment_coefficients(&self) -> &RatMatrix {
        &self.iota_star
    }

    pub fn xi(&self) -> &[Rat] {
        &self.xi
    }

    pub fn num_coordinates(&self) -> usize {
        self.iota_star.cols()
    }

    pub fn level_rank(&self) -> usize {
        self.iota_star.rows()
    }

    /// Builds a custom level value in place of the polytope-derived one.
    pub fn with_xi(&self, xi: Vec<Rat>) -> Self {
        assert_eq!(xi.len(), self.level_rank());
        Self {
            iota_star: self.iota_star.clone(),
            xi,
        }
    }

    /// The linear system `iota^* r = xi`, `r_j = 0` on the pattern and
    /// `r_j >= 0` (or `> 0` when `strict`) off it. Constraint order is
    /// deterministic: equation rows first, then one sign constraint per
    /// coordinate.
    pub fn level_system(&self, pattern: &ZeroPattern, strict: bool) -> LinearSystem {
        let m = self.num_coordinates();
        let mut sys = LinearSystem::new(m);
        for (i, row) in self.iota_star.row_vecs().enumerate() {
            sys.push(row.to_vec(), Rel::Eq, self.xi[i].clone());
        }
        for j in 0..m {
            if pattern.contains(j) {
                sys.push_var(j, Rel::Eq, Rat::zero());
            } else {
                sys.push_var(j, if strict { Rel::Gt } else { Rel::Ge }, Rat::zero());
            }
        }
        sys
    }
}

/// Moment data from a stacky fan plus the facet constants of the defining
/// polytope.
pub fn moment_data_for(sf: &StackyFan, etas: &[Rat]) -> MomentData {
    assert_eq!(etas.len(), sf.num_rays());
    let kernel = integer_kernel(sf.beta());
    let iota_star = RatMatrix::from_int_matrix(&kernel.transpose());
    let scaled_eta: Vec<Rat> = etas
        .iter()
        .zip(sf.labels())
        .map(|(eta, &n)| eta * Rat::from_integer(n.into()))
        .collect();
    let xi = iota_star.mul_vec(&scaled_eta);
    MomentData { iota_star, xi }
}

/// Moment data straight from a labelled polytope (building its normal fan).
pub fn moment_data(p: &LabelledPolytope) -> Result<MomentData, PolytopeError> {
    let sf = p.normal_fan()?;
    Ok(moment_data_for(&sf, &p.etas()))
}

/// Outcome of one exact level-set feasibility query. The witness or the
/// infeasibility certificate re-verifies by substitution against
/// [`MomentData::level_system`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FeasibilityResult {
    pub pattern: ZeroPattern,
    pub strict: bool,
    pub feasible: bool,
    pub witness: Option<Vec<Rat>>,
    pub certificate: Option<Certificate>,
}

impl FeasibilityResult {
    /// Re-verifies the stored evidence against freshly built constraints.
    pub fn reverify(&self, md: &MomentData) -> bool {
        let sys = md.level_system(&self.pattern, self.strict);
        match (self.feasible, &self.witness, &self.certificate) {
            (true, Some(w), None) => sys.check_witness(w),
            (false, None, Some(cert)) => sys.check_certificate(cert),
            _ => false,
        }
    }
}

fn run_feasibility(md: &MomentData, pattern: &ZeroPattern, strict: bool) -> FeasibilityResult {
    let sys = md.level_system(pattern, strict);
    match sys.solve() {
        Feasibility::Feasible(witness) => FeasibilityResult {
            pattern: pattern.clone(),
            strict,
            feasible: true,
            witness: Some(witness),
            certificate: None,
        },
        Feasibility::Infeasible(certificate) => FeasibilityResult {
            pattern: pattern.clone(),
            strict,
            feasible: false,
            witness: None,
            certificate: Some(certificate),
        },
    }
}

/// Is there `r >= 0` with `iota^* r = xi` vanishing on the pattern?
pub fn level_set_feasibility(md: &MomentData, pattern: &ZeroPattern) -> FeasibilityResult {
    run_feasibility(md, pattern, false)
}

/// As [`level_set_feasibility`], additionally requiring `r_j > 0` off the
/// pattern, so the witness realises the pattern exactly.
pub fn level_set_feasibility_strict(md: &MomentData, pattern: &ZeroPattern) -> FeasibilityResult {
    run_feasibility(md, pattern, true)
}

/// Regular-value criterion: on every feasible zero-pattern the complement
/// columns of `iota^*` must have full rank, i.e. the compact group acts
/// with finite stabilisers everywhere on the level set. Returns the first
/// offending pattern otherwise.
///
/// Feasible patterns form a downward-closed family, so they are enumerated
/// by growing from the empty pattern.
pub fn check_regular_value(md: &MomentData, fan: &Fan) -> (bool, Option<ZeroPattern>) {
    let m = md.num_coordinates();
    assert_eq!(m, fan.num_rays(), "moment data and fan disagree on m");
    let l = md.level_rank();

    let full_rank_off = |pattern: &ZeroPattern| -> bool {
        let complement: Vec<usize> = (0..m).filter(|j| !pattern.contains(*j)).collect();
        md.iota_star.select_cols(&complement).rank() == l
    };

    // depth-first growth through the downward-closed feasible family,
    // extending by indices above the current maximum to visit each pattern
    // once
    let empty = ZeroPattern::empty();
    if !level_set_feasibility(md, &empty).feasible {
        return (true, None); // empty level set: vacuously regular
    }
    let mut stack: Vec<ZeroPattern> = alloc::vec![empty];
    while let Some(pattern) = stack.pop() {
        if !full_rank_off(&pattern) {
            return (false, Some(pattern));
        }
        let start = pattern.iter().last().map_or(0, |j| j + 1);
        for j in start..m {
            let mut next = pattern.0.clone();
            next.insert(j);
            let next = ZeroPattern(next);
            if level_set_feasibility(md, &next).feasible {
                stack.push(next);
            }
        }
    }
    (true, None)
}

/// Evidence for the inclusion of the level set in the admissible locus: one
/// feasibility row per minimal inadmissible pattern, each expected
/// infeasible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelInclusion {
    pub passed: bool,
    pub rows: Vec<FeasibilityResult>,
}

/// Checks that every inadmissible zero-pattern is infeasible at `xi`. By
/// monotonicity it is enough to test the minimal inadmissible patterns.
pub fn level_inclusion(md: &MomentData, fan: &Fan) -> Result<LevelInclusion, FanError> {
    let rows: Vec<FeasibilityResult> = fan
        .minimal_inadmissible_patterns()?
        .iter()
        .map(|p| level_set_feasibility(md, p))
        .collect();
    let passed = rows.iter().all(|r| !r.feasible);
    Ok(LevelInclusion { passed, rows })
}

/// Boolean wrapper around [`level_inclusion`]: true, plus the first
/// violating pattern otherwise.
pub fn level_set_in_cm(
    md: &MomentData,
    fan: &Fan,
) -> Result<(bool, Option<ZeroPattern>), FanError> {
    let inclusion = level_inclusion(md, fan)?;
    let violation = inclusion
        .rows
        .iter()
        .find(|r| r.feasible)
        .map(|r| r.pattern.clone());
    Ok((inclusion.passed, violation))
}
