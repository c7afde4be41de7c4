//! The comparison certificate between the symplectic and complex quotient
//! presentations: the splitting of the big group into compact and scaling
//! parts, label-independence of the reduced moment map, the infinitesimal
//! injectivity check (M1'), the orbit-coverage check (M2), the level-set
//! inclusion, and the isotropy match over all admissible patterns.

use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::diagnostics::ValidationReport;
use crate::exactalg::{integer_kernel, FinAbGroup, IntMatrix};
use crate::fan::{FanError, ZeroPattern};
use crate::linalg::{det, same_row_space, solve, RatMatrix};
use crate::momentred::{
    level_set_feasibility, level_set_feasibility_strict, moment_data_for, FeasibilityResult,
    LevelInclusion, MomentData,
};
use crate::polytope::{LabelledPolytope, PolytopeError};
use crate::stackbuild::{build_h, build_kerbar, isotropy, DiagGroupPresentation, StackyFan};
use crate::Rat;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PipelineError {
    /// Input validation failed; the report lists the offending checks.
    InvalidPolytope(ValidationReport),
    InvalidFan(ValidationReport),
    Polytope(PolytopeError),
    Fan(FanError),
}

impl fmt::Display for PipelineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::InvalidPolytope(r) => {
                write!(f, "polytope validation failed: ")?;
                match r.failures().next() {
                    Some(d) => write!(f, "{} ({})", d.check, d.detail),
                    None => write!(f, "unknown"),
                }
            }
            Self::InvalidFan(r) => {
                write!(f, "fan validation failed: ")?;
                match r.failures().next() {
                    Some(d) => write!(f, "{} ({})", d.check, d.detail),
                    None => write!(f, "unknown"),
                }
            }
            Self::Polytope(e) => write!(f, "normal fan stage: {e}"),
            Self::Fan(e) => write!(f, "pattern enumeration stage: {e}"),
        }
    }
}

impl core::error::Error for PipelineError {}

impl From<PolytopeError> for PipelineError {
    fn from(e: PolytopeError) -> Self {
        Self::Polytope(e)
    }
}

impl From<FanError> for PipelineError {
    fn from(e: FanError) -> Self {
        Self::Fan(e)
    }
}

/// The splitting of `coker(beta^*)` into free and torsion parts, with the
/// exponent rows of the scaling group recorded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplittingData {
    pub free_rank: usize,
    pub torsion: Vec<crate::Int>,
    /// Embedding exponents of the scaling directions (`m x free_rank`).
    pub scaling_exponents: IntMatrix,
    /// Ranks and orders agree between the compact-times-scaling product and
    /// the algebraic group.
    pub exhausts: bool,
}

/// Per-pattern evidence for the infinitesimal (M1') check: a strictly
/// positive witness off the pattern and the determinant of the pairing of
/// the scaling directions with the level equations, weighted by the witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct M1Row {
    pub pattern: ZeroPattern,
    pub witness: Option<Vec<Rat>>,
    pub jacobian_det: Option<Rat>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct M1Evidence {
    pub passed: bool,
    pub rows: Vec<M1Row>,
}

/// Per-pattern evidence for the coverage check (M2): strict feasibility of
/// every admissible pattern, so every orbit in the admissible locus meets
/// the level set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct M2Row {
    pub result: FeasibilityResult,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct M2Evidence {
    pub passed: bool,
    pub rows: Vec<M2Row>,
}

/// One line of the isotropy table: stabilisers on both sides in canonical
/// form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotropyRow {
    pub pattern: ZeroPattern,
    pub symplectic: FinAbGroup,
    pub complex: FinAbGroup,
    pub matched: bool,
}

/// The aggregated certificate. Every boolean is backed by exact evidence
/// stored inline, so a third party can re-verify without re-running the
/// pipeline.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoritaCertificate {
    pub splitting: SplittingData,
    pub mu_independent: bool,
    pub m1_prime: M1Evidence,
    pub m2: M2Evidence,
    pub level_in_v: LevelInclusion,
    pub isotropy_table: Vec<IsotropyRow>,
    pub verdict: bool,
}

/// Splits the algebraic group into its compact part and the scaling part
/// `C_R = R^l` along the canonical Smith basis.
pub fn check_splitting(sf: &StackyFan) -> SplittingData {
    let h = build_h(sf);
    let g = build_kerbar(sf);
    let exhausts = h.free_rank == g.free_rank
        && h.torsion == g.torsion
        && h.free_rank == sf.num_rays() - sf.dim();
    SplittingData {
        free_rank: h.free_rank,
        torsion: h.torsion.clone(),
        scaling_exponents: h.free_columns(),
        exhausts,
    }
}

/// Label-independence of the reduced moment map: under the label rescaling
/// `r_j -> n_j r_j` the kernel functionals of `beta` carry exactly onto
/// those of `beta_0`, and the two quotient maps agree on a basis after an
/// invertible change of coordinates. Checked by mutual row-space
/// containment plus an exact change-of-basis solve.
pub fn check_mu_independence(sf: &StackyFan) -> bool {
    let iota = RatMatrix::from_int_matrix(&integer_kernel(sf.beta()).transpose());
    let trivial = sf.with_trivial_labels();
    let iota0 = RatMatrix::from_int_matrix(&integer_kernel(trivial.beta()).transpose());
    let l = iota.rows();
    if iota0.rows() != l {
        return false;
    }
    if l == 0 {
        return true;
    }
    let m = sf.num_rays();
    // rescale column j by n_j
    let scaled = RatMatrix::from_rows(
        iota.row_vecs()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .map(|(j, v)| v * Rat::from_integer(sf.labels()[j].into()))
                    .collect()
            })
            .collect(),
    );
    if !same_row_space(&scaled, &iota0) {
        return false;
    }
    // exact change of basis T with T * scaled = iota0, checked entrywise
    let scaled_t = scaled.transpose();
    let mut t_rows: Vec<Vec<Rat>> = Vec::with_capacity(l);
    for i in 0..l {
        let Some(coeffs) = solve(&scaled_t, iota0.row(i)) else {
            return false;
        };
        t_rows.push(coeffs);
    }
    let t = RatMatrix::from_rows(t_rows);
    if det(&t).is_zero() {
        return false;
    }
    for j in 0..m {
        let col: Vec<Rat> = (0..l).map(|i| scaled[(i, j)].clone()).collect();
        let mapped = t.mul_vec(&col);
        for i in 0..l {
            if mapped[i] != iota0[(i, j)] {
                return false;
            }
        }
    }
    true
}

/// The weighted pairing of the scaling exponents with the level equations:
/// `iota^* . diag(r) . E_free`, an `l x l` rational matrix.
fn scaling_jacobian(md: &MomentData, h: &DiagGroupPresentation, witness: &[Rat]) -> RatMatrix {
    let l = md.level_rank();
    let m = md.num_coordinates();
    let free = h.free_columns();
    let mut out = RatMatrix::zero(l, l);
    for i in 0..l {
        for c in 0..l {
            let mut sum = Rat::zero();
            for j in 0..m {
                sum +=
                    &md.iota_star()[(i, j)] * &witness[j] * Rat::from_integer(free[(j, c)].clone());
            }
            out[(i, c)] = sum;
        }
    }
    out
}

/// All per-pattern results needed by the certificate for one admissible
/// pattern. Independent across patterns, so callers may compute these
/// concurrently and feed them to [`assemble_certificate`] in pattern order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternEvidence {
    pub pattern: ZeroPattern,
    pub weak: FeasibilityResult,
    pub strict: FeasibilityResult,
    pub jacobian_det: Option<Rat>,
    pub symplectic: FinAbGroup,
    pub complex: FinAbGroup,
}

/// Evaluates one admissible pattern: weak and strict level feasibility, the
/// weighted Jacobian determinant at the strict witness, and the two
/// stabilisers.
pub fn admissible_evidence(
    md: &MomentData,
    h: &DiagGroupPresentation,
    g: &DiagGroupPresentation,
    pattern: &ZeroPattern,
) -> PatternEvidence {
    let weak = level_set_feasibility(md, pattern);
    let strict = level_set_feasibility_strict(md, pattern);
    let jacobian_det = strict
        .witness
        .as_ref()
        .map(|w| det(&scaling_jacobian(md, h, w)));
    PatternEvidence {
        pattern: pattern.clone(),
        weak,
        strict,
        jacobian_det,
        symplectic: isotropy(g, pattern).group,
        complex: isotropy(h, pattern).group,
    }
}

/// (M1') at the infinitesimal level: on every feasible admissible pattern,
/// the scaling directions leave the level set, witnessed by a nonsingular
/// weighted Jacobian. The global statement follows from log-linear
/// convexity of the scaling action, which reduces to the classical toric
/// case and is documented rather than re-proved.
pub fn check_m1_prime(sf: &StackyFan, md: &MomentData) -> Result<M1Evidence, FanError> {
    let h = build_h(sf);
    let g = build_kerbar(sf);
    let evidence: Vec<PatternEvidence> = sf
        .fan()
        .admissible_patterns()?
        .iter()
        .map(|p| admissible_evidence(md, &h, &g, p))
        .collect();
    Ok(m1_from_evidence(&evidence))
}

fn m1_from_evidence(evidence: &[PatternEvidence]) -> M1Evidence {
    let mut rows = Vec::new();
    for e in evidence {
        if !e.weak.feasible {
            continue; // no level point has this pattern
        }
        let row = match (&e.strict.witness, &e.jacobian_det) {
            (Some(witness), Some(d)) => M1Row {
                pattern: e.pattern.clone(),
                witness: Some(witness.clone()),
                jacobian_det: Some(d.clone()),
                ok: !d.is_zero(),
            },
            // weakly feasible but no positive witness
            _ => M1Row {
                pattern: e.pattern.clone(),
                witness: None,
                jacobian_det: None,
                ok: false,
            },
        };
        rows.push(row);
    }
    M1Evidence {
        passed: rows.iter().all(|r| r.ok),
        rows,
    }
}

/// (M2): every admissible pattern is realised on the level set by a witness
/// strictly positive off the pattern, so every orbit in the admissible
/// locus meets the level set.
pub fn check_m2(sf: &StackyFan, md: &MomentData) -> Result<M2Evidence, FanError> {
    let mut rows = Vec::new();
    for pattern in sf.fan().admissible_patterns()? {
        let result = level_set_feasibility_strict(md, &pattern);
        let ok = result.feasible;
        rows.push(M2Row { result, ok });
    }
    Ok(M2Evidence {
        passed: rows.iter().all(|r| r.ok),
        rows,
    })
}

/// Stabiliser comparison over every admissible pattern, both flavors in
/// canonical form.
pub fn isotropy_table(sf: &StackyFan) -> Result<Vec<IsotropyRow>, FanError> {
    let h = build_h(sf);
    let g = build_kerbar(sf);
    let mut rows = Vec::new();
    for pattern in sf.fan().admissible_patterns()? {
        let symplectic = isotropy(&g, &pattern).group;
        let complex = isotropy(&h, &pattern).group;
        let matched = symplectic == complex;
        rows.push(IsotropyRow {
            pattern,
            symplectic,
            complex,
            matched,
        });
    }
    Ok(rows)
}

/// Builds the certificate from precomputed evidence: one entry per
/// admissible pattern (in enumeration order) and one weak feasibility row
/// per minimal inadmissible pattern.
pub fn assemble_certificate(
    sf: &StackyFan,
    admissible: &[PatternEvidence],
    inadmissible_rows: Vec<FeasibilityResult>,
) -> MoritaCertificate {
    let splitting = check_splitting(sf);
    let mu_independent = check_mu_independence(sf);
    let m1_prime = m1_from_evidence(admissible);
    let m2_rows: Vec<M2Row> = admissible
        .iter()
        .map(|e| M2Row {
            ok: e.strict.feasible,
            result: e.strict.clone(),
        })
        .collect();
    let m2 = M2Evidence {
        passed: m2_rows.iter().all(|r| r.ok),
        rows: m2_rows,
    };
    let level_in_v = LevelInclusion {
        passed: inadmissible_rows.iter().all(|r| !r.feasible),
        rows: inadmissible_rows,
    };
    let table: Vec<IsotropyRow> = admissible
        .iter()
        .map(|e| IsotropyRow {
            pattern: e.pattern.clone(),
            symplectic: e.symplectic.clone(),
            complex: e.complex.clone(),
            matched: e.symplectic == e.complex,
        })
        .collect();
    let verdict = splitting.exhausts
        && mu_independent
        && m1_prime.passed
        && m2.passed
        && level_in_v.passed
        && table.iter().all(|r| r.matched);
    MoritaCertificate {
        splitting,
        mu_independent,
        m1_prime,
        m2,
        level_in_v,
        isotropy_table: table,
        verdict,
    }
}

/// Assembles the full certificate from a stacky fan plus its facet
/// constants, sequentially. `morita_certificate` is the polytope-level
/// entry point.
pub fn certificate_for(sf: &StackyFan, md: &MomentData) -> Result<MoritaCertificate, FanError> {
    let h = build_h(sf);
    let g = build_kerbar(sf);
    let evidence: Vec<PatternEvidence> = sf
        .fan()
        .admissible_patterns()?
        .iter()
        .map(|p| admissible_evidence(md, &h, &g, p))
        .collect();
    let inadmissible_rows: Vec<FeasibilityResult> = sf
        .fan()
        .minimal_inadmissible_patterns()?
        .iter()
        .map(|p| level_set_feasibility(md, p))
        .collect();
    Ok(assemble_certificate(sf, &evidence, inadmissible_rows))
}

/// Runs the full pipeline on a labelled polytope: validation, normal fan,
/// group presentations, moment data and all comparison checks.
pub fn morita_certificate(p: &LabelledPolytope) -> Result<MoritaCertificate, PipelineError> {
    let report = p.validate();
    if !report.is_valid() {
        return Err(PipelineError::InvalidPolytope(report));
    }
    let sf = p.normal_fan()?;
    // a normal fan of a valid bounded polytope is complete by construction,
    // so completeness may be assumed for dimensions beyond the decidable
    // range
    let fan_report = sf.fan().validate(true);
    if !fan_report.is_valid() {
        return Err(PipelineError::InvalidFan(fan_report));
    }
    let md = moment_data_for(&sf, &p.etas());
    Ok(certificate_for(&sf, &md)?)
}

impl MoritaCertificate {
    /// Re-verifies every stored witness, certificate, determinant and group
    /// against freshly built constraints; used by third parties to check a
    /// certificate without re-running the pipeline.
    pub fn reverify(&self, sf: &StackyFan, md: &MomentData) -> bool {
        let h = build_h(sf);
        let g = build_kerbar(sf);

        let splitting_ok = {
            let expected = check_splitting(sf);
            expected == self.splitting && self.splitting.exhausts
        };

        let mu_ok = self.mu_independent == check_mu_independence(sf);

        let m1_ok = self
            .m1_prime
            .rows
            .iter()
            .all(|row| match (&row.witness, &row.jacobian_det) {
                (Some(w), Some(d)) => {
                    md.level_system(&row.pattern, true).check_witness(w)
                        && det(&scaling_jacobian(md, &h, w)) == *d
                        && (row.ok == !d.is_zero())
                }
                (None, None) => !row.ok,
                _ => false,
            })
            && self.m1_prime.passed == self.m1_prime.rows.iter().all(|r| r.ok);

        let m2_ok = self
            .m2
            .rows
            .iter()
            .all(|row| row.result.reverify(md) && row.ok == row.result.feasible)
            && self.m2.passed == self.m2.rows.iter().all(|r| r.ok);

        let level_ok = self.level_in_v.rows.iter().all(|r| r.reverify(md))
            && self.level_in_v.passed == self.level_in_v.rows.iter().all(|r| !r.feasible);

        let table_ok = self.isotropy_table.iter().all(|row| {
            let sym = isotropy(&g, &row.pattern).group;
            let cx = isotropy(&h, &row.pattern).group;
            sym == row.symplectic && cx == row.complex && row.matched == (sym == cx)
        });

        let verdict_ok = self.verdict
            == (self.splitting.exhausts
                && self.mu_independent
                && self.m1_prime.passed
                && self.m2.passed
                && self.level_in_v.passed
                && self.isotropy_table.iter().all(|r| r.matched));

        splitting_ok && mu_ok && m1_ok && m2_ok && level_ok && table_ok && verdict_ok
    }
}
